import math

import numpy
import pytest

from levyhg.errors import (
    DomainError,
    InadmissibleParameters,
    UnboundedVariation,
    Unsupported,
)
from levyhg.exponents import LaplaceExponent
from levyhg.levy_measure import (
    density_closed_form,
    density_series,
    density_table,
    ehl_density,
    is_bounded_variation,
    lamperti_stable_parameters,
    lk_reconstruct,
    pole_zero_sequences,
    residue_coefficients,
    small_jump_constant,
)
from levyhg.params import HGParams, random_params

HG = HGParams(0.5, 0.5, 0.5, 0.5)
HG_DENSITY = HGParams(0.5, 0.5, 0.5, 0.25)
EHG = HGParams(1.2, 0.5, -0.2, 0.6)
EHG_CANCELLED = HGParams(1.5, 0.75, -0.25, 0.75)
XS = [-5.0, -0.5, -0.05, 0.05, 0.5, 5.0]


class Test_PoleZeroGrid:
    def test_hg(self) -> None:
        grid = pole_zero_sequences(HG, 3)
        numpy.testing.assert_allclose(grid.zeta, [0.5, 1.5, 2.5])
        numpy.testing.assert_allclose(grid.rho, [1.0, 2.0, 3.0])
        assert grid.count == 3
        assert grid.is_interlacing()

    def test_ehg(self) -> None:
        grid = pole_zero_sequences(EHG, 4)
        numpy.testing.assert_allclose(grid.zeta[:2], [0.2, 0.8])
        numpy.testing.assert_allclose(grid.rho[:2], [0.3, 1.3])
        numpy.testing.assert_allclose(grid.zetah[:2], [0.2, 0.8])
        numpy.testing.assert_allclose(grid.rhoh[:2], [0.4, 1.4])
        assert not grid.cancelled_right
        assert grid.is_interlacing()

    def test_cancelled_pair(self) -> None:
        grid = pole_zero_sequences(EHG_CANCELLED, 5)
        assert grid.cancelled_right
        assert grid.cancelled_left
        assert grid.zeta[0] == pytest.approx(grid.rho[0])
        assert grid.is_interlacing()
        assert residue_coefficients(EHG_CANCELLED, 3)[0] == 0.0

    def test_random_draws_interlace(self) -> None:
        rng = numpy.random.default_rng(9)
        for _ in range(1000):
            p = random_params("EHG", rng)
            grid = pole_zero_sequences(p, 8)
            assert grid.is_interlacing(), p
            if not (grid.cancelled_right or grid.cancelled_left):
                assert numpy.all(grid.zeta < grid.rho)
                assert numpy.all(grid.rho[:-1] < grid.zeta[1:])
                assert numpy.all(grid.zetah < grid.rhoh)
                assert numpy.all(grid.rhoh[:-1] < grid.zetah[1:])

    def test_bad_count(self) -> None:
        with pytest.raises(DomainError):
            pole_zero_sequences(HG, 0)

    def test_unsupported_class(self) -> None:
        with pytest.raises(Unsupported):
            pole_zero_sequences(HGParams(1.5, 0.25, 0.125, 0.75), 3)


class Test_Density:
    @pytest.mark.parametrize("p", [HG_DENSITY, EHG, EHG_CANCELLED])
    @pytest.mark.parametrize("x", XS)
    def test_routes_agree(self, p, x) -> None:
        closed = density_closed_form(p, x)
        series = density_series(p, x)
        assert closed["route"] == "ClosedForm"
        assert series["route"] == "ResidueSeries"
        assert series["terms_used"] >= 1
        assert closed["value"] > 0
        assert series["value"] == pytest.approx(closed["value"], rel=1e-8)

    def test_table(self) -> None:
        rows = density_table(EHG, XS)
        assert list(rows[0].keys()) == ["x", "pi_closed", "pi_series", "rel_diff"]
        assert max(row["rel_diff"] for row in rows) <= 1e-8

    def test_small_jumps(self) -> None:
        x = 1e-5
        for side, sign in (("right", 1.0), ("left", -1.0)):
            value = density_closed_form(EHG, sign * x)["value"] * x ** (1.0 + 0.5 + 0.6)
            assert value == pytest.approx(small_jump_constant(EHG, side), rel=1e-3)

    def test_far_tail_is_one_exponential(self) -> None:
        p = HGParams(1.2, 0.5, -0.2, 0.5)
        first = residue_coefficients(p, 1)[0] * math.exp(-0.3 * 30.0)
        assert density_series(p, 30.0)["value"] == pytest.approx(first, rel=1e-6)

    def test_origin(self) -> None:
        with pytest.raises(DomainError):
            density_closed_form(HG, 0.0)
        with pytest.raises(DomainError):
            density_series(HG, 0.0)

    def test_lamperti_stable_is_not_a_series_class(self) -> None:
        with pytest.raises(Unsupported):
            density_closed_form(HGParams(1.5, 1.5, 1.5, -0.5), 1.0)


class Test_LevyKhintchine:
    def test_reconstruction(self) -> None:
        p = HGParams(0.5, 0.25, 0.5, 0.25)
        assert is_bounded_variation(p)
        le = LaplaceExponent(p)
        for theta in (1.0, 5.0):
            assert abs(lk_reconstruct(p, theta) - le(1j * theta)) <= 1e-6

    def test_zero_frequency(self) -> None:
        p = HGParams(0.5, 0.25, 0.5, 0.25)
        assert lk_reconstruct(p, 0.0) == pytest.approx(LaplaceExponent(p)(0.0))

    def test_unbounded_variation(self) -> None:
        assert not is_bounded_variation(HG)
        with pytest.raises(UnboundedVariation):
            lk_reconstruct(HG, 1.0)


class Test_LampertiStable:
    def test_parameters(self) -> None:
        stable = lamperti_stable_parameters(1.5, 1.5, -0.5)
        assert stable["alpha"] == 1.0
        assert stable["beta"] == 1.0
        assert stable["delta"] == 1.0
        assert stable["c_plus"] == pytest.approx(1.0 / math.pi, rel=1e-13)
        assert stable["c_minus"] == pytest.approx(1.0 / math.pi, rel=1e-13)

    def test_density_near_zero(self) -> None:
        x = 1e-6
        for sign in (1.0, -1.0):
            assert ehl_density(1.5, 1.5, -0.5, sign * x) * x**2 == pytest.approx(
                1.0 / math.pi, rel=1e-5
            )

    def test_not_lamperti_stable(self) -> None:
        with pytest.raises(InadmissibleParameters):
            ehl_density(0.5, 0.5, 0.5, 1.0)
