import math

import numpy
import pytest

from levyhg.errors import (
    DomainError,
    InadmissibleParameters,
    NotInCkl,
    OutOfStrip,
    UnsupportedCase,
)
from levyhg.exponents import LaplaceExponent, psi_eval
from levyhg.expfun import ehg_spec, radial_spec
from levyhg.params import HGParams, dual
from levyhg.stable import (
    StableParams,
    admissible_stable,
    avoid_zero_params,
    censored_exponent,
    censored_lamperti,
    censored_occupation_mellin,
    ckl_closed_form,
    ckl_rho,
    exit_before_zero_density,
    exit_density_mass,
    h_invariant,
    hit_zero_before_exit_prob,
    hitting_law,
    radial_constant,
    radial_lamperti,
    radial_mellin,
    rogozin_exit_density,
    stable_char_exponent,
    t0_mellin,
    two_sided_exit_avoid_zero_density,
)


class Test_StableParams:
    @pytest.mark.parametrize(
        "alpha, rho, expected",
        [
            (0.5, 0.9, True),
            (1.0, 0.5, True),
            (1.0, 0.6, False),
            (1.5, 0.5, True),
            (1.5, 0.2, False),
            (2.0, 0.5, False),
        ],
    )
    def test_admissible(self, alpha, rho, expected) -> None:
        assert admissible_stable(alpha, rho) is expected

    def test_inadmissible(self) -> None:
        with pytest.raises(InadmissibleParameters):
            StableParams(1.5, 0.2)

    def test_symmetric_constants(self) -> None:
        sp = StableParams(1.5, 0.5)
        expected = math.gamma(2.5) / (math.gamma(0.75) * math.gamma(0.25))
        assert sp.c_plus == pytest.approx(expected, rel=1e-13)
        assert sp.c_minus == pytest.approx(expected, rel=1e-13)
        assert sp.skewness == 0.0
        assert sp.scale == 1.0

    def test_char_exponent(self) -> None:
        assert stable_char_exponent(StableParams(1.5, 0.5), 2.0) == pytest.approx(
            2.0**1.5, rel=1e-14
        )
        values = stable_char_exponent(StableParams(0.5, 0.75), numpy.array([-1.0, 1.0]))
        assert values[0] == pytest.approx(values[1].conjugate(), rel=1e-14)


class Test_Censored:
    def test_lamperti_parameters(self) -> None:
        assert censored_lamperti(StableParams(1.5, 0.5)) == (
            HGParams(1.0, 0.75, -0.5, 0.75),
            "EHG",
        )
        assert censored_lamperti(StableParams(0.8, 0.5))[1] == "HG"

    @pytest.mark.parametrize("z", [-0.3, 0.3, 1.2])
    def test_exponent_matches_class_formula(self, z) -> None:
        sp = StableParams(1.5, 0.5)
        p, tag = censored_lamperti(sp)
        assert censored_exponent(sp, z) == pytest.approx(
            psi_eval(LaplaceExponent(p, tag), z), rel=1e-12
        )

    def test_occupation_normalization(self) -> None:
        sp = StableParams(1.5, 0.5)
        assert censored_occupation_mellin(sp, 1.0) == pytest.approx(1.0, abs=1e-14)
        with pytest.raises(OutOfStrip):
            censored_occupation_mellin(sp, 1.5)
        with pytest.raises(DomainError):
            censored_occupation_mellin(StableParams(0.8, 0.5), 0.5)


class Test_Ckl:
    def test_rho(self) -> None:
        assert ckl_rho(4.0 / 3.0, 1, 2) == pytest.approx(0.5, abs=1e-15)

    def test_rho_not_admissible(self) -> None:
        with pytest.raises(NotInCkl):
            ckl_rho(1.5, 0, 2)

    @pytest.mark.parametrize("s", numpy.linspace(-0.2, 1.2, 20))
    def test_closed_form_matches_double_gamma(self, s) -> None:
        sp = StableParams(4.0 / 3.0, 0.5)
        assert ckl_closed_form(sp, 1, 2, complex(s)) == pytest.approx(
            censored_occupation_mellin(sp, complex(s)), rel=1e-8
        )

    def test_membership(self) -> None:
        with pytest.raises(NotInCkl):
            ckl_closed_form(StableParams(1.5, 0.5), 1, 2, 0.5)
        with pytest.raises(UnsupportedCase):
            ckl_closed_form(StableParams(1.5, 0.5), 1, -1, 0.5)


class Test_Radial:
    def test_constant(self) -> None:
        expected = math.sqrt(math.pi) / (math.gamma(2 / 3) * math.gamma(1 / 3))
        assert radial_constant(1.5) == pytest.approx(expected, rel=1e-13)

    def test_normalization_is_exact(self) -> None:
        assert t0_mellin(1.5, 1.0) == 1.0
        assert radial_mellin(1.5, 1.0) == 1.0

    @pytest.mark.parametrize("s", [0.3, 0.9, 1.2])
    def test_matches_double_gamma_route(self, s) -> None:
        spec = ehg_spec(avoid_zero_params(1.5), 4.0 / 3.0)
        assert radial_mellin(1.5, s) == pytest.approx(spec(s).real, rel=1e-8)

    def test_spec_wraps_closed_form(self) -> None:
        assert radial_spec(1.5)(-0.5) == radial_mellin(1.5, -0.5)

    def test_t0_scaling(self) -> None:
        assert t0_mellin(1.5, 0.5) == pytest.approx(
            2.0**0.75 * radial_mellin(1.5, 0.5), rel=1e-14
        )

    def test_out_of_strip(self) -> None:
        with pytest.raises(OutOfStrip):
            t0_mellin(1.5, 1.4)
        with pytest.raises(DomainError):
            t0_mellin(0.9, 0.5)

    def test_avoid_zero_is_dual(self) -> None:
        p, tag = radial_lamperti(1.5)
        assert p == HGParams(1.0, 0.75, -0.25, 0.75)
        assert tag == "EHG"
        assert avoid_zero_params(1.5) == dual(p)

    def test_h_is_even_for_symmetric_process(self) -> None:
        sp = StableParams(1.5, 0.5)
        assert h_invariant(-0.3, sp) == pytest.approx(h_invariant(0.3, sp), rel=1e-14)
        assert h_invariant(0.3, sp) > 0
        with pytest.raises(DomainError):
            h_invariant(0.0, sp)


class Test_ExitLaws:
    def test_hit_zero_from_origin(self) -> None:
        assert hit_zero_before_exit_prob(0.0, 1.5) == 1.0

    def test_hit_zero_is_a_probability(self) -> None:
        values = [hit_zero_before_exit_prob(x, 1.5) for x in (0.1, 0.5, 0.9)]
        assert all(0 < value < 1 for value in values)
        assert values[0] > values[1] > values[2]

    def test_hit_zero_needs_alpha_above_one(self) -> None:
        with pytest.raises(DomainError):
            hit_zero_before_exit_prob(0.5, 0.8)

    @pytest.mark.parametrize("x", [0.2, 0.5, -0.7])
    def test_exit_mass(self, x) -> None:
        assert exit_density_mass(x, 1.5) == pytest.approx(
            1 - hit_zero_before_exit_prob(x, 1.5), abs=1e-6
        )

    def test_exit_before_zero_vanishes_at_origin(self) -> None:
        assert exit_before_zero_density(0.0, 1.5, 1.5) == pytest.approx(0.0, abs=1e-14)

    def test_zero_is_polar_below_one(self) -> None:
        assert two_sided_exit_avoid_zero_density(0.3, 1.5, 0.8) == (
            rogozin_exit_density(0.3, 1.5, 0.8)
        )

    @pytest.mark.parametrize("x, y", [(0.3, 1.5), (-0.5, 3.0), (0.8, -1.2)])
    def test_reduces_to_rogozin_as_alpha_decreases_to_one(self, x, y) -> None:
        limit = rogozin_exit_density(x, y, 1.0)
        assert two_sided_exit_avoid_zero_density(x, y, 1.0) == limit
        errors = [
            abs(two_sided_exit_avoid_zero_density(x, y, 1.0 + eps) - limit)
            for eps in (1e-2, 1e-4, 1e-6)
        ]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] <= 1e-4 * limit
        assert hit_zero_before_exit_prob(x, 1.0 + 1e-6) == pytest.approx(0.0, abs=1e-4)

    def test_radial_exit_reduces_to_rogozin(self) -> None:
        limit = rogozin_exit_density(0.4, 2.0, 1.0) + rogozin_exit_density(
            0.4, -2.0, 1.0
        )
        assert exit_before_zero_density(0.4, 2.0, 1.0 + 1e-6) == pytest.approx(
            limit, rel=1e-4
        )

    def test_bad_points(self) -> None:
        with pytest.raises(DomainError):
            rogozin_exit_density(1.0, 2.0, 1.5)
        with pytest.raises(DomainError):
            rogozin_exit_density(0.5, 0.5, 1.5)
        with pytest.raises(DomainError):
            exit_before_zero_density(0.5, -2.0, 1.5)


class Test_HittingLaw:
    def test_dispatch(self) -> None:
        assert hitting_law("HitZeroBeforeExitProb", 0.5, 1.5) == (
            hit_zero_before_exit_prob(0.5, 1.5)
        )
        assert hitting_law("ExitBeforeZeroRadial", 0.5, 1.5, 2.0) == (
            exit_before_zero_density(0.5, 2.0, 1.5)
        )
        assert hitting_law("TwoSidedExitAvoidZero", 0.5, 1.5, -2.0) == (
            two_sided_exit_avoid_zero_density(0.5, -2.0, 1.5)
        )

    def test_density_needs_exit_point(self) -> None:
        with pytest.raises(DomainError):
            hitting_law("ExitBeforeZeroRadial", 0.5, 1.5)
