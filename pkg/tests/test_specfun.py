import logging
import math

import numpy
import pytest
import scipy.special

from levyhg.errors import DomainError, PoleError
from levyhg.specfun import (
    default_policy,
    gamma_ratio,
    gauss_2f1,
    gauss_2f1_regularized,
    gauss_2f1_regularized_complement,
    incomplete_beta,
    is_nonpositive_integer,
    log_double_gamma,
    log_gamma,
    resolve_policy,
)


class Test_LogGamma:
    def test_matches_scipy_off_axis(self) -> None:
        z = numpy.array([0.5 + 1.0j, -2.3 + 0.7j, 10.0 - 30.0j])
        numpy.testing.assert_allclose(
            log_gamma(z), scipy.special.loggamma(z), rtol=1e-14
        )

    def test_sign_on_negative_axis(self) -> None:
        value = numpy.exp(log_gamma(-0.5))
        assert value.real == pytest.approx(-2.0 * math.sqrt(math.pi), rel=1e-13)
        assert abs(value.imag) < 1e-12

    def test_shape_is_kept(self) -> None:
        assert log_gamma(numpy.ones((2, 3))).shape == (2, 3)
        assert isinstance(log_gamma(2.0), complex)

    def test_pole(self) -> None:
        with pytest.raises(PoleError) as info:
            log_gamma(numpy.array([1.0, -2.0]))
        assert info.value.location == -2.0

    def test_non_finite(self) -> None:
        with pytest.raises(DomainError):
            log_gamma(float("nan"))

    def test_reflection(self) -> None:
        rng = numpy.random.default_rng(1)
        z = rng.uniform(0.0, 5.0, 1000) + 1j * rng.choice([-1.0, 1.0], 1000) * (
            rng.uniform(0.1, 3.0, 1000)
        )
        numpy.testing.assert_allclose(
            numpy.exp(log_gamma(z) + log_gamma(1 - z)),
            math.pi / numpy.sin(math.pi * z),
            rtol=1e-10,
        )


class Test_GammaRatio:
    def test_scalar(self) -> None:
        assert gamma_ratio([0.5], [1.5]) == pytest.approx(2.0, rel=1e-14)
        assert isinstance(gamma_ratio([0.5], [1.5]), float)

    def test_denominator_pole_gives_zero(self) -> None:
        assert gamma_ratio([1.5], [-1.0]) == 0.0

    def test_numerator_pole_raises(self) -> None:
        with pytest.raises(PoleError):
            gamma_ratio([-3.0], [1.0])

    def test_broadcast(self) -> None:
        z = numpy.array([1.0, 2.0, 3.0])
        numpy.testing.assert_allclose(gamma_ratio([z + 1], [z]), z, rtol=1e-13)

    def test_complex(self) -> None:
        z = 0.3 + 2.0j
        expected = scipy.special.gamma(z + 1) / scipy.special.gamma(z)
        assert gamma_ratio([z + 1], [z]) == pytest.approx(expected, rel=1e-12)


def test_is_nonpositive_integer() -> None:
    assert is_nonpositive_integer(0.0)
    assert is_nonpositive_integer(-4.0)
    assert not is_nonpositive_integer(-0.5)
    assert not is_nonpositive_integer(1.0)


def test_resolve_policy() -> None:
    assert resolve_policy() == default_policy
    assert resolve_policy({"max_terms": 5})["rel_tol"] == 1e-12  # type: ignore
    with pytest.raises(DomainError):
        resolve_policy({"rel_tol": 0.0})  # type: ignore


def _series_2f1(a, b, c, z):
    k = numpy.arange(99999, dtype=float)
    terms = numpy.concatenate(
        ([1.0], numpy.cumprod((a + k) * (b + k) / ((c + k) * (k + 1)) * z))
    )
    return math.fsum(terms), math.fsum(numpy.abs(terms))


class Test_Gauss2F1:
    @pytest.mark.parametrize("z", numpy.linspace(0.0, 0.99, 12))
    def test_matches_scipy(self, z: float) -> None:
        assert gauss_2f1(0.3, 1.2, 2.1, z) == pytest.approx(
            scipy.special.hyp2f1(0.3, 1.2, 2.1, z), rel=1e-10
        )

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_power_series(self, seed) -> None:
        rng = numpy.random.default_rng(seed)
        a, b = rng.uniform(-2.0, 3.0, size=2)
        c = rng.uniform(0.1, 3.0) if seed % 2 else -rng.uniform(0.1, 0.9)
        for z in numpy.linspace(0.0, 0.5, 6):
            series, scale = _series_2f1(a, b, c, z)
            assert abs(gauss_2f1(a, b, c, z) - series) <= 1e-10 * scale

    def test_gauss_summation(self) -> None:
        expected = math.gamma(2.1) * math.gamma(0.6) / (math.gamma(1.8) * math.gamma(0.9))
        assert gauss_2f1(0.3, 1.2, 2.1, 1.0) == pytest.approx(expected, rel=1e-12)

    def test_divergent_at_one(self) -> None:
        with pytest.raises(DomainError):
            gauss_2f1(1.0, 1.0, 1.5, 1.0)

    def test_outside_unit_interval(self) -> None:
        with pytest.raises(DomainError):
            gauss_2f1(0.3, 1.2, 2.1, 1.5)

    def test_pole_in_c(self) -> None:
        with pytest.raises(PoleError):
            gauss_2f1(0.3, 1.2, -1.0, 0.5)

    def test_degenerate_connection_falls_back(self, caplog) -> None:
        with caplog.at_level(logging.WARNING, logger="levyhg.specfun"):
            value = gauss_2f1(0.5, 0.5, 2.0, 0.9)
        assert value == pytest.approx(scipy.special.hyp2f1(0.5, 0.5, 2.0, 0.9), rel=1e-12)
        assert "degenerate" in caplog.text


class Test_Regularized2F1:
    def test_ordinary_c(self) -> None:
        assert gauss_2f1_regularized(0.3, 1.2, 2.1, 0.4) == pytest.approx(
            scipy.special.hyp2f1(0.3, 1.2, 2.1, 0.4) / math.gamma(2.1), rel=1e-12
        )

    def test_nonpositive_integer_c(self) -> None:
        # 2F1(a, b; -m; z) / Gamma(-m) = (a)_(m+1) (b)_(m+1) / (m+1)! z^(m+1)
        # 2F1(a + m + 1, b + m + 1; m + 2; z)
        a, b, z = 0.3, 0.4, 0.2
        expected = a * (a + 1) * b * (b + 1) / 2 * z**2 * scipy.special.hyp2f1(
            a + 2, b + 2, 3.0, z
        )
        assert gauss_2f1_regularized(a, b, -1.0, z) == pytest.approx(expected, rel=1e-12)

    def test_complement(self) -> None:
        assert gauss_2f1_regularized_complement(0.3, 1.2, 2.1, 0.25) == pytest.approx(
            gauss_2f1_regularized(0.3, 1.2, 2.1, 0.75), rel=1e-14
        )


class Test_IncompleteBeta:
    @pytest.mark.parametrize("w", [0.1, 0.5, 0.9])
    def test_matches_scipy(self, w: float) -> None:
        expected = scipy.special.betainc(0.7, 1.3, w) * scipy.special.beta(0.7, 1.3)
        assert incomplete_beta(0.7, 1.3, w) == pytest.approx(expected, rel=1e-10)

    def test_zero(self) -> None:
        assert incomplete_beta(0.7, 1.3, 0.0) == 0.0

    def test_needs_positive_a(self) -> None:
        with pytest.raises(DomainError):
            incomplete_beta(0.0, 1.3, 0.5)


GRID = numpy.linspace(0.2, 3.0, 15)
TAUS = [0.5, 1.0, 4.0 / 3.0, 2.0]


class Test_DoubleGamma:
    def test_normalization(self) -> None:
        assert abs(log_double_gamma(1.0, 0.7)) < 1e-13

    def test_barnes_g_values(self) -> None:
        assert numpy.exp(log_double_gamma(4.0, 1.0)).real == pytest.approx(2.0, rel=1e-10)
        assert numpy.exp(log_double_gamma(5.0, 1.0)).real == pytest.approx(12.0, rel=1e-10)
        assert numpy.exp(log_double_gamma(0.5, 1.0)).real == pytest.approx(
            0.603244281209446, rel=1e-9
        )

    @pytest.mark.parametrize("tau", TAUS)
    def test_first_functional_equation(self, tau: float) -> None:
        z = numpy.concatenate(
            (GRID, [1.7 + 0.5j, 2.5 - 3.0j, 0.9 + 10.0j, 0.5 + 45.0j])
        )
        ratio = numpy.exp(
            log_double_gamma(z + 1, tau) - log_double_gamma(z, tau) - log_gamma(z / tau)
        )
        numpy.testing.assert_allclose(ratio, 1.0, rtol=1e-10)

    @pytest.mark.parametrize("tau", TAUS)
    def test_second_functional_equation(self, tau: float) -> None:
        z = numpy.concatenate((GRID, [1.7 + 0.5j, 2.5 - 3.0j]))
        ratio = numpy.exp(
            log_double_gamma(z + tau, tau)
            - log_double_gamma(z, tau)
            - log_gamma(z)
            - (tau - 1) / 2 * math.log(2 * math.pi)
            - (0.5 - z) * math.log(tau)
        )
        numpy.testing.assert_allclose(ratio, 1.0, rtol=1e-10)

    @pytest.mark.parametrize("tau", TAUS)
    def test_conjugate_symmetry(self, tau: float) -> None:
        z = GRID + 0.7j
        numpy.testing.assert_allclose(
            numpy.exp(log_double_gamma(numpy.conj(z), tau)),
            numpy.conj(numpy.exp(log_double_gamma(z, tau))),
            rtol=1e-10,
        )

    def test_lattice_zero(self) -> None:
        with pytest.raises(PoleError):
            log_double_gamma(-0.5, 0.5)

    def test_bad_tau(self) -> None:
        with pytest.raises(DomainError):
            log_double_gamma(1.0, 0.0)
