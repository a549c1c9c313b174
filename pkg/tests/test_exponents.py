import math

import numpy
import pytest
import scipy.special

from levyhg.errors import (
    InadmissibleParameters,
    NegativeShift,
    NotSpecial,
    PoleError,
    Unsupported,
)
from levyhg.exponents import (
    BernsteinExpr,
    LaplaceExponent,
    conjugate,
    ehl_descending_from_transform,
    esscher,
    factorization_residual,
    is_bernstein,
    killing_rate,
    psi_eval,
    t_transform,
    wh_factors,
)
from levyhg.params import HGParams

CLASS_EXAMPLES = {
    "HG": HGParams(0.5, 0.5, 0.5, 0.5),
    "EHG": HGParams(1.5, 0.75, -0.25, 0.75),
    "EHG_BETA_ONLY": HGParams(1.5, 0.25, 0.125, 0.75),
    "EHG_BETAH_ONLY": HGParams(0.875, 0.75, -0.5, 0.25),
    "EHL": HGParams(1.5, 1.5, 1.5, -0.5),
}


class Test_BernsteinExpr:
    def test_linear_factor_merges_into_gamma(self) -> None:
        expr = BernsteinExpr(linear_num=[0.5], gamma_num=[0.5])
        assert expr.linear_num == ()
        assert expr.gamma_num == (1.5,)
        assert expr(2.0) == pytest.approx(math.gamma(4.5), rel=1e-13)

    def test_cancellation(self) -> None:
        expr = BernsteinExpr(linear_num=[0.5], linear_den=[0.5])
        assert str(expr) == "1"

    def test_str(self) -> None:
        assert str(BernsteinExpr(gamma_num=[0.5], gamma_den=[0.25])) == (
            "Gamma(0.5 + z) / (Gamma(0.25 + z))"
        )
        assert str(BernsteinExpr(2.0, linear_num=[-0.5])) == "2 * (z - 0.5)"

    def test_linear_pole(self) -> None:
        with pytest.raises(PoleError):
            BernsteinExpr(linear_den=[-1.0])(1.0)

    def test_vectorized(self) -> None:
        z = numpy.array([0.5, 1.0, 2.0])
        expected = scipy.special.gamma(z + 0.5) / scipy.special.gamma(z)
        numpy.testing.assert_allclose(
            BernsteinExpr(gamma_num=[0.5], gamma_den=[0.0])(z), expected, rtol=1e-13
        )


class Test_IsBernstein:
    def test_gamma_ratio(self) -> None:
        assert is_bernstein(BernsteinExpr(gamma_num=[0.75], gamma_den=[0.25]))

    def test_constant(self) -> None:
        assert is_bernstein(BernsteinExpr(2.0))

    def test_square_is_not(self) -> None:
        assert not is_bernstein(BernsteinExpr(linear_num=[0.0, 0.0]))

    def test_decreasing_is_not(self) -> None:
        assert not is_bernstein(BernsteinExpr(linear_den=[1.0]))


class Test_Transforms:
    def test_conjugate(self) -> None:
        expr = BernsteinExpr(gamma_num=[0.5], gamma_den=[0.0])
        result = conjugate(expr)
        assert result.gamma_num == (1.0,)
        assert result.gamma_den == (0.5,)
        assert conjugate(result)(1.7) == pytest.approx(expr(1.7), rel=1e-13)

    def test_conjugate_not_special(self) -> None:
        with pytest.raises(NotSpecial):
            conjugate(BernsteinExpr(linear_num=[0.0, 0.0]))

    def test_conjugate_with_offset(self) -> None:
        with pytest.raises(Unsupported):
            conjugate(BernsteinExpr(offset=1.0))

    def test_t_transform(self) -> None:
        expr = BernsteinExpr(gamma_num=[0.5], gamma_den=[0.0])
        z, c = 1.3, 0.7
        assert t_transform(expr, c)(z) == pytest.approx(
            z / (z + c) * expr(z + c), rel=1e-13
        )
        assert t_transform(expr, 0.0) is expr
        with pytest.raises(NegativeShift):
            t_transform(expr, -0.1)

    def test_esscher(self) -> None:
        expr = BernsteinExpr(gamma_num=[0.5], gamma_den=[0.0])
        tilted = esscher(expr, 0.4)
        assert tilted(0.0) == pytest.approx(0.0, abs=1e-14)
        assert tilted(1.1) == pytest.approx(expr(1.5) - expr(0.4), rel=1e-13)
        with pytest.raises(NegativeShift):
            esscher(expr, -1.0)


class Test_LaplaceExponent:
    def test_default_class(self) -> None:
        assert LaplaceExponent(CLASS_EXAMPLES["EHG"]).class_tag == "EHG"

    def test_wrong_class(self) -> None:
        with pytest.raises(InadmissibleParameters):
            LaplaceExponent(CLASS_EXAMPLES["HG"], "EHL")

    def test_pole(self) -> None:
        with pytest.raises(PoleError):
            psi_eval(LaplaceExponent(CLASS_EXAMPLES["HG"]), 1.0)

    def test_indeterminate_point_uses_factors(self) -> None:
        # Gamma(1 - beta + gamma - z) and Gamma(betah + z) both have a pole at 1/2.
        le = LaplaceExponent(HGParams(1.25, 0.75, -0.5, 0.75))
        assert le(0.5) == pytest.approx(-math.gamma(1.75) / math.gamma(0.25), rel=1e-12)

    def test_killing_rate(self) -> None:
        p = CLASS_EXAMPLES["HG"]
        assert killing_rate(p) == pytest.approx(1.0 / math.pi, rel=1e-13)
        assert -psi_eval(LaplaceExponent(p), 0.0) == pytest.approx(
            killing_rate(p), rel=1e-13
        )


@pytest.mark.parametrize("tag", list(CLASS_EXAMPLES.keys()))
def test_factorization_identity(tag) -> None:
    le = LaplaceExponent(CLASS_EXAMPLES[tag], tag)
    residual = factorization_residual(le, numpy.linspace(-50.0, 50.0, 200))
    assert numpy.max(residual) <= 1e-10


@pytest.mark.parametrize("tag", ["HG", "EHG", "EHL"])
def test_factors_are_bernstein(tag) -> None:
    ascending, descending = wh_factors(LaplaceExponent(CLASS_EXAMPLES[tag], tag))
    assert is_bernstein(ascending)
    assert is_bernstein(descending)


def test_ehl_descending_factor_from_transform() -> None:
    p = CLASS_EXAMPLES["EHL"]
    built = ehl_descending_from_transform(p)
    descending = wh_factors(LaplaceExponent(p))[1]
    z = numpy.array([0.1, 1.0, 7.5])
    numpy.testing.assert_allclose(built(z), descending(z), rtol=1e-12)
