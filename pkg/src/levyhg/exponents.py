"""
Laplace exponents and Wiener-Hopf factors.

The Laplace exponent psi of each supported class is a ratio of gamma functions. Its
Wiener-Hopf factors kappa and kappahat are represented symbolically as
`BernsteinExpr` objects, on which the conjugation, T_c and Esscher transforms act by
shifting arguments.
"""

import logging

from typing import Any, List, Sequence, Tuple, Union

import numpy

from levyhg.errors import (
    InadmissibleParameters,
    NegativeShift,
    NotSpecial,
    PoleError,
    Unsupported,
)
from levyhg.params import ClassTag, HGParams
from levyhg.specfun import gamma_ratio

logger: logging.Logger = logging.getLogger(__name__)

# Two shifts closer than this are treated as equal when simplifying.
_MERGE_TOLERANCE: float = 1e-12


def _pop_match(values: List[float], target: float) -> bool:
    index: int
    value: float
    for index, value in enumerate(values):
        if abs(value - target) <= _MERGE_TOLERANCE:
            values.pop(index)
            return True
    return False


def _simplify(
    linear_num: List[float],
    linear_den: List[float],
    gamma_num: List[float],
    gamma_den: List[float],
) -> None:
    # In place. Uses (a + z) Gamma(a + z) = Gamma(a + 1 + z).
    changed: bool = True
    while changed:
        changed = False
        a: float
        for a in list(linear_num):
            if _pop_match(linear_den, a):
                linear_num.remove(a)
                changed = True
            elif _pop_match(gamma_num, a):
                linear_num.remove(a)
                gamma_num.append(a + 1.0)
                changed = True
            elif _pop_match(gamma_den, a + 1.0):
                linear_num.remove(a)
                gamma_den.append(a)
                changed = True
        for a in list(linear_den):
            if _pop_match(gamma_den, a):
                linear_den.remove(a)
                gamma_den.append(a + 1.0)
                changed = True
            elif _pop_match(gamma_num, a + 1.0):
                linear_den.remove(a)
                gamma_num.append(a)
                changed = True
        for a in list(gamma_num):
            if _pop_match(gamma_den, a):
                gamma_num.remove(a)
                changed = True


def _format_shift(a: float) -> str:
    if a == 0:
        return "z"
    if a < 0:
        return f"z - {-a:g}"
    return f"{a:g} + z"


class BernsteinExpr:
    """
    See documentation of the `__init__` function.
    """

    def __init__(
        self,
        scale: float = 1.0,
        linear_num: Sequence[float] = (),
        linear_den: Sequence[float] = (),
        gamma_num: Sequence[float] = (),
        gamma_den: Sequence[float] = (),
        offset: float = 0.0,
    ) -> None:
        """
        A gamma-ratio expression in the variable z.

        The expression is

            scale * prod (a + z) / prod (b + z) * prod Gamma(c + z) / prod Gamma(d + z)
                + offset

        with a in linear_num, b in linear_den, c in gamma_num and d in gamma_den.
        Matching terms are cancelled or merged on construction.
        """
        num: List[float] = [float(a) for a in linear_num]
        den: List[float] = [float(a) for a in linear_den]
        gnum: List[float] = [float(a) for a in gamma_num]
        gden: List[float] = [float(a) for a in gamma_den]
        _simplify(num, den, gnum, gden)
        self._scale: float = float(scale)
        self._linear_num: Tuple[float, ...] = tuple(sorted(num))
        self._linear_den: Tuple[float, ...] = tuple(sorted(den))
        self._gamma_num: Tuple[float, ...] = tuple(sorted(gnum))
        self._gamma_den: Tuple[float, ...] = tuple(sorted(gden))
        self._offset: float = float(offset)

    @property
    def scale(self) -> float:
        return self._scale

    @property
    def linear_num(self) -> Tuple[float, ...]:
        return self._linear_num

    @property
    def linear_den(self) -> Tuple[float, ...]:
        return self._linear_den

    @property
    def gamma_num(self) -> Tuple[float, ...]:
        return self._gamma_num

    @property
    def gamma_den(self) -> Tuple[float, ...]:
        return self._gamma_den

    @property
    def offset(self) -> float:
        return self._offset

    def product(self, z: Any) -> Any:
        """
        Evaluates the expression without its additive offset.
        """
        value: Any = self._scale * gamma_ratio(
            [a + z for a in self._gamma_num], [d + z for d in self._gamma_den]
        )
        a: float
        for a in self._linear_num:
            value = value * (a + z)
        for a in self._linear_den:
            root: Any = a + z
            if numpy.any(root == 0):
                raise PoleError(f"linear factor vanishes at z = {-a}", -a)
            value = value / root
        return value

    def __call__(self, z: Any) -> Any:
        return self.product(z) + self._offset

    def shifted(self, c: float) -> "BernsteinExpr":
        """
        Returns the product part evaluated at z + c, without offset.
        """
        return BernsteinExpr(
            self._scale,
            [a + c for a in self._linear_num],
            [a + c for a in self._linear_den],
            [a + c for a in self._gamma_num],
            [a + c for a in self._gamma_den],
        )

    def __str__(self) -> str:
        parts: List[str] = [f"{self._scale:g}"] if self._scale != 1.0 else []
        parts.extend(f"({_format_shift(a)})" for a in self._linear_num)
        parts.extend(f"Gamma({_format_shift(a)})" for a in self._gamma_num)
        text: str = " * ".join(parts) if parts else "1"
        denominator: List[str] = [f"({_format_shift(a)})" for a in self._linear_den]
        denominator.extend(f"Gamma({_format_shift(a)})" for a in self._gamma_den)
        if denominator:
            text += " / (" + " * ".join(denominator) + ")"
        if self._offset != 0:
            text += f" - {-self._offset:.17g}" if self._offset < 0 else (
                f" + {self._offset:.17g}"
            )
        return text

    def __repr__(self) -> str:
        return f"BernsteinExpr({self})"


def is_bernstein(expr: BernsteinExpr) -> bool:
    """
    Spot-checks that an expression behaves like a Bernstein function on (0, inf).

    At base points on a logarithmic grid, forward differences of orders 1 to 4 must
    have alternating signs (positive, negative, positive, negative) and the value must
    be non-negative.
    """
    z0: float
    for z0 in numpy.logspace(-2.0, 2.0, 9):
        step: float = 0.25 * z0
        points: Any = z0 + step * numpy.arange(5)
        stencil: Any = numpy.broadcast_to(
            numpy.asarray(expr(points), dtype=float), points.shape
        )
        if not numpy.all(numpy.isfinite(stencil)):
            return False
        tolerance: float = 1e-8 * (1.0 + float(numpy.max(numpy.abs(stencil))))
        if stencil[0] < -tolerance:
            return False
        order: int
        for order in range(1, 5):
            difference: float = float(numpy.diff(stencil, n=order)[0])
            if (-1.0) ** (order + 1) * difference < -tolerance:
                return False
    return True


def conjugate(expr: BernsteinExpr) -> BernsteinExpr:
    """
    Returns the conjugate z / expr(z) of a special Bernstein function.

    Raises:

        Unsupported: if the expression carries an additive offset.

        NotSpecial: if the conjugate fails the Bernstein spot check.
    """
    if expr.offset != 0:
        raise Unsupported("conjugate of an expression with an offset is not supported")
    result: BernsteinExpr = BernsteinExpr(
        1.0 / expr.scale,
        (0.0, *expr.linear_den),
        expr.linear_num,
        expr.gamma_den,
        expr.gamma_num,
    )
    if not is_bernstein(result):
        raise NotSpecial(f"conjugate of {expr} is not a Bernstein function")
    return result


def t_transform(expr: BernsteinExpr, c: float) -> BernsteinExpr:
    """
    Returns T_c expr, i.e. z / (z + c) * expr(z + c).

    Raises:

        NegativeShift: if c < 0.

        Unsupported: if the expression carries an additive offset.
    """
    if c < 0:
        raise NegativeShift(f"T_c needs c >= 0, got {c}")
    if expr.offset != 0:
        raise Unsupported("T_c of an expression with an offset is not supported")
    if c == 0:
        return expr
    shifted: BernsteinExpr = expr.shifted(c)
    return BernsteinExpr(
        shifted.scale,
        (0.0, *shifted.linear_num),
        (c, *shifted.linear_den),
        shifted.gamma_num,
        shifted.gamma_den,
    )


def esscher(expr: BernsteinExpr, c: float) -> BernsteinExpr:
    """
    Returns the Esscher transform E_c expr, i.e. expr(z + c) - expr(c).

    Raises:

        NegativeShift: if c < 0.
    """
    if c < 0:
        raise NegativeShift(f"Esscher transform needs c >= 0, got {c}")
    if c == 0:
        return expr
    shifted: BernsteinExpr = expr.shifted(c)
    return BernsteinExpr(
        shifted.scale,
        shifted.linear_num,
        shifted.linear_den,
        shifted.gamma_num,
        shifted.gamma_den,
        offset=-float(numpy.real(expr.product(c))),
    )


class LaplaceExponent:
    """
    See documentation of the `__init__` function.
    """

    def __init__(
        self, params: HGParams, class_tag: Union[ClassTag, None] = None
    ) -> None:
        """
        The Laplace exponent psi of a process, E[exp(z xi_1)] = exp(psi(z)).

        Arguments:

            params: The parameter quadruple.

            class_tag: The class whose formulas are used. Defaults to the primary
                class of the parameters.

        Raises:

            InadmissibleParameters: if the parameters are not in the requested class.
        """
        tag: ClassTag = class_tag if class_tag is not None else params.primary_class
        if tag not in params.classes:
            raise InadmissibleParameters(
                f"{params!r} is not in class {tag}", [f"member of {params.classes}"]
            )
        self._params: HGParams = params
        self._class_tag: ClassTag = tag

    @property
    def params(self) -> HGParams:
        return self._params

    @property
    def class_tag(self) -> ClassTag:
        return self._class_tag

    def __call__(self, z: Any) -> Any:
        return psi_eval(self, z)


def _psi_formula(le: LaplaceExponent, z: Any) -> Any:
    b: float
    g: float
    bh: float
    gh: float
    b, g, bh, gh = le.params.as_tuple()
    if le.class_tag == "EHL":
        return gamma_ratio([1 - b + g - z, b + gh + z], [1 - b - z, b + z])
    return -gamma_ratio([1 - b + g - z, bh + gh + z], [1 - b - z, bh + z])


def psi_eval(le: LaplaceExponent, z: Any) -> Any:
    """
    Evaluates the Laplace exponent at z.

    Where the gamma-ratio formula is indeterminate (a numerator and a denominator pole
    at the same point), the value is taken from the Wiener-Hopf factors.

    Raises:

        PoleError: at a pole of psi.
    """
    try:
        return _psi_formula(le, z)
    except PoleError:
        ascending: BernsteinExpr
        descending: BernsteinExpr
        ascending, descending = wh_factors(le)
        try:
            return -ascending(-z) * descending(z)
        except PoleError:
            raise PoleError(f"Laplace exponent has a pole at z = {z}", z)


def wh_factors(le: LaplaceExponent) -> Tuple[BernsteinExpr, BernsteinExpr]:
    """
    Returns the ascending and descending ladder height exponents (kappa, kappahat).

    The factors satisfy psi(z) = -kappa(-z) kappahat(z). The factors of the class
    extended in betah only are obtained from those of its dual.
    """
    b: float
    g: float
    bh: float
    gh: float
    b, g, bh, gh = le.params.as_tuple()
    tag: ClassTag = le.class_tag
    if tag == "HG":
        return (
            BernsteinExpr(gamma_num=[1 - b + g], gamma_den=[1 - b]),
            BernsteinExpr(gamma_num=[bh + gh], gamma_den=[bh]),
        )
    if tag == "EHG":
        return (
            BernsteinExpr(linear_num=[-bh], gamma_num=[1 - b + g], gamma_den=[2 - b]),
            BernsteinExpr(linear_num=[b - 1], gamma_num=[bh + gh], gamma_den=[1 + bh]),
        )
    if tag == "EHG_BETA_ONLY":
        return (
            BernsteinExpr(gamma_num=[2 - b + g], gamma_den=[2 - b]),
            BernsteinExpr(
                linear_num=[b - 1],
                linear_den=[b - 1 - g],
                gamma_num=[bh + gh],
                gamma_den=[bh],
            ),
        )
    if tag == "EHG_BETAH_ONLY":
        reflected: HGParams = HGParams(1 - bh, gh, 1 - b, g, eps=le.params.eps)
        ascending: BernsteinExpr
        descending: BernsteinExpr
        ascending, descending = wh_factors(
            LaplaceExponent(reflected, "EHG_BETA_ONLY")
        )
        return descending, ascending
    return (
        BernsteinExpr(gamma_num=[1 - b + g], gamma_den=[2 - b]),
        BernsteinExpr(linear_num=[b - 1], gamma_num=[b + gh], gamma_den=[b]),
    )


def ehl_descending_from_transform(p: HGParams) -> BernsteinExpr:
    """
    Builds kappahat of a Lamperti-stable quadruple as (T_{beta-1} v)*, with
    v(z) = Gamma(1 + z) / Gamma(1 + gammah + z).
    """
    if "EHL" not in p.classes:
        raise InadmissibleParameters(f"{p!r} is not in class EHL")
    base: BernsteinExpr = BernsteinExpr(gamma_num=[1.0], gamma_den=[1.0 + p.gammah])
    return conjugate(t_transform(base, p.beta - 1.0))


def killing_rate(p: HGParams) -> float:
    """
    Returns the killing rate q = -psi(0) = kappa(0) kappahat(0).
    """
    ascending: BernsteinExpr
    descending: BernsteinExpr
    ascending, descending = wh_factors(LaplaceExponent(p))
    return float(numpy.real(ascending(0.0) * descending(0.0)))


def factorization_residual(le: LaplaceExponent, thetas: Any) -> Any:
    """
    Returns |psi(i theta) + kappa(-i theta) kappahat(i theta)| / (1 + |psi(i theta)|)
    on a grid of real theta.
    """
    z: Any = 1j * numpy.asarray(thetas, dtype=float)
    ascending: BernsteinExpr
    descending: BernsteinExpr
    ascending, descending = wh_factors(le)
    psi: Any = psi_eval(le, z)
    return numpy.abs(psi + ascending(-z) * descending(z)) / (1.0 + numpy.abs(psi))
