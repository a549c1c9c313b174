"""
Levy densities of the extended hypergeometric and Lamperti-stable classes.

The density of a hypergeometric or extended hypergeometric process is computed by two
independent routes: the closed form in terms of the Gauss hypergeometric function and
the hyperexponential series of residues of psi at its poles.
"""

import logging
import math

from typing import Any, List, Tuple, Union

import numpy
import scipy.integrate
import scipy.special

try:
    from typing import Literal, TypedDict
except:
    from typing_extensions import Literal, TypedDict

from levyhg.errors import (
    DomainError,
    InadmissibleParameters,
    NonConvergence,
    Unsupported,
    UnboundedVariation,
)
from levyhg.exponents import killing_rate
from levyhg.params import HGParams
from levyhg.specfun import (
    TypeSeriesPolicy,
    gamma_ratio,
    gauss_2f1_regularized_complement,
    resolve_policy,
)

logger: logging.Logger = logging.getLogger(__name__)

Side = Literal["right", "left"]

# Tolerance for flagging cancelled zero-pole pairs.
_CANCEL_TOLERANCE: float = 1e-12

_SERIES_CLASSES: Tuple[str, ...] = ("EHG", "HG")


class TypeDensityEvaluation(TypedDict):
    x: float
    value: float
    route: Literal["ClosedForm", "ResidueSeries"]
    terms_used: int


TypeDensityRow = TypedDict(
    "TypeDensityRow",
    {
        "x": float,
        "pi_closed": float,
        "pi_series": float,
        "rel_diff": float,
    },
)


class TypeLampertiStable(TypedDict):
    alpha: float
    beta: float
    delta: float
    c_plus: float
    c_minus: float


def _series_class(p: HGParams) -> str:
    tag: str
    for tag in _SERIES_CLASSES:
        if tag in p.classes:
            return tag
    raise Unsupported(
        f"{p!r} is in {p.classes}; the residue structure is only implemented for "
        "the HG and EHG classes"
    )


def _nonzero(x: float) -> float:
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    if x == 0:
        raise DomainError("the Levy density is not finite at x = 0")
    return float(x)


def _side_parameters(p: HGParams, side: Side) -> Tuple[float, float, float, float]:
    # Returns (gamma, eta, c, rho_1) for the side; the left side swaps gamma and
    # gammah.
    eta: float = p.eta
    if side == "right":
        return p.gamma, eta, eta - p.gammah, 1.0 - p.beta + p.gamma
    return p.gammah, eta, eta - p.gamma, p.betah + p.gammah


class PoleZeroGrid:
    """
    See documentation of the `__init__` function.
    """

    def __init__(
        self,
        zeta: Any,
        rho: Any,
        zetah: Any,
        rhoh: Any,
        cancelled_right: bool = False,
        cancelled_left: bool = False,
    ) -> None:
        """
        Zeros and poles of psi on both sides of the origin.

        On the right psi vanishes at zeta_n and has simple poles at rho_n; on the left
        it vanishes at -zetah_n and has poles at -rhoh_n.

        Arguments:

            zeta, rho, zetah, rhoh: The first `count` entries of each sequence.

            cancelled_right: True if zeta_1 = rho_1, so that the first pair on the
                right is removed from psi.

            cancelled_left: True if zetah_1 = rhoh_1.
        """
        self._zeta: Any = numpy.asarray(zeta, dtype=float)
        self._rho: Any = numpy.asarray(rho, dtype=float)
        self._zetah: Any = numpy.asarray(zetah, dtype=float)
        self._rhoh: Any = numpy.asarray(rhoh, dtype=float)
        self._cancelled_right: bool = cancelled_right
        self._cancelled_left: bool = cancelled_left

    @property
    def zeta(self) -> Any:
        return self._zeta

    @property
    def rho(self) -> Any:
        return self._rho

    @property
    def zetah(self) -> Any:
        return self._zetah

    @property
    def rhoh(self) -> Any:
        return self._rhoh

    @property
    def count(self) -> int:
        return int(self._zeta.size)

    @property
    def cancelled_right(self) -> bool:
        return self._cancelled_right

    @property
    def cancelled_left(self) -> bool:
        return self._cancelled_left

    def is_interlacing(self) -> bool:
        """
        Checks ... < -rhoh_1 < -zetah_1 <= 0 <= zeta_1 < rho_1 < zeta_2 < ...

        The first pair on a side may coincide only when it is flagged as cancelled.
        """
        side: Tuple[Any, Any, bool]
        for side in (
            (self._zeta, self._rho, self._cancelled_right),
            (self._zetah, self._rhoh, self._cancelled_left),
        ):
            zeros: Any
            poles: Any
            cancelled: bool
            zeros, poles, cancelled = side
            if zeros[0] < 0:
                return False
            merged: Any = numpy.empty(2 * zeros.size)
            merged[0::2] = zeros
            merged[1::2] = poles
            steps: Any = numpy.diff(merged)
            if cancelled:
                if abs(steps[0]) > _CANCEL_TOLERANCE:
                    return False
                steps = steps[1:]
            if not numpy.all(steps > 0):
                return False
        return True


def pole_zero_sequences(p: HGParams, n: int) -> PoleZeroGrid:
    """
    Returns the first n zeros and poles of psi on each side of the origin.

    Raises:

        DomainError: if n < 1.

        Unsupported: for classes other than HG and EHG.
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    tag: str = _series_class(p)
    b: float
    g: float
    bh: float
    gh: float
    b, g, bh, gh = p.as_tuple()
    index: Any = numpy.arange(1, n + 1, dtype=float)
    zeta: Any = index - b
    zetah: Any = bh + index - 1.0
    if tag == "EHG":
        zeta[0] = -bh
        zetah[0] = b - 1.0
    return PoleZeroGrid(
        zeta,
        index - b + g,
        zetah,
        bh + gh + index - 1.0,
        cancelled_right=abs(1.0 - b + bh + g) <= _CANCEL_TOLERANCE,
        cancelled_left=abs(1.0 - b + bh + gh) <= _CANCEL_TOLERANCE,
    )


def residue_coefficients(p: HGParams, n: int, side: Side = "right") -> Any:
    """
    Returns the weights a_k rho_k, k = 1..n, of the hyperexponential series.

    On the right, pi(x) = sum_k a_k rho_k exp(-rho_k x) with

        a_k rho_k = sin(pi gamma) / pi * Gamma(gamma + k) / Gamma(k)
                    * Gamma(eta + k - 1) / Gamma(eta - gammah + k - 1).

    The left weights follow by exchanging gamma and gammah. A cancelled first pair has
    a vanishing first weight.
    """
    _series_class(p)
    g: float
    eta: float
    c: float
    g, eta, c, _ = _side_parameters(p, side)
    k: Any = numpy.arange(1, n + 1, dtype=float)
    return (
        math.sin(math.pi * g)
        / math.pi
        * numpy.exp(scipy.special.gammaln(g + k) - scipy.special.gammaln(k))
        * gamma_ratio([eta + k - 1.0], [c + k - 1.0])
    )


def small_jump_constant(p: HGParams, side: Side = "right") -> float:
    """
    Returns the limit of pi(x) |x|^(1 + gamma + gammah) as x tends to 0 from the side.
    """
    _series_class(p)
    g: float = p.gamma if side == "right" else p.gammah
    return (
        math.gamma(1.0 + p.gamma + p.gammah) * math.sin(math.pi * g) / math.pi
    )


def density_closed_form(
    p: HGParams, x: float, policy: Union[TypeSeriesPolicy, None] = None
) -> TypeDensityEvaluation:
    """
    Evaluates the Levy density through the Gauss hypergeometric function.

    For x > 0,

        pi(x) = -Gamma(eta) / (Gamma(eta - gammah) Gamma(-gamma)) exp(-(1 - beta +
                gamma) x) 2F1(1 + gamma, eta; eta - gammah; exp(-x))

    and the mirrored form holds for x < 0. The argument exp(-|x|) is passed through
    its complement 1 - exp(-|x|) so that small |x| keep full accuracy.

    Raises:

        DomainError: at x = 0.
    """
    x = _nonzero(x)
    side: Side = "right" if x > 0 else "left"
    g: float
    eta: float
    c: float
    rho_1: float
    g, eta, c, rho_1 = _side_parameters(p, side)
    _series_class(p)
    distance: float = abs(x)
    hypergeometric: float = gauss_2f1_regularized_complement(
        1.0 + g, eta, c, -math.expm1(-distance), policy
    )
    value: float = (
        -gamma_ratio([eta], [-g]) * math.exp(-rho_1 * distance) * hypergeometric
    )
    return {"x": x, "value": value, "route": "ClosedForm", "terms_used": 0}


def density_series(
    p: HGParams,
    x: float,
    n_terms: int = 10000,
    policy: Union[TypeSeriesPolicy, None] = None,
) -> TypeDensityEvaluation:
    """
    Evaluates the Levy density as the sum of residues of psi at its poles.

    The sum is truncated at the first N for which the geometric tail bound
    a_N rho_N exp(-rho_N |x|) / (1 - exp(-|x|)) falls below rel_tol times the partial
    sum.

    Raises:

        DomainError: at x = 0 or if n_terms < 1.

        NonConvergence: if the bound is not met within n_terms terms.
    """
    x = _nonzero(x)
    if n_terms < 1:
        raise DomainError(f"n_terms must be at least 1, got {n_terms}")
    resolved: TypeSeriesPolicy = resolve_policy(policy)
    side: Side = "right" if x > 0 else "left"
    rho_1: float = _side_parameters(p, side)[3]
    distance: float = abs(x)
    weights: Any = residue_coefficients(p, n_terms, side)
    terms: Any = weights * numpy.exp(
        -(rho_1 + numpy.arange(n_terms, dtype=float)) * distance
    )
    partial: Any = numpy.cumsum(terms)
    bound: Any = terms / -math.expm1(-distance)
    converged: Any = numpy.nonzero(bound < resolved["rel_tol"] * partial)[0]
    if converged.size == 0:
        raise NonConvergence(
            f"residue series at x = {x} did not converge in {n_terms} terms"
        )
    used: int = int(converged[0]) + 1
    logger.debug("Residue series at x = %s used %d terms", x, used)
    return {
        "x": x,
        "value": float(partial[used - 1]),
        "route": "ResidueSeries",
        "terms_used": used,
    }


def density_table(p: HGParams, xs: Any, n_terms: int = 10000) -> List[TypeDensityRow]:
    """
    Evaluates both routes on a grid of x and reports their relative difference.
    """
    rows: List[TypeDensityRow] = []
    x: float
    for x in xs:
        closed: float = density_closed_form(p, x)["value"]
        series: float = density_series(p, x, n_terms)["value"]
        scale: float = max(abs(closed), abs(series))
        rows.append(
            {
                "x": float(x),
                "pi_closed": closed,
                "pi_series": series,
                "rel_diff": abs(closed - series) / scale if scale > 0 else 0.0,
            }
        )
    return rows


def is_bounded_variation(p: HGParams) -> bool:
    """
    Returns True if the integral of min(1, |x|) pi(x) is finite, i.e. gamma + gammah
    < 1.
    """
    return p.gamma + p.gammah < 1.0


def _jump_integral(p: HGParams, theta: float, side: Side) -> complex:
    # Integral over the side of (exp(i theta x) - 1) pi(x), folded onto y = |x| > 0.
    sign: float = 1.0 if side == "right" else -1.0

    def density(y: float) -> float:
        return density_closed_form(p, sign * y)["value"]

    near_real: float = scipy.integrate.quad(
        lambda y: (math.cos(theta * y) - 1.0) * density(y), 0.0, 1.0, limit=200
    )[0]
    near_imag: float = scipy.integrate.quad(
        lambda y: math.sin(theta * y) * density(y), 0.0, 1.0, limit=200
    )[0]
    tail_mass: float = scipy.integrate.quad(density, 1.0, numpy.inf, limit=200)[0]
    tail_cos: float = scipy.integrate.quad(
        density, 1.0, numpy.inf, weight="cos", wvar=theta
    )[0]
    tail_sin: float = scipy.integrate.quad(
        density, 1.0, numpy.inf, weight="sin", wvar=theta
    )[0]
    return complex(near_real + tail_cos - tail_mass, sign * (near_imag + tail_sin))


def lk_reconstruct(p: HGParams, theta: float) -> complex:
    """
    Rebuilds psi(i theta) = -q + integral (exp(i theta x) - 1) pi(x) dx from the Levy
    density.

    Processes of bounded variation in these classes have neither drift nor Gaussian
    part, so the jump integral and the killing rate q determine psi.

    Raises:

        UnboundedVariation: if gamma + gammah >= 1.
    """
    _series_class(p)
    if not is_bounded_variation(p):
        raise UnboundedVariation(
            f"gamma + gammah = {p.gamma + p.gammah} >= 1, the jump integral diverges"
        )
    value: complex = complex(-killing_rate(p))
    if theta == 0:
        return value
    side: Side
    for side in ("right", "left"):
        value += _jump_integral(p, theta, side)
    return value


def _ehl_params(beta: float, gamma: float, gammah: float) -> HGParams:
    p: HGParams = HGParams(beta, gamma, beta, gammah)
    if "EHL" not in p.classes:
        raise InadmissibleParameters(f"{p!r} is not in the Lamperti-stable subclass")
    return p


def lamperti_stable_parameters(
    beta: float, gamma: float, gammah: float
) -> TypeLampertiStable:
    """
    Returns the Lamperti-stable parameters (alpha, beta, delta) = (gamma + gammah,
    beta + gammah, 1 - beta + gamma) and the jump constants c+ and c-.
    """
    _ehl_params(beta, gamma, gammah)
    alpha: float = gamma + gammah
    return {
        "alpha": alpha,
        "beta": beta + gammah,
        "delta": 1.0 - beta + gamma,
        "c_plus": float(gamma_ratio([alpha + 1.0], [1.0 + gamma, -gamma])),
        "c_minus": float(gamma_ratio([alpha + 1.0], [1.0 + gammah, -gammah])),
    }


def ehl_density(beta: float, gamma: float, gammah: float, x: float) -> float:
    """
    Evaluates the Levy density of a Lamperti-stable process.

    For x > 0 the density is c+ exp((beta + gammah) x) (exp(x) - 1)^-(alpha + 1), and
    for x < 0 it is c- exp(-(1 - beta + gamma) x) (exp(-x) - 1)^-(alpha + 1), with
    alpha = gamma + gammah.

    Raises:

        DomainError: at x = 0.

        InadmissibleParameters: if (beta, gamma, beta, gammah) is not in the
            Lamperti-stable subclass.
    """
    x = _nonzero(x)
    stable: TypeLampertiStable = lamperti_stable_parameters(beta, gamma, gammah)
    exponent: float = -(stable["alpha"] + 1.0)
    if x > 0:
        return (
            stable["c_plus"]
            * math.exp((beta + gammah) * x)
            * math.expm1(x) ** exponent
        )
    return (
        stable["c_minus"]
        * math.exp(-(1.0 - beta + gamma) * x)
        * math.expm1(-x) ** exponent
    )
