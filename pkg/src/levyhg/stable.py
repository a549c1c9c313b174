"""
Stable processes and the Lamperti-type processes built from them.

Covers the characteristic exponent, the censored and radial Lamperti exponents, Mellin
transforms of hitting and occupation times, and the exit and hitting laws of the
symmetric process on [-1, 1].
"""

import logging
import math

from typing import Any, Callable, List, Tuple, Union

import numpy
import scipy.integrate

try:
    from typing import Literal
except:
    from typing_extensions import Literal

from levyhg.errors import (
    DomainError,
    InadmissibleParameters,
    NotInCkl,
    OutOfStrip,
    PoleError,
    UnsupportedCase,
)
from levyhg.exponents import LaplaceExponent, psi_eval
from levyhg.params import ClassTag, HGParams
from levyhg.specfun import gamma_ratio, incomplete_beta, log_double_gamma, log_gamma

logger: logging.Logger = logging.getLogger(__name__)

HittingLaw = Literal[
    "ExitBeforeZeroRadial", "HitZeroBeforeExitProb", "TwoSidedExitAvoidZero"
]

# Membership tolerance of the C(k,l) classes.
_CKL_TOLERANCE: float = 1e-12
# Offset used to evaluate removable singularities as a two-sided mean.
_REMOVABLE_OFFSET: float = 1e-7


def admissible_stable(alpha: float, rho: float) -> bool:
    """
    Returns True if (alpha, rho) parametrizes a stable process with two-sided jumps, or
    the symmetric Cauchy process.
    """
    if 0 < alpha < 1:
        return 0 < rho < 1
    if alpha == 1:
        return rho == 0.5
    if 1 < alpha < 2:
        return 1 - 1 / alpha < rho < 1 / alpha
    return False


class StableParams:
    """
    See documentation of the `__init__` function.
    """

    def __init__(self, alpha: float, rho: float) -> None:
        """
        A stable process with index alpha and positivity parameter rho = P(X_t > 0).

        The Levy density is c+ x^(-alpha-1) on x > 0 and c- |x|^(-alpha-1) on x < 0,
        with c+ = Gamma(alpha + 1) / (Gamma(alpha rho) Gamma(1 - alpha rho)) and c-
        the same with rhoh = 1 - rho.

        Raises:

            InadmissibleParameters: if (alpha, rho) is not admissible.
        """
        if not admissible_stable(alpha, rho):
            raise InadmissibleParameters(
                f"(alpha, rho) = ({alpha}, {rho}) is not admissible",
                [
                    "alpha in (0, 1) and rho in (0, 1), or (alpha, rho) = (1, 1/2), or "
                    "alpha in (1, 2) and rho in (1 - 1/alpha, 1/alpha)"
                ],
            )
        self._alpha: float = float(alpha)
        self._rho: float = float(rho)

    @property
    def alpha(self) -> float:
        return self._alpha

    @property
    def rho(self) -> float:
        return self._rho

    @property
    def rhoh(self) -> float:
        return 1.0 - self._rho

    @property
    def c_plus(self) -> float:
        return float(
            gamma_ratio(
                [self._alpha + 1],
                [self._alpha * self._rho, 1 - self._alpha * self._rho],
            )
        )

    @property
    def c_minus(self) -> float:
        return float(
            gamma_ratio(
                [self._alpha + 1],
                [self._alpha * self.rhoh, 1 - self._alpha * self.rhoh],
            )
        )

    @property
    def scale(self) -> float:
        """
        c = cos(pi alpha (rho - 1/2)).
        """
        return math.cos(math.pi * self._alpha * (self._rho - 0.5))

    @property
    def skewness(self) -> float:
        """
        The skewness beta = tan(pi alpha (rho - 1/2)) / tan(pi alpha / 2), 0 for
        alpha = 1.
        """
        if self._alpha == 1:
            return 0.0
        return math.tan(math.pi * self._alpha * (self._rho - 0.5)) / math.tan(
            math.pi * self._alpha / 2
        )

    def __repr__(self) -> str:
        return f"StableParams(alpha={self._alpha!r}, rho={self._rho!r})"


def stable_char_exponent(sp: StableParams, theta: Any) -> Any:
    """
    Returns Psi(theta) with E[exp(i theta X_1)] = exp(-Psi(theta)).

    Psi(theta) = c |theta|^alpha (1 - i beta tan(pi alpha / 2) sgn theta), which
    equals |theta|^alpha exp(-i pi alpha (rho - 1/2) sgn theta).
    """
    theta_array: Any = numpy.asarray(theta, dtype=float)
    value: Any = numpy.abs(theta_array) ** sp.alpha * numpy.exp(
        -1j * math.pi * sp.alpha * (sp.rho - 0.5) * numpy.sign(theta_array)
    )
    if value.ndim == 0:
        return complex(value)
    return value


def censored_lamperti(sp: StableParams) -> Tuple[HGParams, ClassTag]:
    """
    Returns the parameters (1, alpha rho, 1 - alpha, alpha rhoh) of the Lamperti
    transform of the path-censored stable process, tagged HG for alpha <= 1 and EHG
    otherwise.
    """
    p: HGParams = HGParams(1.0, sp.alpha * sp.rho, 1.0 - sp.alpha, sp.alpha * sp.rhoh)
    return p, "HG" if sp.alpha <= 1 else "EHG"


def censored_exponent(sp: StableParams, z: Any) -> Any:
    """
    Evaluates psi^Y(z) = -Gamma(alpha rho - z) Gamma(1 - alpha rho + z) /
    (Gamma(-z) Gamma(1 - alpha + z)) directly.
    """
    a: float = sp.alpha
    ar: float = a * sp.rho
    return -gamma_ratio([ar - z, 1 - ar + z], [-z, 1 - a + z])


def censored_occupation_mellin(sp: StableParams, s: Any) -> Any:
    """
    Evaluates E[I^(s-1)] for the exponential functional I(-alpha xi^Y), the occupation
    time of (0, inf) before the stable process hits zero.

        M(s) = c G(2/alpha - 1 + s) / G(2/alpha - rho + s)
               * G(1/alpha + rho + 1 - s) / G(1/alpha + 1 - s)
               * Gamma(1/alpha - rho + s) / Gamma(rho + 1 - s) * Gamma(2 - 1/alpha - s)

    with G = G(.; 1/alpha) and c fixed by M(1) = 1.

    Raises:

        DomainError: if alpha <= 1.

        OutOfStrip: unless Re s lies in (rho - 1/alpha, 2 - 1/alpha).
    """
    a: float = sp.alpha
    rho: float = sp.rho
    if not a > 1:
        raise DomainError(f"the stable process hits zero only for alpha > 1, got {a}")
    low: float = rho - 1 / a
    high: float = 2 - 1 / a
    if not numpy.all((numpy.real(s) > low) & (numpy.real(s) < high)):
        raise OutOfStrip(f"Re s must lie in ({low}, {high}), got {s}")
    tau: float = 1 / a

    def log_unnormalized(w: Any) -> Any:
        return (
            log_double_gamma(2 / a - 1 + w, tau)
            - log_double_gamma(2 / a - rho + w, tau)
            + log_double_gamma(1 / a + rho + 1 - w, tau)
            - log_double_gamma(1 / a + 1 - w, tau)
            + log_gamma(1 / a - rho + w)
            - log_gamma(rho + 1 - w)
            + log_gamma(2 - 1 / a - w)
        )

    value: Any = numpy.exp(log_unnormalized(s) - log_unnormalized(1.0 + 0j))
    if numpy.ndim(value) == 0:
        return complex(value)
    return value


def ckl_rho(alpha: float, k: int, l: int) -> float:
    """
    Returns the positivity parameter rho = l / alpha - k of the class C(k,l).

    Raises:

        NotInCkl: if (alpha, rho) is not admissible.
    """
    rho: float = l / alpha - k
    if not admissible_stable(alpha, rho):
        raise NotInCkl(
            f"C({k},{l}) with alpha = {alpha} gives rho = {rho}, which is not admissible"
        )
    return rho


def _removable(function: Callable[[complex], complex], s: complex) -> complex:
    # Value at s, or the mean over s +/- i offset if s is a removable singularity.
    try:
        value: complex = function(s)
        if numpy.isfinite(value):
            return value
    except PoleError:
        pass
    return 0.5 * (
        function(s + 1j * _REMOVABLE_OFFSET) + function(s - 1j * _REMOVABLE_OFFSET)
    )


def ckl_closed_form(sp: StableParams, k: int, l: int, s: complex) -> complex:
    """
    Evaluates the occupation-time Mellin transform of a stable process in C(k,l),
    rho + k = l / alpha, k, l >= 0, with gamma functions only.

        M(s) = c Gamma((1 - l)/alpha + k + s) Gamma(2 - 1/alpha - s)
               / (Gamma(l/alpha + 1 - k - s) Gamma(2 - l - alpha + alpha s))
               * prod_{j=1..l} Gamma(j/alpha + 1 - s) Gamma((2 - j)/alpha - 1 + s)
               * prod_{i=0..k-1} sin(pi alpha (s + i))
                   / (pi (l - 1 - alpha (s + i)) (l - alpha (s + i)))

    Raises:

        UnsupportedCase: if l < 0.

        NotInCkl: if rho + k differs from l / alpha by more than 1e-12.

        DomainError: if alpha <= 1.
    """
    a: float = sp.alpha
    if l < 0:
        raise UnsupportedCase(f"no closed form is implemented for l = {l} < 0")
    if abs(sp.rho + k - l / a) > _CKL_TOLERANCE:
        raise NotInCkl(f"rho + k = {sp.rho + k} differs from l / alpha = {l / a}")
    if k < 0:
        raise NotInCkl(f"C({k},{l}) would need rho >= 1")
    if not a > 1:
        raise DomainError(f"the stable process hits zero only for alpha > 1, got {a}")

    def unnormalized(w: complex) -> complex:
        numerators: List[complex] = [(1 - l) / a + k + w, 2 - 1 / a - w]
        denominators: List[complex] = [l / a + 1 - k - w, 2 - l - a + a * w]
        j: int
        for j in range(1, l + 1):
            numerators.extend([j / a + 1 - w, (2 - j) / a - 1 + w])
        value: complex = complex(gamma_ratio(numerators, denominators))
        i: int
        for i in range(k):
            shifted: complex = a * (w + i)
            value *= numpy.sin(math.pi * shifted) / (
                math.pi * (l - 1 - shifted) * (l - shifted)
            )
        return value

    return _removable(unnormalized, complex(s)) / _removable(unnormalized, 1.0 + 0j)


def radial_lamperti(alpha: float) -> Tuple[HGParams, ClassTag]:
    """
    Returns the parameters (1, alpha/2, (1 - alpha)/2, alpha/2) of the rescaled
    radial Lamperti process 2 xi', tagged HG for alpha <= 1 and EHG otherwise.
    """
    if not 0 < alpha < 2:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    p: HGParams = HGParams(1.0, alpha / 2, (1 - alpha) / 2, alpha / 2)
    return p, "HG" if alpha <= 1 else "EHG"


def _radial_exponent(alpha: float) -> LaplaceExponent:
    p: HGParams
    tag: ClassTag
    p, tag = radial_lamperti(alpha)
    return LaplaceExponent(p, tag)


def radial_exponent(alpha: float, z: Any) -> Any:
    """
    Returns the Laplace exponent psi^R(z) = 2^alpha psi_{2 xi'}(z / 2) of the radial
    Lamperti process.
    """
    return 2**alpha * psi_eval(_radial_exponent(alpha), z / 2)


def avoid_zero_exponent(alpha: float, z: Any) -> Any:
    """
    Returns psi(z) = psi'(z + alpha - 1), the exponent of the radial process
    conditioned to avoid zero, where psi' is the exponent of xi'.

    Raises:

        PoleError: if z + alpha - 1 is a pole of psi'.
    """
    if not 1 < alpha < 2:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    return psi_eval(_radial_exponent(alpha), (z + alpha - 1) / 2)


shifted_exponent = avoid_zero_exponent


def avoid_zero_params(alpha: float) -> HGParams:
    """
    Returns ((alpha + 1)/2, alpha/2, 0, alpha/2), the quadruple of twice the process
    conditioned to avoid zero. It is the dual of the radial quadruple.
    """
    if not 1 < alpha < 2:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    return HGParams((alpha + 1) / 2, alpha / 2, 0.0, alpha / 2)


def radial_constant(alpha: float) -> float:
    """
    Returns C' = sqrt(pi) / (Gamma(1/alpha) Gamma(1 - 1/alpha)).
    """
    return math.sqrt(math.pi) / (math.gamma(1 / alpha) * math.gamma(1 - 1 / alpha))


def _check_t0_strip(alpha: float, s: Any) -> None:
    if not 1 < alpha < 2:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    re: Any = numpy.real(s)
    if not numpy.all((re > -1 / alpha) & (re < 2 - 1 / alpha)):
        raise OutOfStrip(f"Re s must lie in ({-1 / alpha}, {2 - 1 / alpha}), got {s}")


def radial_mellin(alpha: float, s: Any) -> Any:
    """
    Returns the Mellin transform of the exponential functional of -alpha xi',

        M(s) = C' Gamma(1 + alpha/2 - alpha s/2) / Gamma((1 - alpha)/2 + alpha s/2)
               * Gamma(1/alpha - 1 + s) Gamma(2 - 1/alpha - s) / Gamma(2 - s),

    on Re s in (-1/alpha, 2 - 1/alpha). M(1) is exactly 1.
    """
    _check_t0_strip(alpha, s)
    value: Any = radial_constant(alpha) * gamma_ratio(
        [1 + alpha / 2 - alpha * s / 2, 1 / alpha - 1 + s, 2 - 1 / alpha - s],
        [(1 - alpha) / 2 + alpha * s / 2, 2 - s],
    )
    if numpy.ndim(value) == 0:
        return 1.0 if s == 1 else value
    return numpy.where(numpy.asarray(s) == 1, 1.0, value)


def t0_mellin(alpha: float, s: Any) -> Any:
    """
    Returns E_1[T_0^(s-1)] = 2^(-alpha (s-1)) M(s) for the symmetric stable process
    started at 1.

    Raises:

        OutOfStrip: unless Re s lies in (-1/alpha, 2 - 1/alpha).
    """
    return 2.0 ** (-alpha * (s - 1)) * radial_mellin(alpha, s)


def h_invariant(x: float, sp: StableParams) -> float:
    """
    Returns the invariant function of the stable process killed at zero,

        h(x) = -Gamma(1 - alpha) sin(pi alpha rhoh) / pi x^(alpha - 1), x > 0,

    with rho in place of rhoh for x < 0.
    """
    if not 1 < sp.alpha < 2:
        raise DomainError(f"alpha must lie in (1, 2), got {sp.alpha}")
    if x == 0:
        raise DomainError("h is only defined for x != 0")
    weight: float = sp.rhoh if x > 0 else sp.rho
    return (
        -math.gamma(1 - sp.alpha)
        * math.sin(math.pi * sp.alpha * weight)
        / math.pi
        * abs(x) ** (sp.alpha - 1)
    )


def _check_exit(x: float, alpha: float, y: Union[float, None] = None) -> None:
    if not 0 < alpha < 2:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    if not abs(x) < 1:
        raise DomainError(f"the start point must satisfy |x| < 1, got {x}")
    if y is not None and not abs(y) > 1:
        raise DomainError(f"the exit point must satisfy |y| > 1, got {y}")


def rogozin_exit_density(x: float, y: float, alpha: float) -> float:
    """
    Returns the density at y of the position of the symmetric stable process when it
    first leaves [-1, 1], started at x.
    """
    _check_exit(x, alpha, y)
    return (
        math.sin(math.pi * alpha / 2)
        / math.pi
        * (1 - x * x) ** (alpha / 2)
        * (y * y - 1) ** (-alpha / 2)
        / abs(y - x)
    )


def _hit_zero_probability(x: float, alpha: float) -> float:
    if alpha <= 1:
        return 0.0
    if x == 0:
        return 1.0
    remaining: float = 1 - x * x
    return remaining ** (alpha / 2) - 0.5 * abs(x) ** (alpha - 1) * incomplete_beta(
        alpha / 2, (3 - alpha) / 2, remaining
    )


def hit_zero_before_exit_prob(x: float, alpha: float) -> float:
    """
    Returns P_x(T_0 < sigma), the probability that the symmetric stable process hits
    zero before it leaves [-1, 1].

        P = (1 - x^2)^(alpha/2)
            - 1/2 |x|^(alpha - 1) integral_0^(1 - x^2) t^(alpha/2 - 1)
              (1 - t)^(-(alpha - 1)/2) dt

    Raises:

        DomainError: unless |x| < 1 and alpha in (1, 2).
    """
    _check_exit(x, alpha)
    if not alpha > 1:
        raise DomainError(f"the process hits zero only for alpha > 1, got {alpha}")
    return _hit_zero_probability(x, alpha)


def two_sided_exit_avoid_zero_density(x: float, y: float, alpha: float) -> float:
    """
    Returns the density at y, |y| > 1, of the exit position of [-1, 1] on the event that
    zero is not hit first.

    By the Markov property at T_0 it is Rogozin's density from x minus P_x(T_0 <
    sigma) times Rogozin's density from 0. For alpha <= 1 zero is never hit and
    Rogozin's law is returned.
    """
    _check_exit(x, alpha, y)
    return rogozin_exit_density(x, y, alpha) - _hit_zero_probability(
        x, alpha
    ) * rogozin_exit_density(0.0, y, alpha)


def exit_before_zero_density(x: float, y: float, alpha: float) -> float:
    """
    Returns the density at y > 1 of |X| at the exit of [-1, 1] on the event that zero
    is not hit first.

    The value depends on x only through |x| and vanishes at x = 0.
    """
    _check_exit(x, alpha, y)
    if not y > 1:
        raise DomainError(f"the exit level must satisfy y > 1, got {y}")
    return two_sided_exit_avoid_zero_density(
        x, y, alpha
    ) + two_sided_exit_avoid_zero_density(x, -y, alpha)


def exit_density_mass(x: float, alpha: float) -> float:
    """
    Returns the integral over y > 1 of `exit_before_zero_density`, which equals 1 -
    P_x(T_0 < sigma).
    """
    _check_exit(x, alpha)
    near: float = scipy.integrate.quad(
        lambda y: exit_before_zero_density(x, y, alpha) * (y - 1) ** (alpha / 2),
        1.0,
        2.0,
        weight="alg",
        wvar=(-alpha / 2, 0.0),
    )[0]
    far: float = scipy.integrate.quad(
        lambda y: exit_before_zero_density(x, y, alpha), 2.0, numpy.inf
    )[0]
    return near + far


def hitting_law(
    kind: HittingLaw, x: float, alpha: float, y: Union[float, None] = None
) -> float:
    """
    Dispatches to the exit and hitting laws of the symmetric stable process.
    """
    if kind == "HitZeroBeforeExitProb":
        return hit_zero_before_exit_prob(x, alpha)
    if y is None:
        raise DomainError(f"{kind} needs an exit point y")
    if kind == "ExitBeforeZeroRadial":
        return exit_before_zero_density(x, y, alpha)
    return two_sided_exit_avoid_zero_density(x, y, alpha)
