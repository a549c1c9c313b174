"""
Special function kernels.

This module contains the complex log-gamma function, ratios of gamma functions, the
Gauss hypergeometric function 2F1 on [0, 1], the incomplete beta integral and the
logarithm of the double gamma function G(z; tau). Every analytic formula in the
package is built from these kernels.
"""

import functools
import logging
import math

from typing import Any, List, Sequence, Tuple, Union

import numpy
import scipy.special  # type: ignore

try:
    from typing import TypedDict
except:
    from typing_extensions import TypedDict

from levyhg.errors import DomainError, NonConvergence, PoleError

logger: logging.Logger = logging.getLogger(__name__)


class TypeSeriesPolicy(TypedDict):
    """
    Truncation policy shared by the series evaluations.

    rel_tol: relative tolerance at which a series is considered converged.

    max_terms: maximum number of terms summed before `NonConvergence` is raised.

    asymptotic_switch_radius: real part beyond which the asymptotic expansion of the
        double gamma function replaces the functional-equation recursion.
    """

    rel_tol: float
    max_terms: int
    asymptotic_switch_radius: float


default_policy: TypeSeriesPolicy = {
    "rel_tol": 1e-12,
    "max_terms": 10000,
    "asymptotic_switch_radius": 25.0,
}

# Number of Euler-Maclaurin correction terms and of Stirling terms.
_EM_TERMS: int = 6
_STIRLING_TERMS: int = 10
_BERNOULLI: Any = scipy.special.bernoulli(2 * _STIRLING_TERMS)


def resolve_policy(policy: Union[TypeSeriesPolicy, None] = None) -> TypeSeriesPolicy:
    """
    Returns a complete series policy, filling missing entries with the defaults.

    Raises:

        DomainError: if the tolerance is not positive or fewer than one term is
            allowed.
    """
    resolved: TypeSeriesPolicy = dict(default_policy)  # type: ignore
    if policy is not None:
        resolved.update(policy)  # type: ignore
    if not resolved["rel_tol"] > 0:
        raise DomainError(f"rel_tol must be positive, got {resolved['rel_tol']}")
    if resolved["max_terms"] < 1:
        raise DomainError(f"max_terms must be at least 1, got {resolved['max_terms']}")
    return resolved


def _as_complex_array(z: Any) -> Tuple[Any, bool]:
    # Returns a 1-d complex array and whether the input was a scalar.
    scalar: bool = numpy.ndim(z) == 0
    values: Any = numpy.atleast_1d(numpy.asarray(z, dtype=complex))
    if not numpy.all(numpy.isfinite(values)):
        raise DomainError("non-finite argument")
    return values, scalar


def _nonpositive_integers(values: Any) -> Any:
    return (
        (values.imag == 0)
        & (values.real <= 0)
        & (values.real == numpy.floor(values.real))
    )


def is_nonpositive_integer(x: float) -> bool:
    """
    Returns True if x is 0, -1, -2, ...
    """
    return x <= 0 and x == math.floor(x)


def log_gamma(z: Any) -> Any:
    """
    Computes the principal-branch logarithm of the gamma function.

    Off the real axis this is `scipy.special.loggamma`. On the real axis the result is
    log|Gamma(x)| with imaginary part pi where Gamma(x) is negative, so that
    exp(log_gamma(x)) reproduces the sign of Gamma(x).

    Arguments:

        z: A real or complex scalar, or an array of them.

    Returns:

        A complex scalar or a complex array with the shape of z.

    Raises:

        PoleError: at non-positive integers.

        DomainError: for NaN or infinite arguments.
    """
    values: Any
    scalar: bool
    values, scalar = _as_complex_array(z)
    poles: Any = _nonpositive_integers(values)
    if numpy.any(poles):
        location: complex = complex(values[poles][0])
        raise PoleError(f"gamma function has a pole at z = {location}", location)
    result: Any = scipy.special.loggamma(values)
    on_axis: Any = values.imag == 0
    if numpy.any(on_axis):
        x: Any = values.real[on_axis]
        result[on_axis] = scipy.special.gammaln(x) + 1j * numpy.pi * (
            scipy.special.gammasgn(x) < 0
        )
    if scalar:
        return complex(result[0])
    return result.reshape(numpy.shape(z))


def gamma_ratio(numerators: Sequence[Any], denominators: Sequence[Any]) -> Any:
    """
    Computes prod Gamma(a) / prod Gamma(b) in log space.

    All arguments are broadcast against each other. A pole of a denominator gamma
    function makes the ratio exactly zero.

    Arguments:

        numerators: Arguments of the gamma functions in the numerator.

        denominators: Arguments of the gamma functions in the denominator.

    Returns:

        A float (or float array) when every argument is real, otherwise a complex
        value (or complex array).

    Raises:

        PoleError: if a numerator argument is a pole of the gamma function.
    """
    real_input: bool = all(numpy.isrealobj(a) for a in (*numerators, *denominators))
    nums: List[Any] = [numpy.asarray(a, dtype=complex) for a in numerators]
    dens: List[Any] = [numpy.asarray(b, dtype=complex) for b in denominators]
    shape: Tuple[int, ...] = numpy.broadcast_shapes(
        (), *(a.shape for a in nums), *(b.shape for b in dens)
    )
    log_total: Any = numpy.zeros(shape, dtype=complex)
    a: Any
    for a in nums:
        log_total = log_total + log_gamma(numpy.broadcast_to(a, shape))
    vanishing: Any = numpy.zeros(shape, dtype=bool)
    b: Any
    for b in dens:
        b = numpy.atleast_1d(numpy.broadcast_to(b, shape))
        pole: Any = _nonpositive_integers(b)
        vanishing = vanishing | pole.reshape(shape)
        log_total = log_total - log_gamma(numpy.where(pole, 1.0, b).reshape(shape))
    value: Any = numpy.where(vanishing, 0.0, numpy.exp(log_total))
    if real_input:
        value = value.real
    if shape == ():
        return value[()].item()
    return value


def _series_2f1(a: float, b: float, c: float, z: float, policy: TypeSeriesPolicy) -> float:
    # Direct power series, only used for z <= 0.75.
    term: float = 1.0
    total: float = 1.0
    tail_factor: float = 1.0 / (1.0 - z) if z < 1.0 else math.inf
    k: int
    for k in range(policy["max_terms"]):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if term == 0.0 or abs(term) * tail_factor <= policy["rel_tol"] * abs(total):
            return total
    raise NonConvergence(
        f"2F1({a}, {b}; {c}; {z}) did not converge in {policy['max_terms']} terms"
    )


def _gauss_2f1(
    a: float, b: float, c: float, z: float, w: float, policy: TypeSeriesPolicy
) -> float:
    # z and w = 1 - z are both passed so that callers can keep w accurate.
    if w == 0.0:
        if c - a - b <= 0:
            raise DomainError(f"2F1({a}, {b}; {c}; 1) diverges unless c > a + b")
        return float(gamma_ratio([c, c - a - b], [c - a, c - b]))
    if z <= 0.75:
        return _series_2f1(a, b, c, z, policy)
    d: float = c - a - b
    if abs(d - round(d)) < 1e-12:
        logger.warning(
            "Connection formula is degenerate for c - a - b = %s, using scipy hyp2f1", d
        )
        return float(scipy.special.hyp2f1(a, b, c, z))
    first: float = gamma_ratio([c, d], [c - a, c - b]) * _series_2f1(
        a, b, 1.0 - d, w, policy
    )
    second: float = (
        gamma_ratio([c, -d], [a, b])
        * w**d
        * _series_2f1(c - a, c - b, 1.0 + d, w, policy)
    )
    return first + second


def _check_real(**kwargs: float) -> None:
    name: str
    value: float
    for name, value in kwargs.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value}")


def gauss_2f1(
    a: float, b: float, c: float, z: float, policy: Union[TypeSeriesPolicy, None] = None
) -> float:
    """
    Computes the Gauss hypergeometric function 2F1(a, b; c; z) for real z in [0, 1].

    For z <= 0.75 the power series is summed directly. Above 0.75 the connection
    formula to 1 - z is used. At z = 1 the value follows from Gauss summation, which
    needs c > a + b.

    Raises:

        PoleError: if c is a non-positive integer.

        DomainError: if z lies outside [0, 1], or if z = 1 and c <= a + b.

        NonConvergence: if a series does not reach the requested tolerance.
    """
    _check_real(a=a, b=b, c=c, z=z)
    if is_nonpositive_integer(c):
        raise PoleError(f"2F1 is undefined for c = {c}", c)
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"2F1 is only evaluated for z in [0, 1], got {z}")
    return _gauss_2f1(a, b, c, z, 1.0 - z, resolve_policy(policy))


def _regularized_2f1(
    a: float, b: float, c: float, z: float, w: float, policy: TypeSeriesPolicy
) -> float:
    if is_nonpositive_integer(c):
        m: int = int(-c)
        prefactor: float = (
            scipy.special.poch(a, m + 1)
            * scipy.special.poch(b, m + 1)
            / math.factorial(m + 1)
            * z ** (m + 1)
        )
        return prefactor * _gauss_2f1(a + m + 1, b + m + 1, m + 2, z, w, policy)
    return _gauss_2f1(a, b, c, z, w, policy) * scipy.special.rgamma(c)


def gauss_2f1_regularized(
    a: float, b: float, c: float, z: float, policy: Union[TypeSeriesPolicy, None] = None
) -> float:
    """
    Computes 2F1(a, b; c; z) / Gamma(c), which stays finite when c is a non-positive
    integer.
    """
    _check_real(a=a, b=b, c=c, z=z)
    if not 0.0 <= z <= 1.0:
        raise DomainError(f"2F1 is only evaluated for z in [0, 1], got {z}")
    return _regularized_2f1(a, b, c, z, 1.0 - z, resolve_policy(policy))


def gauss_2f1_regularized_complement(
    a: float, b: float, c: float, w: float, policy: Union[TypeSeriesPolicy, None] = None
) -> float:
    """
    Same as `gauss_2f1_regularized` at z = 1 - w, with w given directly.
    """
    _check_real(a=a, b=b, c=c, w=w)
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"complement argument must lie in [0, 1], got {w}")
    return _regularized_2f1(a, b, c, 1.0 - w, w, resolve_policy(policy))


def incomplete_beta(
    a: float, b: float, w: float, policy: Union[TypeSeriesPolicy, None] = None
) -> float:
    """
    Computes the incomplete beta integral of t^(a-1) (1-t)^(b-1) over [0, w].

    The integral equals w^a / a * 2F1(a, 1 - b; a + 1; w).
    """
    _check_real(a=a, b=b, w=w)
    if not a > 0:
        raise DomainError(f"incomplete beta integral needs a > 0, got {a}")
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"incomplete beta integral needs w in [0, 1], got {w}")
    if w == 0.0:
        return 0.0
    return w**a / a * _gauss_2f1(a, 1.0 - b, a + 1.0, w, 1.0 - w, resolve_policy(policy))


def _log_gamma_integral(u: Any) -> Any:
    # Asymptotic antiderivative of log Gamma.
    log_u: Any = numpy.log(u)
    total: Any = (
        (u * u / 2.0 - u / 2.0) * log_u
        - 0.75 * u * u
        + u / 2.0
        + u * math.log(2.0 * math.pi) / 2.0
        + _BERNOULLI[2] / 2.0 * log_u
    )
    k: int
    for k in range(2, _STIRLING_TERMS + 1):
        coefficient: float = _BERNOULLI[2 * k] / (2 * k * (2 * k - 1))
        total = total + coefficient * u ** (2 - 2 * k) / (2 - 2 * k)
    return total


def _polygamma_asymptotic(m: int, u: Any) -> Any:
    # Stirling expansion of the m-th derivative of the digamma function.
    total: Any
    k: int
    if m == 0:
        total = numpy.log(u) - 0.5 / u
        for k in range(1, _STIRLING_TERMS + 1):
            total = total - _BERNOULLI[2 * k] / (2 * k) * u ** (-2 * k)
        return total
    sign: float = (-1.0) ** m
    total = -sign * math.factorial(m - 1) * u ** (-m) - 0.5 * sign * math.factorial(
        m
    ) * u ** (-m - 1)
    for k in range(1, _STIRLING_TERMS + 1):
        rising: float = math.factorial(2 * k + m - 1) / math.factorial(2 * k - 1)
        total = total - _BERNOULLI[2 * k] / (2 * k) * sign * rising * u ** (-2 * k - m)
    return total


def _double_gamma_asymptotic(w: Any, tau: float) -> Any:
    # Euler-Maclaurin solution of H(w + 1) - H(w) = log Gamma(w / tau).
    u: Any = w / tau
    total: Any = tau * _log_gamma_integral(u) - 0.5 * log_gamma(u)
    j: int
    for j in range(1, _EM_TERMS + 1):
        weight: float = _BERNOULLI[2 * j] / math.factorial(2 * j)
        total = total + weight * tau ** (-(2 * j - 1)) * _polygamma_asymptotic(
            2 * j - 2, u
        )
    return total


def _log_double_gamma_unnormalized(values: Any, tau: float, radius: float) -> Any:
    n_shift: int = max(0, int(math.ceil(radius - float(numpy.min(values.real)))))
    total: Any = _double_gamma_asymptotic(values + n_shift, tau)
    k: int
    for k in range(n_shift):
        try:
            total = total - log_gamma((values + k) / tau)
        except PoleError:
            location: complex = complex(
                values[_nonpositive_integers((values + k) / tau)][0]
            )
            raise PoleError(
                f"double gamma function vanishes at lattice point z = {location}",
                location,
            )
    return total


@functools.lru_cache(maxsize=128)
def _log_double_gamma_at_one(tau: float, radius: float) -> complex:
    return complex(
        _log_double_gamma_unnormalized(numpy.array([1.0 + 0j]), tau, radius)[0]
    )


def log_double_gamma(
    z: Any, tau: float, policy: Union[TypeSeriesPolicy, None] = None
) -> Any:
    """
    Computes log G(z; tau), the logarithm of the double gamma function.

    The normalisation is G(1; tau) = 1 and the function satisfies

        G(z + 1; tau) = Gamma(z / tau) G(z; tau)
        G(z + tau; tau) = (2 pi)^((tau - 1) / 2) tau^(1/2 - z) Gamma(z) G(z; tau).

    The argument is shifted to the right by an integer N until its real part exceeds
    the asymptotic switch radius, an Euler-Maclaurin expansion is evaluated there and
    the first functional equation brings the value back to z. The imaginary part is
    only defined modulo 2 pi; use exp of differences.

    Arguments:

        z: A real or complex scalar, or an array of them.

        tau: The positive second parameter of G.

    Raises:

        PoleError: at the lattice points z = -(m + n tau), m, n >= 0, where G vanishes.

        DomainError: if tau is not positive and finite.
    """
    if not (math.isfinite(tau) and tau > 0):
        raise DomainError(f"tau must be positive and finite, got {tau}")
    resolved: TypeSeriesPolicy = resolve_policy(policy)
    values: Any
    scalar: bool
    values, scalar = _as_complex_array(z)
    radius: float = resolved["asymptotic_switch_radius"] * max(1.0, tau) + 10.0
    result: Any = _log_double_gamma_unnormalized(
        values, tau, radius
    ) - _log_double_gamma_at_one(float(tau), radius)
    if scalar:
        return complex(result[0])
    return result.reshape(numpy.shape(z))
