"""
Mellin transforms of exponential functionals and their numerical inversion.

For a process xi and delta > 0, I = integral_0^inf exp(-xi_t / delta) dt. Its Mellin
transform M(s) = E[I^(s-1)] is known in closed form for the hypergeometric class and,
through an auxiliary hypergeometric process, for the extended class.
"""

import logging
import math

from typing import Any, Callable, Tuple, Union

import numpy
import scipy.integrate

try:
    from typing import Literal
except:
    from typing_extensions import Literal

from levyhg.errors import (
    ContourOutOfStrip,
    DomainError,
    InadmissibleParameters,
    OutOfStrip,
    TruncationTooLow,
)
from levyhg.exponents import LaplaceExponent, psi_eval
from levyhg.params import HGParams
from levyhg.specfun import log_double_gamma, log_gamma
from levyhg.stable import radial_mellin

logger: logging.Logger = logging.getLogger(__name__)

MellinKind = Literal["hg", "ehg", "radial"]

# Inversion contour: start height, cap and relative decay of |M| required at the cut.
_START_HEIGHT: float = 10.0
_MAX_HEIGHT: float = 2000.0
_DECAY_TOLERANCE: float = 1e-12


class MellinSpec:
    """
    See documentation of the `__init__` function.
    """

    def __init__(
        self,
        params: HGParams,
        delta: float,
        kind: MellinKind,
        strip: Tuple[float, float],
        theta: float,
        evaluator: Callable[[Any], Any],
        norm_constant: float = 1.0,
    ) -> None:
        """
        The Mellin transform of I(xi / delta) together with its strip of analyticity.

        Arguments:

            params: The quadruple of xi. delta is not folded into the parameters since
                xi / delta is in general outside the family.

            delta: The positive scaling.

            kind: Which closed form the evaluator implements.

            strip: The open interval of Re s on which M is analytic and zero-free.

            theta: The Cramer number of xi / delta, i.e. psi_delta(-theta) = 0, or the
                upper moment bound for the hypergeometric class.

            evaluator: Computes the normalized M on scalars or arrays inside the strip.

            norm_constant: The constant c in M(s) = c * (unnormalized product).
        """
        self._params: HGParams = params
        self._delta: float = float(delta)
        self._kind: MellinKind = kind
        self._strip: Tuple[float, float] = (float(strip[0]), float(strip[1]))
        self._theta: float = float(theta)
        self._evaluator: Callable[[Any], Any] = evaluator
        self._norm_constant: float = float(norm_constant)
        self._exponent: LaplaceExponent = LaplaceExponent(params)

    @property
    def params(self) -> HGParams:
        return self._params

    @property
    def delta(self) -> float:
        return self._delta

    @property
    def kind(self) -> MellinKind:
        return self._kind

    @property
    def strip(self) -> Tuple[float, float]:
        return self._strip

    @property
    def theta(self) -> float:
        return self._theta

    @property
    def norm_constant(self) -> float:
        return self._norm_constant

    def contains(self, s: Any) -> bool:
        """ """
        re: Any = numpy.real(s)
        return bool(numpy.all((re > self._strip[0]) & (re < self._strip[1])))

    def __call__(self, s: Any) -> Any:
        if not self.contains(s):
            raise OutOfStrip(
                f"Re s must lie in ({self._strip[0]}, {self._strip[1]}), got {s}"
            )
        return self._evaluator(s)

    def psi_delta(self, z: Any) -> Any:
        """
        Laplace exponent of xi / delta, psi(z / delta).
        """
        return psi_eval(self._exponent, z / self._delta)

    def __repr__(self) -> str:
        return (
            f"MellinSpec(kind={self._kind!r}, params={self._params!r}, "
            f"delta={self._delta!r}, strip={self._strip!r})"
        )


def _log_hg_unnormalized(
    b: float, g: float, bh: float, gh: float, delta: float, s: Any
) -> Any:
    return (
        log_gamma(s)
        + log_double_gamma((1 - b) * delta + s, delta)
        - log_double_gamma((1 - b + g) * delta + s, delta)
        + log_double_gamma((bh + gh) * delta + 1 - s, delta)
        - log_double_gamma(bh * delta + 1 - s, delta)
    )


def _normalized(log_unnormalized: Callable[[Any], Any]) -> Tuple[Callable[[Any], Any], float]:
    log_at_one: complex = complex(log_unnormalized(1.0 + 0j))
    log_constant: float = -log_at_one.real

    def evaluator(s: Any) -> Any:
        value: Any = numpy.exp(log_unnormalized(s) - log_at_one)
        if numpy.ndim(value) == 0:
            return complex(value)
        return value

    return evaluator, math.exp(log_constant)


def _check_delta(delta: float) -> None:
    if not (math.isfinite(delta) and delta > 0):
        raise DomainError(f"delta must be positive and finite, got {delta}")


def hg_spec(p: HGParams, delta: float) -> MellinSpec:
    """
    Builds the Mellin transform of I(xi / delta) for xi in the hypergeometric class.

        M(s) = C Gamma(s) G((1 - beta) delta + s) / G((1 - beta + gamma) delta + s)
               * G((betah + gammah) delta + 1 - s) / G(betah delta + 1 - s)

    with G = G(.; delta) and C fixed by M(1) = 1. The strip is (0, 1 + betah delta).

    Raises:

        InadmissibleParameters: if p is not in the HG class or betah = 0, in which
            case I is not finite.
    """
    _check_delta(delta)
    if "HG" not in p.classes:
        raise InadmissibleParameters(f"{p!r} is not in the hypergeometric class")
    if not p.betah > 0:
        raise InadmissibleParameters(
            f"{p!r} has betah = 0, the exponential functional is infinite",
            ["betah > 0"],
        )
    b: float
    g: float
    bh: float
    gh: float
    b, g, bh, gh = p.as_tuple()
    evaluator: Callable[[Any], Any]
    constant: float
    evaluator, constant = _normalized(
        lambda s: _log_hg_unnormalized(b, g, bh, gh, delta, s)
    )
    return MellinSpec(
        p, delta, "hg", (0.0, 1.0 + bh * delta), bh * delta, evaluator, constant
    )


def ehg_spec(p: HGParams, delta: float) -> MellinSpec:
    """
    Builds the Mellin transform of I(xi / delta) for xi in the extended class with
    beta > 1.

        M(s) = c Mt(s) Gamma(delta (1 - beta + gamma) + s) / Gamma(-delta betah + s)
               * Gamma(delta (beta - 1) + 1 - s) / Gamma(delta (betah + gammah) + 1 - s)

    where Mt is the transform of the auxiliary hypergeometric process with parameters
    (beta - 1, gamma, betah + 1, gammah). The strip is (0, 1 + theta) with Cramer
    number theta = delta (beta - 1).

    Raises:

        InadmissibleParameters: if p is not in the EHG class or beta <= 1.
    """
    _check_delta(delta)
    if "EHG" not in p.classes:
        raise InadmissibleParameters(f"{p!r} is not in the extended hypergeometric class")
    if not p.beta > 1:
        raise InadmissibleParameters(
            f"{p!r} has beta <= 1, the exponential functional is infinite",
            ["beta > 1"],
        )
    b: float
    g: float
    bh: float
    gh: float
    b, g, bh, gh = p.as_tuple()
    auxiliary: HGParams = auxiliary_params(p)
    ab: float
    ag: float
    abh: float
    agh: float
    ab, ag, abh, agh = auxiliary.as_tuple()

    def log_unnormalized(s: Any) -> Any:
        return (
            _log_hg_unnormalized(ab, ag, abh, agh, delta, s)
            + log_gamma(delta * (1 - b + g) + s)
            - log_gamma(-delta * bh + s)
            + log_gamma(delta * (b - 1) + 1 - s)
            - log_gamma(delta * (bh + gh) + 1 - s)
        )

    evaluator: Callable[[Any], Any]
    constant: float
    evaluator, constant = _normalized(log_unnormalized)
    theta: float = delta * (b - 1)
    return MellinSpec(p, delta, "ehg", (0.0, 1.0 + theta), theta, evaluator, constant)


def auxiliary_params(p: HGParams) -> HGParams:
    """
    Returns the hypergeometric quadruple (beta - 1, gamma, betah + 1, gammah) used by
    the extended Mellin transform.
    """
    auxiliary: HGParams = HGParams(p.beta - 1.0, p.gamma, p.betah + 1.0, p.gammah)
    if "HG" not in auxiliary.classes or not auxiliary.betah > 0:
        raise InadmissibleParameters(
            f"auxiliary quadruple {auxiliary!r} of {p!r} is not usable"
        )
    return auxiliary


def radial_spec(alpha: float) -> MellinSpec:
    """
    Builds the Mellin transform of the exponential functional of the dual radial
    process of a symmetric stable process, with its widened strip (-1/alpha, 2 -
    1/alpha).
    """
    if not 1 < alpha < 2:
        raise DomainError(f"alpha must lie in (1, 2), got {alpha}")
    p: HGParams = HGParams((alpha + 1) / 2, alpha / 2, 0.0, alpha / 2)
    return MellinSpec(
        p,
        2.0 / alpha,
        "radial",
        (-1.0 / alpha, 2.0 - 1.0 / alpha),
        1.0 - 1.0 / alpha,
        lambda s: radial_mellin(alpha, s),
    )


def mellin_hg(p: HGParams, delta: float, s: Any) -> Any:
    """
    Evaluates the normalized Mellin transform of I(xi / delta), xi hypergeometric.

    Raises:

        OutOfStrip: if Re s is outside (0, 1 + betah delta).
    """
    return hg_spec(p, delta)(s)


def mellin_ehg(p: HGParams, delta: float, s: Any) -> Any:
    """
    Evaluates the normalized Mellin transform of I(xi / delta), xi extended
    hypergeometric with beta > 1.

    Raises:

        OutOfStrip: if Re s is outside (0, 1 + delta (beta - 1)).
    """
    return ehg_spec(p, delta)(s)


def functional_equation_residual(spec: MellinSpec, s: float) -> float:
    """
    Returns |M(s + 1) + s M(s) / psi_delta(-s)| / |M(s + 1)|.

    Raises:

        OutOfStrip: unless both s and s + 1 lie in the strip.
    """
    upper: complex = spec(s + 1.0)
    value: complex = spec(s)
    return abs(upper + s * value / spec.psi_delta(-s)) / abs(upper)


def _truncation_height(
    spec: MellinSpec, c: float, tolerance: float, max_height: float
) -> float:
    reference: float = abs(spec(c))
    height: float = _START_HEIGHT
    while height <= max_height:
        if abs(spec(complex(c, height))) < tolerance * reference:
            return height
        height *= 2.0
    raise TruncationTooLow(
        f"|M(c + it)| is still above {tolerance} |M(c)| at t = {max_height}"
    )


def _line_integral(
    integrand: Callable[[Any], Any], c: float, height: float, log_scale: float
) -> Any:
    # (1 / pi) integral_0^height Re F(c + it) dt, by the trapezoidal rule. F maps an
    # array of w with shape (n, 1) to an array (n, m).
    step: float = math.pi / (log_scale + 20.0)
    t: Any = numpy.linspace(0.0, height, int(math.ceil(height / step)) + 1)
    values: Any = integrand(c + 1j * t[:, numpy.newaxis])
    return scipy.integrate.trapezoid(numpy.real(values), t, axis=0) / math.pi


class InvertedDensity:
    """
    See documentation of the `__init__` function.
    """

    def __init__(
        self,
        spec: MellinSpec,
        grid: Any,
        values: Any,
        contour_re: float,
        truncation_height: float,
        min_before_clipping: float,
    ) -> None:
        """
        The density of I recovered from M on a grid of u > 0.
        """
        self._spec: MellinSpec = spec
        self._grid: Any = numpy.asarray(grid, dtype=float)
        self._values: Any = numpy.asarray(values, dtype=float)
        self._contour_re: float = contour_re
        self._truncation_height: float = truncation_height
        self._min_before_clipping: float = min_before_clipping

    @property
    def grid(self) -> Any:
        return self._grid

    @property
    def values(self) -> Any:
        return self._values

    @property
    def contour_re(self) -> float:
        return self._contour_re

    @property
    def truncation_height(self) -> float:
        return self._truncation_height

    @property
    def min_before_clipping(self) -> float:
        return self._min_before_clipping

    def moment(self, s: float, with_tails: bool = True) -> float:
        """
        Returns integral_0^inf u^(s-1) p(u) du.

        The grid part uses Simpson's rule in log u. The parts below and above the grid
        are line integrals of M(w) u^(s-w) / (w - s) on contours left and right of s.
        With with_tails=False only the grid part is returned.
        """
        low: float
        high: float
        low, high = self._spec.strip
        if not low < s < high:
            raise OutOfStrip(f"s must lie in ({low}, {high}), got {s}")
        log_grid: Any = numpy.log(self._grid)
        body: float = float(
            scipy.integrate.simpson(self._grid**s * self._values, x=log_grid)
        )
        if not with_tails:
            return body
        spec: MellinSpec = self._spec
        edge: float
        sign: float
        contour: float
        tails: float = 0.0
        for edge, sign, contour in (
            (float(self._grid[0]), -1.0, (low + s) / 2.0),
            (float(self._grid[-1]), 1.0, (s + high) / 2.0),
        ):
            height: float = _truncation_height(
                spec, contour, _DECAY_TOLERANCE, _MAX_HEIGHT
            )
            tails += sign * float(
                _line_integral(
                    lambda w: spec(w) * edge ** (s - w) / (w - s),
                    contour,
                    height,
                    abs(math.log(edge)),
                )[0]
            )
        return body + tails

    def mass(self) -> float:
        """ """
        return self.moment(1.0)


def invert_density(
    spec: MellinSpec,
    u_grid: Any,
    contour_re: Union[float, None] = None,
    clip_tolerance: float = 1e-6,
    max_height: float = _MAX_HEIGHT,
) -> InvertedDensity:
    """
    Recovers the density of I from its Mellin transform.

        p(u) = (1 / 2 pi) integral M(c + it) u^(-c-it) dt

    The integral is truncated at the first height T = 10, 20, 40, ... at which |M(c +
    iT)| drops below 1e-12 |M(c)|. Values in (-clip_tolerance, 0) are set to 0.

    Arguments:

        spec: The Mellin transform.

        u_grid: Increasing points u > 0.

        contour_re: The abscissa c of the contour. Defaults to the middle of the
            strip.

    Raises:

        ContourOutOfStrip: if c is not strictly inside the strip.

        TruncationTooLow: if |M| has not decayed at max_height.
    """
    grid: Any = numpy.asarray(u_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3 or not numpy.all(grid > 0):
        raise DomainError("u_grid must hold at least three positive points")
    if not numpy.all(numpy.diff(grid) > 0):
        raise DomainError("u_grid must be increasing")
    low: float
    high: float
    low, high = spec.strip
    c: float = (low + high) / 2.0 if contour_re is None else float(contour_re)
    if not low < c < high:
        raise ContourOutOfStrip(f"contour Re s = {c} is not inside ({low}, {high})")
    height: float = _truncation_height(spec, c, _DECAY_TOLERANCE, max_height)
    logger.debug("Mellin inversion on Re s = %s truncated at height %s", c, height)
    log_grid: Any = numpy.log(grid)
    values: Any = _line_integral(
        lambda w: spec(w) * numpy.exp(-w * log_grid[numpy.newaxis, :]),
        c,
        height,
        float(numpy.max(numpy.abs(log_grid))),
    )
    minimum: float = float(numpy.min(values))
    if minimum < -clip_tolerance:
        logger.warning(
            "Inverted density reaches %s, below the clipping tolerance", minimum
        )
    values = numpy.where((values < 0) & (values > -clip_tolerance), 0.0, values)
    return InvertedDensity(spec, grid, values, c, height, minimum)
