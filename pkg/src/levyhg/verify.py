"""
Numerical acceptance checks.

Each check exercises one identity or cross-formula agreement and reports whether it
holds within its tolerance. Quick mode shrinks draw and path counts.
"""

import logging
import math
import pathlib
import time

from typing import Any, Callable, Dict, List, TextIO, Tuple, Union

import jinja2
import numpy
import scipy.integrate
import scipy.stats

try:
    from typing import TypedDict
except:
    from typing_extensions import TypedDict

from levyhg import __version__
from levyhg.errors import DomainError, LevyHGError
from levyhg.exponents import LaplaceExponent, factorization_residual
from levyhg.expfun import (
    InvertedDensity,
    MellinSpec,
    ehg_spec,
    hg_spec,
    invert_density,
    radial_spec,
    functional_equation_residual,
)
from levyhg.levy_measure import density_closed_form, density_series, lk_reconstruct
from levyhg.montecarlo import (
    SimConfig,
    TypeEstimateWithCI,
    TypeExitLawEstimate,
    estimate_exit_law,
    estimate_t0_moment,
)
from levyhg.params import HGParams, random_params
from levyhg.specfun import (
    gauss_2f1,
    log_double_gamma,
    log_gamma,
)
from levyhg.stable import (
    StableParams,
    censored_occupation_mellin,
    ckl_closed_form,
    exit_before_zero_density,
    exit_density_mass,
    hit_zero_before_exit_prob,
    radial_constant,
    t0_mellin,
)

logger: logging.Logger = logging.getLogger(__name__)

_TEMPLATE: pathlib.Path = (
    pathlib.Path(__file__).parent / "resources" / "templates" / "verify_report.md"
)
_NAIVE_TERMS: int = 100000


class TypeCheckResult(TypedDict):
    name: str
    passed: bool
    detail: str
    seconds: float


class TypeCheck(TypedDict):
    """
    One entry of the check registry.

    description: one line shown in the report.

    run: takes the quick flag and returns whether the check passed and a detail line.
    """

    description: str
    run: Callable[[bool], Tuple[bool, str]]


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _naive_2f1(a: float, b: float, c: float, z: float) -> Tuple[float, float]:
    # Partial sum of the power series and the sum of its absolute terms.
    k: Any = numpy.arange(_NAIVE_TERMS - 1, dtype=float)
    terms: Any = numpy.concatenate(
        ([1.0], numpy.cumprod((a + k) * (b + k) / ((c + k) * (k + 1)) * z))
    )
    return math.fsum(terms), math.fsum(numpy.abs(terms))


def _random_2f1_parameters(rng: Any) -> Tuple[float, float, float]:
    while True:
        a, b, c = rng.uniform(-2.0, 3.0, size=3)
        if c >= 0.1 or abs(c - round(c)) >= 0.1:
            return float(a), float(b), float(c)


def _check_specfun(quick: bool) -> Tuple[bool, str]:
    rng: Any = numpy.random.default_rng(0)
    details: List[str] = []
    size: int = 100 if quick else 1000
    z: Any = rng.uniform(0.0, 5.0, size) + 1j * rng.choice([-1.0, 1.0], size) * (
        rng.uniform(0.1, 3.0, size)
    )
    reflection: float = float(
        numpy.max(
            numpy.abs(
                numpy.exp(log_gamma(z) + log_gamma(1 - z)) * numpy.sin(math.pi * z)
                / math.pi
                - 1
            )
        )
    )
    details.append(f"reflection {reflection:.1e}")
    grid: Any = numpy.concatenate(
        (numpy.linspace(0.2, 3.0, 15), 0.5 + 1j * numpy.array([10.0, 25.0, 45.0]))
    )
    equations: float = 0.0
    conjugate: float = 0.0
    tau: float
    for tau in (0.5, 1.0, 4.0 / 3.0, 2.0):
        first: Any = numpy.exp(
            log_double_gamma(grid + 1, tau)
            - log_double_gamma(grid, tau)
            - log_gamma(grid / tau)
        )
        second: Any = numpy.exp(
            log_double_gamma(grid + tau, tau)
            - log_double_gamma(grid, tau)
            - log_gamma(grid)
            - (tau - 1) / 2 * math.log(2 * math.pi)
            - (0.5 - grid) * math.log(tau)
        )
        equations = max(
            equations,
            float(numpy.max(numpy.abs(first - 1))),
            float(numpy.max(numpy.abs(second - 1))),
        )
        off_axis: Any = grid[:5] + 0.7j
        conjugate = max(
            conjugate,
            float(
                numpy.max(
                    numpy.abs(
                        numpy.exp(
                            log_double_gamma(numpy.conj(off_axis), tau)
                            - numpy.conj(log_double_gamma(off_axis, tau))
                        )
                        - 1
                    )
                )
            ),
        )
    details.append(f"double gamma {equations:.1e}")
    details.append(f"conjugate symmetry {conjugate:.1e}")
    hypergeometric: float = 0.0
    for _ in range(20 if quick else 200):
        a, b, c = _random_2f1_parameters(rng)
        x: float
        for x in numpy.linspace(0.0, 0.5, 6):
            naive, scale = _naive_2f1(a, b, c, float(x))
            hypergeometric = max(
                hypergeometric, abs(gauss_2f1(a, b, c, float(x)) - naive) / scale
            )
    details.append(f"2F1 {hypergeometric:.1e}")
    worst: float = max(reflection, equations, conjugate, hypergeometric)
    return worst <= 1e-10, ", ".join(details)


def _check_whf_identity(quick: bool) -> Tuple[bool, str]:
    rng: Any = numpy.random.default_rng(20231)
    thetas: Any = numpy.linspace(-50.0, 50.0, 200)
    draws: int = 10 if quick else 250
    worst: float = 0.0
    tag: str
    for tag in ("HG", "EHG", "EHG_BETA_ONLY", "EHL"):
        _: int
        for _ in range(draws):
            p: HGParams = random_params(tag, rng)  # type: ignore
            residual: Any = factorization_residual(LaplaceExponent(p, tag), thetas)  # type: ignore
            worst = max(worst, float(numpy.max(residual)))
    return worst <= 1e-10, f"max residual {worst:.3e} over {4 * draws} draws"


def _density_agreement(p: HGParams) -> float:
    worst: float = 0.0
    x: float
    for x in (-5.0, -0.5, -0.05, 0.05, 0.5, 5.0):
        worst = max(
            worst,
            _relative(density_series(p, x)["value"], density_closed_form(p, x)["value"]),
        )
    return worst


def _check_density_dual_route(quick: bool) -> Tuple[bool, str]:
    rng: Any = numpy.random.default_rng(20232)
    cases: List[HGParams] = [
        HGParams(1.5, 0.75, -0.25, 0.75),
        HGParams(1.0, 0.75, -0.25, 0.75),
        HGParams(1.2, 0.5, -0.2, 0.6),
    ]
    cases.extend(random_params("EHG", rng) for _ in range(10 if quick else 100))
    worst: float = max(_density_agreement(p) for p in cases)
    return worst <= 1e-8, f"max relative difference {worst:.3e} over {len(cases)} draws"


def _bounded_variation_draws(count: int) -> List[HGParams]:
    rng: Any = numpy.random.default_rng(20233)
    draws: List[HGParams] = [HGParams(1.2, 0.4, -0.2, 0.4)]
    while len(draws) < count:
        p: HGParams = random_params("EHG", rng)
        if p.gamma + p.gammah < 0.9:
            draws.append(p)
    return draws


def _check_lk_reconstruct(quick: bool) -> Tuple[bool, str]:
    worst: float = 0.0
    p: HGParams
    for p in _bounded_variation_draws(2 if quick else 10):
        le: LaplaceExponent = LaplaceExponent(p)
        theta: float
        for theta in (0.5, 1.0, 5.0, 10.0):
            worst = max(worst, abs(lk_reconstruct(p, theta) - le(1j * theta)))
    return worst <= 1e-6, f"max absolute difference {worst:.3e}"


def _check_mellin_functional_equation(quick: bool) -> Tuple[bool, str]:
    specs: List[MellinSpec] = [
        hg_spec(HGParams(0.5, 0.5, 0.5, 0.5), 1.0),
        ehg_spec(HGParams(1.25, 0.75, 0.0, 0.75), 4.0 / 3.0),
        radial_spec(1.5),
    ]
    worst: float = 0.0
    normalization: float = 0.0
    spec: MellinSpec
    for spec in specs:
        normalization = max(normalization, abs(spec(1.0) - 1))
        s: float
        for s in numpy.linspace(0.02, 0.98, 5 if quick else 50) * spec.theta:
            worst = max(worst, functional_equation_residual(spec, float(s)))
    passed: bool = worst <= 1e-9 and normalization <= 1e-12
    return passed, f"max residual {worst:.3e}, |M(1) - 1| <= {normalization:.1e}"


def _check_ckl_cross(quick: bool) -> Tuple[bool, str]:
    sp: StableParams = StableParams(4.0 / 3.0, 0.5)
    worst: float = 0.0
    s: float
    for s in numpy.linspace(-0.2, 1.2, 5 if quick else 20):
        worst = max(
            worst,
            _relative(
                ckl_closed_form(sp, 1, 2, complex(s)),
                censored_occupation_mellin(sp, complex(s)),
            ),
        )
    return worst <= 1e-8, f"max relative difference {worst:.3e}"


def _check_radial_constant(quick: bool) -> Tuple[bool, str]:
    expected: float = math.sqrt(math.pi) / (math.gamma(2 / 3) * math.gamma(1 / 3))
    error: float = abs(radial_constant(1.5) - expected)
    exact: bool = t0_mellin(1.5, 1.0) == 1.0
    return error <= 1e-12 and exact, f"|C' - expected| = {error:.1e}"


def _within(estimate: TypeEstimateWithCI, target: float, quick: bool) -> bool:
    slack: float = 0.1 if quick else 0.02
    return abs(estimate["mean"] - target) <= 3 * estimate["std_error"] + slack * abs(
        target
    )


def _check_mc_t0(quick: bool) -> Tuple[bool, str]:
    sp: StableParams = StableParams(1.5, 0.5)
    cfg: SimConfig = SimConfig(sp, n_paths=2000 if quick else 100000)
    passed: bool = True
    details: List[str] = []
    s: float
    for s in (0.5,) if quick else (0.5, 1.2):
        estimate: TypeEstimateWithCI = estimate_t0_moment(1.5, s, cfg)
        target: float = float(numpy.real(t0_mellin(1.5, s)))
        passed = passed and _within(estimate, target, quick)
        details.append(
            f"s={s}: {estimate['mean']:.5f} +/- {estimate['std_error']:.5f} "
            f"vs {target:.5f}"
        )
    return passed, "; ".join(details)


def exit_histogram_pvalue(
    x: float, alpha: float, histogram: List[int], edges: List[float]
) -> float:
    """
    Returns the chi-square p-value of exit counts against the exit density, both
    restricted to the binned range.
    """
    expected: Any = numpy.array(
        [
            scipy.integrate.quad(
                lambda y: exit_before_zero_density(x, y, alpha), low, high
            )[0]
            for low, high in zip(edges[:-1], edges[1:])
        ]
    )
    observed: Any = numpy.asarray(histogram, dtype=float)
    expected = expected / expected.sum() * observed.sum()
    return float(scipy.stats.chisquare(observed, expected).pvalue)


def _check_exit_laws(quick: bool) -> Tuple[bool, str]:
    x: float = 0.5
    alpha: float = 1.5
    probability: float = hit_zero_before_exit_prob(x, alpha)
    mass_error: float = abs(exit_density_mass(x, alpha) - (1 - probability))
    cfg: SimConfig = SimConfig(StableParams(alpha, 0.5), n_paths=2000 if quick else 100000)
    estimate: TypeExitLawEstimate = estimate_exit_law(x, cfg)
    pvalue: float = exit_histogram_pvalue(
        x, alpha, estimate["histogram"], estimate["bin_edges"]
    )
    passed: bool = (
        mass_error <= 1e-6
        and _within(estimate["prob_hit_zero"], probability, quick)
        and pvalue > (1e-4 if quick else 0.01)
    )
    return passed, (
        f"mass error {mass_error:.1e}, P = {probability:.5f}, "
        f"MC {estimate['prob_hit_zero']['mean']:.5f}, chi-square p = {pvalue:.3f}"
    )


def _check_mellin_inversion(quick: bool) -> Tuple[bool, str]:
    spec: MellinSpec = radial_spec(1.5)
    inverted: InvertedDensity = invert_density(
        spec, numpy.logspace(-3.0, 3.0, 301 if quick else 601)
    )
    mass_error: float = abs(inverted.mass() - 1)
    moment_error: float = max(
        abs(inverted.moment(s) - float(numpy.real(spec(s)))) for s in (0.8, 1.0, 1.2)
    )
    passed: bool = (
        inverted.min_before_clipping >= -1e-6
        and mass_error <= 1e-4
        and moment_error <= 1e-4
    )
    return passed, f"mass error {mass_error:.1e}, moment error {moment_error:.1e}"


checks: Dict[str, TypeCheck] = {
    "specfun": {
        "description": "double gamma functional equations, reflection, 2F1 series",
        "run": _check_specfun,
    },
    "whf_identity": {
        "description": "Wiener-Hopf factorization on random draws",
        "run": _check_whf_identity,
    },
    "density_dual_route": {
        "description": "Levy density: closed form against residue series",
        "run": _check_density_dual_route,
    },
    "lk_reconstruct": {
        "description": "Levy-Khintchine reconstruction of psi",
        "run": _check_lk_reconstruct,
    },
    "mellin_functional_equation": {
        "description": "Mellin transform functional equation and normalization",
        "run": _check_mellin_functional_equation,
    },
    "ckl_cross": {
        "description": "occupation Mellin transform against the C(1,2) closed form",
        "run": _check_ckl_cross,
    },
    "radial_constant": {
        "description": "radial normalizing constant and E[T0^0] = 1",
        "run": _check_radial_constant,
    },
    "mc_t0": {
        "description": "Monte Carlo moments of T0 against the Mellin transform",
        "run": _check_mc_t0,
    },
    "exit_laws": {
        "description": "exit laws: mass identity, Monte Carlo and chi-square",
        "run": _check_exit_laws,
    },
    "mellin_inversion": {
        "description": "Mellin inversion round trip of the radial transform",
        "run": _check_mellin_inversion,
    },
}


def run_checks(
    names: Union[List[str], None] = None, quick: bool = False
) -> List[TypeCheckResult]:
    """
    Runs the selected checks, in registry order. All checks run when names is None.

    A check that raises a levyhg error is reported as failed with the error message.
    """
    selected: List[str] = list(checks.keys()) if not names else list(names)
    unknown: List[str] = [name for name in selected if name not in checks]
    if unknown:
        raise DomainError(f"unknown checks: {', '.join(unknown)}")
    results: List[TypeCheckResult] = []
    name: str
    for name in checks.keys():
        if name not in selected:
            continue
        start: float = time.perf_counter()
        passed: bool
        detail: str
        try:
            passed, detail = checks[name]["run"](quick)
        except LevyHGError as err:
            passed, detail = False, f"{type(err).__name__}: {err}"
        seconds: float = time.perf_counter() - start
        logger.debug("Check %s finished in %.2f s", name, seconds)
        results.append(
            {"name": name, "passed": passed, "detail": detail, "seconds": seconds}
        )
    return results


def render_report(results: List[TypeCheckResult], quick: bool = False) -> str:
    """
    Renders the verification report as markdown.
    """
    fh: TextIO
    with open(_TEMPLATE) as fh:
        template: jinja2.Template = jinja2.Template(fh.read())
    return template.render(
        {
            "version": __version__,
            "quick": quick,
            "results": results,
            "descriptions": {name: entry["description"] for name, entry in checks.items()},
            "all_passed": all(result["passed"] for result in results),
        }
    )
