"""
Command-line interface.

Tables go to standard output, or to the file given with --output. In the latter case
the JSON summary of the run is printed instead.
"""

import csv
import io
import json
import logging
import os
import pathlib
import stat

from typing import Any, Callable, Dict, List, Sequence, TextIO, Union

import click  # type: ignore
import jinja2
import numpy

try:
    from typing import TypedDict
except:
    from typing_extensions import TypedDict

from levyhg import __version__
from levyhg.errors import CheckFailed, DomainError, LevyHGError
from levyhg.exponents import (
    BernsteinExpr,
    LaplaceExponent,
    factorization_residual,
    psi_eval,
    wh_factors,
)
from levyhg.expfun import (
    InvertedDensity,
    MellinSpec,
    ehg_spec,
    hg_spec,
    invert_density,
    radial_spec,
)
from levyhg.levy_measure import density_table
from levyhg.montecarlo import (
    SimConfig,
    TypeEstimateWithCI,
    TypeExitLawEstimate,
    estimate_exit_law,
    estimate_occupation_moment,
    estimate_t0_moment,
    simulate_absorption,
    write_per_path,
)
from levyhg.params import HGParams
from levyhg.stable import (
    StableParams,
    avoid_zero_exponent,
    censored_exponent,
    censored_occupation_mellin,
    ckl_closed_form,
    ckl_rho,
    hit_zero_before_exit_prob,
    hitting_law,
    radial_exponent,
    stable_char_exponent,
    t0_mellin,
)
from levyhg.verify import TypeCheckResult, checks, render_report, run_checks

logger: logging.Logger = logging.getLogger(__name__)

_SLURM_TEMPLATE: pathlib.Path = (
    pathlib.Path(__file__).parent / "resources" / "templates" / "slurm_template.sh"
)
# Largest residual accepted by `whf`.
_WHF_TOLERANCE: float = 1e-10


class TypeCommandResult(TypedDict):
    """
    Outcome of a run of the command-line interface.

    exit_code: 0 on success, 1 on a numerical failure, 2 on a usage error.

    artifacts: Paths of the files written by the run.

    summary: JSON-serializable record echoing the resolved configuration.
    """

    exit_code: int
    artifacts: List[str]
    summary: Dict[str, Any]


class TypeSlurmScriptTemplateData(TypedDict):
    queue: str
    job_name: str
    n_threads: int
    command: str


class GridType(click.ParamType):  # type: ignore
    """
    A grid of real numbers, given either as 'start:stop:num' or as a comma-separated
    list.
    """

    name: str = "grid"

    def convert(self, value: Any, param: Any, ctx: Any) -> Any:
        if isinstance(value, numpy.ndarray):
            return value
        text: str = str(value)
        try:
            if ":" in text:
                parts: List[str] = text.split(":")
                if len(parts) != 3:
                    raise ValueError(text)
                return numpy.linspace(float(parts[0]), float(parts[1]), int(parts[2]))
            return numpy.array([float(item) for item in text.split(",")])
        except ValueError:
            self.fail(f"{text!r} is neither start:stop:num nor a list of numbers")


GRID: GridType = GridType()


class _LevyHGGroup(click.Group):  # type: ignore
    # Turns library errors into click errors, which exit with code 1.

    def invoke(self, ctx: Any) -> Any:
        try:
            return super().invoke(ctx)
        except LevyHGError as err:
            raise click.ClickException(str(err))


def _format_cell(value: Any) -> str:
    if isinstance(value, (bool, str)):
        return str(value)
    if isinstance(value, (int, numpy.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def format_rows(rows: Sequence[Dict[str, Any]], fmt: str) -> str:
    """
    Formats table rows as CSV with a header row, or as a JSON list.
    """
    if fmt == "json":
        return json.dumps([_jsonable(row) for row in rows], sort_keys=True) + "\n"
    buffer: io.StringIO = io.StringIO()
    if rows:
        writer: Any = csv.DictWriter(
            buffer, fieldnames=list(rows[0].keys()), lineterminator="\n"
        )
        writer.writeheader()
        row: Dict[str, Any]
        for row in rows:
            writer.writerow({key: _format_cell(value) for key, value in row.items()})
    return buffer.getvalue()


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, numpy.ndarray)):
        return [_jsonable(item) for item in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, numpy.integer)):
        return int(value)
    if isinstance(value, (complex, numpy.complexfloating)):
        return [float(value.real), float(value.imag)]
    return float(value)


def _state(ctx: Any) -> Dict[str, Any]:
    state: Dict[str, Any] = ctx.find_root().obj
    return state


def _emit_summary(ctx: Any, summary: Dict[str, Any]) -> None:
    _state(ctx)["summary"] = _jsonable(summary)
    click.echo(json.dumps(_state(ctx)["summary"], sort_keys=True))


def _emit_table(
    ctx: Any,
    rows: Sequence[Dict[str, Any]],
    summary: Dict[str, Any],
    fmt: str,
    output: Union[str, None],
) -> None:
    text: str = format_rows(rows, fmt)
    _state(ctx)["summary"] = _jsonable(summary)
    if output is None:
        click.echo(text, nl=False)
        return
    fh: TextIO
    with open(output, "w", newline="") as fh:
        fh.write(text)
    _state(ctx)["artifacts"].append(str(output))
    _emit_summary(ctx, summary)


def _table_options(function: Callable[..., Any]) -> Callable[..., Any]:
    function = click.option(  # type: ignore
        "--output",
        "-o",
        "output",
        type=click.Path(dir_okay=False),
        default=None,
        help="Write the table to this file and print the summary instead.",
    )(function)
    return click.option(  # type: ignore
        "--format",
        "fmt",
        type=click.Choice(["csv", "json"]),
        default="csv",
        show_default=True,
    )(function)


def _params_options(function: Callable[..., Any]) -> Callable[..., Any]:
    name: str
    for name in ("eps", "gammah", "betah", "gamma", "beta"):
        # An explicit default=None defeats required=True on click >= 8.3.
        extra: Dict[str, Any] = (
            {"default": 0.0} if name == "eps" else {"required": True}
        )
        function = click.option(  # type: ignore
            f"--{name}",
            name,
            type=float,
            **extra,
        )(function)
    return function


def _optional_params_options(function: Callable[..., Any]) -> Callable[..., Any]:
    name: str
    for name in ("eps", "gammah", "betah", "gamma", "beta"):
        function = click.option(  # type: ignore
            f"--{name}",
            name,
            type=float,
            default=0.0 if name == "eps" else None,
        )(function)
    return function


def _stable_options(function: Callable[..., Any]) -> Callable[..., Any]:
    function = click.option(  # type: ignore
        "--rho", "rho", type=float, default=0.5, show_default=True
    )(function)
    return click.option("--alpha", "alpha", type=float, required=True)(  # type: ignore
        function
    )


def _resolve_seed(seed: int) -> int:
    text: Union[str, None] = os.environ.get("LEVY_HG_SEED")
    if text is None:
        return seed
    try:
        return int(text)
    except ValueError:
        raise DomainError(f"LEVY_HG_SEED must be an integer, got {text!r}")


def _mellin_spec(
    kind: Union[str, None],
    params: Union[HGParams, None],
    delta: float,
    alpha: Union[float, None],
) -> MellinSpec:
    if kind == "radial":
        if alpha is None:
            raise click.UsageError("--kind radial needs --alpha")
        return radial_spec(alpha)
    if params is None:
        raise click.UsageError("--beta, --gamma, --betah and --gammah are required")
    if kind is None:
        kind = "hg" if "HG" in params.classes and params.betah > 0 else "ehg"
    if kind == "hg":
        return hg_spec(params, delta)
    return ehg_spec(params, delta)


def _maybe_params(
    beta: Union[float, None],
    gamma: Union[float, None],
    betah: Union[float, None],
    gammah: Union[float, None],
    eps: float,
) -> Union[HGParams, None]:
    values: List[Union[float, None]] = [beta, gamma, betah, gammah]
    if all(value is None for value in values):
        return None
    if any(value is None for value in values):
        raise click.UsageError("give all of --beta, --gamma, --betah and --gammah")
    return HGParams(beta, gamma, betah, gammah, eps=eps)  # type: ignore


def _spec_summary(spec: MellinSpec) -> Dict[str, Any]:
    return {
        "kind": spec.kind,
        "params": spec.params.to_dict(),
        "delta": spec.delta,
        "strip": list(spec.strip),
    }


@click.group(  # type: ignore
    cls=_LevyHGGroup, context_settings=dict(help_option_names=["-h", "--help"])
)
@click.option("--verbose", "-v", "verbose", is_flag=True, default=False)  # type: ignore
@click.version_option(__version__, prog_name="levyhg")  # type: ignore
@click.pass_context  # type: ignore
def main(ctx: Any, verbose: bool) -> None:
    """
    Extended hypergeometric Levy processes: exponents, Wiener-Hopf factors, Levy
    densities, exponential functionals and stable-process laws.
    """
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING)
    ctx.ensure_object(dict)
    ctx.obj.setdefault("artifacts", [])
    ctx.obj.setdefault("summary", {})


@main.command()  # type: ignore
@_params_options
@click.pass_context  # type: ignore
def classify(
    ctx: Any, beta: float, gamma: float, betah: float, gammah: float, eps: float
) -> None:
    """
    Prints the admissibility sets and the regime of a parameter quadruple.
    """
    p: HGParams = HGParams(beta, gamma, betah, gammah, eps=eps)
    _emit_summary(
        ctx,
        {"classes": p.classes, "regime": p.regime, "params": p.to_dict(), "eps": eps},
    )


@main.command()  # type: ignore
@_params_options
@click.option(  # type: ignore
    "--theta-grid",
    "theta_grid",
    type=GRID,
    default="-10:10:21",
)
@click.option(  # type: ignore
    "--class",
    "class_tag",
    type=click.Choice(["HG", "EHG", "EHG_BETA_ONLY", "EHG_BETAH_ONLY", "EHL"]),
    default=None,
)
@_table_options
@click.pass_context  # type: ignore
def psi(
    ctx: Any,
    beta: float,
    gamma: float,
    betah: float,
    gammah: float,
    eps: float,
    theta_grid: Any,
    class_tag: Union[str, None],
    fmt: str,
    output: Union[str, None],
) -> None:
    """
    Evaluates psi(i theta) on a grid of theta.
    """
    le: LaplaceExponent = LaplaceExponent(
        HGParams(beta, gamma, betah, gammah, eps=eps), class_tag  # type: ignore
    )
    values: Any = psi_eval(le, 1j * theta_grid)
    rows: List[Dict[str, Any]] = [
        {"theta": float(theta), "re_psi": value.real, "im_psi": value.imag}
        for theta, value in zip(theta_grid, numpy.atleast_1d(values))
    ]
    _emit_table(
        ctx,
        rows,
        {"params": le.params.to_dict(), "class": le.class_tag, "eps": eps},
        fmt,
        output,
    )


@main.command()  # type: ignore
@_params_options
@click.option(  # type: ignore
    "--check-grid",
    "check_grid",
    type=int,
    default=200,
    show_default=True,
)
@click.option(  # type: ignore
    "--theta-max",
    "theta_max",
    type=float,
    default=50.0,
    show_default=True,
)
@_table_options
@click.pass_context  # type: ignore
def whf(
    ctx: Any,
    beta: float,
    gamma: float,
    betah: float,
    gammah: float,
    eps: float,
    check_grid: int,
    theta_max: float,
    fmt: str,
    output: Union[str, None],
) -> None:
    """
    Prints the Wiener-Hopf factors and their residual on a grid of theta.

    Fails when the largest residual exceeds 1e-10.
    """
    le: LaplaceExponent = LaplaceExponent(HGParams(beta, gamma, betah, gammah, eps=eps))
    ascending: BernsteinExpr
    descending: BernsteinExpr
    ascending, descending = wh_factors(le)
    thetas: Any = numpy.linspace(-theta_max, theta_max, check_grid)
    residuals: Any = factorization_residual(le, thetas)
    rows: List[Dict[str, Any]] = [
        {"theta": float(theta), "residual": float(residual)}
        for theta, residual in zip(thetas, residuals)
    ]
    worst: float = float(numpy.max(residuals))
    _emit_table(
        ctx,
        rows,
        {
            "params": le.params.to_dict(),
            "class": le.class_tag,
            "kappa": str(ascending),
            "kappa_hat": str(descending),
            "max_residual": worst,
            "check_grid": check_grid,
            "theta_max": theta_max,
        },
        fmt,
        output,
    )
    if worst > _WHF_TOLERANCE:
        raise CheckFailed(f"whf: factorization residual {worst:.3e} exceeds 1e-10")


@main.command()  # type: ignore
@_params_options
@click.option(  # type: ignore
    "--x-grid",
    "x_grid",
    type=GRID,
    default="0.05,0.5,5,-0.05,-0.5,-5",
)
@click.option(  # type: ignore
    "--n-terms",
    "n_terms",
    type=int,
    default=10000,
    show_default=True,
)
@_table_options
@click.pass_context  # type: ignore
def density(
    ctx: Any,
    beta: float,
    gamma: float,
    betah: float,
    gammah: float,
    eps: float,
    x_grid: Any,
    n_terms: int,
    fmt: str,
    output: Union[str, None],
) -> None:
    """
    Evaluates the Levy density by its closed form and by its residue series.
    """
    p: HGParams = HGParams(beta, gamma, betah, gammah, eps=eps)
    rows: List[Any] = density_table(p, x_grid, n_terms)
    _emit_table(
        ctx,
        rows,
        {"params": p.to_dict(), "n_terms": n_terms, "eps": eps},
        fmt,
        output,
    )


@main.command()  # type: ignore
@_optional_params_options
@click.option(  # type: ignore
    "--kind",
    "kind",
    type=click.Choice(["hg", "ehg", "radial"]),
    default=None,
)
@click.option(  # type: ignore
    "--delta",
    "delta",
    type=float,
    default=1.0,
    show_default=True,
)
@click.option("--alpha", "alpha", type=float, default=None)  # type: ignore
@click.option("--s-grid", "s_grid", type=GRID, required=True)  # type: ignore
@click.option("--im", "im", type=float, default=0.0, show_default=True)  # type: ignore
@_table_options
@click.pass_context  # type: ignore
def mellin(
    ctx: Any,
    beta: Union[float, None],
    gamma: Union[float, None],
    betah: Union[float, None],
    gammah: Union[float, None],
    eps: float,
    kind: Union[str, None],
    delta: float,
    alpha: Union[float, None],
    s_grid: Any,
    im: float,
    fmt: str,
    output: Union[str, None],
) -> None:
    """
    Evaluates the Mellin transform of an exponential functional on Re s + i IM.
    """
    spec: MellinSpec = _mellin_spec(
        kind, _maybe_params(beta, gamma, betah, gammah, eps), delta, alpha
    )
    points: Any = s_grid + 1j * im
    values: Any = numpy.atleast_1d(spec(points))
    rows: List[Dict[str, Any]] = [
        {
            "re_s": point.real,
            "im_s": point.imag,
            "re_m": complex(value).real,
            "im_m": complex(value).imag,
        }
        for point, value in zip(points, values)
    ]
    _emit_table(ctx, rows, _spec_summary(spec), fmt, output)


@main.command()  # type: ignore
@_optional_params_options
@click.option(  # type: ignore
    "--kind",
    "kind",
    type=click.Choice(["hg", "ehg", "radial"]),
    default=None,
)
@click.option(  # type: ignore
    "--delta",
    "delta",
    type=float,
    default=1.0,
    show_default=True,
)
@click.option("--alpha", "alpha", type=float, default=None)  # type: ignore
@click.option("--u-grid", "u_grid", type=GRID, default="0.01:10:200")  # type: ignore
@click.option("--contour-re", "contour_re", type=float, default=None)  # type: ignore
@click.option(  # type: ignore
    "--clip-tolerance",
    "clip_tolerance",
    type=float,
    default=1e-6,
)
@_table_options
@click.pass_context  # type: ignore
def invert(
    ctx: Any,
    beta: Union[float, None],
    gamma: Union[float, None],
    betah: Union[float, None],
    gammah: Union[float, None],
    eps: float,
    kind: Union[str, None],
    delta: float,
    alpha: Union[float, None],
    u_grid: Any,
    contour_re: Union[float, None],
    clip_tolerance: float,
    fmt: str,
    output: Union[str, None],
) -> None:
    """
    Recovers the density of an exponential functional from its Mellin transform.
    """
    spec: MellinSpec = _mellin_spec(
        kind, _maybe_params(beta, gamma, betah, gammah, eps), delta, alpha
    )
    inverted: InvertedDensity = invert_density(
        spec, u_grid, contour_re=contour_re, clip_tolerance=clip_tolerance
    )
    rows: List[Dict[str, Any]] = [
        {"u": float(u), "density": float(value)}
        for u, value in zip(inverted.grid, inverted.values)
    ]
    summary: Dict[str, Any] = _spec_summary(spec)
    summary.update(
        {
            "contour_re": inverted.contour_re,
            "truncation_height": inverted.truncation_height,
            "min_before_clipping": inverted.min_before_clipping,
            "clip_tolerance": clip_tolerance,
        }
    )
    _emit_table(ctx, rows, summary, fmt, output)


@main.group(cls=_LevyHGGroup)  # type: ignore
def stable() -> None:
    """
    Laws of the stable process and of its Lamperti transforms.
    """


@stable.command("exponent")  # type: ignore
@_stable_options
@click.option(  # type: ignore
    "--which",
    "which",
    type=click.Choice(["characteristic", "censored", "radial", "avoid-zero"]),
    default="characteristic",
    show_default=True,
)
@click.option("--grid", "grid", type=GRID, default="-0.5:0.5:11")  # type: ignore
@_table_options
@click.pass_context  # type: ignore
def stable_exponent(
    ctx: Any,
    alpha: float,
    rho: float,
    which: str,
    grid: Any,
    fmt: str,
    output: Union[str, None],
) -> None:
    """
    Evaluates the characteristic exponent at real theta, or a Lamperti exponent at
    real z.
    """
    sp: StableParams = StableParams(alpha, rho)
    values: Any
    if which == "characteristic":
        values = stable_char_exponent(sp, grid)
    elif which == "censored":
        values = censored_exponent(sp, grid)
    elif which == "radial":
        values = radial_exponent(alpha, grid)
    else:
        values = avoid_zero_exponent(alpha, grid)
    rows: List[Dict[str, Any]] = [
        {"argument": float(point), "re": complex(value).real, "im": complex(value).imag}
        for point, value in zip(grid, numpy.atleast_1d(values))
    ]
    _emit_table(
        ctx, rows, {"alpha": alpha, "rho": rho, "exponent": which}, fmt, output
    )


@stable.command("mellin")  # type: ignore
@_stable_options
@click.option(  # type: ignore
    "--which",
    "which",
    type=click.Choice(["t0", "occupation", "ckl"]),
    default="t0",
    show_default=True,
)
@click.option("--k", "k", type=int, default=1, show_default=True)  # type: ignore
@click.option("--l", "l", type=int, default=2, show_default=True)  # type: ignore
@click.option("--s-grid", "s_grid", type=GRID, required=True)  # type: ignore
@_table_options
@click.pass_context  # type: ignore
def stable_mellin(
    ctx: Any,
    alpha: float,
    rho: float,
    which: str,
    k: int,
    l: int,
    s_grid: Any,
    fmt: str,
    output: Union[str, None],
) -> None:
    """
    Evaluates E_1[T_0^(s-1)], or the Mellin transform of the occupation time of
    (0, inf). With --which ckl, rho is set by the class C(k,l).
    """
    summary: Dict[str, Any] = {"alpha": alpha, "rho": rho, "transform": which}
    values: List[complex]
    if which == "t0":
        values = [complex(t0_mellin(alpha, float(s))) for s in s_grid]
    elif which == "occupation":
        values = [
            complex(censored_occupation_mellin(StableParams(alpha, rho), complex(s)))
            for s in s_grid
        ]
    else:
        sp: StableParams = StableParams(alpha, ckl_rho(alpha, k, l))
        summary.update({"rho": sp.rho, "k": k, "l": l})
        values = [ckl_closed_form(sp, k, l, complex(s)) for s in s_grid]
    rows: List[Dict[str, Any]] = [
        {"s": float(s), "re_m": value.real, "im_m": value.imag}
        for s, value in zip(s_grid, values)
    ]
    _emit_table(ctx, rows, summary, fmt, output)


@stable.command("exit-law")  # type: ignore
@click.option("--alpha", "alpha", type=float, required=True)  # type: ignore
@click.option("--x", "x", type=float, required=True)  # type: ignore
@click.option(  # type: ignore
    "--law",
    "law",
    type=click.Choice(["ExitBeforeZeroRadial", "TwoSidedExitAvoidZero"]),
    default="ExitBeforeZeroRadial",
    show_default=True,
)
@click.option("--y-grid", "y_grid", type=GRID, default="1.05:5:80")  # type: ignore
@_table_options
@click.pass_context  # type: ignore
def stable_exit_law(
    ctx: Any,
    alpha: float,
    x: float,
    law: Any,
    y_grid: Any,
    fmt: str,
    output: Union[str, None],
) -> None:
    """
    Evaluates the density of the exit position from [-1, 1] of the symmetric stable
    process started at x.
    """
    rows: List[Dict[str, Any]] = [
        {"y": float(y), "density": hitting_law(law, x, alpha, float(y))} for y in y_grid
    ]
    _emit_table(ctx, rows, {"alpha": alpha, "x": x, "law": law}, fmt, output)


@stable.command("hit-prob")  # type: ignore
@click.option("--alpha", "alpha", type=float, required=True)  # type: ignore
@click.option("--x-grid", "x_grid", type=GRID, default="-0.9:0.9:19")  # type: ignore
@_table_options
@click.pass_context  # type: ignore
def stable_hit_prob(
    ctx: Any, alpha: float, x_grid: Any, fmt: str, output: Union[str, None]
) -> None:
    """
    Evaluates the probability that zero is hit before [-1, 1] is left.
    """
    rows: List[Dict[str, Any]] = [
        {"x": float(x), "probability": hit_zero_before_exit_prob(float(x), alpha)}
        for x in x_grid
    ]
    _emit_table(ctx, rows, {"alpha": alpha}, fmt, output)


def _slurm_command(config: Dict[str, Any], mode: str, s: float, x: float) -> str:
    command: str = (
        f"levyhg simulate --mode {mode} --alpha {config['alpha']!r} "
        f"--rho {config['rho']!r} --s {s!r} --x {x!r} --dt {config['dt']!r} "
        f"--eps-hit {config['eps_hit']!r} --n-paths {config['n_paths']} "
        f"--max-steps {config['max_steps']} --block-size {config['block_size']} "
        f"--seed {config['seed']}"
    )
    if config["horizon"] is not None:
        command += f" --horizon {config['horizon']!r}"
    return command


@main.command()  # type: ignore
@_stable_options
@click.option(  # type: ignore
    "--mode",
    "mode",
    type=click.Choice(["t0", "occupation", "exit"]),
    default="t0",
    show_default=True,
)
@click.option("--s", "s", type=float, default=0.5, show_default=True)  # type: ignore
@click.option("--x", "x", type=float, default=0.5, show_default=True)  # type: ignore
@click.option("--dt", "dt", type=float, default=1e-2, show_default=True)  # type: ignore
@click.option(  # type: ignore
    "--eps-hit",
    "eps_hit",
    type=float,
    default=1e-3,
    show_default=True,
)
@click.option(  # type: ignore
    "--n-paths",
    "n_paths",
    type=int,
    default=100000,
    show_default=True,
)
@click.option(  # type: ignore
    "--horizon",
    "horizon",
    type=float,
    default=None,
    help="Cap on the real time of a path. No cap by default.",
)
@click.option(  # type: ignore
    "--max-steps",
    "max_steps",
    type=int,
    default=1000000,
    show_default=True,
)
@click.option(  # type: ignore
    "--block-size",
    "block_size",
    type=int,
    default=1024,
    show_default=True,
)
@click.option("--seed", "seed", type=int, default=0, show_default=True)  # type: ignore
@click.option("--threads", "threads", type=int, default=None)  # type: ignore
@click.option(  # type: ignore
    "--per-path",
    "per_path",
    type=click.Path(dir_okay=False),
    default=None,
)
@click.option(  # type: ignore
    "--slurm-script",
    "slurm_script",
    type=click.Path(dir_okay=False),
    default=None,
)
@click.option(  # type: ignore
    "--queue",
    "queue",
    type=str,
    default="maxcpu",
    show_default=True,
)
@click.option(  # type: ignore
    "--job-name",
    "job_name",
    type=str,
    default="levyhg",
    show_default=True,
)
@click.pass_context  # type: ignore
def simulate(
    ctx: Any,
    alpha: float,
    rho: float,
    mode: str,
    s: float,
    x: float,
    dt: float,
    eps_hit: float,
    n_paths: int,
    horizon: Union[float, None],
    max_steps: int,
    block_size: int,
    seed: int,
    threads: Union[int, None],
    per_path: Union[str, None],
    slurm_script: Union[str, None],
    queue: str,
    job_name: str,
) -> None:
    """
    Runs a Monte Carlo estimate and prints a JSON summary.

    Modes: t0 estimates E_1[T_0^(s-1)], occupation estimates the (s-1)-th moment of
    the time spent in (0, inf) before zero, exit estimates P_x(T_0 < sigma) and the
    exit histogram. The environment variable LEVY_HG_SEED overrides --seed.
    """
    n_threads: int = threads if threads is not None else (os.cpu_count() or 1)
    cfg: SimConfig = SimConfig(
        StableParams(alpha, rho),
        dt=dt,
        eps_hit=eps_hit,
        n_paths=n_paths,
        horizon=horizon,
        max_steps=max_steps,
        block_size=block_size,
        seed=_resolve_seed(seed),
        threads=n_threads,
    )
    config: Dict[str, Any] = cfg.to_dict()  # type: ignore
    if slurm_script is not None:
        fh: TextIO
        with open(_SLURM_TEMPLATE) as fh:
            template: jinja2.Template = jinja2.Template(fh.read())
        script_data: TypeSlurmScriptTemplateData = {
            "queue": queue,
            "job_name": job_name,
            "n_threads": n_threads,
            "command": _slurm_command(config, mode, s, x),
        }
        script: pathlib.Path = pathlib.Path(slurm_script)
        with open(script, "w") as fh:
            fh.write(template.render(script_data))
        script.chmod(script.stat().st_mode | stat.S_IEXEC)
        _state(ctx)["artifacts"].append(str(script))
        _emit_summary(
            ctx, {"mode": mode, "config": config, "slurm_script": str(script)}
        )
        return

    summary: Dict[str, Any] = {"mode": mode, "config": config}
    if mode == "exit":
        exit_law: TypeExitLawEstimate = estimate_exit_law(x, cfg)
        estimate: TypeEstimateWithCI = exit_law["prob_hit_zero"]
        summary.update(
            {
                "x": x,
                "bin_edges": exit_law["bin_edges"],
                "histogram": exit_law["histogram"],
                "beyond": exit_law["beyond"],
            }
        )
    elif mode == "t0":
        estimate = estimate_t0_moment(alpha, s, cfg)
        summary["s"] = s
    else:
        estimate = estimate_occupation_moment(StableParams(alpha, rho), s, cfg)
        summary["s"] = s
    summary.update(
        {
            "estimate": estimate["mean"],
            "std_error": estimate["std_error"],
            "n_effective": estimate["n_effective"],
            "diagnostics": estimate["diagnostics"],
        }
    )
    if per_path is not None:
        start: float = x if mode == "exit" else 1.0
        paths: Any = simulate_absorption(cfg, start, mode)  # type: ignore
        write_per_path(
            pathlib.Path(per_path),
            {
                "coarse": paths["coarse"],
                "fine": paths["fine"],
                "exit_position": paths["exit_position"],
            },
        )
        _state(ctx)["artifacts"].append(str(per_path))
    _emit_summary(ctx, summary)


@main.command()  # type: ignore
@click.option(  # type: ignore
    "--check",
    "check_names",
    type=click.Choice(list(checks.keys())),
    multiple=True,
)
@click.option(  # type: ignore
    "--report",
    "report",
    type=click.Path(dir_okay=False),
    default=None,
)
@click.option("--quick", "quick", is_flag=True, default=False)  # type: ignore
@click.pass_context  # type: ignore
def verify(
    ctx: Any, check_names: Sequence[str], report: Union[str, None], quick: bool
) -> None:
    """
    Runs the numerical acceptance checks. Fails if any check fails.
    """
    results: List[TypeCheckResult] = run_checks(list(check_names), quick=quick)
    result: TypeCheckResult
    for result in results:
        click.echo(
            f"{'PASS' if result['passed'] else 'FAIL'} {result['name']}: "
            f"{result['detail']} ({result['seconds']:.1f} s)"
        )
    if report is not None:
        fh: TextIO
        with open(report, "w") as fh:
            fh.write(render_report(results, quick))
        _state(ctx)["artifacts"].append(str(report))
    failed: List[str] = [result["name"] for result in results if not result["passed"]]
    _state(ctx)["summary"] = {
        "quick": quick,
        "checks": [result["name"] for result in results],
        "failed": failed,
    }
    if failed:
        raise CheckFailed(f"failed checks: {', '.join(failed)}")


@main.command("ckl-rho")  # type: ignore
@click.option("--alpha", "alpha", type=float, required=True)  # type: ignore
@click.option("--k", "k", type=int, required=True)  # type: ignore
@click.option("--l", "l", type=int, required=True)  # type: ignore
@click.pass_context  # type: ignore
def ckl_rho_command(ctx: Any, alpha: float, k: int, l: int) -> None:
    """
    Prints the positivity parameter rho for which (alpha, rho) lies in C(k,l).
    """
    _emit_summary(ctx, {"alpha": alpha, "k": k, "l": l, "rho": ckl_rho(alpha, k, l)})


def run(argv: Sequence[str]) -> TypeCommandResult:
    """
    Runs the command-line interface without exiting the interpreter.

    Arguments:

        argv: The arguments, without the program name.
    """
    state: Dict[str, Any] = {"artifacts": [], "summary": {}}
    exit_code: int = 0
    try:
        returned: Any = main.main(
            args=list(argv), prog_name="levyhg", standalone_mode=False, obj=state
        )
        if isinstance(returned, int):
            exit_code = returned
    except click.UsageError as err:
        err.show()
        exit_code = 2
    except click.ClickException as err:
        err.show()
        exit_code = err.exit_code
    except click.exceptions.Abort:
        exit_code = 1
    return {
        "exit_code": exit_code,
        "artifacts": state["artifacts"],
        "summary": state["summary"],
    }


if __name__ == "__main__":
    main()
