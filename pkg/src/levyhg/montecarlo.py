"""
Monte Carlo estimators for the stable process.

Paths are driven by a self-similar clock: a step started at X lasts dt * r^alpha, where
r is the distance to the target set, and moves X by (dt)^(1/alpha) r S with S a
standard stable draw. Each step is exact in law; the only bias comes from stopping at
|X| <= eps_hit instead of X = 0, which is reduced by Richardson extrapolation over two
absorption radii.
"""

import concurrent.futures
import csv
import logging
import math
import os
import pathlib

from typing import Any, Dict, Iterator, List, Tuple, Union

import h5py  # type: ignore
import numpy

try:
    from typing import Literal, TypedDict
except:
    from typing_extensions import Literal, TypedDict

from levyhg.errors import DomainError, HorizonTooShort
from levyhg.stable import StableParams

logger: logging.Logger = logging.getLogger(__name__)

Mode = Literal["t0", "occupation", "exit"]

# Largest fraction of paths that may still be running at the end.
_MAX_UNABSORBED_FRACTION: float = 1e-3
_EXIT_BINS: int = 20
_EXIT_RANGE: Tuple[float, float] = (1.0, 5.0)


class TypeDiagnostics(TypedDict):
    mean_coarse: float
    mean_fine: float
    unabsorbed: int
    richardson_order: float


class TypeEstimateWithCI(TypedDict):
    mean: float
    std_error: float
    n_effective: int
    diagnostics: TypeDiagnostics


class TypeExitLawEstimate(TypedDict):
    prob_hit_zero: TypeEstimateWithCI
    bin_edges: List[float]
    histogram: List[int]
    beyond: int


class TypeAbsorption(TypedDict):
    """
    Per-path results of a simulation.

    coarse: value of the functional when |X| <= eps_hit is first reached.

    fine: value when |X| <= eps_hit / 2 is first reached.

    exit_position: X just after it leaves [-1, 1], NaN for paths that did not exit.

    unabsorbed: number of paths still running at the step cap or, when one is set,
    the real-time horizon.
    """

    coarse: Any
    fine: Any
    exit_position: Any
    unabsorbed: int


class SimConfig:
    """
    See documentation of the `__init__` function.
    """

    def __init__(
        self,
        sp: StableParams,
        dt: float = 1e-2,
        eps_hit: float = 1e-3,
        n_paths: int = 100000,
        horizon: Union[float, None] = None,
        max_steps: int = 1000000,
        block_size: int = 1024,
        seed: int = 0,
        threads: Union[int, None] = None,
    ) -> None:
        """
        Settings of a Monte Carlo run.

        Arguments:

            sp: The stable process.

            dt: Step of the self-similar clock. A step started at distance r from the
                target lasts dt * r^alpha in real time.

            eps_hit: Absorption radius around zero. A second radius eps_hit / 2 is
                used for the extrapolation.

            n_paths: Number of simulated paths.

            horizon: Optional cap on the real time of a path. Paths stopped by it count
                as unabsorbed. Without it only max_steps bounds a path.

            max_steps: Cap on the number of steps of a path.

            block_size: Number of paths simulated together with one random stream.

            seed: Seed of the root `numpy.random.SeedSequence`.

            threads: Number of worker threads. Defaults to the number of CPUs.
        """
        if not dt > 0:
            raise DomainError(f"dt must be positive, got {dt}")
        if not 0 < eps_hit < 1:
            raise DomainError(f"eps_hit must lie in (0, 1), got {eps_hit}")
        if n_paths < 1 or block_size < 1 or max_steps < 1:
            raise DomainError("n_paths, block_size and max_steps must be positive")
        if horizon is not None and not horizon > 0:
            raise DomainError(f"horizon must be positive, got {horizon}")
        self._sp: StableParams = sp
        self._dt: float = float(dt)
        self._eps_hit: float = float(eps_hit)
        self._n_paths: int = int(n_paths)
        self._horizon: Union[float, None] = (
            float(horizon) if horizon is not None else None
        )
        self._max_steps: int = int(max_steps)
        self._block_size: int = int(block_size)
        self._seed: int = int(seed)
        self._threads: int = int(threads) if threads else (os.cpu_count() or 1)

    @property
    def sp(self) -> StableParams:
        return self._sp

    @property
    def dt(self) -> float:
        return self._dt

    @property
    def eps_hit(self) -> float:
        return self._eps_hit

    @property
    def n_paths(self) -> int:
        return self._n_paths

    @property
    def horizon(self) -> Union[float, None]:
        return self._horizon

    @property
    def max_steps(self) -> int:
        return self._max_steps

    @property
    def block_size(self) -> int:
        return self._block_size

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def threads(self) -> int:
        return self._threads

    def to_dict(self) -> Dict[str, Any]:
        """
        The resolved configuration, echoed into summaries. The thread count is left
        out since results do not depend on it.
        """
        return {
            "alpha": self._sp.alpha,
            "rho": self._sp.rho,
            "dt": self._dt,
            "eps_hit": self._eps_hit,
            "n_paths": self._n_paths,
            "horizon": self._horizon,
            "max_steps": self._max_steps,
            "block_size": self._block_size,
            "seed": self._seed,
        }


def sample_stable(sp: StableParams, size: Any, rng: Any) -> Any:
    """
    Draws X_1 for the stable process with E[exp(i theta X_1)] = exp(-|theta|^alpha
    exp(-i pi alpha (rho - 1/2) sgn theta)).

    Uses the Chambers-Mallows-Stuck transform. With alpha T = pi alpha (rho - 1/2),
    the factor cos(alpha T)^(1/alpha) of the unit-scale sampler cancels against the
    scale c^(1/alpha), c = cos(pi alpha (rho - 1/2)).
    """
    u: Any = rng.uniform(-math.pi / 2, math.pi / 2, size)
    if sp.alpha == 1:
        return numpy.tan(u)
    w: Any = rng.standard_exponential(size)
    a: float = sp.alpha
    shift: float = math.pi * a * (sp.rho - 0.5)
    return (
        numpy.sin(a * u + shift)
        / numpy.cos(u) ** (1 / a)
        * (numpy.cos(shift + (a - 1) * u) / w) ** ((1 - a) / a)
    )


def _block_sizes(cfg: SimConfig) -> List[int]:
    full: int
    rest: int
    full, rest = divmod(cfg.n_paths, cfg.block_size)
    return [cfg.block_size] * full + ([rest] if rest else [])


def simulate_stable_increments(cfg: SimConfig, n_steps: int) -> Iterator[Any]:
    """
    Yields, block by block, arrays of shape (block, n_steps) holding the increments
    of the stable process over consecutive intervals of length dt.
    """
    sizes: List[int] = _block_sizes(cfg)
    streams: List[Any] = numpy.random.SeedSequence(cfg.seed).spawn(len(sizes))
    size: int
    stream: Any
    for size, stream in zip(sizes, streams):
        rng: Any = numpy.random.default_rng(stream)
        yield cfg.dt ** (1 / cfg.sp.alpha) * sample_stable(cfg.sp, (size, n_steps), rng)


def sample_positions(cfg: SimConfig, t: float) -> Any:
    """
    Returns X_t for n_paths paths started at 0, built from increments over dt.
    """
    n_steps: int = max(1, int(round(t / cfg.dt)))
    return numpy.concatenate(
        [block.sum(axis=1) for block in simulate_stable_increments(cfg, n_steps)]
    )


def _simulate_block(
    cfg: SimConfig, x0: float, mode: Mode, size: int, stream: Any
) -> TypeAbsorption:
    rng: Any = numpy.random.default_rng(stream)
    alpha: float = cfg.sp.alpha
    eps: float = cfg.eps_hit
    half: float = eps / 2
    step_scale: float = cfg.dt ** (1 / alpha)
    x: Any = numpy.full(size, float(x0))
    clock: Any = numpy.zeros(size)
    occupation: Any = numpy.zeros(size)
    coarse: Any = numpy.full(size, numpy.nan)
    fine: Any = numpy.full(size, numpy.nan)
    exit_position: Any = numpy.full(size, numpy.nan)
    active: Any = numpy.ones(size, dtype=bool)
    step: int
    for step in range(cfg.max_steps):
        index: Any = numpy.nonzero(active)[0]
        if index.size == 0:
            break
        position: Any = x[index]
        distance: Any = numpy.abs(position)
        if mode == "exit":
            distance = numpy.minimum(distance, 1 - distance)
        distance = numpy.maximum(distance, half)
        duration: Any = cfg.dt * distance**alpha
        if mode == "occupation":
            occupation[index] += duration * (position > 0)
        clock[index] += duration
        moved: Any = position + step_scale * distance * sample_stable(
            cfg.sp, index.size, rng
        )
        x[index] = moved
        value: Any
        if mode == "t0":
            value = clock[index]
        elif mode == "occupation":
            value = occupation[index]
        else:
            value = numpy.ones(index.size)
        radius: Any = numpy.abs(moved)
        if mode == "exit":
            exited: Any = radius > 1
            exit_position[index[exited]] = moved[exited]
            fine[index[exited]] = 0.0
            coarse[index[exited]] = numpy.where(
                numpy.isnan(coarse[index[exited]]), 0.0, coarse[index[exited]]
            )
            active[index[exited]] = False
        entered: Any = (radius <= eps) & numpy.isnan(coarse[index])
        coarse[index[entered]] = value[entered]
        absorbed: Any = radius <= half
        fine[index[absorbed]] = value[absorbed]
        active[index[absorbed]] = False
        if cfg.horizon is not None:
            active[index[clock[index] > cfg.horizon]] = False
    unabsorbed: int = int(numpy.count_nonzero(numpy.isnan(fine)))
    return {
        "coarse": coarse,
        "fine": fine,
        "exit_position": exit_position,
        "unabsorbed": unabsorbed,
    }


def simulate_absorption(cfg: SimConfig, x0: float, mode: Mode) -> TypeAbsorption:
    """
    Runs all paths from x0 and collects the per-path results in block order.

    Each block draws from its own child of `SeedSequence(seed)`, so the output does
    not depend on the number of threads.

    Raises:

        HorizonTooShort: if more than 0.1% of the paths are still running at the end.
    """
    sizes: List[int] = _block_sizes(cfg)
    streams: List[Any] = numpy.random.SeedSequence(cfg.seed).spawn(len(sizes))
    results: List[TypeAbsorption]
    with concurrent.futures.ThreadPoolExecutor(max_workers=cfg.threads) as executor:
        results = list(
            executor.map(
                lambda job: _simulate_block(cfg, x0, mode, job[0], job[1]),
                zip(sizes, streams),
            )
        )
    logger.debug("Simulated %d blocks of %s paths from %s", len(sizes), mode, x0)
    unabsorbed: int = sum(result["unabsorbed"] for result in results)
    if unabsorbed > _MAX_UNABSORBED_FRACTION * cfg.n_paths:
        raise HorizonTooShort(
            f"{unabsorbed} of {cfg.n_paths} paths were not absorbed; raise max_steps "
            "or the horizon"
        )
    return {
        "coarse": numpy.concatenate([result["coarse"] for result in results]),
        "fine": numpy.concatenate([result["fine"] for result in results]),
        "exit_position": numpy.concatenate(
            [result["exit_position"] for result in results]
        ),
        "unabsorbed": unabsorbed,
    }


def richardson(coarse: Any, fine: Any, order: float) -> Any:
    """
    Combines values at the radii eps and eps / 2, whose bias scales as eps^order.
    """
    weight: float = 2.0**order
    return (weight * fine - coarse) / (weight - 1.0)


def _estimate(
    coarse: Any, fine: Any, order: float, unabsorbed: int
) -> TypeEstimateWithCI:
    keep: Any = ~(numpy.isnan(coarse) | numpy.isnan(fine))
    combined: Any = richardson(coarse[keep], fine[keep], order)
    n: int = int(combined.size)
    return {
        "mean": float(numpy.mean(combined)),
        "std_error": float(numpy.std(combined, ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        "n_effective": n,
        "diagnostics": {
            "mean_coarse": float(numpy.mean(coarse[keep])),
            "mean_fine": float(numpy.mean(fine[keep])),
            "unabsorbed": unabsorbed,
            "richardson_order": order,
        },
    }


def _degenerate(n: int) -> TypeEstimateWithCI:
    return {
        "mean": 1.0,
        "std_error": 0.0,
        "n_effective": n,
        "diagnostics": {
            "mean_coarse": 1.0,
            "mean_fine": 1.0,
            "unabsorbed": 0,
            "richardson_order": 0.0,
        },
    }


def estimate_t0_moment(alpha: float, s: float, cfg: SimConfig) -> TypeEstimateWithCI:
    """
    Estimates E_1[T_0^(s-1)] for the symmetric stable process started at 1.

    Raises:

        DomainError: unless cfg describes the symmetric process with index alpha in
            (1, 2) and s lies in (-1/alpha, 2 - 1/alpha).

        HorizonTooShort: if too many paths do not reach zero.
    """
    if cfg.sp.alpha != alpha or cfg.sp.rho != 0.5:
        raise DomainError("the configuration must describe the symmetric process")
    if not 1 < alpha < 2 or not -1 / alpha < s < 2 - 1 / alpha:
        raise DomainError(f"need alpha in (1, 2) and s in the strip, got {alpha}, {s}")
    if s == 1:
        return _degenerate(cfg.n_paths)
    paths: TypeAbsorption = simulate_absorption(cfg, 1.0, "t0")
    return _estimate(
        paths["coarse"] ** (s - 1), paths["fine"] ** (s - 1), alpha, paths["unabsorbed"]
    )


def estimate_occupation_moment(
    sp: StableParams, s: float, cfg: SimConfig
) -> TypeEstimateWithCI:
    """
    Estimates E_1[A^(s-1)], where A is the time spent in (0, inf) before zero is hit.

    Raises:

        DomainError: if alpha <= 1, if cfg describes another process or if s lies
            outside (rho - 1/alpha, 2 - 1/alpha).

        HorizonTooShort: if too many paths do not reach zero.
    """
    if cfg.sp.alpha != sp.alpha or cfg.sp.rho != sp.rho:
        raise DomainError("the configuration describes another stable process")
    if not sp.alpha > 1 or not sp.rho - 1 / sp.alpha < s < 2 - 1 / sp.alpha:
        raise DomainError(f"need alpha > 1 and s in the strip, got {sp.alpha}, {s}")
    if s == 1:
        return _degenerate(cfg.n_paths)
    paths: TypeAbsorption = simulate_absorption(cfg, 1.0, "occupation")
    return _estimate(
        paths["coarse"] ** (s - 1),
        paths["fine"] ** (s - 1),
        sp.alpha,
        paths["unabsorbed"],
    )


def estimate_exit_law(x: float, cfg: SimConfig) -> TypeExitLawEstimate:
    """
    Estimates P_x(T_0 < sigma) and the law of |X| at the exit of [-1, 1] on the event
    that zero is not hit first.

    The histogram counts |X_sigma| over 20 equal bins of (1, 5]; exits beyond 5 are
    counted separately.

    Raises:

        DomainError: unless |x| < 1 and alpha in (1, 2).

        HorizonTooShort: if too many paths neither exit nor reach zero.
    """
    if not abs(x) < 1 or not 1 < cfg.sp.alpha < 2:
        raise DomainError(f"need |x| < 1 and alpha in (1, 2), got {x}, {cfg.sp.alpha}")
    paths: TypeAbsorption = simulate_absorption(cfg, x, "exit")
    exits: Any = numpy.abs(paths["exit_position"][~numpy.isnan(paths["exit_position"])])
    edges: Any = numpy.linspace(_EXIT_RANGE[0], _EXIT_RANGE[1], _EXIT_BINS + 1)
    counts: Any = numpy.histogram(exits[exits <= _EXIT_RANGE[1]], bins=edges)[0]
    return {
        "prob_hit_zero": _estimate(
            paths["coarse"], paths["fine"], cfg.sp.alpha - 1, paths["unabsorbed"]
        ),
        "bin_edges": [float(edge) for edge in edges],
        "histogram": [int(count) for count in counts],
        "beyond": int(numpy.count_nonzero(exits > _EXIT_RANGE[1])),
    }


def write_per_path(path: pathlib.Path, samples: Dict[str, Any]) -> None:
    """
    Writes per-path arrays to an HDF5 file (.h5, .hdf5) or a CSV file (.csv).
    """
    suffix: str = path.suffix.lower()
    if suffix in (".h5", ".hdf5"):
        with h5py.File(path, "w") as fh:
            name: str
            values: Any
            for name, values in samples.items():
                fh.create_dataset(name, data=numpy.asarray(values))
        return
    if suffix != ".csv":
        raise DomainError(f"per-path output must be .h5, .hdf5 or .csv, got {path}")
    names: List[str] = list(samples.keys())
    columns: List[Any] = [numpy.asarray(samples[name]) for name in names]
    with open(path, "w", newline="") as fh:
        writer: Any = csv.DictWriter(fh, fieldnames=names, lineterminator="\n")
        writer.writeheader()
        row: Tuple[Any, ...]
        for row in zip(*columns):
            writer.writerow(
                {name: f"{float(value):.17g}" for name, value in zip(names, row)}
            )
