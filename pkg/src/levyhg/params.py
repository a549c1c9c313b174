"""
Parameter quadruples of the hypergeometric family.

A quadruple (beta, gamma, betah, gammah) is tagged with every admissibility set that
contains it. The large-time regime of the process is read off the Wiener-Hopf factors
at the origin.
"""

import math

from typing import Any, Callable, Dict, List, Tuple, Union

import numpy

try:
    from typing import Literal, TypedDict
except:
    from typing_extensions import Literal, TypedDict

from levyhg.errors import DomainError, InadmissibleParameters

ClassTag = Literal["HG", "EHG", "EHG_BETA_ONLY", "EHG_BETAH_ONLY", "EHL"]
Regime = Literal["killed", "drifts_plus", "drifts_minus", "oscillates"]

# Derived quantities closer to zero than this are treated as vanishing.
_DERIVED_ZERO: float = 1e-12


class TypeParamsDict(TypedDict):
    beta: float
    gamma: float
    betah: float
    gammah: float


class TypeAdmissibilitySet(TypedDict):
    """
    One admissibility set of the registry.

    violations: returns the list of violated constraints for (beta, gamma, betah,
        gammah, eps); an empty list means membership.

    ascending_vanishes: True if the ascending factor kappa vanishes at 0, i.e. the
        process is unbounded above.

    descending_vanishes: True if the descending factor kappahat vanishes at 0.

    sample: draws a member quadruple.
    """

    description: str
    violations: Callable[[float, float, float, float, float], List[str]]
    ascending_vanishes: Callable[[float, float, float, float, float], bool]
    descending_vanishes: Callable[[float, float, float, float, float], bool]
    sample: Callable[[Any], Tuple[float, float, float, float]]


def _require(condition: bool, text: str, violations: List[str]) -> None:
    if not condition:
        violations.append(text)


def _near(x: float, y: float, eps: float) -> bool:
    return abs(x - y) <= eps


def _vanishing(x: float) -> bool:
    return abs(x) <= _DERIVED_ZERO


def _hg_violations(b: float, g: float, bh: float, gh: float, eps: float) -> List[str]:
    violations: List[str] = []
    _require(b <= 1 + eps, "beta <= 1", violations)
    _require(0 < g < 1, "0 < gamma < 1", violations)
    _require(bh >= -eps, "betah >= 0", violations)
    _require(0 < gh < 1, "0 < gammah < 1", violations)
    return violations


def _ehg_violations(b: float, g: float, bh: float, gh: float, eps: float) -> List[str]:
    violations: List[str] = []
    _require(1 - eps <= b <= 2 + eps, "1 <= beta <= 2", violations)
    _require(0 < g < 1, "0 < gamma < 1", violations)
    _require(-1 - eps <= bh <= eps, "-1 <= betah <= 0", violations)
    _require(0 < gh < 1, "0 < gammah < 1", violations)
    _require(1 - b + bh + g >= -eps, "1 - beta + betah + gamma >= 0", violations)
    _require(1 - b + bh + gh >= -eps, "1 - beta + betah + gammah >= 0", violations)
    return violations


def _beta_only_violations(
    b: float, g: float, bh: float, gh: float, eps: float
) -> List[str]:
    violations: List[str] = []
    _require(1 - eps <= b <= 2 + eps, "1 <= beta <= 2", violations)
    _require(0 < g < 1, "0 < gamma < 1", violations)
    _require(bh >= -eps, "betah >= 0", violations)
    _require(0 < gh < 1, "0 < gammah < 1", violations)
    _require(1 - b + bh + g <= eps, "1 - beta + betah + gamma <= 0", violations)
    _require(1 - b + bh + gh >= -eps, "1 - beta + betah + gammah >= 0", violations)
    return violations


def _betah_only_violations(
    b: float, g: float, bh: float, gh: float, eps: float
) -> List[str]:
    violations: List[str] = []
    _require(b <= 1 + eps, "beta <= 1", violations)
    _require(0 < g < 1, "0 < gamma < 1", violations)
    _require(-1 - eps <= bh <= eps, "-1 <= betah <= 0", violations)
    _require(0 < gh < 1, "0 < gammah < 1", violations)
    _require(1 - b + bh + g >= -eps, "1 - beta + betah + gamma >= 0", violations)
    _require(1 - b + bh + gh <= eps, "1 - beta + betah + gammah <= 0", violations)
    return violations


def _ehl_violations(b: float, g: float, bh: float, gh: float, eps: float) -> List[str]:
    violations: List[str] = []
    _require(1 - eps <= b <= 2 + eps, "1 <= beta <= 2", violations)
    _require(1 < g < 2, "1 < gamma < 2", violations)
    _require(-1 < gh < 0, "-1 < gammah < 0", violations)
    _require(_near(bh, b, eps), "betah = beta", violations)
    return violations


def _sample_hg(rng: Any) -> Tuple[float, float, float, float]:
    return (
        float(rng.uniform(-2.0, 1.0)),
        float(rng.uniform(0.05, 0.95)),
        float(rng.uniform(0.0, 3.0)),
        float(rng.uniform(0.05, 0.95)),
    )


def _sample_ehg(rng: Any) -> Tuple[float, float, float, float]:
    while True:
        beta: float = float(rng.uniform(1.0, 2.0))
        betah: float = float(rng.uniform(-1.0, 0.0))
        lower: float = max(0.0, beta - 1.0 - betah)
        if lower < 0.95:
            break
    return (
        beta,
        float(rng.uniform(max(lower, 0.02), 0.98)),
        betah,
        float(rng.uniform(max(lower, 0.02), 0.98)),
    )


def _sample_beta_only(rng: Any) -> Tuple[float, float, float, float]:
    beta: float = float(rng.uniform(1.05, 2.0))
    gamma: float = float(rng.uniform(0.02, beta - 1.0))
    betah: float = float(rng.uniform(0.0, beta - 1.0 - gamma))
    gammah: float = float(rng.uniform(max(beta - 1.0 - betah, 0.02), 0.98))
    return beta, gamma, betah, gammah


def _sample_betah_only(rng: Any) -> Tuple[float, float, float, float]:
    beta: float
    gamma: float
    betah: float
    gammah: float
    beta, gamma, betah, gammah = _sample_beta_only(rng)
    return 1.0 - betah, gammah, 1.0 - beta, gamma


def _sample_ehl(rng: Any) -> Tuple[float, float, float, float]:
    beta: float = float(rng.uniform(1.0, 2.0))
    return (
        beta,
        float(rng.uniform(1.05, 1.95)),
        beta,
        float(rng.uniform(-0.95, -0.05)),
    )


admissibility_sets: Dict[str, TypeAdmissibilitySet] = {
    "EHL": {
        "description": "Lamperti-stable subclass, betah = beta",
        "violations": _ehl_violations,
        "ascending_vanishes": lambda b, g, bh, gh, e: _near(b, 2.0, e),
        "descending_vanishes": lambda b, g, bh, gh, e: _near(b, 1.0, e),
        "sample": _sample_ehl,
    },
    "EHG": {
        "description": "extended hypergeometric class",
        "violations": _ehg_violations,
        "ascending_vanishes": lambda b, g, bh, gh, e: (
            _near(bh, 0.0, e) and not _vanishing(1 - b + g)
        ),
        "descending_vanishes": lambda b, g, bh, gh, e: (
            _near(b, 1.0, e) and not _vanishing(bh + gh)
        ),
        "sample": _sample_ehg,
    },
    "HG": {
        "description": "hypergeometric class",
        "violations": _hg_violations,
        "ascending_vanishes": lambda b, g, bh, gh, e: _near(b, 1.0, e),
        "descending_vanishes": lambda b, g, bh, gh, e: _near(bh, 0.0, e),
        "sample": _sample_hg,
    },
    "EHG_BETA_ONLY": {
        "description": "hypergeometric class extended in beta only",
        "violations": _beta_only_violations,
        "ascending_vanishes": lambda b, g, bh, gh, e: _near(b, 2.0, e),
        "descending_vanishes": lambda b, g, bh, gh, e: _near(b, 1.0, e)
        or (_near(bh, 0.0, e) and not _vanishing(b - 1 - g)),
        "sample": _sample_beta_only,
    },
    "EHG_BETAH_ONLY": {
        "description": "hypergeometric class extended in betah only",
        "violations": _betah_only_violations,
        "ascending_vanishes": lambda b, g, bh, gh, e: _near(bh, 0.0, e)
        or (_near(b, 1.0, e) and not _vanishing(bh + gh)),
        "descending_vanishes": lambda b, g, bh, gh, e: _near(bh, -1.0, e),
        "sample": _sample_betah_only,
    },
}


def _check_finite(**kwargs: float) -> None:
    name: str
    value: float
    for name, value in kwargs.items():
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value}")


def admissible_classes(
    beta: float, gamma: float, betah: float, gammah: float, eps: float = 0.0
) -> List[ClassTag]:
    """
    Returns every admissibility set containing the quadruple, in preference order.

    Raises:

        InadmissibleParameters: if no set contains the quadruple. The violated
            constraints of every set are listed.
    """
    _check_finite(beta=beta, gamma=gamma, betah=betah, gammah=gammah, eps=eps)
    if eps < 0:
        raise DomainError(f"eps must be non-negative, got {eps}")
    classes: List[ClassTag] = []
    violations: List[str] = []
    tag: str
    entry: TypeAdmissibilitySet
    for tag, entry in admissibility_sets.items():
        failed: List[str] = entry["violations"](beta, gamma, betah, gammah, eps)
        if failed:
            violations.extend(f"{tag}: {text}" for text in failed)
        else:
            classes.append(tag)  # type: ignore
    if not classes:
        raise InadmissibleParameters(
            f"({beta}, {gamma}, {betah}, {gammah}) is not admissible", violations
        )
    return classes


class HGParams:
    """
    See documentation of the `__init__` function.
    """

    def __init__(
        self, beta: float, gamma: float, betah: float, gammah: float, eps: float = 0.0
    ) -> None:
        """
        Parameter quadruple of a process in the hypergeometric family.

        The quadruple is immutable. Construction fails unless at least one
        admissibility set contains it.

        Arguments:

            beta, gamma, betah, gammah: The parameters of the Laplace exponent.

            eps: A non-negative tolerance applied to the closed constraints, so that
                boundary values computed in floating point are accepted.

        Raises:

            InadmissibleParameters: if the quadruple lies in no admissibility set.
        """
        self._beta: float = float(beta)
        self._gamma: float = float(gamma)
        self._betah: float = float(betah)
        self._gammah: float = float(gammah)
        self._eps: float = float(eps)
        self._classes: List[ClassTag] = admissible_classes(
            self._beta, self._gamma, self._betah, self._gammah, self._eps
        )

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def gamma(self) -> float:
        return self._gamma

    @property
    def betah(self) -> float:
        return self._betah

    @property
    def gammah(self) -> float:
        return self._gammah

    @property
    def eps(self) -> float:
        return self._eps

    @property
    def classes(self) -> List[ClassTag]:
        return list(self._classes)

    @property
    def primary_class(self) -> ClassTag:
        """
        The preferred class tag, used to select formulas.
        """
        return self._classes[0]

    @property
    def eta(self) -> float:
        return eta(self)

    @property
    def regime(self) -> Regime:
        return regime(self)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self._beta, self._gamma, self._betah, self._gammah

    def to_dict(self) -> TypeParamsDict:
        """ """
        return {
            "beta": self._beta,
            "gamma": self._gamma,
            "betah": self._betah,
            "gammah": self._gammah,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], eps: float = 0.0) -> "HGParams":
        """
        Builds a quadruple from a mapping with keys beta, gamma, betah and gammah.
        """
        missing: List[str] = [
            key for key in TypeParamsDict.__annotations__.keys() if key not in data
        ]
        if missing:
            raise InadmissibleParameters("missing parameters", missing)
        return cls(
            float(data["beta"]),
            float(data["gamma"]),
            float(data["betah"]),
            float(data["gammah"]),
            eps=eps,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HGParams):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def __repr__(self) -> str:
        return (
            f"HGParams(beta={self._beta!r}, gamma={self._gamma!r}, "
            f"betah={self._betah!r}, gammah={self._gammah!r})"
        )


def eta(p: HGParams) -> float:
    """
    Returns eta = 1 - beta + gamma + betah + gammah.
    """
    return 1.0 - p.beta + p.gamma + p.betah + p.gammah


def factor_vanishing(p: HGParams) -> Tuple[bool, bool]:
    """
    Returns whether kappa(0) = 0 and whether kappahat(0) = 0 for the primary class.
    """
    entry: TypeAdmissibilitySet = admissibility_sets[p.primary_class]
    args: Tuple[float, float, float, float, float] = (*p.as_tuple(), p.eps)
    return entry["ascending_vanishes"](*args), entry["descending_vanishes"](*args)


def regime(p: HGParams) -> Regime:
    """
    Returns the large-time regime of the process.

    The range of the process is unbounded above iff kappa(0) = 0 and unbounded below
    iff kappahat(0) = 0.
    """
    ascending: bool
    descending: bool
    ascending, descending = factor_vanishing(p)
    if ascending and descending:
        return "oscillates"
    if ascending:
        return "drifts_plus"
    if descending:
        return "drifts_minus"
    return "killed"


def classify(
    beta: float, gamma: float, betah: float, gammah: float, eps: float = 0.0
) -> Tuple[List[ClassTag], Regime]:
    """
    Returns the admissibility sets containing the quadruple and the regime.

    Raises:

        InadmissibleParameters: listing each violated inequality, if no set applies.
    """
    p: HGParams = HGParams(beta, gamma, betah, gammah, eps=eps)
    return p.classes, p.regime


def dual(p: HGParams) -> HGParams:
    """
    Returns the parameters (1 - betah, gammah, 1 - beta, gamma) of the dual process.

    The map is an involution. It preserves the extended hypergeometric and the
    hypergeometric classes and exchanges the two one-sided extensions.

    Raises:

        InadmissibleParameters: for the Lamperti-stable subclass, or if the image is
            not admissible.
    """
    if p.primary_class == "EHL":
        raise InadmissibleParameters(
            f"{p!r} is in the Lamperti-stable subclass, which has no dual here",
            ["EHL parameters are not closed under duality"],
        )
    return HGParams(1.0 - p.betah, p.gammah, 1.0 - p.beta, p.gamma, eps=p.eps)


def random_params(tag: ClassTag, rng: Union[Any, None] = None) -> HGParams:
    """
    Draws a random member of an admissibility set.

    Arguments:

        tag: The admissibility set.

        rng: A `numpy.random.Generator`. A fresh default generator is used when None.
    """
    generator: Any = rng if rng is not None else numpy.random.default_rng()
    while True:
        candidate: Tuple[float, float, float, float] = admissibility_sets[tag][
            "sample"
        ](generator)
        try:
            p: HGParams = HGParams(*candidate)
        except InadmissibleParameters:
            continue
        if tag in p.classes:
            return p
