"""C-Port Vector arithmetic.

Everything here is a pure function of immutable inputs.  Matrices are 4x3
float64 arrays in M EUR, rows in bundle order (Nv, Fr, Mb, St) and columns in
TRL-stage order (Prototype, Demo, Released).
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

import numpy as np

from cport.errors import DomainError, NullVectorError, ValidationError

WEIGHT_RTOL = 1e-9


class Bundle(str, Enum):
    NAVIGATION = "Nv"
    FREIGHT = "Fr"
    MOBILITY = "Mb"
    SUSTAINABILITY = "St"

    @property
    def position(self) -> int:
        return _BUNDLE_ORDER.index(self)

    @property
    def letter(self) -> str:
        """Service-code prefix used by the catalog (A..D)."""
        return "ABCD"[self.position]

    @property
    def long_name(self) -> str:
        return _BUNDLE_TITLES[self]

    @classmethod
    def from_letter(cls, letter: str) -> Bundle:
        if len(letter) != 1 or letter not in "ABCD":
            raise DomainError(f"no bundle for service prefix {letter!r}")
        return _BUNDLE_ORDER["ABCD".index(letter)]


_BUNDLE_ORDER = tuple(Bundle)
_BUNDLE_TITLES = {
    Bundle.NAVIGATION: "Vessel & Marine Navigation",
    Bundle.FREIGHT: "e-Freight & Intermodal Logistics",
    Bundle.MOBILITY: "Passenger Transport",
    Bundle.SUSTAINABILITY: "Environmental Sustainability",
}


class TrlStage(str, Enum):
    PROTOTYPE = "P"
    DEMO = "D"
    RELEASED = "R"

    @property
    def position(self) -> int:
        return tuple(TrlStage).index(self)


def trl_stage(trl: int) -> TrlStage:
    """Bucket a 1-9 Technology Readiness Level into P (1-5), D (6-7) or R (8-9)."""
    if isinstance(trl, bool) or not isinstance(trl, (int, np.integer)):
        raise DomainError(f"TRL must be an integer 1..9, got {trl!r}")
    if not 1 <= trl <= 9:
        raise DomainError(f"TRL {trl} outside the 1..9 scale")
    if trl <= 5:
        return TrlStage.PROTOTYPE
    if trl <= 7:
        return TrlStage.DEMO
    return TrlStage.RELEASED


def _readonly(values: np.ndarray) -> np.ndarray:
    values.flags.writeable = False
    return values


@dataclass(frozen=True, eq=False)
class InnovationMatrix:
    """Cumulative project cost (M EUR) per bundle x TRL stage."""

    cells: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.cells, dtype=np.float64)
        if arr.shape != (4, 3):
            raise DomainError(f"innovation matrix must be 4x3, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("innovation matrix contains non-finite values")
        if np.any(arr < 0):
            bad = [
                f"{_BUNDLE_ORDER[i].value}/{tuple(TrlStage)[j].value}"
                for i, j in zip(*np.nonzero(arr < 0))
            ]
            raise DomainError(f"negative cost in innovation matrix cells: {', '.join(bad)}")
        object.__setattr__(self, "cells", _readonly(arr))

    @classmethod
    def zeros(cls) -> InnovationMatrix:
        return cls(np.zeros((4, 3)))

    def __getitem__(self, key: tuple[Bundle, TrlStage]) -> float:
        bundle, stage = key
        return float(self.cells[bundle.position, stage.position])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InnovationMatrix):
            return NotImplemented
        return bool(np.array_equal(self.cells, other.cells))

    def __add__(self, other: InnovationMatrix) -> InnovationMatrix:
        return InnovationMatrix(self.cells + other.cells)

    def scaled(self, factor: float) -> InnovationMatrix:
        return InnovationMatrix(self.cells * factor)

    def row_sums(self) -> np.ndarray:
        return self.cells.sum(axis=1)

    def to_dict(self) -> dict[str, dict[str, float]]:
        return {
            b.value: {s.value: float(self.cells[b.position, s.position]) for s in TrlStage}
            for b in Bundle
        }


class WeightKind(str, Enum):
    BUSINESS_SPECIFICITY = "business_specificity"
    INNOVATION_REWARD = "innovation_reward"

    @property
    def size(self) -> int:
        return 4 if self is WeightKind.BUSINESS_SPECIFICITY else 3


def _check_raw_weights(values: Sequence[float], kind: WeightKind) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size != kind.size:
        raise DomainError(
            f"{kind.value} weights need {kind.size} components, got {arr.size}"
        )
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"{kind.value} weights must be finite and > 0, got {arr.tolist()}")
    return arr


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Bundle (a) or TRL-stage (w) weights obeying sum(1/x**2) == 1."""

    values: np.ndarray
    kind: WeightKind

    def __post_init__(self) -> None:
        kind = WeightKind(self.kind)
        arr = _check_raw_weights(self.values, kind)
        total = float(np.sum(1.0 / arr**2))
        if not math.isclose(total, 1.0, rel_tol=WEIGHT_RTOL):
            raise DomainError(
                f"{kind.value} weights violate sum(1/x^2) = 1 (got {total!r}); "
                "use normalize_weights()"
            )
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "values", _readonly(arr.copy()))

    @classmethod
    def uniform(cls, kind: WeightKind) -> WeightVector:
        return normalize_weights(np.ones(WeightKind(kind).size), kind)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightVector):
            return NotImplemented
        return self.kind is other.kind and bool(np.array_equal(self.values, other.values))

    def tolist(self) -> list[float]:
        return [float(v) for v in self.values]


def normalize_weights(raw: Sequence[float], kind: WeightKind | str) -> WeightVector:
    """Rescale positive raw weights so that sum(1/x**2) == 1, keeping their ratios.

    The scale factor is ``k = sqrt(sum(1/raw**2))``; each component becomes
    ``raw_i * k``.  Uniform inputs give (2, 2, 2, 2) and (sqrt3, sqrt3, sqrt3).
    """
    kind = WeightKind(kind)
    arr = _check_raw_weights(raw, kind)
    k = math.sqrt(math.fsum(1.0 / arr**2))
    return WeightVector(arr * k, kind)


@dataclass(frozen=True)
class StandardsLedger:
    applicable: frozenset[str]
    adopted: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "applicable", frozenset(self.applicable))
        object.__setattr__(self, "adopted", frozenset(self.adopted))
        extra = self.adopted - self.applicable
        if extra:
            raise ValidationError(
                "adopted standards not listed as applicable: " + ", ".join(sorted(extra))
            )


def standardization_merit(ledger: StandardsLedger) -> float:
    """Share of applicable standards actually adopted (rho); 0 when none apply."""
    if not ledger.applicable:
        return 0.0
    return len(ledger.adopted) / len(ledger.applicable)


@dataclass(frozen=True, eq=False)
class CPortVector:
    components: np.ndarray
    rho: float = 1.0
    window: str = ""

    def __post_init__(self) -> None:
        arr = np.array(self.components, dtype=np.float64)
        if arr.shape != (4,):
            raise DomainError(f"C-Port Vector needs 4 components, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise DomainError(f"C-Port Vector components must be finite and >= 0: {arr.tolist()}")
        object.__setattr__(self, "components", _readonly(arr))

    @property
    def magnitude(self) -> float:
        return math.hypot(*self.components.tolist())

    @property
    def is_null(self) -> bool:
        return not np.any(self.components)

    def __getitem__(self, bundle: Bundle) -> float:
        return float(self.components[Bundle(bundle).position])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CPortVector):
            return NotImplemented
        return (
            self.rho == other.rho
            and self.window == other.window
            and bool(np.array_equal(self.components, other.components))
        )

    def to_dict(self) -> dict[str, float]:
        return {b.value: float(self.components[b.position]) for b in Bundle}


def cport_vector(
    rho: float,
    a: WeightVector,
    c: InnovationMatrix,
    w: WeightVector,
    window: str = "",
) -> CPortVector:
    """Component i is ``rho * a_i * sum_j c[i, j] * w_j``."""
    if isinstance(rho, bool) or not 0.0 <= rho <= 1.0:
        raise DomainError(f"standardization merit rho must lie in [0, 1], got {rho!r}")
    if a.kind is not WeightKind.BUSINESS_SPECIFICITY:
        raise DomainError("a must be a business-specificity weight vector")
    if w.kind is not WeightKind.INNOVATION_REWARD:
        raise DomainError("w must be an innovation-reward weight vector")
    weighted = a.values[:, None] * c.cells
    return CPortVector(rho * (weighted @ w.values), rho=float(rho), window=window)


def total_investment(c: InnovationMatrix | np.ndarray) -> float:
    """Total spend as Tr(Ct^T Ct) where Ct holds the square roots of the costs."""
    cells = c.cells if isinstance(c, InnovationMatrix) else np.asarray(c, dtype=np.float64)
    if np.any(cells < 0):
        raise DomainError("total_investment needs non-negative costs (square root of cost)")
    root = np.sqrt(cells)
    return float(np.trace(root.T @ root))


def _as_array(v: CPortVector | Sequence[float]) -> np.ndarray:
    return v.components if isinstance(v, CPortVector) else np.asarray(v, dtype=np.float64)


def _rescaled(x: np.ndarray, message: str) -> tuple[np.ndarray, float]:
    """``x`` times an exact power of two bringing its peak near 1, and the rescaled norm.

    Tiny or huge vectors would otherwise underflow or overflow when squared.
    """
    peak = float(np.max(np.abs(x)))
    if peak == 0.0:
        raise NullVectorError(message)
    scaled = np.ldexp(x, -math.frexp(peak)[1])
    return scaled, math.sqrt(float(np.dot(scaled, scaled)))


def angle_degrees(v1: CPortVector | Sequence[float], v2: CPortVector | Sequence[float]) -> float:
    message = "angle undefined for null C-Port Vector"
    (x, nx), (y, ny) = _rescaled(_as_array(v1), message), _rescaled(_as_array(v2), message)
    cos = float(np.dot(x, y)) / (nx * ny)
    return math.degrees(math.acos(min(1.0, max(-1.0, cos))))


def squared_share(v: CPortVector | Sequence[float]) -> np.ndarray:
    """Per-bundle (v_i / |v|)**2; the shares sum to one."""
    x, norm = _rescaled(_as_array(v), "squared share undefined for null C-Port Vector")
    return (x / norm) ** 2


@dataclass(frozen=True)
class RankEntry:
    rank: int
    port_id: str
    magnitude: float


def rank_ports(snapshots: Iterable[tuple[str, CPortVector]]) -> list[RankEntry]:
    """Order ports by Euclidean magnitude |C-PV| descending, ties by port id."""
    scored = [(port_id, CPortVector(_as_array(v)).magnitude) for port_id, v in snapshots]
    scored.sort(key=lambda item: (-item[1], item[0]))
    return [RankEntry(i, pid, mag) for i, (pid, mag) in enumerate(scored, start=1)]

