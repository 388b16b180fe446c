"""Core domain types shared by every learner and tool in the package.

All types are immutable once constructed: training code works on private
numpy buffers and only materialises these objects at its boundaries, so
instances are safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "Pattern",
    "Hyperbox",
    "HyperparamConfig",
    "TrainStats",
    "TrainedModel",
    "make_point_pattern",
    "box_from_pattern",
]


class DomainError(ValueError):
    """An input violates a documented precondition or type invariant."""


def _as_coords(values: Iterable[float], what: str) -> tuple[float, ...]:
    coords = tuple(float(v) for v in values)
    if not coords:
        raise DomainError(f"{what} must have at least one dimension")
    for j, v in enumerate(coords):
        if not math.isfinite(v):
            raise DomainError(f"{what}[{j}] is not finite: {v!r}")
    return coords


@dataclass(frozen=True)
class Pattern:
    """An input sample: lower/upper bound vectors in the unit cube plus a label.

    Crisp points are the degenerate case ``lower == upper``.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    label: int

    def __init__(self, lower: Sequence[float], upper: Sequence[float], label: int):
        lo = _as_coords(lower, "lower")
        up = _as_coords(upper, "upper")
        if len(lo) != len(up):
            raise DomainError(f"bound lengths differ: {len(lo)} vs {len(up)}")
        for j, (a, b) in enumerate(zip(lo, up)):
            if not (0.0 <= a <= b <= 1.0):
                raise DomainError(
                    f"dimension {j}: need 0 <= lower <= upper <= 1, got [{a}, {b}]"
                )
        if int(label) != label or label < 0:
            raise DomainError(f"label must be a non-negative integer, got {label!r}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "label", int(label))

    @property
    def ndim(self) -> int:
        return len(self.lower)

    def width(self) -> tuple[float, ...]:
        return tuple(u - l for l, u in zip(self.lower, self.upper))


@dataclass(frozen=True)
class Hyperbox:
    """An axis-aligned box [vmin, wmax] carrying a class label and a sample count."""

    vmin: tuple[float, ...]
    wmax: tuple[float, ...]
    label: int
    cardinality: int = 1

    def __init__(
        self,
        vmin: Sequence[float],
        wmax: Sequence[float],
        label: int,
        cardinality: int = 1,
    ):
        v = _as_coords(vmin, "vmin")
        w = _as_coords(wmax, "wmax")
        if len(v) != len(w):
            raise DomainError(f"bound lengths differ: {len(v)} vs {len(w)}")
        for j, (a, b) in enumerate(zip(v, w)):
            if not (0.0 <= a <= b <= 1.0):
                raise DomainError(
                    f"dimension {j}: need 0 <= vmin <= wmax <= 1, got [{a}, {b}]"
                )
        if int(label) != label or label < 0:
            raise DomainError(f"label must be a non-negative integer, got {label!r}")
        if int(cardinality) != cardinality or cardinality < 1:
            raise DomainError(f"cardinality must be a positive integer, got {cardinality!r}")
        object.__setattr__(self, "vmin", v)
        object.__setattr__(self, "wmax", w)
        object.__setattr__(self, "label", int(label))
        object.__setattr__(self, "cardinality", int(cardinality))

    @property
    def ndim(self) -> int:
        return len(self.vmin)

    def width(self) -> tuple[float, ...]:
        return tuple(w - v for v, w in zip(self.vmin, self.wmax))


def make_point_pattern(coords: Sequence[float], label: int) -> Pattern:
    """Build the degenerate Pattern with lower == upper == coords."""
    c = _as_coords(coords, "coords")
    for j, v in enumerate(c):
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"coords[{j}] outside [0, 1]: {v}")
    return Pattern(c, c, label)


def box_from_pattern(p: Pattern) -> Hyperbox:
    """Seed a fresh hyperbox from one pattern; cardinality starts at 1."""
    return Hyperbox(p.lower, p.upper, p.label, cardinality=1)


@dataclass(frozen=True)
class HyperparamConfig:
    """Learner hyperparameters.

    gamma may be a single positive float (applied to every dimension) or a
    per-dimension sequence; learners broadcast scalars to the data's width.
    theta is normally in (0, 1] but any positive value is accepted — beyond
    1/gamma_max the candidate bounds go vacuous, which is legal and useful
    for testing.
    """

    theta: float
    gamma: float | tuple[float, ...] = 1.0
    sigma: float = 0.0
    measure: str = "longest"
    accelerated: bool = False
    epochs: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.theta) and self.theta > 0.0):
            raise DomainError(f"theta must be > 0, got {self.theta!r}")
        if isinstance(self.gamma, (int, float)):
            g = float(self.gamma)
            if not (math.isfinite(g) and g > 0.0):
                raise DomainError(f"gamma must be > 0, got {self.gamma!r}")
            object.__setattr__(self, "gamma", g)
        else:
            g = _as_coords(self.gamma, "gamma")
            if any(x <= 0.0 for x in g):
                raise DomainError(f"every gamma component must be > 0, got {g}")
            object.__setattr__(self, "gamma", g)
        if not (0.0 <= self.sigma <= 1.0):
            raise DomainError(f"sigma must lie in [0, 1], got {self.sigma!r}")
        from .kernels import SimilarityMeasure  # deferred: kernels imports core

        object.__setattr__(self, "measure", str(SimilarityMeasure(self.measure)))
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise DomainError(f"epochs must be a positive integer, got {self.epochs!r}")
        object.__setattr__(self, "epochs", int(self.epochs))

    def gamma_vector(self, ndim: int) -> np.ndarray:
        """gamma broadcast/validated against a dimensionality."""
        if isinstance(self.gamma, float):
            return np.full(ndim, self.gamma, dtype=np.float64)
        if len(self.gamma) != ndim:
            raise DomainError(
                f"gamma has {len(self.gamma)} components but data has {ndim} dimensions"
            )
        return np.asarray(self.gamma, dtype=np.float64)

    def gamma_max(self) -> float:
        if isinstance(self.gamma, float):
            return self.gamma
        return max(self.gamma)


@dataclass(frozen=True)
class TrainStats:
    """Counters reported by one training run."""

    candidates_considered: int = 0
    train_seconds: float = 0.0
    boxes_created: int = 0
    merges_performed: int = 0

    def __post_init__(self):
        if self.candidates_considered < 0 or self.boxes_created < 0 or self.merges_performed < 0:
            raise DomainError("stats counters must be non-negative")
        if self.train_seconds < 0.0:
            raise DomainError("train_seconds must be non-negative")


@dataclass(frozen=True)
class TrainedModel:
    """An ordered hyperbox collection plus the config and stats that produced it."""

    boxes: tuple[Hyperbox, ...]
    config: HyperparamConfig
    stats: TrainStats = field(default_factory=TrainStats)

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        dims = {b.ndim for b in self.boxes}
        if len(dims) > 1:
            raise DomainError(f"boxes disagree on dimensionality: {sorted(dims)}")

    def __len__(self) -> int:
        return len(self.boxes)

    @property
    def ndim(self) -> int:
        if not self.boxes:
            raise DomainError("model has no boxes")
        return self.boxes[0].ndim

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(V, W, labels, cardinalities) as read-only arrays, built lazily."""
        if not self.boxes:
            raise DomainError("model has no boxes")
        v = np.array([b.vmin for b in self.boxes], dtype=np.float64)
        w = np.array([b.wmax for b in self.boxes], dtype=np.float64)
        labels = np.array([b.label for b in self.boxes], dtype=np.int64)
        cards = np.array([b.cardinality for b in self.boxes], dtype=np.int64)
        for a in (v, w, labels, cards):
            a.setflags(write=False)
        return v, w, labels, cards

    def class_ids(self) -> tuple[int, ...]:
        seen: dict[int, None] = {}
        for b in self.boxes:
            seen.setdefault(b.label, None)
        return tuple(sorted(seen))
