"""Incremental learners: the original online algorithm (expand, overlap-test,
contract) and the improved online algorithm (overlap-vetoed expansion, no
contraction), each with an optional membership lower-bound filter that
discards hyperbox candidates which cannot legally expand.

Training is strictly sequential: the model state after pattern t feeds
pattern t+1. Turning the filter on changes which candidates are examined,
never the resulting model — the equivalence tests hold this bit-exactly.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import (
    DomainError,
    Hyperbox,
    HyperparamConfig,
    Pattern,
    TrainStats,
    TrainedModel,
)
from .geometry import hull_within_theta_rows, overlap_mask_rows, overlap_test, _contract_axis
from .kernels import membership_row

__all__ = [
    "OnlineVariant",
    "CandidateFilterBound",
    "lemma1_filter",
    "train_online",
]


class OnlineVariant(str, enum.Enum):
    ORIGINAL = "onln"
    IOL = "iol"

    def __str__(self) -> str:
        return self.value


def lemma1_threshold(theta: float, gamma_max: float) -> float:
    """Membership below this can never satisfy the expansion bound."""
    return 1.0 - theta * gamma_max


@dataclass(frozen=True)
class CandidateFilterBound:
    """The online candidate filter: keep boxes with membership >= threshold.

    threshold may be <= 0 (theta * gamma_max >= 1), in which case the
    filter passes everything.
    """

    threshold: float

    @classmethod
    def from_config(cls, config: HyperparamConfig) -> "CandidateFilterBound":
        return cls(lemma1_threshold(config.theta, config.gamma_max()))


def lemma1_filter(
    candidates: Iterable[tuple[Hyperbox, float]], bound: CandidateFilterBound
) -> list[tuple[Hyperbox, float]]:
    """Drop (box, membership) pairs below the bound, preserving order."""
    return [(h, b) for h, b in candidates if b >= bound.threshold]


def _patterns_to_arrays(data: Sequence[Pattern]):
    if len(data) == 0:
        raise DomainError("training data is empty")
    n = data[0].ndim
    for i, p in enumerate(data):
        if p.ndim != n:
            raise DomainError(f"pattern {i} has {p.ndim} dimensions, expected {n}")
    xl = np.array([p.lower for p in data], dtype=np.float64)
    xu = np.array([p.upper for p in data], dtype=np.float64)
    y = np.array([p.label for p in data], dtype=np.int64)
    return xl, xu, y


class _BoxStore:
    """Growable (V, W, label, cardinality) buffers plus per-class index lists."""

    def __init__(self, n: int, capacity: int):
        capacity = max(capacity, 4)
        self.V = np.empty((capacity, n), dtype=np.float64)
        self.W = np.empty((capacity, n), dtype=np.float64)
        self.labels = np.empty(capacity, dtype=np.int64)
        self.cards = np.empty(capacity, dtype=np.int64)
        self.m = 0
        self.by_class: dict[int, np.ndarray] = {}
        self.class_counts: dict[int, int] = {}

    def class_view(self, c: int) -> np.ndarray:
        idx = self.by_class.get(c)
        if idx is None:
            return np.empty(0, dtype=np.int64)
        return idx[: self.class_counts[c]]

    def other_view(self, c: int) -> np.ndarray:
        # ascending global index == creation order
        labels = self.labels[: self.m]
        return np.nonzero(labels != c)[0]

    def add(self, xl: np.ndarray, xu: np.ndarray, c: int) -> int:
        if self.m == len(self.labels):
            grow = self.m * 2
            self.V = np.concatenate([self.V, np.empty_like(self.V)])
            self.W = np.concatenate([self.W, np.empty_like(self.W)])
            self.labels = np.concatenate([self.labels, np.empty(grow - self.m, np.int64)])
            self.cards = np.concatenate([self.cards, np.empty(grow - self.m, np.int64)])
        i = self.m
        self.V[i] = xl
        self.W[i] = xu
        self.labels[i] = c
        self.cards[i] = 1
        self.m += 1
        idx = self.by_class.get(c)
        cnt = self.class_counts.get(c, 0)
        if idx is None or cnt == len(idx):
            new = np.empty(max(16, cnt * 2), dtype=np.int64)
            if idx is not None:
                new[:cnt] = idx[:cnt]
            self.by_class[c] = idx = new
        idx[cnt] = i
        self.class_counts[c] = cnt + 1
        return i

    def to_boxes(self) -> tuple[Hyperbox, ...]:
        return tuple(
            Hyperbox(
                tuple(self.V[i]),
                tuple(self.W[i]),
                int(self.labels[i]),
                int(self.cards[i]),
            )
            for i in range(self.m)
        )


def train_online(
    data: Sequence[Pattern],
    config: HyperparamConfig,
    variant: OnlineVariant | str = OnlineVariant.ORIGINAL,
) -> TrainedModel:
    """Single-pass (times config.epochs) incremental training in data order.

    Per pattern: same-class boxes are scored by membership and walked in
    descending order (ties keep creation order). A membership of exactly 1
    stops the walk (the improved variant also credits the winning box's
    cardinality). The original variant expands the first candidate within
    the size bound and then contracts it against every overlapping box of
    another class; the improved variant commits an expansion only when it
    overlaps no box of another class, otherwise it tries the next
    candidate. When nothing succeeds a fresh box is created.

    With config.accelerated, candidates below the membership lower bound
    are dropped before the walk; stats.candidates_considered sums the
    walked list sizes either way.
    """
    variant = OnlineVariant(variant)
    t0 = time.perf_counter()
    xl_all, xu_all, y_all = _patterns_to_arrays(data)
    n = xl_all.shape[1]
    gamma = config.gamma_vector(n)
    gamma_max = float(gamma.max())
    theta = config.theta
    threshold = lemma1_threshold(theta, gamma_max)
    iol = variant is OnlineVariant.IOL

    store = _BoxStore(n, len(data))
    candidates_considered = 0
    boxes_created = 0

    for _ in range(config.epochs):
        for t in range(len(data)):
            xl, xu, c = xl_all[t], xu_all[t], int(y_all[t])
            same = store.class_view(c)
            # A pattern wider than theta can never be absorbed: every hull
            # would violate the size bound, so skip the walk outright.
            wide = bool(((xu - xl) > theta).any())
            if wide or same.size == 0:
                store.add(xl, xu, c)
                boxes_created += 1
                continue

            b = membership_row(xl, xu, store.V[same], store.W[same], gamma)
            if config.accelerated:
                keep = b >= threshold
                same, b = same[keep], b[keep]
            candidates_considered += int(same.size)
            if same.size == 0:
                store.add(xl, xu, c)
                boxes_created += 1
                continue

            order = np.argsort(-b, kind="stable")
            walk, bw = same[order], b[order]
            fits = hull_within_theta_rows(xl, xu, store.V[walk], store.W[walk], theta)

            committed = False
            other = None
            v_other = w_other = None
            for pos in range(walk.size):
                h = int(walk[pos])
                if bw[pos] == 1.0:
                    if iol:
                        store.cards[h] += 1
                    committed = True
                    break
                if not fits[pos]:
                    continue
                hv = np.minimum(store.V[h], xl)
                hw = np.maximum(store.W[h], xu)
                if other is None:
                    other = store.other_view(c)
                    v_other, w_other = store.V[other], store.W[other]
                if iol:
                    if other.size and overlap_mask_rows(hv, hw, v_other, w_other).any():
                        continue
                    store.V[h], store.W[h] = hv, hw
                    store.cards[h] += 1
                    committed = True
                    break
                # original variant: commit, then repair any overlaps
                store.V[h], store.W[h] = hv, hw
                store.cards[h] += 1
                if other.size:
                    flagged = other[overlap_mask_rows(hv, hw, v_other, w_other)]
                    for o in flagged:
                        _contract_pair(store, h, int(o))
                committed = True
                break

            if not committed:
                store.add(xl, xu, c)
                boxes_created += 1

    stats = TrainStats(
        candidates_considered=candidates_considered,
        train_seconds=time.perf_counter() - t0,
        boxes_created=boxes_created,
        merges_performed=0,
    )
    return TrainedModel(store.to_boxes(), config, stats)


def _contract_pair(store: _BoxStore, h: int, o: int) -> None:
    """Re-test h against o and, if still overlapping, contract on the
    minimum-overlap dimension. h may have shrunk since o was flagged."""
    a = Hyperbox(tuple(store.V[h]), tuple(store.W[h]), int(store.labels[h]))
    b = Hyperbox(tuple(store.V[o]), tuple(store.W[o]), int(store.labels[o]))
    res = overlap_test(a, b)
    if not res.overlapping:
        return
    d = res.dim
    va, wa, vb, wb = _contract_axis(
        store.V[h, d], store.W[h, d], store.V[o, d], store.W[o, d]
    )
    store.V[h, d], store.W[h, d] = va, wa
    store.V[o, d], store.W[o, d] = vb, wb
