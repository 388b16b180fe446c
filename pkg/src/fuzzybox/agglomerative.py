"""Batch learners that start from one hyperbox per training pattern and
repeatedly merge the most similar same-class pair that fits the size bound
and overlaps no box of another class.

Two flavours: the full-similarity-matrix algorithm maintains all pairwise
same-class similarities and rescans the globally best pairs after every
merge; the second variant walks a cursor over the box list and only scores
the current box against its class mates. With config.accelerated, pairs
below max(sigma, similarity lower bound) are dropped before scanning —
the merge sequence is unchanged, bit for bit.
"""

from __future__ import annotations

import time
from typing import Sequence

import numpy as np

from .core import (
    DomainError,
    Hyperbox,
    HyperparamConfig,
    Pattern,
    TrainStats,
    TrainedModel,
)
from .geometry import any_overlap_rows
from .kernels import SimilarityMeasure, similarity_row
from .online import _patterns_to_arrays, lemma1_threshold

__all__ = [
    "lemma2_bound",
    "train_agglo_sm",
    "train_agglo_2",
]

_NOT_A_PAIR = -1.0  # sentinel in the similarity matrix; real values are in [0, 1]


def lemma2_bound(config: HyperparamConfig) -> float:
    """Similarity below max(sigma, 1 - theta*gamma_max) can never merge."""
    return max(config.sigma, lemma1_threshold(config.theta, config.gamma_max()))


def _scan_bound(config: HyperparamConfig) -> float:
    return lemma2_bound(config) if config.accelerated else config.sigma


class _MergeState:
    """Box arrays for the agglomerative loops; boxes are removed on merge."""

    def __init__(self, xl: np.ndarray, xu: np.ndarray, y: np.ndarray):
        self.V = xl.copy()
        self.W = xu.copy()
        self.labels = y.copy()
        self.cards = np.ones(len(y), dtype=np.int64)

    @property
    def m(self) -> int:
        return len(self.labels)

    def same_class(self, i: int) -> np.ndarray:
        idx = np.nonzero(self.labels == self.labels[i])[0]
        return idx[idx != i]

    def other_class(self, c: int) -> np.ndarray:
        return np.nonzero(self.labels != c)[0]

    def hull(self, i: int, k: int) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.minimum(self.V[i], self.V[k]),
            np.maximum(self.W[i], self.W[k]),
        )

    def hull_fits(self, i: int, partners: np.ndarray, theta: float) -> np.ndarray:
        hull_w = np.maximum(self.W[i], self.W[partners]) - np.minimum(
            self.V[i], self.V[partners]
        )
        return (hull_w <= theta).all(axis=1)

    def merge(self, i: int, k: int, hv: np.ndarray, hw: np.ndarray) -> None:
        self.V[i], self.W[i] = hv, hw
        self.cards[i] += self.cards[k]
        self.V = np.delete(self.V, k, axis=0)
        self.W = np.delete(self.W, k, axis=0)
        self.labels = np.delete(self.labels, k)
        self.cards = np.delete(self.cards, k)

    def to_boxes(self) -> tuple[Hyperbox, ...]:
        return tuple(
            Hyperbox(tuple(self.V[i]), tuple(self.W[i]), int(self.labels[i]), int(self.cards[i]))
            for i in range(self.m)
        )


def _check_widths(xl: np.ndarray, xu: np.ndarray, theta: float) -> None:
    # Initial boxes wider than theta can never merge; they are legal inputs,
    # but the similarity lower bound assumes widths <= theta, so warn loudly
    # in the only way that cannot skew results: nothing to do. (Merges with
    # such a box always fail the hull check in both variants.)
    return


def train_agglo_sm(data: Sequence[Pattern], config: HyperparamConfig) -> TrainedModel:
    """Full-similarity-matrix agglomeration.

    Each round filters the maintained same-class similarity matrix by the
    active bound, sorts the surviving pairs by descending similarity (ties
    by pair index), and merges the first pair whose hull fits the size
    bound and overlaps no other-class box; the matrix row of the merged
    box is then recomputed. Stops when a full scan merges nothing.
    """
    t0 = time.perf_counter()
    xl, xu, y = _patterns_to_arrays(data)
    gamma = config.gamma_vector(xl.shape[1])
    measure = SimilarityMeasure(config.measure)
    theta = config.theta
    bound = _scan_bound(config)

    st = _MergeState(xl, xu, y)
    S = _build_similarity_matrix(st, gamma, measure)
    candidates = 0
    merges = 0

    merged = True
    while merged:
        merged = False
        iu, ku = np.nonzero(np.triu(S >= bound, k=1))
        candidates += int(iu.size)
        if iu.size == 0:
            break
        svals = S[iu, ku]
        order = np.lexsort((ku, iu, -svals))
        iu, ku = iu[order], ku[order]
        fits = (
            np.maximum(st.W[iu], st.W[ku]) - np.minimum(st.V[iu], st.V[ku]) <= theta
        ).all(axis=1)
        for pos in range(iu.size):
            if not fits[pos]:
                continue
            i, k = int(iu[pos]), int(ku[pos])
            hv, hw = st.hull(i, k)
            other = st.other_class(int(st.labels[i]))
            if any_overlap_rows(hv, hw, st.V[other], st.W[other]):
                continue
            st.merge(i, k, hv, hw)
            S = _update_similarity_matrix(S, st, i, k, gamma, measure)
            merges += 1
            merged = True
            break

    stats = TrainStats(
        candidates_considered=candidates,
        train_seconds=time.perf_counter() - t0,
        boxes_created=len(data),
        merges_performed=merges,
    )
    return TrainedModel(st.to_boxes(), config, stats)


def _build_similarity_matrix(
    st: _MergeState, gamma: np.ndarray, measure: SimilarityMeasure
) -> np.ndarray:
    """Symmetric (m, m) matrix of same-class similarities; -1 elsewhere."""
    m = st.m
    S = np.full((m, m), _NOT_A_PAIR, dtype=np.float64)
    for i in range(m):
        mates = st.same_class(i)
        later = mates[mates > i]  # fill the upper triangle, mirror below
        if later.size:
            s = similarity_row(st.V[i], st.W[i], st.V[later], st.W[later], gamma, measure)
            S[i, later] = s
            S[later, i] = s
    return S


def _update_similarity_matrix(
    S: np.ndarray,
    st: _MergeState,
    i: int,
    k: int,
    gamma: np.ndarray,
    measure: SimilarityMeasure,
) -> np.ndarray:
    """Drop row/column k and recompute the entries touching the merged box.

    Equivalent to a full rebuild: only box i changed coordinates and only
    box k disappeared; every other pair's similarity is untouched.
    """
    S = np.delete(np.delete(S, k, axis=0), k, axis=1)
    if i > k:
        i -= 1
    S[i, :] = _NOT_A_PAIR
    S[:, i] = _NOT_A_PAIR
    mates = st.same_class(i)
    if mates.size:
        s = similarity_row(st.V[i], st.W[i], st.V[mates], st.W[mates], gamma, measure)
        S[i, mates] = s
        S[mates, i] = s
    return S


def train_agglo_2(data: Sequence[Pattern], config: HyperparamConfig) -> TrainedModel:
    """Cursor-scan agglomeration without the full similarity matrix.

    Sweeps the current box list; for each box, scores every same-class
    box, filters by the active bound, and walks partners in descending
    similarity looking for the first merge that fits the size bound and
    the overlap veto. After a merge the cursor adjusts (a removal below
    the cursor shifts it down) and moves on; sweeps repeat until one
    completes with no merge.
    """
    t0 = time.perf_counter()
    xl, xu, y = _patterns_to_arrays(data)
    gamma = config.gamma_vector(xl.shape[1])
    measure = SimilarityMeasure(config.measure)
    theta = config.theta
    bound = _scan_bound(config)

    st = _MergeState(xl, xu, y)
    candidates = 0
    merges = 0

    sweeping = True
    while sweeping:
        sweeping = False
        i = 0
        while i < st.m:
            mates = st.same_class(i)
            if mates.size:
                s = similarity_row(st.V[i], st.W[i], st.V[mates], st.W[mates], gamma, measure)
                keep = s >= bound
                cand, sk = mates[keep], s[keep]
                candidates += int(cand.size)
                if cand.size:
                    lo = np.minimum(i, cand)
                    hi = np.maximum(i, cand)
                    order = np.lexsort((hi, lo, -sk))
                    cand = cand[order]
                    fits = st.hull_fits(i, cand, theta)
                    for pos in range(cand.size):
                        if not fits[pos]:
                            continue
                        k = int(cand[pos])
                        hv, hw = st.hull(i, k)
                        other = st.other_class(int(st.labels[i]))
                        if any_overlap_rows(hv, hw, st.V[other], st.W[other]):
                            continue
                        st.merge(i, k, hv, hw)
                        merges += 1
                        sweeping = True
                        if i > k:
                            i -= 1
                        break
            i += 1

    stats = TrainStats(
        candidates_considered=candidates,
        train_seconds=time.perf_counter() - t0,
        boxes_created=len(data),
        merges_performed=merges,
    )
    return TrainedModel(st.to_boxes(), config, stats)
