"""Pure numeric kernels: the ramp function, hyperbox membership, and the
four inter-box similarity measures.

Every kernel returns values in [0, 1]. Inputs are assumed finite; NaN
rejection happens at pattern ingestion, not in these hot paths. The scalar
functions and the batched ``*_row`` helpers perform the same sequence of
IEEE operations, so their outputs agree bit-for-bit — equivalence tests
rely on that.
"""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .core import DomainError, Hyperbox, Pattern

__all__ = [
    "SimilarityMeasure",
    "ramp",
    "membership",
    "similarity",
]


class SimilarityMeasure(str, enum.Enum):
    """How the gap between two hyperboxes is scored.

    The middle measure is asymmetric between the two boxes; MID_MAX and
    MID_MIN combine its two orientations with max and min respectively.
    LONGEST and SHORTEST are symmetric on their own.
    """

    LONGEST = "longest"
    SHORTEST = "shortest"
    MID_MAX = "mid-max"
    MID_MIN = "mid-min"

    def __str__(self) -> str:  # keep CLI/JSON round-trips clean
        return self.value


def ramp(z: float, g: float) -> float:
    """Clamped linear decay: 1 if z*g > 1, z*g if 0 <= z*g <= 1, else 0."""
    t = z * g
    if t > 1.0:
        return 1.0
    if t < 0.0:
        return 0.0
    return t


def _check_dims(n: int, *lengths: int) -> None:
    for m in lengths:
        if m != n:
            raise DomainError(f"dimension mismatch: {lengths} vs {n}")


def membership(x: Pattern, h: Hyperbox, gamma: Sequence[float]) -> float:
    """Degree in [0, 1] to which the bounds [x.lower, x.upper] fall inside h.

    Exactly 1 iff the pattern's bounds are contained in the box on every
    dimension; decays linearly at per-dimension rate gamma outside it.
    """
    n = x.ndim
    _check_dims(n, h.ndim, len(gamma))
    xl, xu, v, w = x.lower, x.upper, h.vmin, h.wmax
    b = 1.0
    for j in range(n):
        g = gamma[j]
        bj = min(1.0 - ramp(xu[j] - w[j], g), 1.0 - ramp(v[j] - xl[j], g))
        if bj < b:
            b = bj
    return b


def similarity(
    a: Hyperbox, b: Hyperbox, gamma: Sequence[float], measure: SimilarityMeasure | str
) -> float:
    """Similarity of two hyperboxes under the chosen measure."""
    measure = SimilarityMeasure(measure)
    n = a.ndim
    _check_dims(n, b.ndim, len(gamma))
    if measure is SimilarityMeasure.LONGEST:
        return _pairwise_min(b.wmax, a.vmin, a.wmax, b.vmin, gamma)
    if measure is SimilarityMeasure.SHORTEST:
        return _pairwise_min(b.vmin, a.wmax, a.vmin, b.wmax, gamma)
    s_ab = _middle(a, b, gamma)
    s_ba = _middle(b, a, gamma)
    if measure is SimilarityMeasure.MID_MAX:
        return max(s_ab, s_ba)
    return min(s_ab, s_ba)


def _pairwise_min(p, q, r, s, gamma) -> float:
    """min over dims of min(1 - ramp(p-q), 1 - ramp(r-s))."""
    out = 1.0
    for j in range(len(gamma)):
        g = gamma[j]
        val = min(1.0 - ramp(p[j] - q[j], g), 1.0 - ramp(r[j] - s[j], g))
        if val < out:
            out = val
    return out


def _middle(a: Hyperbox, b: Hyperbox, gamma) -> float:
    # asymmetric raw value: compares max points and min points of a against b
    return _pairwise_min(b.wmax, a.wmax, a.vmin, b.vmin, gamma)


# ---------------------------------------------------------------------------
# Batched forms used by the learners. One row (pattern or box) against many
# boxes held as (m, n) arrays. Same operation order as the scalar kernels.
# ---------------------------------------------------------------------------


def _ramp_arr(z: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    return np.clip(z * gamma, 0.0, 1.0)


def membership_row(
    xl: np.ndarray, xu: np.ndarray, V: np.ndarray, W: np.ndarray, gamma: np.ndarray
) -> np.ndarray:
    """Membership of one pattern against every box in (V, W); shape (m,)."""
    upper = 1.0 - _ramp_arr(xu - W, gamma)
    lower = 1.0 - _ramp_arr(V - xl, gamma)
    return np.minimum(upper, lower).min(axis=1)


def similarity_row(
    v: np.ndarray,
    w: np.ndarray,
    V: np.ndarray,
    W: np.ndarray,
    gamma: np.ndarray,
    measure: SimilarityMeasure,
) -> np.ndarray:
    """Similarity of box (v, w) against every box in (V, W); shape (m,)."""
    if measure is SimilarityMeasure.LONGEST:
        return np.minimum(
            1.0 - _ramp_arr(W - v, gamma), 1.0 - _ramp_arr(w - V, gamma)
        ).min(axis=1)
    if measure is SimilarityMeasure.SHORTEST:
        return np.minimum(
            1.0 - _ramp_arr(V - w, gamma), 1.0 - _ramp_arr(v - W, gamma)
        ).min(axis=1)
    s_ab = np.minimum(1.0 - _ramp_arr(W - w, gamma), 1.0 - _ramp_arr(v - V, gamma)).min(axis=1)
    s_ba = np.minimum(1.0 - _ramp_arr(w - W, gamma), 1.0 - _ramp_arr(V - v, gamma)).min(axis=1)
    if measure is SimilarityMeasure.MID_MAX:
        return np.maximum(s_ab, s_ba)
    return np.minimum(s_ab, s_ba)
