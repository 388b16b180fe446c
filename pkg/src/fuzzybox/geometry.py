"""Hyperbox spatial operations: the expansion gate, min/max hull expansion,
the four-case overlap scan, and the four-case contraction repair.

All comparisons are exact IEEE comparisons with no epsilon. The overlap
cases use strict inequalities (except the two <= noted below), so boxes
that merely share a face do not overlap and contraction deliberately
leaves boxes touching.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DomainError, Hyperbox, Pattern

__all__ = [
    "OverlapResult",
    "can_expand",
    "expand",
    "overlap_test",
    "contract",
]

NO_OVERLAP = -1


class ContractionError(RuntimeError):
    """contract() was asked to repair a dimension where no overlap case holds."""


@dataclass(frozen=True)
class OverlapResult:
    """Outcome of an overlap scan.

    dim is -1 when the boxes do not overlap; otherwise it is the 0-based
    index of the minimum-overlap dimension and delta the overlap width
    there (delta is meaningless when dim == -1).
    """

    dim: int
    delta: float = 0.0

    @property
    def overlapping(self) -> bool:
        return self.dim != NO_OVERLAP


def can_expand(h: Hyperbox, p: Pattern, theta: float) -> bool:
    """True iff the hull of h and p stays within width theta on every dimension."""
    v, w, xl, xu = h.vmin, h.wmax, p.lower, p.upper
    if len(v) != len(xl):
        raise DomainError(f"dimension mismatch: box has {len(v)}, pattern has {len(xl)}")
    for j in range(len(v)):
        if max(w[j], xu[j]) - min(v[j], xl[j]) > theta:
            return False
    return True


def expand(h: Hyperbox, p: Pattern) -> Hyperbox:
    """Componentwise min/max hull of h and p; cardinality grows by one.

    Callers normally guard this with can_expand; the hull itself is total.
    """
    if h.ndim != p.ndim:
        raise DomainError(f"dimension mismatch: box has {h.ndim}, pattern has {p.ndim}")
    v = tuple(min(a, b) for a, b in zip(h.vmin, p.lower))
    w = tuple(max(a, b) for a, b in zip(h.wmax, p.upper))
    return Hyperbox(v, w, h.label, h.cardinality + 1)


def _case_delta(va: float, wa: float, vb: float, wb: float) -> float | None:
    """Overlap width of [va,wa] vs [vb,wb] on one axis, or None if disjoint.

    The four positional cases, strict except the inner <= of cases 3-4:
      1. va < vb < wa < wb      -> wa - vb
      2. vb < va < wb < wa      -> wb - va
      3. va < vb <= wb < wa     -> min(wb - va, wa - vb)
      4. vb < va <= wa < wb     -> min(wa - vb, wb - va)
    """
    if va < vb < wa < wb:
        return wa - vb
    if vb < va < wb < wa:
        return wb - va
    if va < vb and wb < wa:  # vb <= wb holds by invariant
        return min(wb - va, wa - vb)
    if vb < va and wa < wb:  # va <= wa holds by invariant
        return min(wa - vb, wb - va)
    return None


def overlap_test(a: Hyperbox, b: Hyperbox) -> OverlapResult:
    """Scan dimensions for overlap; report the first minimum-overlap dimension.

    Returns dim == -1 as soon as any dimension matches none of the four
    cases (the boxes are then disjoint or only touching). Ties on the
    overlap width keep the earlier dimension.
    """
    if a.ndim != b.ndim:
        raise DomainError(f"dimension mismatch: {a.ndim} vs {b.ndim}")
    delta_old = 1.0
    dim = NO_OVERLAP
    for j in range(a.ndim):
        width = _case_delta(a.vmin[j], a.wmax[j], b.vmin[j], b.wmax[j])
        if width is None:
            return OverlapResult(NO_OVERLAP)
        delta_new = min(width, delta_old)
        if delta_new < delta_old:
            dim = j
            delta_old = delta_new
    return OverlapResult(dim, delta_old)


def _contract_axis(
    va: float, wa: float, vb: float, wb: float
) -> tuple[float, float, float, float]:
    """Adjust one axis so the two intervals stop overlapping.

    Cases 1-2 split at the midpoint of the overlap; cases 3-4 snap a
    boundary of the enclosing interval to the enclosed one, cutting on
    the cheaper side. Raises ContractionError when no case holds.
    """
    if va < vb < wa < wb:
        mid = (wa + vb) / 2.0
        return va, mid, mid, wb
    if vb < va < wb < wa:
        mid = (wb + va) / 2.0
        return mid, wa, vb, mid
    if va < vb and wb < wa:
        if wb - va <= wa - vb:
            return wb, wa, vb, wb
        return va, vb, vb, wb
    if vb < va and wa < wb:
        if wb - va <= wa - vb:
            return va, wa, vb, va
        return va, wa, wa, wb
    raise ContractionError(
        f"no overlap case holds on this axis: a=[{va}, {wa}], b=[{vb}, {wb}]"
    )


def contract(a: Hyperbox, b: Hyperbox, dim: int) -> tuple[Hyperbox, Hyperbox]:
    """Remove the overlap between a and b along the given dimension.

    The case in force at dim is re-derived here rather than trusted from
    the caller. After contraction the boxes share at most a face, so
    overlap_test on the results reports no overlap.
    """
    if a.ndim != b.ndim:
        raise DomainError(f"dimension mismatch: {a.ndim} vs {b.ndim}")
    if not (0 <= dim < a.ndim):
        raise ContractionError(f"dimension index {dim} out of range for {a.ndim}-d boxes")
    va, wa, vb, wb = _contract_axis(a.vmin[dim], a.wmax[dim], b.vmin[dim], b.wmax[dim])
    new_a = Hyperbox(
        a.vmin[:dim] + (va,) + a.vmin[dim + 1 :],
        a.wmax[:dim] + (wa,) + a.wmax[dim + 1 :],
        a.label,
        a.cardinality,
    )
    new_b = Hyperbox(
        b.vmin[:dim] + (vb,) + b.vmin[dim + 1 :],
        b.wmax[:dim] + (wb,) + b.wmax[dim + 1 :],
        b.label,
        b.cardinality,
    )
    return new_a, new_b


# ---------------------------------------------------------------------------
# Batched forms used by the learners.
# ---------------------------------------------------------------------------


def hull_within_theta_rows(
    lo: np.ndarray, hi: np.ndarray, V: np.ndarray, W: np.ndarray, theta: float
) -> np.ndarray:
    """Eq.-style expansion gate of one interval box against many; shape (m,) bool."""
    return ((np.maximum(W, hi) - np.minimum(V, lo)) <= theta).all(axis=1)


def overlap_mask_rows(
    v: np.ndarray, w: np.ndarray, V: np.ndarray, W: np.ndarray
) -> np.ndarray:
    """Which of the boxes (V, W) overlap box (v, w); shape (m,) bool.

    A pair overlaps iff every dimension falls in one of the four cases;
    this is the vectorised yes/no form of overlap_test.
    """
    c1 = (v < V) & (V < w) & (w < W)
    c2 = (V < v) & (v < W) & (W < w)
    c3 = (v < V) & (W < w)
    c4 = (V < v) & (w < W)
    return (c1 | c2 | c3 | c4).all(axis=1)


def any_overlap_rows(v: np.ndarray, w: np.ndarray, V: np.ndarray, W: np.ndarray) -> bool:
    if V.shape[0] == 0:
        return False
    return bool(overlap_mask_rows(v, w, V, W).any())
