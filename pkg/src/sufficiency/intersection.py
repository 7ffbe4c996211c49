"""Pairs feasible for both groups at once, i.e. predictive parity.

The lower boundary of the common region is the pointwise maximum of the
two group curves.  On any interval where both groups sit on fixed pieces,
which curve is on top is decided by the sign of a quadratic (``phi``), so
the whole boundary can be walked piece by piece with exact splits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._quadratic import real_roots
from .errors import EmptyIntersection, IndexOutOfRange, POutOfRange
from .region import boundary_piece, boundary_q, piece_q
from .score_model import GroupDistribution

# roots of phi this close to a piece edge are the edge itself; the flat
# pieces give phi structural roots at the base rates that rounding can
# nudge just inside an interval
ROOT_EDGE_TOL = 1e-9
# absolute rounding floor of phi's coefficients
PHI_NOISE = 64 * 2.0**-52


@dataclass(frozen=True)
class BoundarySegment:
    """A maximal interval ``[p_left, p_right)`` with fixed pieces and active group.

    ``k`` and ``l`` are the 1-based piece indices of groups 0 and 1.  The
    vertical segment (``is_vertical``) has ``p_left == p_right == p_max`` and
    runs from ``q_bottom`` up to ``q_top``; its active group's index is 1.
    """

    p_left: float
    p_right: float
    active_group: int
    k: int
    l: int
    is_vertical: bool = False
    q_bottom: float | None = None
    q_top: float | None = None

    @property
    def active_index(self) -> int:
        return self.k if self.active_group == 0 else self.l


@dataclass(frozen=True)
class IntersectionSummary:
    p_max: float
    q_min: float
    segments: tuple[BoundarySegment, ...]
    nonempty: bool = True

    @property
    def p_min(self) -> float:
        return self.segments[0].p_left


def intersection_nonempty(d0: GroupDistribution, d1: GroupDistribution) -> bool:
    """Bounds test for a nondegenerate common pair."""
    pi_hi = max(d0.base_rate, d1.base_rate)
    pi_lo = min(d0.base_rate, d1.base_rate)
    return (pi_hi < min(d0.s_max, d1.s_max)
            and max(d0.s_min, d1.s_min) < pi_lo)


def _require_nonempty(d0, d1):
    if not intersection_nonempty(d0, d1):
        raise EmptyIntersection(
            "group regions do not intersect: need max(pi) < min(s_max) "
            "and max(s_min) < min(pi)")


def max_p_below(dist: GroupDistribution, level: float) -> float:
    """``max{p <= s_max : q(p) <= level}`` for ``s_min <= level``.

    If the vertical edge already starts at or below ``level`` this is
    ``s_max``; otherwise the arc crossing ``q = level`` is solved in closed
    form.
    """
    pi = dist.base_rate
    # q_break is increasing as k decreases; find smallest k with q_k <= level
    k = next(i + 1 for i, qk in enumerate(dist.q_break) if qk <= level)
    if k == 1:
        return dist.s_max
    s_k, c_k = dist.scores[k - 1], dist.c[k - 1]
    return ((s_k + c_k) * level - s_k * pi) / (level - pi + c_k)


def compute_pmax_qmin(d0: GroupDistribution, d1: GroupDistribution) -> tuple[float, float]:
    """Right end ``p_max`` of the common boundary and the smallest common FOR.

    The group with the larger base rate limits ``p`` (its curve must stay
    below the other base rate); the other group limits ``q`` at the
    left end ``p = max(pi)``.
    """
    _require_nonempty(d0, d1)
    hi, lo = (d1, d0) if d1.base_rate > d0.base_rate else (d0, d1)
    p_max = min(max_p_below(hi, lo.base_rate), lo.s_max)

    k = next(k for k in range(2, lo.m + 1) if lo.p_break[k - 1] <= hi.base_rate)
    if k == lo.m:
        q_lo = lo.s_min
    else:
        s_k, c_k, pi_lo, pi_hi = lo.scores[k - 1], lo.c[k - 1], lo.base_rate, hi.base_rate
        q_lo = ((pi_lo - c_k) * pi_hi - s_k * pi_lo) / (pi_hi - s_k - c_k)
    q_min = max(q_lo, hi.s_min)
    return p_max, q_min


def phi_coefficients(d0: GroupDistribution, d1: GroupDistribution,
                     k: int, l: int) -> tuple[float, float, float]:
    """Coefficients ``(A, B, C)`` of ``phi(p) = A p^2 + B p + C``.

    On ``J^0_k`` intersected with ``J^1_l``, ``phi(p) >= 0`` exactly when
    group 0's boundary curve is at or above group 1's.
    """
    if not (1 < k <= d0.m and 1 < l <= d1.m):
        raise IndexOutOfRange(f"piece indices ({k}, {l}) out of range")
    pi0, s0, c0 = d0.base_rate, d0.scores[k - 1], d0.c[k - 1]
    pi1, s1, c1 = d1.base_rate, d1.scores[l - 1], d1.c[l - 1]
    a = (pi0 - c0) - (pi1 - c1)
    b = s1 * pi1 - s0 * pi0 + (s0 + c0) * (pi1 - c1) - (s1 + c1) * (pi0 - c0)
    c = (s1 + c1) * s0 * pi0 - (s0 + c0) * s1 * pi1
    return a, b, c


def phi(coeffs, p):
    a, b, c = coeffs
    return (a * p + b) * p + c


def _active_group(d0, d1, k, l, coeffs, p) -> int:
    """Group whose curve is on top at ``p``, ties to group 0.

    The sign of ``phi`` decides unless it is within the rounding floor of
    its coefficients, which are differences of O(1) products.  That
    happens for curves that nearly coincide or between nearly equal roots;
    there the two curves are compared directly.
    """
    val = phi(coeffs, p)
    if abs(val) > PHI_NOISE * (1.0 + p + p * p):
        return 0 if val > 0.0 else 1
    return 1 if piece_q(d1, l, p) > piece_q(d0, k, p) else 0


def trace_boundary(d0: GroupDistribution, d1: GroupDistribution,
                   visitor: Callable[[BoundarySegment], None] | None = None
                   ) -> IntersectionSummary:
    """Walk the common lower boundary left to right.

    Every group breakpoint and every root of ``phi`` strictly inside the
    current piece pair opens a new segment.  ``visitor`` is called on each
    segment in increasing ``p``, the vertical segment last when present.
    """
    _require_nonempty(d0, d1)
    p_max, q_min = compute_pmax_qmin(d0, d1)
    p_left = max(d0.base_rate, d1.base_rate)
    segments: list[BoundarySegment] = []

    def emit(seg):
        segments.append(seg)
        if visitor is not None:
            visitor(seg)

    k = l = None
    while p_left < p_max:
        k = max(k for k in range(2, d0.m + 1) if d0.p_break[k - 2] > p_left)
        l = max(l for l in range(2, d1.m + 1) if d1.p_break[l - 2] > p_left)
        p_right = min(d0.p_break[k - 2], d1.p_break[l - 2], p_max)
        coeffs = phi_coefficients(d0, d1, k, l)
        cuts = [r for r in real_roots(*coeffs)
                if p_left + ROOT_EDGE_TOL < r < p_right - ROOT_EDGE_TOL]
        for cut in sorted(set(cuts)) + [p_right]:
            emit(BoundarySegment(p_left, cut, _active_group(d0, d1, k, l, coeffs,
                                                            0.5 * (p_left + cut)), k, l))
            p_left = cut

    if p_max == min(d0.s_max, d1.s_max):
        active = 0 if d0.s_max <= d1.s_max else 1
        q_bottom = intersection_boundary_q(d0, d1, p_max)
        q_top = min(d0.base_rate, d1.base_rate)
        kv = 1 if active == 0 else int(boundary_piece(d0, p_max))
        lv = 1 if active == 1 else int(boundary_piece(d1, p_max))
        emit(BoundarySegment(p_max, p_max, active, kv, lv, True, q_bottom, q_top))

    return IntersectionSummary(p_max, q_min, tuple(segments), True)


def intersection_boundary_q(d0: GroupDistribution, d1: GroupDistribution, p):
    """Lowest FOR feasible for both groups: ``max(q0(p), q1(p))``."""
    p_arr = np.asarray(p, dtype=np.float64)
    lo = max(d0.base_rate, d1.base_rate)
    hi = min(d0.s_max, d1.s_max)
    if np.any(p_arr < lo - 1e-12) or np.any(p_arr > hi + 1e-12):
        raise POutOfRange(f"PPV must lie in [{lo!r}, {hi!r}], got {p!r}")
    p_arr = np.clip(p_arr, lo, hi)
    out = np.maximum(boundary_q(d0, p_arr), boundary_q(d1, p_arr))
    return float(out) if p_arr.ndim == 0 else out


@dataclass(frozen=True)
class DegenerateEdge:
    """Part of a group's constant-prediction edge inside the other group's region.

    ``orientation`` is ``"horizontal"`` (the group never selects, ``q``
    fixed at its base rate) or ``"vertical"`` (always selects, ``p`` fixed).
    The edge runs over ``[lo, hi]`` in the free coordinate.
    """

    group: int
    other: int
    orientation: str
    fixed: float
    lo: float
    hi: float


@dataclass(frozen=True)
class DegenerateOptions:
    trivial_point: tuple[float, float]
    trivial_rule: str
    edges: tuple[DegenerateEdge, ...]


def degenerate_pairs(d0: GroupDistribution, d1: GroupDistribution) -> DegenerateOptions:
    """Describe classifiers that satisfy sufficiency by being constant on a group.

    Always includes predicting group membership, which lands on
    ``(max(pi), min(pi))``.  Edge intersections are listed wherever a
    group's base rate falls inside the other group's score range.
    """
    dists = (d0, d1)
    pis = (d0.base_rate, d1.base_rate)
    hi = 1 if pis[1] > pis[0] else 0
    if pis[0] == pis[1]:
        rule = "constant rule (equal base rates)"
    else:
        rule = f"predict group membership (R = 1 iff A = {hi})"
    edges = []
    for b in (0, 1):
        a = 1 - b
        da, pa, pb = dists[a], pis[a], pis[b]
        if pa == pb or not (da.s_min <= pb <= da.s_max):
            continue
        if pb < pa:
            # group b never selects: q = pi_b, crossing region a for p up to its limit
            edges.append(DegenerateEdge(b, a, "horizontal", pb, pa, max_p_below(da, pb)))
        else:
            # group b always selects: p = pi_b, q from region a's curve up to pi_a
            edges.append(DegenerateEdge(b, a, "vertical", pb, float(boundary_q(da, pb)), pa))
    return DegenerateOptions((max(pis), min(pis)), rule, tuple(edges))
