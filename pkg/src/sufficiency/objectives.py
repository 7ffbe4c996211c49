"""Objectives over common (PPV, FOR) pairs and their exact minimization.

Both objectives improve as ``p`` grows along any constant-rate line, so
their minimizers lie on the common boundary.  On each traced segment the
objective restricted to the active arc is a ratio of quadratics whose
derivative numerator is itself quadratic; the global minimum is therefore
among segment endpoints, the interior roots of that numerator, and the
top of the vertical segment.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ._quadratic import exact_real_roots
from .errors import DegeneratePair, InputError
from .intersection import (
    BoundarySegment,
    intersection_boundary_q,
    trace_boundary,
)
from .region import FeasiblePair
from .score_model import GroupDistribution

# objective values closer than this count as ties
TIE_TOL = 1e-12


@dataclass(frozen=True)
class LossSpec:
    """Misclassification costs; correct predictions cost nothing.

    ``l01`` is charged for predicting 0 when the label is 1 (a miss) and
    ``l10`` for predicting 1 when the label is 0.
    """

    l01: float = 1.0
    l10: float = 1.0

    def __post_init__(self):
        if not self.l01 + self.l10 > 0:
            raise InputError("loss costs must satisfy l01 + l10 > 0")

    @property
    def total(self) -> float:
        return self.l01 + self.l10


ZERO_ONE = LossSpec(1.0, 1.0)


@dataclass(frozen=True)
class PopulationWeights:
    w0: float
    w1: float
    pi0: float
    pi1: float

    def __post_init__(self):
        if self.w0 < 0 or self.w1 < 0 or abs(self.w0 + self.w1 - 1.0) > 1e-9:
            raise InputError(f"group weights ({self.w0}, {self.w1}) must be nonnegative and sum to 1")

    @classmethod
    def from_groups(cls, d0: GroupDistribution, d1: GroupDistribution,
                    w0: float = 0.5, w1: float | None = None) -> "PopulationWeights":
        if w1 is None:
            w1 = 1.0 - w0
        total = w0 + w1
        return cls(w0 / total, w1 / total, d0.base_rate, d1.base_rate)

    @property
    def pi_agg(self) -> float:
        return self.w0 * self.pi0 + self.w1 * self.pi1

    @property
    def k_sep(self) -> float:
        """``2 w0 w1 |pi0 - pi1|``, the expected gap between group and overall base rate."""
        return 2.0 * self.w0 * self.w1 * abs(self.pi0 - self.pi1)

    @property
    def k_tilde(self) -> float:
        pi = self.pi_agg
        return self.k_sep / (pi * (1.0 - pi))

    def group_rate(self, a: int) -> float:
        return self.pi0 if a == 0 else self.pi1


@dataclass(frozen=True)
class OptimalSolution:
    pair: FeasiblePair
    objective_value: float
    segment: BoundarySegment
    candidate_kind: str  # "endpoint", "interior_root" or "vertical_top"
    degenerate_objective: bool = False


Objective = Union[LossSpec, str]


def _check_pair(p, q):
    if np.any(np.asarray(p) == np.asarray(q)):
        raise DegeneratePair("objective undefined when p == q")


def expected_loss(pair, weights: PopulationWeights, loss: LossSpec = ZERO_ONE):
    """Expected cost of any sufficient classifier attaining ``pair``.

    Accepts arrays for ``p`` and ``q``.

    Examples
    --------
    >>> w = PopulationWeights(0.5, 0.5, 0.5, 0.62)
    >>> round(expected_loss((0.8, 0.35), w), 12)
    0.28
    """
    p, q = pair
    _check_pair(p, q)
    pi = weights.pi_agg
    return pi * loss.l01 + (pi - q) / (p - q) * (loss.l10 - p * loss.total)


def dsep(pair, weights: PopulationWeights):
    """Deviation from separation (expected total-variation gap of TPR/FPR).

    Zero whenever the group base rates coincide.
    """
    p, q = pair
    _check_pair(p, q)
    pi = weights.pi_agg
    return weights.k_tilde * (pi * (1.0 - p) + q * (p - pi)) / (p - q)


def evaluate(objective: Objective, pair, weights: PopulationWeights):
    if isinstance(objective, LossSpec):
        return expected_loss(pair, weights, objective)
    if objective == "separation":
        return dsep(pair, weights)
    raise InputError(f"unknown objective {objective!r}")


def _exact_piece(active: GroupDistribution, k: int) -> tuple[Fraction, Fraction, Fraction]:
    """Base rate, score and offset of piece ``k`` as exact rationals.

    The critical-point quadratics are built from these in exact arithmetic.
    Near the arc pole the objectives are steep, so rounding in the
    coefficients or in the stored base rate and offset moves roots by
    ~1e-13, enough to leave slopes of ~1e-8.
    """
    scores = [Fraction(x) for x in active.scores]
    weights = [Fraction(x) for x in active.weights]
    s = scores[k - 1]
    return (sum(x * w for x, w in zip(scores, weights)), s,
            sum(w * (x - s) for x, w in zip(scores[:k - 1], weights[:k - 1])))


def loss_critical_points(active: GroupDistribution, k: int,
                         weights: PopulationWeights, loss: LossSpec = ZERO_ONE) -> list[float]:
    """Zeros of the derivative of the loss along piece ``k`` of ``active``'s curve.

    Returns all real roots; callers keep those inside the interval they
    are examining.  On the flat last piece the only root is the excluded
    endpoint at the base rate, so none are returned.
    """
    if k == active.m:
        return []
    pa, s, c = _exact_piece(active, k)
    pi, lam, l10 = map(Fraction, (weights.pi_agg, loss.total, loss.l10))
    d = pi - pa + c
    e = (pa - pi) * s - c * pi
    f = lam * (d * (pa + s) + e) - l10 * d
    g = -2 * lam * d * pa * s - 2 * l10 * e
    h = (l10 * d - lam * e) * pa * s + l10 * e * (pa + s)
    return exact_real_roots(f, g, h)


def dsep_critical_points(active: GroupDistribution, k: int,
                         weights: PopulationWeights) -> list[float]:
    """Zeros of the derivative of :func:`dsep` along piece ``k`` of ``active``.

    As in :func:`loss_critical_points`, the flat last piece has none.
    """
    if k == active.m:
        return []
    pa, s, c = _exact_piece(active, k)
    pi = Fraction(weights.pi_agg)
    a = pa - pi - c
    b = pi * (2 * c - pa + s + 1) - s * pa
    cc = pi * (s * pa - s - c)
    d = -a * (pa + s) - b
    e = 2 * a * pa * s - 2 * cc
    f = b * pa * s + cc * (pa + s)
    return exact_real_roots(d, e, f)


def _better(cand, best) -> bool:
    value, p, q = cand[0], cand[1], cand[2]
    bvalue, bp, bq = best[0], best[1], best[2]
    if value < bvalue - TIE_TOL:
        return True
    if value > bvalue + TIE_TOL:
        return False
    return (p, q) > (bp, bq)


def minimize_on_boundary(d0: GroupDistribution, d1: GroupDistribution,
                         weights: PopulationWeights,
                         objective: Objective = ZERO_ONE) -> OptimalSolution:
    """Exact minimizer of a loss or of ``"separation"`` over sufficient classifiers.

    Ties (within ``1e-12``) go to the larger ``p``, then the larger ``q``.
    When the separation objective is identically zero (equal base rates)
    the leftmost boundary point is returned and flagged.
    """
    if not (isinstance(objective, LossSpec) or objective == "separation"):
        raise InputError(f"unknown objective {objective!r}")
    dists = (d0, d1)
    candidates = []

    def add(p, segment, kind):
        q = float(intersection_boundary_q(d0, d1, p))
        candidates.append((float(evaluate(objective, (p, q), weights)), p, q, segment, kind))

    def visit(seg: BoundarySegment):
        if seg.is_vertical:
            q = seg.q_top
            candidates.append((float(evaluate(objective, (seg.p_right, q), weights)),
                               seg.p_right, q, seg, "vertical_top"))
            return
        if not candidates:
            add(seg.p_left, seg, "endpoint")
        add(seg.p_right, seg, "endpoint")
        active = dists[seg.active_group]
        idx = seg.active_index
        if isinstance(objective, LossSpec):
            roots = loss_critical_points(active, idx, weights, objective)
        else:
            roots = dsep_critical_points(active, idx, weights)
        for r in roots:
            if seg.p_left < r < seg.p_right:
                add(r, seg, "interior_root")

    summary = trace_boundary(d0, d1, visit)

    if objective == "separation" and weights.k_sep == 0.0:
        seg = summary.segments[0]
        p = seg.p_left
        q = float(intersection_boundary_q(d0, d1, p))
        return OptimalSolution(FeasiblePair(p, q), 0.0, seg, "endpoint", True)

    best = candidates[0]
    for cand in candidates[1:]:
        if _better(cand, best):
            best = cand
    value, p, q, seg, kind = best
    return OptimalSolution(FeasiblePair(p, q), value, seg, kind)


def unconstrained_loss(d0: GroupDistribution, d1: GroupDistribution,
                       weights: PopulationWeights, loss: LossSpec = ZERO_ONE) -> float:
    """Bayes-optimal expected loss with no fairness constraint.

    Each calibrated bin is predicted positive when ``l10 (1 - s) < l01 s``.
    """
    total = 0.0
    for w, d in ((weights.w0, d0), (weights.w1, d1)):
        s = d.scores_arr
        per_bin = np.minimum(loss.l10 * (1.0 - s), loss.l01 * s)
        total += w * float(np.dot(d.weights_arr, per_bin))
    return total
