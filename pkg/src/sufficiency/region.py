"""Feasible (PPV, FOR) pairs of a single group.

For a fixed selection rate ``mu`` the best achievable PPV comes from a soft
threshold: select every bin above a pivot, randomize on the pivot bin, and
reject everything below.  Mixing that rule with an independent coin of
bias ``mu`` slides the pair linearly towards the center ``(pi, pi)``, which
makes the region star-shaped and lets us reach any interior pair.

Functions taking a PPV or selection rate accept scalars or numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InfeasiblePair, MuOutOfRange, POutOfRange
from .score_model import GroupDistribution

MEMBERSHIP_TOL = 1e-9
# slack for p slightly outside [pi, s_max] from rounding
_P_SLACK = 1e-12


@dataclass(frozen=True)
class FeasiblePair:
    p: float
    q: float

    def __iter__(self):
        yield self.p
        yield self.q


@dataclass(frozen=True)
class SelectionRule:
    """Per-bin selection probabilities ``P(R=1 | s_i)``, aligned with ``scores``."""

    scores: tuple[float, ...]
    select_prob: tuple[float, ...]

    def __post_init__(self):
        if len(self.scores) != len(self.select_prob):
            raise ValueError("scores and select_prob must align")
        for x in self.select_prob:
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"selection probability {x!r} not in [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array(self.select_prob, dtype=np.float64)


@dataclass(frozen=True)
class RuleMetrics:
    """Exact selection rate, PPV and FOR of a rule; undefined rates are NaN."""

    mu: float
    ppv: float
    for_: float


def _as_pair(pair) -> tuple[float, float]:
    p, q = pair
    return float(p), float(q)


def _scalar_or_array(x, was_scalar):
    return float(x) if was_scalar else x


def _check_mu(mu):
    mu_arr = np.asarray(mu, dtype=np.float64)
    if np.any(~((mu_arr > 0.0) & (mu_arr < 1.0))):
        raise MuOutOfRange(f"selection rate must lie in (0, 1), got {mu!r}")
    return mu_arr


def pivot_index(dist: GroupDistribution, mu):
    """0-based index of ``k*(mu) = min{k : mu_k >= mu}``.

    At ``mu == mu_k`` exactly this returns ``k``, i.e. the hard threshold.
    """
    return np.searchsorted(dist.mu_arr, mu, side="left")


def p_star(dist: GroupDistribution, mu):
    """Largest PPV attainable at selection rate ``mu``: ``s_k + c_k / mu``.

    Examples
    --------
    >>> from sufficiency.score_model import build_group_distribution
    >>> d = build_group_distribution([(0.9, .25), (0.5, .5), (0.1, .25)])
    >>> round(p_star(d, 0.5), 12)
    0.7
    """
    mu_arr = _check_mu(mu)
    idx = pivot_index(dist, mu_arr)
    out = dist.scores_arr[idx] + dist.c_arr[idx] / mu_arr
    return _scalar_or_array(out, mu_arr.ndim == 0)


def q_star(dist: GroupDistribution, mu):
    """FOR paired with :func:`p_star`: ``s_k - d_k / (1 - mu)``.

    This is ``(pi - mu p*) / (1 - mu)`` rearranged so that rates close to
    one do not cancel; ``d_k`` is the tail offset of the pivot bin.
    """
    mu_arr = _check_mu(mu)
    idx = pivot_index(dist, mu_arr)
    out = dist.scores_arr[idx] - dist.tail_offset_arr[idx] / (1.0 - mu_arr)
    return _scalar_or_array(out, mu_arr.ndim == 0)


def soft_threshold_rule(dist: GroupDistribution, mu: float) -> SelectionRule:
    """The PPV-maximizing rule at rate ``mu``."""
    mu = float(_check_mu(mu))
    k = int(pivot_index(dist, mu))
    below = dist.mu[k - 1] if k > 0 else 0.0
    frac = (mu - below) / dist.weights[k]
    probs = [1.0] * k + [min(max(frac, 0.0), 1.0)] + [0.0] * (dist.m - k - 1)
    return SelectionRule(dist.scores, tuple(probs))


def boundary_piece(dist: GroupDistribution, p):
    """1-based piece index ``k`` with ``p`` in ``J_k = [p_k, p_{k-1})``.

    ``k == 1`` marks ``p == s_max`` (the vertical edge) and ``k == m`` the
    flat piece where ``q == s_min``.
    """
    ascending = dist.p_break_arr[::-1]
    count = np.searchsorted(ascending, p, side="right")
    return dist.m - count + 1


def piece_q(dist: GroupDistribution, k, p):
    """Evaluate the hyperbolic arc of piece ``k`` (1-based, ``1 < k <= m``) at ``p``.

    The last piece is returned as the constant ``s_min``: its arc formula
    reduces to that value but is 0/0 at ``p == pi`` and loses digits near it.
    """
    idx = np.asarray(k) - 1
    s_k = dist.scores_arr[idx]
    c_k = dist.c_arr[idx]
    pi = dist.base_rate
    with np.errstate(divide="ignore", invalid="ignore"):
        arc = ((pi - c_k) * p - s_k * pi) / (p - s_k - c_k)
    out = np.where(idx == dist.m - 1, dist.s_min, arc)
    return out if out.ndim else float(out)


def boundary_q(dist: GroupDistribution, p):
    """Lowest feasible FOR at PPV ``p``, for ``pi <= p <= s_max``.

    Returns ``s_min`` on the flat piece (including ``p == pi``) and
    ``q_1``, the bottom of the vertical edge, at ``p == s_max``.

    Examples
    --------
    >>> from sufficiency.score_model import build_group_distribution
    >>> d = build_group_distribution([(0.9, .25), (0.5, .5), (0.1, .25)])
    >>> round(boundary_q(d, 0.7), 12), boundary_q(d, 0.55)
    (0.3, 0.1)
    """
    p_arr = np.asarray(p, dtype=np.float64)
    lo, hi = dist.base_rate, dist.s_max
    if np.any(p_arr < lo - _P_SLACK) or np.any(p_arr > hi + _P_SLACK) or np.any(np.isnan(p_arr)):
        raise POutOfRange(f"PPV must lie in [{lo!r}, {hi!r}], got {p!r}")
    p_arr = np.clip(p_arr, lo, hi)
    k = boundary_piece(dist, p_arr)
    inner = (k > 1) & (k < dist.m)
    safe_k = np.where(inner, k, 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        arc = piece_q(dist, safe_k, p_arr)
    q1 = dist.q_break[0]
    out = np.where(k >= dist.m, dist.s_min, np.where(k <= 1, q1, arc))
    return _scalar_or_array(out, p_arr.ndim == 0)


def contains(dist: GroupDistribution, pair, tol: float = MEMBERSHIP_TOL) -> bool:
    """Whether a nonconstant rule on this group attains ``pair`` (closed, up to ``tol``).

    Checks the pair against the extremal point on its own constant-rate
    line through ``(pi, pi)``.  Both coordinates are compared: near
    ``mu = 0`` or ``mu = 1`` a tiny slack in one is a large one in the other.
    """
    p, q = _as_pair(pair)
    pi = dist.base_rate
    if abs(p - pi) <= tol and abs(q - pi) <= tol:
        return True
    if not (q < pi < p):
        return False
    mu = (pi - q) / (p - q)
    if not 0.0 < mu < 1.0:
        return False
    return p <= p_star(dist, mu) + tol and q >= q_star(dist, mu) - tol


def rule_metrics(dist: GroupDistribution, rule: SelectionRule | Sequence[float]) -> RuleMetrics:
    """Exact selection rate, PPV and FOR of a rule, by direct summation."""
    x = rule.select_prob if isinstance(rule, SelectionRule) else tuple(rule)
    if len(x) != dist.m:
        raise ValueError("rule does not align with the distribution's bins")
    w, s = dist.weights, dist.scores
    mu = math.fsum(wi * xi for wi, xi in zip(w, x))
    pos = math.fsum(si * wi * xi for si, wi, xi in zip(s, w, x))
    rest = math.fsum(wi * (1.0 - xi) for wi, xi in zip(w, x))
    neg = math.fsum(si * wi * (1.0 - xi) for si, wi, xi in zip(s, w, x))
    ppv = pos / mu if mu > 0 else math.nan
    for_ = neg / rest if rest > 0 else math.nan
    return RuleMetrics(mu, ppv, for_)


def rule_for_pair(dist: GroupDistribution, pair, tol: float = MEMBERSHIP_TOL) -> SelectionRule:
    """A selection rule whose PPV and FOR are exactly ``pair``.

    Mixes the soft threshold at ``mu = (pi - q)/(p - q)`` with a constant
    coin of bias ``mu``.  At the center ``(pi, pi)`` the constant rule with
    probability 0.5 is returned.

    Raises
    ------
    InfeasiblePair
        If :func:`contains` rejects the pair.
    """
    p, q = _as_pair(pair)
    if not contains(dist, (p, q), tol):
        raise InfeasiblePair(f"pair ({p!r}, {q!r}) is not feasible for this group")
    pi = dist.base_rate
    if abs(p - pi) <= tol and abs(q - pi) <= tol:
        return SelectionRule(dist.scores, (0.5,) * dist.m)
    mu = (pi - q) / (p - q)
    extreme = soft_threshold_rule(dist, mu).select_prob
    eta = min((p - pi) / (p_star(dist, mu) - pi), 1.0)
    probs = tuple(min(max(eta * x + (1.0 - eta) * mu, 0.0), 1.0) for x in extreme)
    return SelectionRule(dist.scores, probs)
