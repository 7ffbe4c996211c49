"""Finite calibrated score distributions for a single group.

A group is described by a histogram of calibrated scores ``s_i`` (the
probability that the label is 1 given the score) and their masses
``P(s_i)``.  Everything downstream works from the prefix quantities
computed here: cumulative selection rates ``mu_k``, offsets ``c_k``, and
the boundary breakpoints ``p_k`` / ``q_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateSupport,
    EmptyInput,
    NonPositiveWeight,
    ScoreOutOfRange,
    WeightSumError,
)

# scores closer than this are the same bin
SCORE_MERGE_TOL = 1e-12
# weight sums within this of 1 are rescaled, anything further is an error
WEIGHT_SUM_TOL = 1e-6


@dataclass(frozen=True)
class ScoreBin:
    score: float
    weight: float

    def __post_init__(self):
        if not (0.0 <= self.score <= 1.0) or math.isnan(self.score):
            raise ScoreOutOfRange(f"score {self.score!r} not in [0, 1]")
        if not self.weight > 0.0:
            raise NonPositiveWeight(f"weight {self.weight!r} must be positive")


@dataclass(frozen=True)
class GroupDistribution:
    """Calibrated score histogram of one group, scores strictly descending.

    Indices in the docstrings below are 1-based to match the usual
    notation; the tuples themselves are 0-based, so ``mu[k - 1]`` is
    ``mu_k``.

    Attributes
    ----------
    scores, weights : tuple of float
        Distinct scores ``s_1 > ... > s_m`` and their masses (sum to 1).
    base_rate : float
        ``pi = sum_i w_i s_i``.
    mu : tuple of float
        ``mu_k = sum_{i<=k} w_i``; ``mu_m == 1`` exactly.
    c : tuple of float
        ``c_k = sum_{i<k} w_i (s_i - s_k)``; ``c_1 == 0``.
    p_break : tuple of float
        PPV of the hard threshold ``S >= s_k``; ``p_1 = s_max``, ``p_m = pi``.
    q_break : tuple of float
        FOR of the same threshold, defined for ``k < m`` (length ``m - 1``);
        ``q_{m-1} = s_min``.
    """

    scores: tuple[float, ...]
    weights: tuple[float, ...]
    base_rate: float
    mu: tuple[float, ...]
    c: tuple[float, ...]
    p_break: tuple[float, ...]
    q_break: tuple[float, ...]

    @property
    def m(self) -> int:
        return len(self.scores)

    @property
    def bins(self) -> tuple[ScoreBin, ...]:
        return tuple(ScoreBin(s, w) for s, w in zip(self.scores, self.weights))

    @property
    def s_max(self) -> float:
        return self.scores[0]

    @property
    def s_min(self) -> float:
        return self.scores[-1]

    # numpy views for vectorized evaluation; cached on the instance dict,
    # which bypasses the frozen __setattr__
    @cached_property
    def scores_arr(self) -> np.ndarray:
        return _readonly(self.scores)

    @cached_property
    def weights_arr(self) -> np.ndarray:
        return _readonly(self.weights)

    @cached_property
    def mu_arr(self) -> np.ndarray:
        return _readonly(self.mu)

    @cached_property
    def c_arr(self) -> np.ndarray:
        return _readonly(self.c)

    @cached_property
    def p_break_arr(self) -> np.ndarray:
        return _readonly(self.p_break)

    @cached_property
    def tail_offset_arr(self) -> np.ndarray:
        """``d_k = sum_{i>k} w_i (s_k - s_i)``, the mirror image of ``c``."""
        s, w = self.scores, self.weights
        return _readonly([math.fsum(w[i] * (s[k] - s[i]) for i in range(k + 1, self.m))
                          for k in range(self.m)])

    def score_index(self, score: float, tol: float = 1e-9) -> int | None:
        """0-based index of the bin whose score is within ``tol``, else None."""
        idx = int(np.argmin(np.abs(self.scores_arr - score)))
        if abs(self.scores[idx] - score) <= tol:
            return idx
        return None


def _readonly(values: Sequence[float]) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.flags.writeable = False
    return arr


def _coerce_bins(bins: Iterable) -> list[ScoreBin]:
    out = []
    for b in bins:
        if isinstance(b, ScoreBin):
            out.append(b)
        else:
            s, w = b
            out.append(ScoreBin(float(s), float(w)))
    return out


def build_group_distribution(bins: Iterable) -> GroupDistribution:
    """Validate a histogram and compute all derived prefix quantities.

    Parameters
    ----------
    bins : iterable of ScoreBin or (score, weight) pairs
        Any order.  Scores within ``1e-12`` of each other are merged with
        their weights summed.

    Returns
    -------
    GroupDistribution

    Raises
    ------
    EmptyInput, ScoreOutOfRange, NonPositiveWeight
        Malformed input.
    WeightSumError
        Weights sum to something further than ``1e-6`` from one.
    DegenerateSupport
        Fewer than two distinct scores.

    Examples
    --------
    >>> d = build_group_distribution([(0.8, 0.5), (0.2, 0.5)])
    >>> d.base_rate, d.c, d.p_break, d.q_break
    (0.5, (0.0, 0.30000000000000004), (0.8, 0.5), (0.2,))
    """
    raw = _coerce_bins(bins)
    if not raw:
        raise EmptyInput("no score bins given")

    raw.sort(key=lambda b: b.score, reverse=True)
    groups: list[list[ScoreBin]] = []
    for b in raw:
        if groups and groups[-1][0].score - b.score < SCORE_MERGE_TOL:
            groups[-1].append(b)
        else:
            groups.append([b])
    # cluster representative is its largest score, which is order independent
    scores = [g[0].score for g in groups]
    masses = [math.fsum(b.weight for b in g) for g in groups]

    total = math.fsum(masses)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise WeightSumError(f"weights sum to {total!r}, expected 1")
    if len(scores) < 2:
        raise DegenerateSupport(
            f"need at least two distinct scores, got {len(scores)}")

    weights = [w / total for w in masses]
    m = len(scores)
    sw = [s * w for s, w in zip(scores, weights)]
    base_rate = math.fsum(sw)

    mu = [math.fsum(weights[: k + 1]) for k in range(m)]
    mu[-1] = 1.0
    c = [math.fsum(weights[i] * (scores[i] - scores[k]) for i in range(k))
         for k in range(m)]
    p_break = [math.fsum(sw[: k + 1]) / mu[k] for k in range(m)]
    p_break[0] = scores[0]
    p_break[-1] = base_rate
    q_break = [math.fsum(sw[k + 1:]) / math.fsum(weights[k + 1:])
               for k in range(m - 1)]
    q_break[-1] = scores[-1]

    if not scores[-1] < base_rate < scores[0]:
        raise DegenerateSupport("base rate not strictly inside the score range")

    return GroupDistribution(
        scores=tuple(scores),
        weights=tuple(weights),
        base_rate=base_rate,
        mu=tuple(mu),
        c=tuple(c),
        p_break=tuple(p_break),
        q_break=tuple(q_break),
    )
