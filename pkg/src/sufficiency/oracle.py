"""Brute-force checks of the closed-form geometry.

Nothing here reuses the greedy soft-threshold construction: feasible pairs
come from enumerating rules on a grid, and the maximal PPV at a fixed
selection rate from the vertices of the linear program's feasible set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import GridTooLarge, InputError, MuOutOfRange, VerificationFailure
from .intersection import intersection_boundary_q
from .region import boundary_q, contains
from .score_model import GroupDistribution

DEFAULT_CAP = 10**7


def rule_grid(m: int, resolution: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """All selection vectors in ``{0, 1/G, ..., 1}^m``, shape ``((G+1)^m, m)``."""
    if resolution < 1:
        raise InputError(f"grid resolution must be >= 1, got {resolution}")
    size = (resolution + 1) ** m
    if size > cap:
        raise GridTooLarge(f"grid of {size} rules exceeds the cap of {cap}")
    levels = np.arange(resolution + 1, dtype=np.float64) / resolution
    mesh = np.meshgrid(*([levels] * m), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def pairs_of_rules(dist: GroupDistribution, rules: np.ndarray) -> np.ndarray:
    """(p, q) of each nonconstant rule, oriented so ``q <= p``."""
    w, s = dist.weights_arr, dist.scores_arr
    # constant rules are dropped by their entries; the rounded weight sum
    # can put the all-ones rule just below mu = 1
    keep = np.any(rules > 0.0, axis=1) & np.any(rules < 1.0, axis=1)
    rules = rules[keep]
    mu = rules @ w
    p = (rules @ (s * w)) / mu
    q = ((1.0 - rules) @ (s * w)) / ((1.0 - rules) @ w)
    return np.stack([np.maximum(p, q), np.minimum(p, q)], axis=1)


def enumerate_feasible(dist: GroupDistribution, resolution: int,
                       cap: int = DEFAULT_CAP) -> np.ndarray:
    """Every (p, q) reached by a nonconstant grid rule, as an ``(n, 2)`` array.

    Swapping the labels of a rule swaps its PPV and FOR, so pairs are
    reported with ``q <= p``.
    """
    return pairs_of_rules(dist, rule_grid(dist.m, resolution, cap))


def lp_max_p(dist: GroupDistribution, mu: float) -> float:
    """Maximal PPV at selection rate ``mu`` by enumerating LP vertices.

    The feasible set ``{x in [0,1]^m : sum w x = mu}`` has vertices with at
    most one fractional coordinate.  Each choice of fractional coordinate
    and 0/1 values elsewhere is tried; the best valid one wins.
    """
    if not 0.0 < mu < 1.0:
        raise MuOutOfRange(f"selection rate must lie in (0, 1), got {mu!r}")
    w, s = dist.weights_arr, dist.scores_arr
    m = dist.m
    corners = np.array(list(itertools.product((0.0, 1.0), repeat=m - 1)))
    best = -np.inf
    for j in range(m):
        others = [i for i in range(m) if i != j]
        used = corners @ w[others]
        xj = (mu - used) / w[j]
        ok = (xj >= -1e-12) & (xj <= 1.0 + 1e-12)
        if not np.any(ok):
            continue
        xj = np.clip(xj[ok], 0.0, 1.0)
        value = corners[ok] @ (s[others] * w[others]) + xj * s[j] * w[j]
        best = max(best, float(value.max()))
    return best / mu


@dataclass(frozen=True)
class VerificationReport:
    resolution: int
    n_pairs: int
    n_outside: int
    max_below_boundary: float
    breakpoints_attained: bool
    passed: bool


def verify_region(dist: GroupDistribution, resolution: int, tol: float = 1e-9,
                  boundary: Callable | None = None, envelope_tol: float | None = None,
                  raise_on_failure: bool = True) -> VerificationReport:
    """Compare grid-enumerated pairs against the closed-form region.

    Checks that (i) every enumerated pair is accepted by
    :func:`~sufficiency.region.contains`, (ii) no enumerated pair lies below
    the boundary curve, and (iii) each hard-threshold breakpoint
    ``(p_k, q(p_k))`` is hit exactly by a 0/1 rule.

    Parameters
    ----------
    boundary : callable, optional
        Replacement for ``boundary_q(dist, p)``; used to test the harness.
    envelope_tol : float, optional
        Tolerance for check (ii); defaults to ``tol``.
    """
    boundary = boundary or boundary_q
    envelope_tol = tol if envelope_tol is None else envelope_tol
    pairs = enumerate_feasible(dist, resolution)

    failure = None
    n_outside = 0
    for p, q in pairs:
        if not contains(dist, (p, q), tol):
            n_outside += 1
            failure = failure or ("pair outside closed-form region", (p, q))

    # (ii): pairs at the center carry no information about the curve
    pi = dist.base_rate
    inner = pairs[pairs[:, 0] > pi + tol]
    p_in = np.clip(inner[:, 0], pi, dist.s_max)
    curve = np.asarray(boundary(dist, p_in)) if len(p_in) else np.empty(0)
    gaps = curve - inner[:, 1]
    max_below = float(gaps.max()) if len(gaps) else 0.0
    if max_below > envelope_tol:
        i = int(np.argmax(gaps))
        failure = failure or ("pair below boundary curve", tuple(inner[i]))

    hard = enumerate_feasible(dist, 1)
    attained = True
    for k in range(1, dist.m):
        target = np.array([dist.p_break[k - 1], boundary(dist, dist.p_break[k - 1])])
        if not np.any(np.all(np.abs(hard - target) <= tol, axis=1)):
            attained = False
            failure = failure or ("breakpoint not attained by a hard threshold", tuple(target))

    report = VerificationReport(resolution, len(pairs), n_outside, max_below,
                                attained, failure is None)
    if failure is not None and raise_on_failure:
        message, pair = failure
        raise VerificationFailure(f"{message}: {pair}", pair)
    return report


def boundary_grid(d0: GroupDistribution, d1: GroupDistribution, n: int,
                  p_max: float, vertical: tuple[float, float] | None = None,
                  n_vertical: int = 1000) -> tuple[np.ndarray, np.ndarray]:
    """Dense samples ``(p, q)`` of the common boundary for grid searches."""
    p = np.linspace(max(d0.base_rate, d1.base_rate), p_max, n)
    q = intersection_boundary_q(d0, d1, p)
    if vertical is not None:
        qv = np.linspace(vertical[0], vertical[1], n_vertical)
        p = np.concatenate([p, np.full(n_vertical, p_max)])
        q = np.concatenate([q, qv])
    return p, q
