"""Group-wise randomized rules that share one (PPV, FOR) pair."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePair, InfeasiblePair, UnknownScore
from .objectives import (
    LossSpec,
    PopulationWeights,
    ZERO_ONE,
    dsep,
    unconstrained_loss,
)
from .region import (
    MEMBERSHIP_TOL,
    FeasiblePair,
    SelectionRule,
    contains,
    rule_for_pair,
    rule_metrics,
)
from .score_model import GroupDistribution


@dataclass(frozen=True)
class FairClassifier:
    """Selection rules for groups 0 and 1 realizing a common ``pair``.

    ``mu_agg`` is only known when population weights were supplied.
    """

    pair: FeasiblePair
    rule0: SelectionRule
    rule1: SelectionRule
    mu0: float
    mu1: float
    mu_agg: float | None = None

    def rule(self, group: int) -> SelectionRule:
        if group not in (0, 1):
            raise ValueError(f"group must be 0 or 1, got {group!r}")
        return self.rule0 if group == 0 else self.rule1


def _group_rule(dist: GroupDistribution, p: float, q: float, group: int,
                allow_degenerate: bool, tol: float) -> SelectionRule:
    if contains(dist, (p, q), tol):
        return rule_for_pair(dist, (p, q), tol)
    pi = dist.base_rate
    if allow_degenerate:
        # constant rules on this group still satisfy sufficiency when the
        # shared pair sits on the group's degenerate edges
        if abs(p - pi) <= tol and q <= pi + tol:
            return SelectionRule(dist.scores, (1.0,) * dist.m)
        if abs(q - pi) <= tol and p >= pi - tol:
            return SelectionRule(dist.scores, (0.0,) * dist.m)
    raise InfeasiblePair(f"pair ({p!r}, {q!r}) is infeasible for group {group}", group)


def build_fair_classifier(d0: GroupDistribution, d1: GroupDistribution, pair,
                          weights: PopulationWeights | None = None,
                          allow_degenerate: bool = False,
                          tol: float = MEMBERSHIP_TOL) -> FairClassifier:
    """Assemble the per-group rules for a pair feasible in both groups.

    Parameters
    ----------
    allow_degenerate : bool
        Also accept pairs where one group must be constant (all selected
        when ``p`` equals its base rate, none when ``q`` does).  Those
        arise at the two ends of the common boundary.

    Raises
    ------
    InfeasiblePair
        With ``.group`` set to the first group that cannot attain the pair.
    """
    p, q = (float(v) for v in pair)
    rules = tuple(_group_rule(d, p, q, a, allow_degenerate, tol)
                  for a, d in enumerate((d0, d1)))
    mus = tuple(rule_metrics(d, r).mu for d, r in zip((d0, d1), rules))
    mu_agg = None
    if weights is not None:
        mu_agg = weights.w0 * mus[0] + weights.w1 * mus[1]
    return FairClassifier(FeasiblePair(p, q), rules[0], rules[1], mus[0], mus[1], mu_agg)


def predict(clf: FairClassifier, group: int, score: float, u: float) -> int:
    """Randomized decision: 1 iff ``u`` falls below the bin's selection probability.

    ``u`` is a uniform draw in ``[0, 1)`` supplied by the caller.
    """
    rule = clf.rule(group)
    scores = np.asarray(rule.scores)
    idx = int(np.argmin(np.abs(scores - score)))
    if abs(scores[idx] - score) > 1e-9:
        raise UnknownScore(f"score {score!r} is not a bin of group {group}")
    return int(u < rule.select_prob[idx])


def _nan_to_none(x):
    return None if x is None or (isinstance(x, float) and math.isnan(x)) else x


def tv_separation_gap(d0: GroupDistribution, d1: GroupDistribution,
                      rule0, rule1, weights: PopulationWeights) -> float:
    """Deviation from separation computed from the explicit joint of (R, Y, A).

    Sums ``P(a) P(y|a) |P(R=1|a,y) - P(R=1|y)|`` over groups and labels.
    """
    per_group = []
    for d, rule, wa in ((d0, rule0, weights.w0), (d1, rule1, weights.w1)):
        x = np.asarray(rule.select_prob if isinstance(rule, SelectionRule) else rule)
        s, w = d.scores_arr, d.weights_arr
        # label -> (P(R=1, Y=y | a), P(Y=y | a))
        per_group.append((wa, {1: (math.fsum(w * s * x), d.base_rate),
                               0: (math.fsum(w * (1 - s) * x), 1.0 - d.base_rate)}))
    gap = 0.0
    for y in (0, 1):
        overall = (sum(wa * t[y][0] for wa, t in per_group)
                   / sum(wa * t[y][1] for wa, t in per_group))
        for wa, t in per_group:
            sel, py = t[y]
            if py > 0:
                gap += wa * py * abs(sel / py - overall)
    return gap


def rule_loss(d0: GroupDistribution, d1: GroupDistribution, rule0, rule1,
              weights: PopulationWeights, loss: LossSpec = ZERO_ONE) -> float:
    """Expected cost summed bin by bin over both groups' rules."""
    total = 0.0
    for d, rule, wa in ((d0, rule0, weights.w0), (d1, rule1, weights.w1)):
        x = np.asarray(rule.select_prob if isinstance(rule, SelectionRule) else rule)
        s, w = d.scores_arr, d.weights_arr
        total += wa * math.fsum(w * (x * (1 - s) * loss.l10 + (1 - x) * s * loss.l01))
    return total


def classifier_report(clf: FairClassifier, d0: GroupDistribution, d1: GroupDistribution,
                      weights: PopulationWeights, loss: LossSpec | None = None) -> dict:
    """Exact per-group and aggregate metrics of a fair classifier.

    All values come from the distributions analytically.  Rates that are
    undefined for a constant group rule are reported as ``None``.
    """
    groups = []
    for a, (d, rule) in enumerate(((d0, clf.rule0), (d1, clf.rule1))):
        m = rule_metrics(d, rule)
        pi = d.base_rate
        x = rule.as_array()
        tpr = math.fsum(d.weights_arr * d.scores_arr * x) / pi
        fpr = math.fsum(d.weights_arr * (1 - d.scores_arr) * x) / (1 - pi)
        groups.append({
            "group": a,
            "base_rate": pi,
            "mu": m.mu,
            "ppv": _nan_to_none(m.ppv),
            "for": _nan_to_none(m.for_),
            "tpr": tpr,
            "fpr": fpr,
        })
    p, q = clf.pair.p, clf.pair.q
    mu_agg = weights.w0 * groups[0]["mu"] + weights.w1 * groups[1]["mu"]
    pi = weights.pi_agg
    try:
        sep = float(dsep((p, q), weights))
    except DegeneratePair:
        sep = None
    report = {
        "groups": groups,
        "weights": [weights.w0, weights.w1],
        "base_rate": pi,
        "mu": mu_agg,
        "ppv": p,
        "for": q,
        "tpr": mu_agg * p / pi,
        "fpr": mu_agg * (1 - p) / (1 - pi),
        "accuracy": 1.0 - rule_loss(d0, d1, clf.rule0, clf.rule1, weights, ZERO_ONE),
        "unconstrained_accuracy": 1.0 - unconstrained_loss(d0, d1, weights, ZERO_ONE),
        "dsep": sep,
        "dsep_tv": tv_separation_gap(d0, d1, clf.rule0, clf.rule1, weights),
    }
    if loss is not None:
        report["expected_loss"] = rule_loss(d0, d1, clf.rule0, clf.rule1, weights, loss)
        report["unconstrained_loss"] = unconstrained_loss(d0, d1, weights, loss)
    return report


def classifier_document(clf: FairClassifier, metrics: dict | None = None,
                        bin_labels: dict | None = None) -> dict:
    """The ``{pair, groups, metrics}`` document written by the CLI.

    ``bin_labels`` optionally maps group -> list (aligned with the rule)
    of original bin ids merged into each calibrated score.
    """
    groups = []
    for a in (0, 1):
        rule = clf.rule(a)
        entries = []
        for i, (s, x) in enumerate(zip(rule.scores, rule.select_prob)):
            entry = {"score": s, "select_prob": x}
            if bin_labels is not None:
                entry["bins"] = list(bin_labels[a][i])
            entries.append(entry)
        groups.append({"group": a, "mu": clf.mu0 if a == 0 else clf.mu1, "rule": entries})
    return {
        "pair": {"p": clf.pair.p, "q": clf.pair.q},
        "groups": groups,
        "metrics": metrics if metrics is not None else {},
    }
