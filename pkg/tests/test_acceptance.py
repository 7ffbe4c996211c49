"""Acceptance checks AC1-AC8.

Each check returns ``(passed, detail)``.  Under pytest every check is one
test and its line is repeated in the terminal summary; run this file
directly to get the lines without pytest.
"""

from __future__ import annotations

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from fractions import Fraction

from oracles import (  # noqa: E402
    exact_derivative,
    objective_on_arc,
    random_bins,
    rule_pq_float,
    separation_tv,
)
from sufficiency import (  # noqa: E402
    ZERO_ONE,
    LossSpec,
    PopulationWeights,
    build_fair_classifier,
    build_group_distribution,
    calibrate_scores,
    classifier_report,
    compute_pmax_qmin,
    dsep,
    evaluate,
    intersection_nonempty,
    minimize_on_boundary,
    p_star,
    phi,
    phi_coefficients,
    trace_boundary,
)
from sufficiency._quadratic import real_roots  # noqa: E402
from sufficiency.datasets import load_synthetic_compas  # noqa: E402
from sufficiency.intersection import intersection_boundary_q  # noqa: E402
from sufficiency.objectives import (  # noqa: E402
    dsep_critical_points,
    expected_loss,
    loss_critical_points,
    unconstrained_loss,
)
from sufficiency.oracle import boundary_grid, lp_max_p, verify_region  # noqa: E402
from sufficiency.region import boundary_piece, boundary_q, piece_q  # noqa: E402

RESULTS: dict[str, str] = {}

D2 = build_group_distribution([(0.9, 0.25), (0.5, 0.5), (0.1, 0.25)])
D3 = build_group_distribution([(0.9, 0.5), (0.5, 0.3), (0.1, 0.2)])
TWO = build_group_distribution([(0.8, 0.5), (0.2, 0.5)])


def random_dist(rng, m_lo=2, m_hi=6):
    return build_group_distribution(random_bins(rng, int(rng.integers(m_lo, m_hi + 1))))


def random_pair(rng, m_hi=5):
    """A pair of groups with a common boundary of positive length."""
    while True:
        d0, d1 = random_dist(rng, m_hi=m_hi), random_dist(rng, m_hi=m_hi)
        if not intersection_nonempty(d0, d1):
            continue
        if compute_pmax_qmin(d0, d1)[0] - max(d0.base_rate, d1.base_rate) > 1e-4:
            return d0, d1


def random_fair_classifier(rng):
    """A classifier strictly inside the common region, away from its corners."""
    while True:
        d0, d1 = random_pair(rng)
        p_max, _ = compute_pmax_qmin(d0, d1)
        lo = max(d0.base_rate, d1.base_rate)
        hi = min(d0.base_rate, d1.base_rate)
        if p_max - lo < 1e-3:
            continue
        p = lo + rng.uniform(0.05, 0.95) * (p_max - lo)
        q_floor = float(intersection_boundary_q(d0, d1, p))
        if hi - q_floor < 1e-3:
            continue
        q = q_floor + rng.uniform(0.0, 0.95) * (hi - q_floor)
        weights = PopulationWeights.from_groups(d0, d1, rng.uniform(0.05, 0.95))
        return d0, d1, weights, build_fair_classifier(d0, d1, (p, q), weights)


def grid_minimum(d0, d1, weights, objective, n=10**5):
    summary = trace_boundary(d0, d1)
    last = summary.segments[-1]
    vertical = (last.q_bottom, last.q_top) if last.is_vertical else None
    p, q = boundary_grid(d0, d1, n, summary.p_max, vertical)
    return float(np.min(evaluate(objective, (p, q), weights)))


def check_ac1():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        dist = random_dist(rng, 2, 6)
        mu = rng.uniform(1e-3, 1 - 1e-3)
        worst = max(worst, abs(lp_max_p(dist, mu) - float(p_star(dist, mu))))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 10
    return ok, f"200 cases, max |LP - greedy| = {worst:.2e} (tol 1e-9), {elapsed:.2f}s (< 10s)"


def check_ac2():
    rng = np.random.default_rng(202)
    start = time.perf_counter()
    failures, worst = 0, -np.inf
    for _ in range(50):
        dist = random_dist(rng, 2, 4)
        rep = verify_region(dist, 8, tol=1e-9, envelope_tol=1e-6, raise_on_failure=False)
        failures += not rep.passed
        worst = max(worst, rep.max_below_boundary)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 60
    return ok, (f"50 distributions at G=8, {failures} failures, "
                f"max gap below curve {worst:.2e} (tol 1e-6), {elapsed:.2f}s (< 60s)")


def check_ac3():
    rng = np.random.default_rng(303)
    start = time.perf_counter()
    worst = {"p_m": 0.0, "q_m-1": 0.0, "flat": 0.0, "continuity": 0.0}
    nonmonotone = 0
    for _ in range(100):
        d = random_dist(rng, 2, 6)
        m, pi = d.m, d.base_rate
        worst["p_m"] = max(worst["p_m"], abs(d.p_break[m - 1] - pi))
        worst["q_m-1"] = max(worst["q_m-1"], abs(d.q_break[m - 2] - d.s_min))
        flat = np.linspace(pi, d.p_break[m - 2], 100)
        worst["flat"] = max(worst["flat"], float(np.max(np.abs(boundary_q(d, flat) - d.s_min))))
        # both neighbouring pieces of p_star agree at each mu_k
        for k in range(1, m):
            mu_k = d.mu[k - 1]
            left = d.scores[k - 1] + d.c[k - 1] / mu_k
            right = d.scores[k] + d.c[k] / mu_k
            worst["continuity"] = max(worst["continuity"], abs(left - right))
        ps = np.linspace(pi, d.s_max, 10**4)
        nonmonotone += bool(np.any(np.diff(boundary_q(d, ps)) < -1e-12))
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) <= 1e-10 and nonmonotone == 0 and elapsed < 5
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    return ok, f"100 distributions, {detail} (tol 1e-10), {nonmonotone} non-monotone, " \
               f"{elapsed:.2f}s (< 5s)"


def check_ac4():
    a, b, c = phi_coefficients(D2, D3, 2, 2)
    roots = real_roots(a, b, c)
    example = (max(abs(a + 0.02), abs(b - 0.032), abs(c + 0.011)) <= 1e-12
               and len(roots) == 2 and abs(roots[0] - 0.5) <= 1e-12 and abs(roots[1] - 1.1) <= 1e-12)

    rng = np.random.default_rng(404)
    start = time.perf_counter()
    checked = disagree = 0
    for _ in range(1000):
        d0, d1 = random_pair(rng)
        p_max, _ = compute_pmax_qmin(d0, d1)
        lo = max(d0.base_rate, d1.base_rate)
        ps = lo + rng.uniform(0.0, 1.0, 1000) * (p_max - lo)
        # the flat piece's arc formula is 0/0 at its own base rate
        ps = ps[(ps > lo + 1e-9) & (ps < p_max)]
        ks = np.asarray(boundary_piece(d0, ps))
        ls = np.asarray(boundary_piece(d1, ps))
        for k, l in set(zip(ks.tolist(), ls.tolist())):
            sel = ps[(ks == k) & (ls == l)]
            gap = piece_q(d0, k, sel) - piece_q(d1, l, sel)
            sign = phi(phi_coefficients(d0, d1, k, l), sel) >= 0
            clear = np.abs(gap) > 1e-9
            checked += int(clear.sum())
            disagree += int(np.sum(sign[clear] != (gap[clear] > 0)))
    elapsed = time.perf_counter() - start
    ok = example and disagree == 0
    return ok, (f"worked coefficients/roots {'exact' if example else 'WRONG'} (tol 1e-12); "
                f"{checked} (pair, p) sign checks, {disagree} disagreements, {elapsed:.2f}s")


def check_ac5():
    w = PopulationWeights.from_groups(TWO, TWO)
    sol = minimize_on_boundary(TWO, TWO, w, ZERO_ONE)
    example = (sol.pair.p, sol.pair.q) == (0.8, 0.2) and abs(sol.objective_value - 0.2) <= 1e-15

    rng = np.random.default_rng(505)
    start = time.perf_counter()
    worst = -np.inf
    for _ in range(100):
        d0, d1 = random_pair(rng)
        weights = PopulationWeights.from_groups(d0, d1, rng.uniform(0.05, 0.95))
        loss = LossSpec(rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0))
        for objective in (loss, "separation"):
            sol = minimize_on_boundary(d0, d1, weights, objective)
            worst = max(worst, sol.objective_value - grid_minimum(d0, d1, weights, objective))
    elapsed = time.perf_counter() - start
    ok = example and worst <= 1e-6
    return ok, (f"identical two-point optimum {'exact' if example else 'WRONG'}; "
                f"200 optimizations, max (closed form - 1e5 grid) = {worst:.2e} "
                f"(must be <= 1e-6), {elapsed:.2f}s")


def _fd(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h)


def check_ac6():
    half = PopulationWeights.from_groups(D2, D3, 0.5, 0.5)
    worked = abs(float(dsep((0.8, 0.35), half)) - 0.1060606) <= 1e-6

    rng = np.random.default_rng(606)
    worst_tv = 0.0
    for _ in range(100):
        d0, d1, weights, clf = random_fair_classifier(rng)
        closed = classifier_report(clf, d0, d1, weights)["dsep"]
        oracle = separation_tv([(d0.scores, d0.weights, clf.rule0.select_prob),
                                (d1.scores, d1.weights, clf.rule1.select_prob)],
                               (weights.w0, weights.w1))
        worst_tv = max(worst_tv, abs(closed - oracle))

    # critical points on random pieces.  Every root's slope is taken
    # exactly from an independent closed form in rational arithmetic.  The
    # centered difference with h = 1e-6 is asserted where its own truncation
    # error h^2 |f3| / 6 resolves 1e-10; near the arc pole or p = q it does not.
    roots_seen = central = 0
    worst_fd = worst_exact = 0.0
    while roots_seen < 200:
        d = random_dist(rng, 2, 6)
        k = int(rng.integers(2, d.m + 1))
        w0 = rng.uniform(0.05, 0.95)
        w = PopulationWeights(w0, 1 - w0, d.base_rate, rng.uniform(0.05, 0.95))
        loss = LossSpec(rng.uniform(0.1, 5.0), rng.uniform(0.1, 5.0))
        bins = [(Fraction(x), Fraction(y)) for x, y in zip(d.scores, d.weights)]
        lo, hi = d.p_break[k - 1], d.p_break[k - 2]
        pole = d.scores[k - 1] + d.c[k - 1]
        for kind, roots in (("loss", loss_critical_points(d, k, w, loss)),
                            ("sep", dsep_critical_points(d, k, w))):
            ref = objective_on_arc(bins, k, Fraction(w.pi_agg), kind, Fraction(loss.l01),
                                   Fraction(loss.l10), Fraction(w.k_sep))
            if kind == "loss":
                def f(p):
                    return expected_loss((p, piece_q(d, k, p)), w, loss)
            else:
                def f(p):
                    return dsep((p, piece_q(d, k, p)), w)
            for r in roots:
                if not lo + 1e-4 < r < hi - 1e-4:
                    continue
                roots_seen += 1
                worst_exact = max(worst_exact, abs(float(exact_derivative(ref, r))))
                big = min(1e-3, (min(r - pole, r - piece_q(d, k, r))) / 20)
                f3 = (f(r + 2 * big) - 2 * f(r + big) + 2 * f(r - big) - f(r - 2 * big)) \
                    / (2 * big**3)
                if 1e-12 * abs(f3) / 6 <= 1e-10:
                    central += 1
                    worst_fd = max(worst_fd, abs(_fd(f, r)))
    ok = worked and worst_tv <= 1e-10 and worst_exact <= 1e-8 and worst_fd <= 1e-8
    return ok, (f"worked value {'ok' if worked else 'WRONG'} (tol 1e-6); "
                f"100 classifiers, max |closed - TV| = {worst_tv:.2e} (tol 1e-10); "
                f"{roots_seen} critical points, max |exact slope| = {worst_exact:.2e}; "
                f"centered FD h=1e-6 on the {central} it resolves, "
                f"max |slope| = {worst_fd:.2e} (tol 1e-8)")


def check_ac7():
    half = PopulationWeights.from_groups(D2, D3, 0.5, 0.5)
    clf = build_fair_classifier(D2, D3, (0.8, 0.35), half)
    target = (0.9375, 0.375, 0.09375)
    worked = (max(abs(a - b) for a, b in zip(clf.rule1.select_prob, target)) <= 1e-15
              and abs(clf.mu1 - 0.6) <= 1e-15)

    rng = np.random.default_rng(707)
    worst = 0.0
    for _ in range(200):
        d0, d1, _, clf = random_fair_classifier(rng)
        _, p0, q0 = rule_pq_float(d0.scores, d0.weights, clf.rule0.select_prob)
        _, p1, q1 = rule_pq_float(d1.scores, d1.weights, clf.rule1.select_prob)
        worst = max(worst, abs(p0 - p1), abs(q0 - q1))
    ok = worked and worst < 1e-12
    return ok, (f"worked rule {'exact' if worked else 'WRONG'}; "
                f"200 classifiers, max PPV/FOR gap = {worst:.2e} (< 1e-12)")


def check_ac8():
    result = calibrate_scores(load_synthetic_compas(), 0.2, seed=0)
    d0, d1 = result.distributions[0], result.distributions[1]
    n0, n1 = result.group_counts[0], result.group_counts[1]
    weights = PopulationWeights.from_groups(d0, d1, n0 / (n0 + n1))
    sol = minimize_on_boundary(d0, d1, weights, ZERO_ONE)
    clf = build_fair_classifier(d0, d1, sol.pair, weights, allow_degenerate=True)
    report = classifier_report(clf, d0, d1, weights, ZERO_ONE)
    fair = report["accuracy"]
    grid_best = 1.0 - grid_minimum(d0, d1, weights, ZERO_ONE)
    free = 1.0 - unconstrained_loss(d0, d1, weights)
    ok = fair >= grid_best - 1e-6 and abs(fair - (1.0 - sol.objective_value)) <= 1e-12
    return ok, (f"synthetic data: fair accuracy {fair:.6f}, grid search {grid_best:.6f} "
                f"(fair >= grid - 1e-6), unconstrained {free:.6f}, gap {free - fair:.6f}")


CHECKS = {
    "AC1 greedy PPV equals LP vertex oracle": check_ac1,
    "AC2 region envelope vs grid enumeration": check_ac2,
    "AC3 boundary identities": check_ac3,
    "AC4 active-boundary quadratic sign": check_ac4,
    "AC5 optimizer completeness": check_ac5,
    "AC6 separation gap consistency": check_ac6,
    "AC7 predictive parity by construction": check_ac7,
    "AC8 synthetic end-to-end pipeline": check_ac8,
}


def run_check(name):
    ok, detail = CHECKS[name]()
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    RESULTS[name] = line
    print(line)
    return ok, line


def _test(name):
    def test():
        ok, line = run_check(name)
        assert ok, line
    test.__name__ = "test_" + name.split()[0].lower()
    return test


for _name in CHECKS:
    globals()["test_" + _name.split()[0].lower()] = _test(_name)


if __name__ == "__main__":
    outcomes = [run_check(name)[0] for name in CHECKS]
    sys.exit(0 if all(outcomes) else 1)
