# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Which (PPV, FOR) pairs can one group reach?
#
# A group is described by its calibrated scores and how much mass sits on
# each.  Every randomized rule that selects bin `i` with probability `x_i`
# has a positive predictive value `p` and a false omission rate `q`.  The
# reachable pairs form a region bounded below by a curve `q(p)`.

# %%
import numpy as np

from sufficiency import boundary_q, build_group_distribution, contains, p_star, q_star
from sufficiency.oracle import enumerate_feasible
from sufficiency.region import rule_for_pair, rule_metrics

dist = build_group_distribution([(0.9, 0.25), (0.5, 0.5), (0.1, 0.25)])
print("scores  ", dist.scores)
print("weights ", dist.weights)
print("base rate", dist.base_rate)

# %% [markdown]
# ## Extremal rules at a fixed selection rate
#
# At selection rate `mu` the best PPV fills the highest bins first and
# randomizes on the bin where the budget runs out.  `p_star` and `q_star`
# give the resulting pair.

# %%
for mu in (0.1, 0.25, 0.5, 0.75, 0.9):
    print(f"mu={mu:4.2f}  p*={float(p_star(dist, mu)):.4f}  q*={float(q_star(dist, mu)):.4f}")

# %% [markdown]
# ## The boundary curve and its breakpoints
#
# The curve is flat at the lowest score near the base rate, then rises
# through one arc per bin.  The breakpoints come from hard thresholds.

# %%
print("breakpoints p_k:", dist.p_break)
ps = np.linspace(dist.base_rate, dist.s_max, 9)
for p, q in zip(ps, boundary_q(dist, ps)):
    print(f"p={p:.3f}  q(p)={q:.4f}")

# %% [markdown]
# ## Checking against brute force
#
# Enumerating every rule on a grid of selection probabilities gives a
# cloud of pairs.  None fall below the curve.

# %%
pairs = enumerate_feasible(dist, 10)
gap = boundary_q(dist, np.clip(pairs[:, 0], dist.base_rate, dist.s_max)) - pairs[:, 1]
print(f"{len(pairs)} enumerated pairs, largest amount below the curve: {gap.max():.2e}")

# %% [markdown]
# ## From a pair back to a rule

# %%
pair = (0.8, 0.45)
print("contains", pair, contains(dist, pair))
rule = rule_for_pair(dist, pair)
print("rule", rule.select_prob)
print("metrics", rule_metrics(dist, rule))
