# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # The best classifier with predictive parity
#
# Both the expected loss and the separation gap improve as a pair moves
# away from the base rate, so their minimizers lie on the common boundary.
# The optimizer checks segment endpoints and the roots of each piece's
# derivative.

# %%
from sufficiency import (
    ZERO_ONE,
    LossSpec,
    PopulationWeights,
    build_fair_classifier,
    build_group_distribution,
    classifier_report,
    minimize_on_boundary,
    predict,
)

d0 = build_group_distribution([(0.9, 0.25), (0.5, 0.5), (0.1, 0.25)])
d1 = build_group_distribution([(0.9, 0.5), (0.5, 0.3), (0.1, 0.2)])
weights = PopulationWeights.from_groups(d0, d1, 0.5, 0.5)

# %%
for objective in (ZERO_ONE, LossSpec(2.0, 1.0), "separation"):
    sol = minimize_on_boundary(d0, d1, weights, objective)
    print(f"{objective!s:40}  pair=({sol.pair.p:.4f}, {sol.pair.q:.4f})  "
          f"value={sol.objective_value:.6f}  via {sol.candidate_kind}")

# %% [markdown]
# ## Building the randomized rules
#
# The 0-1 optimum sits at the bottom of the vertical edge, where group 0
# uses a hard threshold on its top bin.  An interior pair such as
# (0.8, 0.35) needs randomization in both groups.

# %%
sol = minimize_on_boundary(d0, d1, weights, ZERO_ONE)
clf = build_fair_classifier(d0, d1, sol.pair, weights)
print("group 0 rule", clf.rule0.select_prob)
print("group 1 rule", clf.rule1.select_prob)

inner = build_fair_classifier(d0, d1, (0.8, 0.35), weights)
print("group 0 rule", inner.rule0.select_prob)
print("group 1 rule", inner.rule1.select_prob)

# %% [markdown]
# Pairs that need a group to select everyone or no one, such as the top
# of the vertical edge, are only built with `allow_degenerate=True`.

# %%
top = build_fair_classifier(d0, d1, (0.9, 0.5), weights, allow_degenerate=True)
print("group 0 rule", top.rule0.select_prob)

# %%
report = classifier_report(inner, d0, d1, weights, ZERO_ONE)
for key in ("mu", "ppv", "for", "accuracy", "expected_loss", "dsep", "dsep_tv"):
    print(f"{key:15} {report[key]:.6f}")
for g in report["groups"]:
    print(g)

# %% [markdown]
# ## Using the rule
#
# `predict` takes a uniform draw so randomization stays in the caller's
# hands.

# %%
import random

rng = random.Random(0)
print([predict(inner, 1, 0.5, rng.random()) for _ in range(12)])
