# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # From labeled bins to a fair classifier
#
# The bundled dataset has two groups, ten score bins and a binary outcome,
# shaped like public recidivism decile data.  Part of each bin calibrates
# the score.  The rest estimates how each group spreads over the bins.

# %%
from sufficiency import (
    ZERO_ONE,
    PopulationWeights,
    build_fair_classifier,
    calibrate_scores,
    classifier_report,
    minimize_on_boundary,
)
from sufficiency.datasets import load_synthetic_compas

rows = load_synthetic_compas()
result = calibrate_scores(rows, split_fraction=0.2, seed=0)
print(len(rows), "rows;", result.group_counts, "rows per group for estimation")
for bin_id, score in result.calibration_map.items():
    print(f"bin {bin_id:>2}: calibrated score {score:.3f}")

# %%
d0, d1 = result.distributions[0], result.distributions[1]
n0, n1 = result.group_counts[0], result.group_counts[1]
weights = PopulationWeights.from_groups(d0, d1, n0 / (n0 + n1))
print("base rates", round(d0.base_rate, 4), round(d1.base_rate, 4))

# %% [markdown]
# ## Accuracy with and without predictive parity

# %%
sol = minimize_on_boundary(d0, d1, weights, ZERO_ONE)
clf = build_fair_classifier(d0, d1, sol.pair, weights, allow_degenerate=True)
report = classifier_report(clf, d0, d1, weights, ZERO_ONE)
print(f"fair accuracy          {report['accuracy']:.4f}")
print(f"unconstrained accuracy {report['unconstrained_accuracy']:.4f}")
print(f"separation gap         {report['dsep']:.4f}")

# %% [markdown]
# The group whose curve is active at the optimum gets a soft threshold.
# The other group's rule mixes a threshold with a score-blind coin so
# that its PPV and FOR land on the same pair.  Bins appear in calibrated
# score order, which need not follow the bin labels.

# %%
for g, rule, merged in ((0, clf.rule0, result.merged_bins[0]),
                        (1, clf.rule1, result.merged_bins[1])):
    picks = ", ".join(f"{'/'.join(b)}:{x:.2f}" for b, x in zip(merged, rule.select_prob))
    print(f"group {g}: {picks}")

# %% [markdown]
# The same workflow from the shell:
#
# ```
# sufficiency calibrate data.csv --split 0.2 --seed 0 -o cal.json
# sufficiency optimize cal.json --objective loss
# ```
