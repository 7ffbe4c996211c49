# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
# ---

# %% [markdown]
# # Pairs both groups can share
#
# Predictive parity asks for the same PPV and FOR in both groups.  The
# shared pairs are the intersection of the two regions, bounded below by
# the upper envelope of the two curves.

# %%
import numpy as np

from sufficiency import (
    boundary_q,
    build_group_distribution,
    compute_pmax_qmin,
    degenerate_pairs,
    intersection_boundary_q,
    intersection_nonempty,
    trace_boundary,
)

d0 = build_group_distribution([(0.9, 0.25), (0.5, 0.5), (0.1, 0.25)])
d1 = build_group_distribution([(0.9, 0.5), (0.5, 0.3), (0.1, 0.2)])
print("base rates", d0.base_rate, d1.base_rate)
print("nonempty", intersection_nonempty(d0, d1))
print("p_max, q_min", compute_pmax_qmin(d0, d1))

# %% [markdown]
# ## Tracing the common boundary
#
# The trace walks from the larger base rate to `p_max` and reports which
# group's curve is on top over each stretch.

# %%
summary = trace_boundary(d0, d1)
for seg in summary.segments:
    if seg.is_vertical:
        print(f"vertical at p={seg.p_right:.4f} for q in [{seg.q_bottom:.4f}, {seg.q_top:.4f}]")
    else:
        print(f"[{seg.p_left:.4f}, {seg.p_right:.4f}]  group {seg.active_group} on top "
              f"(pieces k={seg.k}, l={seg.l})")

# %%
ps = np.linspace(max(d0.base_rate, d1.base_rate), summary.p_max, 7)
for p in ps:
    print(f"p={p:.3f}  group0 {boundary_q(d0, p):.4f}  group1 {boundary_q(d1, p):.4f}  "
          f"common {intersection_boundary_q(d0, d1, p):.4f}")

# %% [markdown]
# ## When nothing is shared
#
# If one group's scores all sit below the other's base rate, no
# nonconstant pair works for both.  The fallbacks use a constant rule in
# at least one group.

# %%
low = build_group_distribution([(0.4, 0.5), (0.2, 0.5)])
high = build_group_distribution([(0.9, 0.5), (0.6, 0.5)])
print("nonempty", intersection_nonempty(low, high))
opts = degenerate_pairs(low, high)
print("trivial option:", opts.trivial_rule, opts.trivial_point)
for edge in opts.edges:
    print(edge)
