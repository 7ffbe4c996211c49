"""Empirical group distributions from raw labeled score bins.

Raw risk bins (e.g. deciles) are not probabilities.  The rows are split,
stratified by bin: one part estimates a pooled calibration curve
``P(Y=1 | bin)``, the rest estimates each group's bin frequencies.  Bins
whose calibrated values coincide are merged inside a group.

The split is driven by Python's Mersenne Twister (``random.Random``) through
a partial Fisher-Yates shuffle, so a given seed selects the same rows on
every platform and Python version.
"""

from __future__ import annotations

import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable

from .errors import DegenerateSupport, EmptyBinInCalibrationSplit, InputError, InsufficientData
from .score_model import SCORE_MERGE_TOL, GroupDistribution, build_group_distribution

GENERATOR = "python-mt19937-partial-fisher-yates"


@dataclass(frozen=True)
class RawRow:
    group: int
    bin_id: str
    label: int

    def __post_init__(self):
        if self.group not in (0, 1):
            raise InputError(f"group must be 0 or 1, got {self.group!r}")
        if self.label not in (0, 1):
            raise InputError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class CalibrationResult:
    """Calibration curve, per-group distributions, and split provenance.

    ``merged_bins[a][i]`` lists the original bin ids behind the ``i``-th
    score of ``distributions[a]``; ``group_counts[a]`` is the group's size
    in the estimation split.
    """

    calibration_map: dict[str, float]
    distributions: dict[int, GroupDistribution]
    merged_bins: dict[int, tuple[tuple[str, ...], ...]]
    group_counts: dict[int, int]
    split_seed: int
    split_fraction: float
    generator: str = GENERATOR


def bin_sort_key(bin_id: str):
    """Numeric bins sort numerically, everything else lexically after them."""
    try:
        return (0, float(bin_id), "")
    except ValueError:
        return (1, 0.0, bin_id)


def _sample_without_replacement(rng: random.Random, n: int, k: int) -> list[int]:
    idx = list(range(n))
    for i in range(k):
        j = i + int(rng.random() * (n - i))
        idx[i], idx[j] = idx[j], idx[i]
    return idx[:k]


def calibrate_scores(rows: Iterable[RawRow], split_fraction: float = 0.2,
                     seed: int = 0) -> CalibrationResult:
    """Estimate calibrated per-group score distributions from labeled rows.

    Within each bin ``floor(split_fraction * count)`` rows go to the
    calibration split; the rest estimate the groups' bin weights.

    Raises
    ------
    EmptyBinInCalibrationSplit
        A bin has estimation rows but none for calibration.
    InsufficientData
        A group ends with fewer than two distinct calibrated scores.
    """
    if not 0.0 < split_fraction < 1.0:
        raise InputError(f"split fraction must lie in (0, 1), got {split_fraction!r}")
    by_bin: dict[str, list[RawRow]] = defaultdict(list)
    for row in rows:
        by_bin[str(row.bin_id)].append(row)
    if not by_bin:
        raise InsufficientData("no rows")

    rng = random.Random(seed)
    calibration_map: dict[str, float] = {}
    estimation: dict[int, Counter] = {0: Counter(), 1: Counter()}
    for bin_id in sorted(by_bin, key=bin_sort_key):
        members = by_bin[bin_id]
        n_cal = math.floor(split_fraction * len(members))
        if n_cal == 0:
            raise EmptyBinInCalibrationSplit(
                f"bin {bin_id!r} has {len(members)} rows, none left for calibration")
        chosen = set(_sample_without_replacement(rng, len(members), n_cal))
        labels = [members[i].label for i in sorted(chosen)]
        calibration_map[bin_id] = math.fsum(labels) / len(labels)
        for i, row in enumerate(members):
            if i not in chosen:
                estimation[row.group][bin_id] += 1

    distributions, merged, counts = {}, {}, {}
    for group, counter in estimation.items():
        total = sum(counter.values())
        if total == 0:
            continue
        pairs = [(calibration_map[b], n / total) for b, n in counter.items()]
        try:
            dist = build_group_distribution(pairs)
        except DegenerateSupport as exc:
            raise InsufficientData(f"group {group}: {exc}") from exc
        labels_per_score: list[list[str]] = [[] for _ in dist.scores]
        for b in sorted(counter, key=bin_sort_key):
            labels_per_score[dist.score_index(calibration_map[b], SCORE_MERGE_TOL)].append(b)
        distributions[group] = dist
        merged[group] = tuple(tuple(x) for x in labels_per_score)
        counts[group] = total

    return CalibrationResult(calibration_map, distributions, merged, counts,
                             seed, split_fraction)
