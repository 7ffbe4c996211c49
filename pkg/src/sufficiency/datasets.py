"""A synthetic two-group, ten-bin recidivism-style dataset.

Shaped like the public COMPAS decile data: recidivism rises from about 0.2
in the lowest decile to 0.8 in the highest, group 0 is concentrated in low
deciles and group 1 is spread more evenly, giving base rates near 0.4 and
0.5.  Labels depend on the decile only, so the data satisfy sufficiency up
to sampling noise.
"""

from __future__ import annotations

import csv
import io
import random
from importlib import resources

from .calibration import RawRow

DECILE_RATES = (0.20, 0.26, 0.33, 0.39, 0.45, 0.52, 0.58, 0.64, 0.71, 0.80)
DECILE_SHARES = {
    0: (0.30, 0.14, 0.11, 0.10, 0.08, 0.07, 0.06, 0.05, 0.05, 0.04),
    1: (0.13, 0.11, 0.10, 0.10, 0.10, 0.10, 0.10, 0.09, 0.09, 0.08),
}
GROUP_SIZES = {0: 2100, 1: 3150}
DEFAULT_SEED = 2016
BUNDLED = "synthetic_compas.csv"


def make_synthetic_compas(seed: int = DEFAULT_SEED) -> list[RawRow]:
    """Regenerate the bundled rows (``random.Random`` keeps it portable)."""
    rng = random.Random(seed)
    rows = []
    for group in (0, 1):
        n = GROUP_SIZES[group]
        counts = [round(share * n) for share in DECILE_SHARES[group]]
        for decile, (count, rate) in enumerate(zip(counts, DECILE_RATES), start=1):
            for _ in range(count):
                rows.append(RawRow(group, str(decile), int(rng.random() < rate)))
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["group", "bin", "label"])
    for r in rows:
        writer.writerow([r.group, r.bin_id, r.label])
    return buf.getvalue()


def synthetic_compas_path():
    """Context-manager-free path to the bundled CSV (a real file in the package)."""
    return resources.files("sufficiency") / "data" / BUNDLED


def load_synthetic_compas() -> list[RawRow]:
    text = synthetic_compas_path().read_text()
    reader = csv.reader(io.StringIO(text))
    next(reader)
    return [RawRow(int(g), b, int(y)) for g, b, y in reader]
