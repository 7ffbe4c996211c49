"""CSV and JSON formats.

Aggregated distributions: header ``group,score,weight``, one row per bin.
Raw labeled data: header ``group,bin,label``.  JSON numbers are written
with 17 significant digits so values round-trip exactly and output is
byte-stable.
"""

from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from pathlib import Path
from typing import Any, TextIO

from .calibration import RawRow
from .errors import InputError
from .score_model import GroupDistribution, build_group_distribution


class SchemaError(InputError):
    """A CSV file does not follow its documented layout."""


def _rows(path: str | Path, expected: tuple[str, ...]):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if tuple(header) != expected:
            raise SchemaError(f"{path}:1: expected header {','.join(expected)!r}, "
                              f"got {','.join(header)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(expected):
                raise SchemaError(f"{path}:{lineno}: expected {len(expected)} fields, "
                                  f"got {len(row)}")
            yield lineno, [cell.strip() for cell in row]


def _parse_group(path, lineno, text) -> int:
    if text not in ("0", "1"):
        raise SchemaError(f"{path}:{lineno}: group must be 0 or 1, got {text!r}")
    return int(text)


def read_group_masses(path: str | Path) -> dict[int, list[tuple[float, float]]]:
    """Raw ``(score, weight)`` lists per group from an aggregated CSV."""
    masses: dict[int, list[tuple[float, float]]] = defaultdict(list)
    for lineno, (g, s, w) in _rows(path, ("group", "score", "weight")):
        group = _parse_group(path, lineno, g)
        try:
            score, weight = float(s), float(w)
        except ValueError:
            raise SchemaError(f"{path}:{lineno}: score and weight must be numbers") from None
        if not (0.0 <= score <= 1.0):
            raise SchemaError(f"{path}:{lineno}: score {score!r} not in [0, 1]")
        if not weight > 0.0:
            raise SchemaError(f"{path}:{lineno}: weight {weight!r} must be positive")
        masses[group].append((score, weight))
    return dict(masses)


def read_distributions(path: str | Path) -> tuple[dict[int, GroupDistribution], dict[int, float]]:
    """Group distributions and relative group masses from an aggregated CSV.

    Each group's weights are rescaled to sum to one, so counts are accepted
    as well as probabilities.  The second value maps group to its share of
    the file's total weight, the default population weights.
    """
    masses = read_group_masses(path)
    if not masses:
        raise SchemaError(f"{path}: no data rows")
    totals = {g: math.fsum(w for _, w in bins) for g, bins in masses.items()}
    grand = math.fsum(totals.values())
    dists = {}
    for g, bins in masses.items():
        try:
            dists[g] = build_group_distribution([(s, w / totals[g]) for s, w in bins])
        except InputError as exc:
            raise SchemaError(f"{path}: group {g}: {exc}") from exc
    return dists, {g: t / grand for g, t in totals.items()}


def write_distributions(dists: dict[int, GroupDistribution], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["group", "score", "weight"])
    for g in sorted(dists):
        for s, w in zip(dists[g].scores, dists[g].weights):
            writer.writerow([g, format_number(s), format_number(w)])


def read_raw_rows(path: str | Path) -> list[RawRow]:
    rows = []
    for lineno, (g, b, y) in _rows(path, ("group", "bin", "label")):
        group = _parse_group(path, lineno, g)
        if y not in ("0", "1"):
            raise SchemaError(f"{path}:{lineno}: label must be 0 or 1, got {y!r}")
        if not b:
            raise SchemaError(f"{path}:{lineno}: empty bin")
        rows.append(RawRow(group, b, int(y)))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def write_polyline(points, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["p", "q"])
    for p, q in points:
        writer.writerow([format_number(p), format_number(q)])


def format_number(x: float) -> str:
    return format(float(x), ".17g")


def _encode(obj: Any) -> str:
    if obj is None or obj is True or obj is False or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format_number(obj + 0.0)  # folds -0.0 into 0.0
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return _encode(obj.item())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """JSON text with every float at 17 significant digits."""
    return _encode(obj)
