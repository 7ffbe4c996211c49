"""Command-line interface.

Subcommands::

    region     breakpoints and boundary polyline of one group
    trace      segments and polyline of the two-group common boundary
    optimize   optimal fair classifier for a loss or for separation
    calibrate  calibrated group distributions from raw labeled rows
    verify     brute-force check of the closed-form regions

Exit status is 0 on success, 1 on bad input, 2 on verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as fio
from .calibration import calibrate_scores
from .classifier import build_fair_classifier, classifier_document, classifier_report
from .errors import EmptyIntersection, InputError, VerificationFailure
from .intersection import degenerate_pairs, trace_boundary
from .objectives import LossSpec, PopulationWeights, dsep, expected_loss, minimize_on_boundary
from .oracle import verify_region
from .region import boundary_q
from .score_model import build_group_distribution


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _weights(text):
    try:
        w0, w1 = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected two numbers, e.g. 0.4,0.6") from None
    if w0 < 0 or w1 < 0 or w0 + w1 <= 0:
        raise argparse.ArgumentTypeError("weights must be nonnegative with positive sum")
    return w0 / (w0 + w1), w1 / (w0 + w1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sufficiency", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("region", help="single-group breakpoints and boundary polyline")
    p.add_argument("input", help="CSV with header group,score,weight")
    p.add_argument("--group", type=int, choices=(0, 1), default=0)
    p.add_argument("--samples", type=_positive_int, default=200)
    p.add_argument("--polyline", help="write boundary polyline CSV (p,q) here")

    p = sub.add_parser("trace", help="common boundary of both groups")
    p.add_argument("input", help="CSV with header group,score,weight")
    p.add_argument("--samples", type=_positive_int, default=200)
    p.add_argument("--polyline", help="write boundary polyline CSV (p,q) here")

    p = sub.add_parser("optimize", help="optimal classifier under predictive parity")
    p.add_argument("input", help="distributions CSV or calibration JSON")
    p.add_argument("--objective", choices=("loss", "separation"), default="loss")
    p.add_argument("--l01", type=float, help="cost of a missed positive (default 1)")
    p.add_argument("--l10", type=float, help="cost of a false positive (default 1)")
    p.add_argument("--weights", type=_weights, help="group probabilities w0,w1")
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")

    p = sub.add_parser("calibrate", help="calibrate raw bins into group distributions")
    p.add_argument("input", help="CSV with header group,bin,label")
    p.add_argument("--split", type=float, default=0.2,
                   help="fraction of each bin used for the calibration curve")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    p.add_argument("--distributions", help="also write distributions CSV here")

    p = sub.add_parser("verify", help="check closed forms against grid enumeration")
    p.add_argument("input", help="CSV with header group,score,weight")
    p.add_argument("--grid", type=_positive_int, default=8)
    p.add_argument("--tol", type=float, default=1e-9)
    return parser


def _emit(text: str, path: str | None, out) -> None:
    if path:
        Path(path).write_text(text)
    else:
        out.write(text)


def _with_polyline(points, path):
    if path:
        with open(path, "w", newline="") as fh:
            fio.write_polyline(points, fh)


def _load_csv_groups(path, need_both=True):
    dists, shares = fio.read_distributions(path)
    if need_both and set(dists) != {0, 1}:
        raise InputError(f"{path}: need rows for both groups 0 and 1")
    return dists, shares


def region_polyline(dist, samples: int):
    """Boundary points: uniform samples, every breakpoint, then the vertical edge top."""
    ps = np.union1d(np.linspace(dist.base_rate, dist.s_max, samples), dist.p_break_arr)
    qs = boundary_q(dist, ps)
    points = list(zip(ps.tolist(), np.atleast_1d(qs).tolist()))
    points.append((dist.s_max, dist.base_rate))
    return points


def cmd_region(args, out) -> int:
    dists, _ = _load_csv_groups(args.input, need_both=False)
    if args.group not in dists:
        raise InputError(f"{args.input}: no rows for group {args.group}")
    d = dists[args.group]
    out.write("k,score,mu,p,q\n")
    for k in range(1, d.m + 1):
        p = d.p_break[k - 1]
        fields = [k, d.scores[k - 1], d.mu[k - 1], p, boundary_q(d, p)]
        out.write(",".join(fio.format_number(x) if isinstance(x, float) else str(x)
                           for x in fields) + "\n")
    _with_polyline(region_polyline(d, args.samples), args.polyline)
    return 0


def trace_polyline(d0, d1, summary, samples: int):
    from .intersection import intersection_boundary_q

    edges = [s.p_left for s in summary.segments] + [summary.p_max]
    ps = np.union1d(np.linspace(summary.p_min, summary.p_max, samples), edges)
    qs = intersection_boundary_q(d0, d1, ps)
    points = list(zip(ps.tolist(), np.atleast_1d(qs).tolist()))
    last = summary.segments[-1]
    if last.is_vertical:
        points.append((last.p_right, last.q_top))
    return points


def _report_empty(d0, d1, err) -> None:
    opts = degenerate_pairs(d0, d1)
    err.write("no nondegenerate classifier satisfies predictive parity\n")
    err.write(f"trivial option: {opts.trivial_rule} at "
              f"(p, q) = ({opts.trivial_point[0]:.6g}, {opts.trivial_point[1]:.6g})\n")
    for e in opts.edges:
        err.write(f"group {e.group} {e.orientation} degenerate edge at {e.fixed:.6g} "
                  f"crosses group {e.other}'s region over [{e.lo:.6g}, {e.hi:.6g}]\n")


def cmd_trace(args, out) -> int:
    dists, _ = _load_csv_groups(args.input)
    summary = trace_boundary(dists[0], dists[1])
    out.write("p_left,p_right,active_group,k,l,is_vertical\n")
    for s in summary.segments:
        out.write(f"{fio.format_number(s.p_left)},{fio.format_number(s.p_right)},"
                  f"{s.active_group},{s.k},{s.l},{int(s.is_vertical)}\n")
    _with_polyline(trace_polyline(dists[0], dists[1], summary, args.samples),
                   args.polyline)
    return 0


def _load_calibration_json(path):
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    try:
        dists, labels, counts = {}, {}, {}
        for entry in doc["groups"]:
            g = int(entry["group"])
            dists[g] = build_group_distribution([(b["score"], b["weight"]) for b in entry["bins"]])
            labels[g] = [dists[g].score_index(b["score"], 1e-12) for b in entry["bins"]]
            labels[g] = [b["bins"] for _, b in sorted(zip(labels[g], entry["bins"]),
                                                        key=lambda t: t[0])]
            counts[g] = entry["count"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a calibration document ({exc})") from None
    if set(dists) != {0, 1}:
        raise InputError(f"{path}: need both groups 0 and 1")
    total = counts[0] + counts[1]
    return dists, {0: counts[0] / total, 1: counts[1] / total}, labels


def cmd_optimize(args, out) -> int:
    if args.objective != "loss" and (args.l01 is not None or args.l10 is not None):
        raise UsageError("--l01/--l10 only apply with --objective loss")
    if str(args.input).endswith(".json"):
        dists, shares, labels = _load_calibration_json(args.input)
    else:
        (dists, shares), labels = _load_csv_groups(args.input), None
    d0, d1 = dists[0], dists[1]
    w0, w1 = args.weights if args.weights else (shares[0], shares[1])
    weights = PopulationWeights.from_groups(d0, d1, w0, w1)
    loss = LossSpec(1.0 if args.l01 is None else args.l01,
                    1.0 if args.l10 is None else args.l10)
    objective = loss if args.objective == "loss" else "separation"

    sol = minimize_on_boundary(d0, d1, weights, objective)
    clf = build_fair_classifier(d0, d1, sol.pair, weights, allow_degenerate=True)
    metrics = classifier_report(clf, d0, d1, weights, loss)
    doc = classifier_document(clf, metrics, labels)
    pair = (sol.pair.p, sol.pair.q)
    other = ("separation", float(dsep(pair, weights))) if objective is loss else \
            ("loss", float(expected_loss(pair, weights, loss)))
    seg = sol.segment
    doc["solution"] = {
        "objective": args.objective,
        "loss": {"l01": loss.l01, "l10": loss.l10},
        "objective_value": sol.objective_value,
        "other_objective": {"name": other[0], "value": other[1]},
        "candidate_kind": sol.candidate_kind,
        "degenerate_objective": sol.degenerate_objective,
        "segment": {"p_left": seg.p_left, "p_right": seg.p_right,
                    "active_group": seg.active_group, "k": seg.k, "l": seg.l,
                    "is_vertical": seg.is_vertical},
    }
    _emit(fio.dumps(doc) + "\n", args.output, out)
    return 0


def calibration_document(result) -> dict:
    groups = []
    for g in sorted(result.distributions):
        d = result.distributions[g]
        groups.append({
            "group": g,
            "count": result.group_counts[g],
            "bins": [{"score": s, "weight": w, "bins": list(b)}
                     for s, w, b in zip(d.scores, d.weights, result.merged_bins[g])],
        })
    return {
        "split_fraction": result.split_fraction,
        "split_seed": result.split_seed,
        "generator": result.generator,
        "calibration_map": result.calibration_map,
        "groups": groups,
    }


def cmd_calibrate(args, out) -> int:
    rows = fio.read_raw_rows(args.input)
    result = calibrate_scores(rows, args.split, args.seed)
    _emit(fio.dumps(calibration_document(result)) + "\n", args.output, out)
    if args.distributions:
        with open(args.distributions, "w", newline="") as fh:
            fio.write_distributions(result.distributions, fh)
    return 0


def cmd_verify(args, out) -> int:
    dists, _ = _load_csv_groups(args.input, need_both=False)
    status = 0
    out.write("group,resolution,pairs,outside,max_below_boundary,breakpoints_attained,passed\n")
    for g in sorted(dists):
        try:
            rep = verify_region(dists[g], args.grid, args.tol)
        except VerificationFailure:
            rep = verify_region(dists[g], args.grid, args.tol, raise_on_failure=False)
            status = 2
        out.write(f"{g},{rep.resolution},{rep.n_pairs},{rep.n_outside},"
                  f"{rep.max_below_boundary:.3e},{int(rep.breakpoints_attained)},"
                  f"{int(rep.passed)}\n")
    return status


COMMANDS = {
    "region": cmd_region,
    "trace": cmd_trace,
    "optimize": cmd_optimize,
    "calibrate": cmd_calibrate,
    "verify": cmd_verify,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(parser.format_usage())
        err.write(f"{exc}\n")
        return 1
    except EmptyIntersection as exc:
        err.write(f"error: {exc}\n")
        if getattr(args, "input", None) and not str(args.input).endswith(".json"):
            dists, _ = fio.read_distributions(args.input)
            _report_empty(dists[0], dists[1], err)
        return 1
    except (InputError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
