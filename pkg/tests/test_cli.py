import csv
import io
import json
import subprocess
import sys

import pytest

from sufficiency import (
    ZERO_ONE,
    PopulationWeights,
    build_group_distribution,
    minimize_on_boundary,
    trace_boundary,
)
from sufficiency.cli import main
from sufficiency.datasets import synthetic_compas_path
from sufficiency.region import boundary_q

D2_D3 = ("group,score,weight\n0,0.9,0.25\n0,0.5,0.5\n0,0.1,0.25\n"
         "1,0.9,0.5\n1,0.5,0.3\n1,0.1,0.2\n")
TWO = "group,score,weight\n0,0.8,0.5\n0,0.2,0.5\n"
EMPTY = "group,score,weight\n0,0.4,0.5\n0,0.2,0.5\n1,0.9,0.5\n1,0.6,0.5\n"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def d2d3(tmp_path):
    path = tmp_path / "d2d3.csv"
    path.write_text(D2_D3)
    return path


def read_polyline(path):
    with open(path) as fh:
        return [(float(r["p"]), float(r["q"])) for r in csv.DictReader(fh)]


class TestRegion:
    def test_example_polyline(self, tmp_path):
        src = tmp_path / "two.csv"
        src.write_text(TWO)
        poly = tmp_path / "poly.csv"
        code, out, _ = run("region", src, "--samples", 3, "--polyline", poly)
        assert code == 0
        assert out.splitlines()[0] == "k,score,mu,p,q"
        points = read_polyline(poly)
        for target in [(0.5, 0.2), (0.65, 0.2), (0.8, 0.2), (0.8, 0.5)]:
            assert any(abs(p - target[0]) < 1e-12 and abs(q - target[1]) < 1e-12
                       for p, q in points), target

    def test_polyline_on_boundary(self, d2d3, tmp_path):
        poly = tmp_path / "poly.csv"
        assert run("region", d2d3, "--group", 1, "--polyline", poly)[0] == 0
        d3 = build_group_distribution([(0.9, 0.5), (0.5, 0.3), (0.1, 0.2)])
        points = read_polyline(poly)
        # the last point closes the vertical edge at (s_max, pi)
        assert points[-1] == pytest.approx((0.9, d3.base_rate))
        for p, q in points[:-1]:
            assert abs(q - boundary_q(d3, p)) < 1e-9
        for pb in d3.p_break:
            assert any(p == pb for p, _ in points)

    def test_breakpoint_table(self, d2d3):
        code, out, _ = run("region", d2d3)
        rows = list(csv.DictReader(io.StringIO(out)))
        # mu = 1/4, 3/4, 1: p = 0.9, 0.475/0.75, pi; q = 0.275/0.75, then s_min
        assert [float(r["mu"]) for r in rows] == pytest.approx([0.25, 0.75, 1.0])
        assert [float(r["p"]) for r in rows] == pytest.approx([0.9, 19 / 30, 0.5], abs=1e-15)
        assert [float(r["q"]) for r in rows] == pytest.approx([11 / 30, 0.1, 0.1], abs=1e-15)

    def test_missing_group(self, tmp_path):
        src = tmp_path / "two.csv"
        src.write_text(TWO)
        code, _, err = run("region", src, "--group", 1)
        assert code == 1 and "group 1" in err


class TestTrace:
    def test_segments(self, d2d3, tmp_path):
        poly = tmp_path / "poly.csv"
        code, out, _ = run("trace", d2d3, "--samples", 5, "--polyline", poly)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [float(r["p_left"]) for r in rows] == pytest.approx([0.62, 19 / 30, 0.75, 0.9])
        assert rows[-1]["is_vertical"] == "1"
        assert {r["active_group"] for r in rows} == {"0"}
        points = read_polyline(poly)
        assert points[0] == pytest.approx((0.62, 0.1))
        assert points[-1] == pytest.approx((0.9, 0.5))
        assert any(abs(p - 19 / 30) < 1e-15 for p, _ in points)

    def test_empty_intersection(self, tmp_path):
        src = tmp_path / "empty.csv"
        src.write_text(EMPTY)
        code, _, err = run("trace", src)
        assert code == 1
        assert "trivial option" in err


class TestOptimize:
    def test_matches_library(self, d2d3, tmp_path):
        target = tmp_path / "out.json"
        code, _, _ = run("optimize", d2d3, "--weights", "0.5,0.5", "-o", target)
        assert code == 0
        doc = json.loads(target.read_text())
        d2, d3 = (build_group_distribution([(0.9, 0.25), (0.5, 0.5), (0.1, 0.25)]),
                  build_group_distribution([(0.9, 0.5), (0.5, 0.3), (0.1, 0.2)]))
        sol = minimize_on_boundary(d2, d3, PopulationWeights.from_groups(d2, d3, 0.5), ZERO_ONE)
        assert (doc["pair"]["p"], doc["pair"]["q"]) == (sol.pair.p, sol.pair.q)
        assert doc["solution"]["objective_value"] == sol.objective_value
        assert doc["metrics"]["expected_loss"] == pytest.approx(0.27, abs=1e-12)
        assert doc["solution"]["other_objective"]["name"] == "separation"
        # the optimum sits on the traced boundary
        summary = trace_boundary(d2, d3)
        assert doc["pair"]["p"] == pytest.approx(summary.p_max)

    def test_byte_identical(self, d2d3, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for target in (a, b):
            assert run("optimize", d2d3, "--objective", "separation", "-o", target)[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert json.loads(a.read_text())["solution"]["other_objective"]["name"] == "loss"

    def test_costs_and_weights(self, d2d3):
        code, out, _ = run("optimize", d2d3, "--l01", 2, "--l10", 1, "--weights", "1,3")
        doc = json.loads(out)
        assert code == 0
        assert doc["solution"]["loss"] == {"l01": 2, "l10": 1}
        assert doc["metrics"]["weights"] == pytest.approx([0.25, 0.75])

    @pytest.mark.parametrize("argv", [
        ["--objective", "separation", "--l01", "2"],
        ["--weights", "0.5"],
        ["--objective", "accuracy"],
    ])
    def test_usage_errors(self, d2d3, argv):
        code, _, err = run("optimize", d2d3, *argv)
        assert code == 1
        assert "usage" in err

    def test_missing_file(self, tmp_path):
        assert run("optimize", tmp_path / "nope.csv")[0] == 1

    def test_bad_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        code, _, err = run("optimize", bad)
        assert code == 1 and "invalid JSON" in err


class TestCalibrate:
    def test_pipeline(self, tmp_path):
        cal, dists = tmp_path / "cal.json", tmp_path / "dists.csv"
        code, _, _ = run("calibrate", synthetic_compas_path(), "--split", 0.2, "--seed", 0,
                         "-o", cal, "--distributions", dists)
        assert code == 0
        doc = json.loads(cal.read_text())
        assert doc["split_fraction"] == 0.2 and doc["split_seed"] == 0
        assert [g["group"] for g in doc["groups"]] == [0, 1]
        assert dists.read_text().startswith("group,score,weight\n")
        code, out, _ = run("optimize", cal)
        assert code == 0
        result = json.loads(out)
        labels = [b for entry in result["groups"][0]["rule"] for b in entry["bins"]]
        assert sorted(labels, key=int) == [str(i) for i in range(1, 11)]
        # the CSV route gives the same distributions and so the same pair
        w = [g["count"] for g in doc["groups"]]
        code, out_csv, _ = run("optimize", dists, "--weights", f"{w[0]},{w[1]}")
        assert json.loads(out_csv)["pair"] == pytest.approx(result["pair"])

    def test_bad_split(self, tmp_path):
        code, _, err = run("calibrate", synthetic_compas_path(), "--split", 1.5)
        assert code == 1 and "split" in err


class TestVerify:
    def test_passes(self, d2d3):
        code, out, _ = run("verify", d2d3, "--grid", 4)
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [r["passed"] for r in rows] == ["1", "1"]

    def test_grid_zero(self, d2d3):
        code, _, err = run("verify", d2d3, "--grid", 0)
        assert code == 1 and "usage" in err

    def test_failure_exit_code(self, d2d3):
        # a negative tolerance rejects even exact pairs
        code, out, _ = run("verify", d2d3, "--grid", 2, "--tol", -1e-3)
        assert code == 2
        assert out.splitlines()[1].endswith(",0")


def test_module_entry_point(d2d3):
    proc = subprocess.run([sys.executable, "-m", "sufficiency.cli", "trace", str(d2d3)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("p_left,p_right")
