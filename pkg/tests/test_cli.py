import csv
import io
import json
import subprocess
import sys

import pytest

from polymult import examples
from polymult.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def ex(name):
    return str(examples.path(name))


@pytest.fixture
def empty_system(tmp_path):
    p = tmp_path / "empty.json"
    p.write_text(json.dumps({"vectors": [[1], [-1]], "offsets": [0, -1]}))
    return str(p)


class TestCommands:
    def test_validate(self, capsys):
        code, out, _ = run(["validate", "--input", ex("interval")], capsys)
        assert code == 0 and json.loads(out)["admissible"] is True

    def test_points(self, capsys):
        code, out, _ = run(["points", "--input", ex("interval"), "--k", "1"], capsys)
        assert code == 0
        assert out.splitlines() == ["x_1", "0", "1", "2", "3", "4"]

    def test_pmf(self, capsys):
        code, out, _ = run(["pmf", "--input", ex("triangle"), "--k", "1"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 10
        assert sum(int(r["weight"]) for r in rows) == 27

    def test_pmf_json(self, capsys):
        code, out, _ = run(["pmf", "--input", ex("interval"), "--format", "json"], capsys)
        data = json.loads(out)
        assert data["normalizer"] == "16" and data["weights"] == ["1", "4", "6", "4", "1"]

    def test_minimize(self, capsys):
        code, out, _ = run(["minimize", "--input", ex("interval")], capsys)
        data = json.loads(out)
        assert code == 0 and data["converged"] and abs(data["m"][0] - 2) < 1e-10

    def test_limit(self, capsys):
        code, out, _ = run(["limit", "--input", ex("triangle")], capsys)
        data = json.loads(out)
        assert data["Sigma"][0][1] == pytest.approx(-1 / 3)
        assert data["Q"] == [[2.0, 1.0], [1.0, 2.0]]

    def test_limit_point(self, capsys):
        code, out, _ = run(["limit", "--input", ex("point")], capsys)
        assert code == 0 and json.loads(out)["degenerate"] is True

    def test_ratio(self, capsys):
        code, out, _ = run(["ratio", "--input", ex("interval2"), "--ks", "16,64,256", "--x", "1"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and [r["k"] for r in rows] == ["16", "64", "256"]
        assert float(rows[0]["predicted"]) == pytest.approx(-1.0)
        errs = [float(r["abs_error"]) for r in rows]
        assert errs == sorted(errs, reverse=True)

    def test_ratio_wrong_dimension(self, capsys):
        code, _, err = run(["ratio", "--input", ex("triangle"), "--ks", "16", "--x", "1"], capsys)
        assert code == 4 and "parse-error" in err

    def test_converge(self, capsys):
        code, out, _ = run(["converge", "--input", ex("interval2"), "--ks", "4,16,64"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 6
        assert {r["recentering"] for r in rows} == {"minimizer", "mean"}

    def test_converge_point(self, capsys):
        code, out, _ = run(["converge", "--input", ex("point"), "--ks", "1,4"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert all(float(r[f]) == 0 for r in rows for f in ("tv_distance", "mean_drift", "cov_error"))

    def test_sample(self, capsys):
        code, out, _ = run(["sample", "--input", ex("triangle"), "--k", "2", "--seed", "7", "--count", "50"], capsys)
        assert code == 0 and len(out.splitlines()) == 51

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "m.json"
        code, out, _ = run(["minimize", "--input", ex("triangle"), "--output", str(target)], capsys)
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["m"] == [1.0, 1.0]


@pytest.mark.parametrize(
    "argv",
    [
        ["pmf", "--input", "triangle", "--k", "3"],
        ["sample", "--input", "skew", "--k", "4", "--seed", "99", "--count", "200"],
        ["converge", "--input", "skew", "--ks", "4,16"],
        ["ratio", "--input", "triangle", "--ks", "64,512", "--x", "0.3,-0.2", "--c", "0.15"],
        ["limit", "--input", "diagonal"],
    ],
)
def test_byte_identical_reruns(argv, capsys):
    argv = [ex(a) if a in examples.NAMES else a for a in argv]
    first = run(argv, capsys)
    second = run(argv, capsys)
    assert first == second and first[0] == 0


class TestExitCodes:
    def test_inadmissible_validate(self, capsys, empty_system):
        code, out, err = run(["validate", "--input", empty_system], capsys)
        assert code == 1 and json.loads(out)["nonempty"] is False
        assert err.startswith("polymult: error: inadmissible-system")

    def test_inadmissible_other(self, capsys, empty_system):
        code, out, err = run(["pmf", "--input", empty_system], capsys)
        assert code == 1 and out == ""
        assert len(err.strip().splitlines()) == 1

    def test_numerical_failure(self, capsys, monkeypatch):
        from polymult import limit

        monkeypatch.setattr(limit, "MAX_CONDITION", 2.0)
        code, _, err = run(["limit", "--input", ex("triangle")], capsys)
        assert code == 2 and "near-singular-Q" in err

    def test_resource_limit(self, capsys):
        code, _, err = run(["pmf", "--input", ex("triangle"), "--k", "50", "--point-cap", "10"], capsys)
        assert code == 3 and "resource-limit" in err

    @pytest.mark.parametrize(
        "argv",
        [
            ["pmf", "--input", "/no/such/file.json"],
            ["bogus", "--input", "x"],
            ["ratio", "--input", "INTERVAL", "--c", "0.5"],
            ["pmf", "--input", "INTERVAL", "--k", "0"],
            ["sample", "--input", "INTERVAL", "--seed", "-1"],
        ],
    )
    def test_parse_and_io(self, argv, capsys):
        argv = [ex("interval") if a == "INTERVAL" else a for a in argv]
        code, _, err = run(argv, capsys)
        assert code == 4
        assert len(err.strip().splitlines()) == 1

    def test_malformed_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{not json")
        code, _, err = run(["validate", "--input", str(p)], capsys)
        assert code == 4 and "parse-error" in err


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "polymult", "points", "--input", ex("interval2"), "--k", "1"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and out.stdout.splitlines() == ["x_1", "0", "1", "2"]
