import csv
import json
import subprocess
import sys

import pytest

from noncompact.cli import main


def run(capsys, *argv):
    code = main(list(argv) + ["--no-timing"])
    out, err = capsys.readouterr()
    return code, out, err


def claims(out):
    doc = json.loads(out)
    assert doc["schema"] == "v1" and doc["elapsed_ms"] is None
    for c in doc["claims"]:
        assert set(c) == {"id", "anchor", "expected", "computed", "tol", "pass"} and c["anchor"]
    return doc, {c["id"]: c for c in doc["claims"]}


def test_superadd_r2(capsys):
    code, out, _ = run(capsys, "superadd", "--r", "2", "--m", "10")
    doc, cl = claims(out)
    assert code == 0 and all(c["pass"] for c in cl.values())
    assert cl["series_increasing"]["pass"]
    assert len(doc["constant_series"]) == 10


def test_superadd_superadditive_regime(capsys):
    code, out, _ = run(capsys, "superadd", "--r", "1/2", "--m", "10", "--kind", "double-star")
    doc, cl = claims(out)
    assert code == 0 and cl["series_bounded"]["pass"]
    assert doc["constant_series"] == pytest.approx([1.0] * 10, rel=1e-12)


def test_superadd_bad_ratio(capsys):
    code, out, err = run(capsys, "superadd", "--ratio", "3/4")
    assert code == 2 and out == "" and "ratio" in err


def test_cover_modes(capsys):
    code, out, _ = run(capsys, "cover", "--p", "1", "--mode", "upper", "--rho", "0.55", "--samples", "500")
    doc, cl = claims(out)
    assert code == 0 and doc["net"]["m"] == 11 and cl["net_size"]["computed"] == 23
    code, out, _ = run(capsys, "cover", "--p", "2", "--mode", "lower", "--rho", "0.70")
    doc, cl = claims(out)
    assert code == 0 and doc["witness"]["i"] == 1
    code, out, _ = run(capsys, "cover", "--p", "2", "--eps", "1e-3", "--samples", "500")
    doc, _ = claims(out)
    assert code == 0 and doc["bracket"]["lower"] <= 2**-0.5 <= doc["bracket"]["upper"]
    assert doc["bracket"]["lower"] == pytest.approx(0.7061, abs=1e-4)


def test_cover_lower_custom_centers(capsys):
    code, out, _ = run(capsys, "cover", "--p", "1", "--mode", "lower", "--rho", "0.45", "--centers", "[0.25]")
    doc, cl = claims(out)
    assert code == 0 and cl["witness_uncovered"]["computed"] == 0.75


def test_cover_errors(capsys):
    assert run(capsys, "cover", "--p", "2", "--mode", "upper", "--rho", "0.7")[0] == 2
    assert run(capsys, "cover", "--p", "2", "--mode", "lower", "--rho", "0.8")[0] == 2
    assert run(capsys, "cover", "--p", "2", "--mode", "upper")[0] == 2
    assert run(capsys, "cover", "--p", "2", "--mode", "lower", "--rho", "0.5", "--centers", "{")[0] == 2


def test_coloring_construct_verify_certify(capsys, tmp_path):
    grid = tmp_path / "grid.txt"
    code, out, _ = run(capsys, "coloring", "--m", "8", "--out", str(grid))
    doc, cl = claims(out)
    assert code == 0 and doc["certificate"] == {"bound": 8, "colors_used": 8, "tight": True}
    assert len(grid.read_text().splitlines()) == 255
    code, out, _ = run(capsys, "coloring", "--input", str(grid), "--mode", "verify,certify")
    assert code == 0


@pytest.mark.parametrize("side,expected", [(7, 3), (3, 2), (1, 1)])
def test_coloring_exhaustive(capsys, side, expected):
    code, out, _ = run(capsys, "coloring", "--side", str(side), "--mode", "exhaustive")
    doc, _ = claims(out)
    assert code == 0 and doc["min_colors"] == expected


def test_coloring_errors(capsys, tmp_path):
    assert run(capsys, "coloring", "--side", "9", "--mode", "exhaustive", "--cap", "3")[0] == 2
    assert run(capsys, "coloring", "--mode", "paint", "--m", "2")[0] == 2
    assert run(capsys, "coloring", "--side", "3", "--mode", "construct")[0] == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("1 1\n1\n")
    code, out, _ = run(capsys, "coloring", "--input", str(bad), "--mode", "verify")
    doc, cl = claims(out)
    assert code == 1 and not cl["valid"]["pass"] and doc["violation"] == [[1, 2], [2, 3]]


def test_figure2_csv(capsys, tmp_path):
    out_csv = tmp_path / "fig.csv"
    code, out, _ = run(capsys, "figure2", "--r", "2", "--m", "4", "--out", str(out_csv))
    assert code == 0
    rows = list(csv.reader(out_csv.open()))
    assert len(rows) == 2 * (4 + 1) and rows[0] == ["series", "t", "value"]
    assert sum(r[0] == "staircase" for r in rows) == 5 and sum(r[0] == "envelope" for r in rows) == 4
    code, _, _ = run(capsys, "figure2", "--m", "1", "--out", str(out_csv))
    assert code == 0 and len(list(csv.reader(out_csv.open()))) == 4


def test_figure2_unwritable(capsys, tmp_path):
    code, _, err = run(capsys, "figure2", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 2 and "cannot write" in err


def test_norms(capsys):
    fn = json.dumps({"pieces": [[3, "1/8"], [0, "1/8"], [-1, "1/4"], [2, "1/4"]], "total_space": "1"})
    code, out, _ = run(capsys, "norms", "--function", fn, "--p", "2")
    doc, _ = claims(out)
    assert code == 0
    assert doc["norms"]["star"] == pytest.approx(1.224744871391589, rel=1e-12)
    assert doc["norms"]["double_star"] == pytest.approx(1.4288690166235205, rel=1e-12)
    assert run(capsys, "norms", "--function", "[1,2", "--p", "2")[0] == 2
    assert run(capsys, "norms", "--function", fn, "--p", "0")[0] == 2


@pytest.mark.parametrize("nkp", [("3", "1", "2"), ("5", "2", "1"), ("4", "3", "1"), ("2", "2", "1")])
def test_scaling(capsys, nkp):
    n, k, p = nkp
    code, out, _ = run(capsys, "scaling", "--n", n, "--k", k, "--p", p, "--kappa", "3/2", "--trials", "20")
    doc, cl = claims(out)
    assert code == 0, [c for c in cl.values() if not c["pass"]]
    assert ("p_star_relation" in cl) == (int(k) * int(p) < int(n))


def test_scaling_bad_params(capsys):
    assert run(capsys, "scaling", "--n", "1", "--k", "2")[0] == 2
    assert run(capsys, "scaling", "--kappa", "1/2")[0] == 2


def test_byte_stable(capsys):
    a = run(capsys, "scaling", "--seed", "3", "--trials", "10")[1]
    b = run(capsys, "scaling", "--seed", "3", "--trials", "10")[1]
    assert a == b


def test_report_file_and_timing(capsys, tmp_path):
    rep = tmp_path / "r.json"
    assert main(["superadd", "--m", "3", "--report", str(rep)]) == 0
    assert capsys.readouterr().out == ""
    assert isinstance(json.loads(rep.read_text())["elapsed_ms"], float)


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv("NONCOMPACT_PRECISION", "extended")
    code, out, _ = run(capsys, "superadd", "--m", "4")
    assert code == 0
    monkeypatch.setenv("NONCOMPACT_PRECISION", "bogus")
    code, _, err = run(capsys, "superadd", "--m", "4")
    assert code == 2 and "NONCOMPACT_PRECISION" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "noncompact", "coloring", "--side", "3", "--mode", "exhaustive", "--no-timing"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["min_colors"] == 2
