import json

import numpy as np
import pytest

from complexkit import __version__
from complexkit.cli import (
    EXIT_CHECK,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    UsageError,
    main,
    parse_complex_vector,
)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out)


# ---- argument parsing

def test_vector_syntaxes():
    assert np.array_equal(parse_complex_vector("0.3,0.4"), [0.3, 0.4])
    assert np.array_equal(parse_complex_vector("0.3,0+0,0.4"), [0.3, 0.4j])
    assert np.array_equal(parse_complex_vector("0.3+0.1j,-0.4j"), [0.3 + 0.1j, -0.4j])
    for bad in ("", "a,b", "1,2,3+4"):
        with pytest.raises(UsageError):
            parse_complex_vector(bad)


def test_negative_values_accepted(capsys):
    code, rep = report(capsys, "metric", "eval", "--model", "disc", "--kind", "kobayashi",
                       "--p", "-0.5", "--xi", "1")
    assert code == EXIT_OK and rep["result"]["value"] == pytest.approx(4 / 3)


# ---- examples

def test_metric_eval_example(capsys):
    code, rep = report(capsys, "metric", "eval", "--model", "bidisc", "--kind", "kobayashi",
                       "--p", "0,0", "--xi", "0.3,0+0,0.4")
    assert code == EXIT_OK
    assert rep["result"] == {"value": pytest.approx(0.4)}


def test_report_envelope(capsys):
    code, rep = report(capsys, "cauchy", "eval", "--points", "0.1,0.2+0.3j")
    assert code == EXIT_OK
    assert set(rep) == {"tool_version", "resolved_config", "checks", "result"}
    assert rep["tool_version"] == __version__
    assert rep["resolved_config"]["nodes"] == 256
    for c in rep["checks"]:
        assert set(c) == {"name", "ok", "value", "tolerance"}


def test_selftest_passes(capsys):
    code, rep = report(capsys, "selftest")
    assert code == EXIT_OK
    assert len(rep["checks"]) >= 15 and all(c["ok"] for c in rep["checks"])


def test_unknown_flag_is_usage_error(capsys):
    code, out, err = run(capsys, "selftest", "--bogus")
    assert code == EXIT_USAGE and out == "" and "usage:" in err


def test_missing_required_seed(capsys):
    code, _, err = run(capsys, "bers", "verify", "--h", "0,1")
    assert code == EXIT_USAGE and "--seed" in err
    code, _, _ = run(capsys, "indicatrix", "sample", "--model", "ball")
    assert code == EXIT_USAGE


def test_abbreviated_flag_rejected(capsys):
    code, _, _ = run(capsys, "bers", "verify", "--h", "0,1", "--se", "1")
    assert code == EXIT_USAGE


def test_numeric_error_exit(capsys):
    code, _, err = run(capsys, "metric", "eval", "--model", "ball", "--kind", "kobayashi",
                       "--p", "0.1,0", "--xi", "1,0")
    assert code == EXIT_NUMERIC and "UnsupportedBasePoint" in err


def test_point_outside_is_numeric_error(capsys):
    code, _, _ = run(capsys, "metric", "eval", "--model", "disc", "--kind", "kobayashi",
                     "--p", "1.5", "--xi", "1")
    assert code == EXIT_NUMERIC


def test_check_failure_exit(capsys):
    code, rep = report(capsys, "cauchy", "eval", "--function", "conj", "--points", "0.5")
    assert code == EXIT_CHECK and not rep["checks"][0]["ok"]


# ---- each subcommand

def test_pompeiu_eval(capsys):
    code, rep = report(capsys, "pompeiu", "eval", "--function", "conj", "--points", "0.5,0.2j",
                       "--resolution", "128")
    assert code == EXIT_OK
    assert np.allclose(rep["result"]["values"], [[0.5, 0], [0, -0.2]], atol=5e-2)


def test_dbar_solve(capsys, tmp_path):
    grid = tmp_path / "f.json"
    code, rep = report(capsys, "dbar", "solve", "--alpha", "indicator", "--resolution", "128",
                       "--points", "0.5,2", "--window", "0.2,0.2,0.4,0.4",
                       "--grid-out", str(grid))
    assert code == EXIT_OK
    v = np.array(rep["result"]["values"])
    assert np.allclose(v[:, 0], [0.5, 0.5], atol=2e-2)
    assert {c["name"] for c in rep["checks"]} == {"dbar_residual", "bounded"}
    assert "values" in json.loads(grid.read_text())


def test_dbar_solve_from_gridfield_file(capsys, tmp_path):
    from complexkit.geometry import GridField

    g = GridField.sample(lambda z: (np.abs(z) <= 1).astype(complex), -1 - 1j, 2 / 64, 65, 65,
                         lambda z: np.abs(z) <= 1)
    path = tmp_path / "alpha.json"
    path.write_text(g.dumps())
    code, rep = report(capsys, "dbar", "solve", "--alpha-file", str(path), "--resolution", "64",
                       "--points", "2")
    assert code == EXIT_OK
    assert rep["result"]["values"][0][0] == pytest.approx(0.5, abs=3e-2)


def test_dirichlet_solve_function_and_csv(capsys, tmp_path):
    polar = tmp_path / "u.csv"
    code, rep = report(capsys, "dirichlet", "solve", "--function", "cos2", "--points", "0.5",
                       "--polar-out", str(polar), "--polar-radii", "4", "--polar-angles", "8")
    assert code == EXIT_OK
    assert rep["result"]["values"][0][0] == pytest.approx(0.25, abs=1e-10)
    rows = polar.read_text().splitlines()
    assert rows[0] == "r,theta,u_re,u_im" and len(rows) == 1 + 4 * 8
    r, t, u, _ = map(float, rows[-1].split(","))
    assert u == pytest.approx(r * r * np.cos(2 * t), abs=1e-10)

    data = tmp_path / "f.csv"
    psi = 2 * np.pi * np.arange(64) / 64
    data.write_text("psi,value\n" + "".join(f"{float(p)!r},{float(1 - np.cos(p))!r}\n"
                                             for p in psi))
    code, rep = report(capsys, "dirichlet", "solve", "--data", str(data), "--points", "0")
    assert code == EXIT_OK
    names = {c["name"] for c in rep["checks"]}
    assert {"laplacian_residual", "kernel_normalization", "harnack_r0.5",
            "continuity_gap_shrinks"} <= names
    assert rep["result"]["values"][0][0] == pytest.approx(1.0, abs=1e-12)


def test_dirichlet_bad_csv(capsys, tmp_path):
    data = tmp_path / "bad.csv"
    data.write_text("".join(f"{k * 0.1},{k}\n" for k in range(10)))
    code, _, err = run(capsys, "dirichlet", "solve", "--data", str(data))
    assert code == EXIT_USAGE and "uniform" in err
    data.write_text("psi,value\nfoo,1\n")
    code, _, err = run(capsys, "dirichlet", "solve", "--data", str(data))
    assert code == EXIT_USAGE and "bad row" in err


def test_indicatrix_sample_csv(capsys):
    code, out, _ = run(capsys, "indicatrix", "sample", "--model", "bidisc", "--count", "50",
                       "--seed", "3")
    assert code == EXIT_OK
    rows = out.splitlines()
    assert rows[0] == "xi1_re,xi1_im,xi2_re,xi2_im,value,inside"
    for row in rows[1:]:
        a, b, c, d, v, inside = row.split(",")
        m = max(abs(complex(float(a), float(b))), abs(complex(float(c), float(d))))
        assert float(v) == pytest.approx(m) and int(inside) == (m < 1)


def test_poincare_witness(capsys):
    code, rep = report(capsys, "poincare", "witness", "--matrix", "-1,0,1,0,1,0,0,0",
                       "--isotropy-samples", "50", "--seed", "2")
    assert code == EXIT_OK
    assert rep["result"]["branch"] == "midpoint"
    assert rep["result"]["image_norm"] == pytest.approx(np.sqrt(0.5), abs=1e-12)
    assert rep["result"]["isotropy"]["bidisc_max_defect"] == 0
    code, _, _ = run(capsys, "poincare", "witness", "--matrix", "1,0,2,0,2,0,4,0")
    assert code == EXIT_NUMERIC
    code, _, _ = run(capsys, "poincare", "witness", "--matrix", "1,0,0")
    assert code == EXIT_USAGE


def test_bers_verify(capsys):
    code, rep = report(capsys, "bers", "verify", "--h", "1,2,0,-1", "--trials", "20",
                       "--seed", "0")
    assert code == EXIT_OK
    assert rep["result"]["recovered_h"] == [[1, 0], [2, 0], [0, 0], [-1, 0]]
    assert rep["result"]["is_homomorphism"]


def test_osgood_analyze(capsys, tmp_path):
    code, rep = report(capsys, "osgood", "analyze", "--sequence", "exp", "--j-max", "30",
                       "--radius", "2", "--resolution", "33", "--out-dir", str(tmp_path))
    assert code == EXIT_OK
    assert rep["result"]["covered"] and rep["result"]["ball"]["radius"] >= 2 * 2 / 32
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == [f"mask_k{k}.pbm" for k in range(1, 9)]
    assert (tmp_path / "mask_k8.pbm").read_text().startswith("P1\n33 33\n")
    code, rep = report(capsys, "osgood", "analyze", "--sequence", "constants", "--resolution", "9")
    assert code == EXIT_CHECK and not rep["result"]["covered"]


def test_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run(capsys, "metric", "eval", "--model", "ball", "--kind", "caratheodory",
                          "--p", "0,0", "--xi", "0.6,0.8", "--out", str(out))
    assert code == EXIT_OK and stdout == ""
    assert json.loads(out.read_text())["result"]["value"] == pytest.approx(1.0)


def test_in_process_determinism(capsys):
    argv = ["bers", "verify", "--h", "0.5,1j,-2", "--trials", "10", "--seed", "4"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
