import json

import pytest

from solstab import catalog
from solstab.cli import (
    EXIT_INPUT_ERROR,
    EXIT_NOT_SOLITON,
    EXIT_STABLE,
    EXIT_UNSTABLE,
    analyze_file,
    main,
)


def cat(name):
    return str(catalog.catalog_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_alg(tmp_path, name, doc):
    p = tmp_path / f"{name}.alg"
    p.write_text(json.dumps(doc))
    return str(p)


def test_analyze_h3_stable(capsys):
    code, out, err = run(capsys, "analyze", cat("heisenberg3"), "--extend")
    assert code == EXIT_STABLE
    assert "verdict: stable" in out
    assert "0.569" in out  # max q rounded to 3 decimals
    assert "1.000" in out  # max Ro of the extension
    assert "✓" in out


def test_analyze_json_format(capsys):
    code, out, _ = run(
        capsys, "analyze", cat("heisenberg3"), "--extend", "--format", "json"
    )
    assert code == EXIT_STABLE
    doc = json.loads(out)
    assert doc["verdict"] == "stable"
    assert doc["lambda"] == pytest.approx(-1.5)
    assert doc["trace_D"] == pytest.approx(4.0)
    assert doc["step"] == 2
    assert doc["stability"]["max_q"] == pytest.approx(0.5687293044, abs=1e-9)
    assert doc["stability"]["max_Ro"] == pytest.approx(1.0, abs=1e-9)
    assert doc["soliton_residual"] <= 1e-12


def test_analyze_csv_format(capsys):
    code, out, _ = run(
        capsys, "analyze", cat("heisenberg3"), "--extend", "--format", "csv"
    )
    assert code == EXIT_STABLE
    lines = out.strip().splitlines()
    assert lines[0].startswith("#,step,")
    fields = lines[1].split(",")
    assert fields[1] == "2"
    assert fields[2] == "-1.5"
    assert fields[3] == "4"
    assert fields[4] == "0.569"


def test_analyze_su2_not_expanding_still_soliton(capsys):
    # su(2) certifies as an Einstein (hence soliton) metric with lambda > 0;
    # the q criterion fails, so the verdict is unstable
    code, out, _ = run(capsys, "analyze", cat("su2"))
    assert code == EXIT_UNSTABLE
    assert "verdict:" in out


def test_analyze_missing_file(capsys):
    code, _, err = run(capsys, "analyze", "/nonexistent/x.alg")
    assert code == EXIT_INPUT_ERROR
    assert "error:" in err


def test_analyze_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.alg"
    p.write_text("{not json")
    code, _, err = run(capsys, "analyze", str(p))
    assert code == EXIT_INPUT_ERROR
    assert "malformed" in err


def test_analyze_broken_jacobi_names_triple(tmp_path, capsys):
    path = write_alg(
        tmp_path,
        "broken",
        {"dim": 3, "brackets": [[1, 2, 3, 1.0], [1, 3, 1, 1.0], [2, 3, 1, 1.0]]},
    )
    code, _, err = run(capsys, "analyze", path)
    assert code == EXIT_INPUT_ERROR
    assert "Jacobi identity violated" in err
    assert "(e1, e2, e3)" in err


def test_analyze_gaussian_flag(capsys):
    code, out, _ = run(
        capsys, "analyze", cat("heisenberg3"), "--gaussian", "--ignore-stability"
    )
    assert code == EXIT_STABLE
    assert "k=7" in out
    assert "product residual" in out


def test_table_catalog(capsys):
    code, out, _ = run(capsys, "table", str(catalog.catalog_dir()))
    assert code == EXIT_STABLE
    lines = out.strip().splitlines()
    assert lines[0].split()[:2] == ["#", "step"]
    rows = {line.split()[0]: line for line in lines[1:]}
    assert set(rows) == {
        "abelian2", "abelian3", "abelian4",
        "heisenberg3", "heisenberg5", "su2", "solv4",
    }
    h3 = rows["heisenberg3"].split()
    assert h3[1:6] == ["2", "-1.5", "4", "0.569", "✓"]
    h5 = rows["heisenberg5"].split()
    assert h5[1:6] == ["2", "-2", "9", "1.106", "✓"]
    s4 = rows["solv4"].split()
    assert s4[2] == "-1.5"
    assert s4[3] == "0"


def test_table_csv(tmp_path, capsys):
    write_alg(tmp_path, "h3", {"dim": 3, "brackets": [[1, 2, 3, 1.0]]})
    code, out, _ = run(capsys, "table", str(tmp_path), "--format", "csv")
    assert code == EXIT_STABLE
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert lines[1].split(",")[4] == "0.569"


def test_table_not_a_directory(capsys):
    code, _, err = run(capsys, "table", "/nonexistent/dir")
    assert code == EXIT_INPUT_ERROR


def test_table_survives_bad_file(tmp_path, capsys):
    write_alg(tmp_path, "good", {"dim": 3, "brackets": [[1, 2, 3, 1.0]]})
    (tmp_path / "bad.alg").write_text("{broken")
    code, out, _ = run(capsys, "table", str(tmp_path))
    assert code == EXIT_STABLE
    assert "error:" in out  # the bad row carries the message
    assert "0.569" in out  # the good row is still produced


def test_flow_h3_decays(capsys):
    code, out, _ = run(
        capsys, "flow", cat("heisenberg3"),
        "--eps", "1e-3", "--trials", "2", "--t-max", "2.0", "--dt", "1e-2",
    )
    assert code == EXIT_STABLE
    assert out.count("decayed") == 2
    assert "NOT decayed" not in out


def test_flow_su2_not_expanding(capsys):
    code, _, err = run(capsys, "flow", cat("su2"), "--trials", "1")
    assert code == EXIT_NOT_SOLITON
    assert "not expanding" in err


def test_flow_zero_eps(capsys):
    code, out, _ = run(
        capsys, "flow", cat("heisenberg3"),
        "--eps", "0", "--trials", "1", "--t-max", "0.5", "--dt", "1e-2",
    )
    assert code == EXIT_STABLE


def test_gaussian_stable_input_k_zero(capsys):
    code, out, _ = run(capsys, "gaussian", cat("heisenberg3"))
    assert code == EXIT_STABLE
    assert "k = 0" in out


def test_gaussian_ignore_stability(capsys):
    code, out, _ = run(
        capsys, "gaussian", cat("heisenberg3"), "--ignore-stability"
    )
    assert code == EXIT_STABLE
    assert "k = 7" in out
    assert "C1 = 1.5" in out
    assert "C2 = 2.5" in out
    assert "-1.25" in out


def test_gaussian_abelian2(capsys):
    code, out, _ = run(
        capsys, "gaussian", cat("abelian2"), "--ignore-stability"
    )
    assert code == EXIT_STABLE
    assert "k = 5" in out
    assert "-1.5" in out


def test_gaussian_not_expanding(capsys):
    code, _, err = run(capsys, "gaussian", cat("su2"))
    assert code == EXIT_NOT_SOLITON


def test_analyze_file_api_returns_record():
    rec = analyze_file(cat("heisenberg3"), extend=True)
    assert rec.verdict == "stable"
    assert rec.report is not None
    assert rec.report.q_verdict is True
    assert set(rec.timings) >= {"parse", "curvature", "soliton", "stability"}


def test_degenerate_abelian_uses_hint(capsys):
    code, out, _ = run(capsys, "analyze", cat("abelian3"), "--format", "json")
    assert code == EXIT_STABLE
    doc = json.loads(out)
    assert doc["lambda"] == pytest.approx(-1.0)
    assert doc["degenerate"] is True
    assert doc["verdict"] == "stable"
