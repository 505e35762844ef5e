"""Command-line surface: table emission, report persistence, exit codes."""

import json

import pytest

from orjuhl.cli import main


def run(argv):
    return main(argv)


def test_expand_gjms_json(capsys):
    assert run(["expand", "gjms", "--k", "3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "orjuhl/v1"
    table = {tuple(t["left"]): int(t["coeff"]["num"]) for t in doc["terms"]}
    assert table == {(2,): 1, (1, 0): 2, (0, 1): 2, (0, 0, 0): 1}


def test_expand_bilinear_order_one(capsys):
    assert run(["expand", "or", "--k", "1", "--n", "5", "--source", "oracle"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["terms"]) == 3
    assert all(t["coeff"] == {"num": "1", "den": "1"} for t in doc["terms"])
    assert all(t["right"] is not None for t in doc["terms"])


def test_expand_linear_closed_form(capsys):
    assert run(
        ["expand", "linear", "--k", "1", "--ell", "2", "--source", "closed-form"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    coeffs = sorted(int(t["coeff"]["num"]) for t in doc["terms"])
    assert coeffs == [-8, 2, 2]


def test_sources_agree_for_dml(capsys):
    run(["expand", "dml", "--m", "2", "--l", "17/5", "--n-exp", "1"])
    oracle_out = capsys.readouterr().out
    run(["expand", "dml", "--m", "2", "--l", "17/5", "--n-exp", "1",
         "--source", "closed-form"])
    assert capsys.readouterr().out == oracle_out


def test_table_renders_latex(capsys):
    assert run(["table", "gjms", "--k", "2"]) == 0
    assert capsys.readouterr().out.strip() == "M_{4} + M_{2}^{2}"


def test_expand_output_file(tmp_path, capsys):
    out = tmp_path / "t.csv"
    assert run(["expand", "gjms", "--k", "1", "--format", "csv",
                "--output", str(out)]) == 0
    assert out.read_text().splitlines()[1] == ",,0,,1,1"


def test_missing_required_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run(["expand", "gjms"])  # no --k
    assert exc.value.code == 2


def test_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run(["verify", "everything"])
    assert exc.value.code == 2


def test_verify_writes_reports_and_passes(tmp_path, capsys):
    code = run(["verify", "juhl", "--max-k", "2", "--seed", "9",
                "--report-dir", str(tmp_path)])
    assert code == 0
    report = tmp_path / "verify" / "9" / "juhl.json"
    doc = json.loads(report.read_text())
    assert doc["passed"] is True and doc["seed"] == 9
    assert doc["cells"]


def test_verify_reports_are_byte_identical(tmp_path, capsys):
    args = ["verify", "appendix", "--max-weight", "3", "--samples", "2", "--seed", "4"]
    run(args + ["--report-dir", str(tmp_path / "a")])
    run(args + ["--report-dir", str(tmp_path / "b")])
    a = (tmp_path / "a" / "verify" / "4" / "appendix.json").read_bytes()
    b = (tmp_path / "b" / "verify" / "4" / "appendix.json").read_bytes()
    assert a == b


def test_threads_flag_accepted(capsys, monkeypatch):
    assert run(["--threads", "2", "expand", "gjms", "--k", "1"]) == 0
    capsys.readouterr()
    monkeypatch.setenv("ORJUHL_THREADS", "3")
    assert run(["expand", "gjms", "--k", "1"]) == 0
