"""Command line: exit codes, JSON output and report files"""

import json

import pytest

from main import run
from src.lagrangian_graphs import LagrangianGraphToolkit
from tests.conftest import fixture_path


def run_json(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_closed_form_passes(capsys):
    code, report = run_json(capsys, "verify", fixture_path("triangle3body.sys"), "--checks", "closed", "--mode", "analytic")
    assert code == 0
    assert report["command"] == "verify"
    assert [c["status"] for c in report["checks"]] == ["pass"]
    assert len(report["input_sha256"]) == 64


@pytest.mark.parametrize("mode", ["analytic", "fd"])
def test_non_closed_form_fails(capsys, mode):
    code, report = run_json(capsys, "verify", fixture_path("nontree.sys"), "--checks", "closed", "--mode", mode)
    assert code == 1
    (check,) = report["checks"]
    assert check["status"] == "fail" and check["flagged"] is True
    assert check["value"] == pytest.approx(1.0, abs=1e-6)


def test_several_files_print_a_list(capsys):
    code, reports = run_json(
        capsys, "verify", fixture_path("triangle3body.sys"), fixture_path("nontree.sys"), "--checks", "closed"
    )
    assert code == 1
    assert [r["checks"][0]["status"] for r in reports] == ["pass", "fail"]


def test_output_is_deterministic(capsys):
    argv = ["verify", fixture_path("line10.sys"), "--checks", "closed,boundary,homology"]
    reports = []
    for _ in range(2):
        code, report = run_json(capsys, *argv)
        assert code == 0
        report.pop("elapsed_ms")
        reports.append(report)
    assert reports[0] == reports[1]


def test_solve(capsys):
    code, report = run_json(capsys, "solve", fixture_path("pendulum5.sys"), "--config", "start")
    assert code == 0
    assert report["details"]["iterations"] <= 10
    assert report["checks"][0]["value"] <= 1e-10


def test_singular_solve_fails_and_ridge_recovers(capsys):
    code, report = run_json(capsys, "solve", fixture_path("laplace2d.sys"), "--config", "bent")
    assert code == 1
    assert "ridge" in report["checks"][0]["message"]
    code, _ = run_json(capsys, "solve", fixture_path("laplace2d.sys"), "--config", "bent", "--ridge", "1e-6")
    assert code == 0


def test_scatter(capsys):
    code, report = run_json(capsys, "scatter", fixture_path("star3.sys"), "--k", "1.0471975512")
    assert code == 0
    assert [c["name"] for c in report["checks"]] == ["unitarity", "flux_balance", "reciprocity"]
    assert report["details"]["tails"] == ["a", "b", "d"]
    assert len(report["details"]["S"]) == 3


def test_wronskian(capsys):
    code, report = run_json(capsys, "wronskian", fixture_path("line10.sys"), "--config", "zero")
    assert code == 0
    assert report["details"]["kernel_dimension"] == 2


def test_validate_and_allow_ends(capsys):
    code, _ = run_json(capsys, "validate", fixture_path("path_ends.sys"))
    assert code == 2
    code, report = run_json(capsys, "validate", fixture_path("path_ends.sys"), "--allow-ends")
    assert code == 0
    assert len(report["details"]["warnings"]) == 2


def test_normalize_writes_annotations(capsys, tmp_path):
    target = tmp_path / "annotated.sys"
    code, report = run_json(capsys, "normalize", fixture_path("triangle3body.sys"), "-o", str(target))
    assert code == 0
    assert report["details"]["tree_like"] is True
    text = target.read_text(encoding="utf-8")
    assert "[term body3]" in text and "# tree-like form" in text


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["verify"],
        ["scatter", fixture_path("star3.sys"), "--k", "4"],
        ["scatter", fixture_path("star3.sys"), "--k", "0"],
        ["verify", fixture_path("line10.sys"), "--checks", "entropy"],
        ["solve", fixture_path("pendulum5.sys"), "--config", "nosuch"],
        ["validate", "does/not/exist.sys"],
    ],
)
def test_input_errors_exit_with_two(capsys, argv):
    assert run(argv) == 2
    assert capsys.readouterr().out == ""


def test_unknown_vertex_in_file(capsys, tmp_path):
    bad = tmp_path / "bad.sys"
    bad.write_text("[graph]\nvertex a\nvertex b\nedge a c\n", encoding="utf-8")
    assert run(["validate", str(bad)]) == 2
    assert "unknown vertex 'c'" in capsys.readouterr().err


def test_report_directory(capsys, tmp_path):
    code = run(["verify", fixture_path("nontree.sys"), "--checks", "closed", "--report-dir", str(tmp_path)])
    capsys.readouterr()
    assert code == 1
    for suffix in ("json", "csv", "xlsx"):
        assert (tmp_path / f"verify_report.{suffix}").exists()


def test_batch_verify_captures_errors():
    toolkit = LagrangianGraphToolkit()
    results = toolkit.batch_verify(
        [fixture_path("triangle3body.sys"), fixture_path("nontree.sys"), fixture_path("path_ends.sys")],
        checks=["closed"],
    )
    assert [r["status"] for r in results] == ["success", "failed", "error"]
    assert "path_ends" in results[2]["path"]


def test_non_utf8_file_is_an_input_error(capsys, tmp_path):
    bad = tmp_path / "latin1.sys"
    bad.write_bytes(b"# caf\xe9\n[graph]\nvertex a\n")
    assert run(["validate", "--allow-ends", str(bad)]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "UTF-8" in captured.err


def test_bad_file_among_several_keeps_the_other_reports(capsys):
    code, entries = run_json(
        capsys, "verify", fixture_path("triangle3body.sys"), fixture_path("path_ends.sys"), "--checks", "closed"
    )
    assert code == 2
    assert entries[0]["checks"][0]["status"] == "pass"
    assert entries[1]["status"] == "error"
    assert entries[1]["path"].endswith("path_ends.sys")
    assert "v0" in entries[1]["error"]


def test_several_files_with_report_dir(capsys, tmp_path):
    code = run([
        "verify", fixture_path("triangle3body.sys"), fixture_path("nontree.sys"),
        "--checks", "closed", "--report-dir", str(tmp_path),
    ])
    capsys.readouterr()
    assert code == 1
    assert (tmp_path / "verify_report_1.json").exists()
    assert (tmp_path / "verify_report_2.xlsx").exists()
