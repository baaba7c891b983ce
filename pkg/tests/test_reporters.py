"""JSON, CSV and Excel run reports"""

import json

import numpy as np
import pandas as pd
import pytest
from openpyxl import load_workbook

from src.models import CheckResult, ReportConfig, RunReport
from src.reporters import CSVReportGenerator, ExcelReportGenerator, JSONReportGenerator


def sample_report():
    report = RunReport(command="verify", input_sha256="ab" * 32, elapsed_ms=12.3456)
    report.add(CheckResult.compare("closed", 0.0, 1e-8))
    report.add(CheckResult.compare("boundary_identity", 3e-3, 1e-12))
    report.add(CheckResult("homology", "skip", None, 1e-8, "kernel dimension 0 < 2"))
    report.details = {"per_edge": np.array([0.0, 1.0]), "amplitude": complex(0.5, -1.0)}
    return report


def test_json_is_sorted_and_flags_failures():
    text = JSONReportGenerator().render(sample_report())
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["elapsed_ms"] == 12.346
    statuses = {c["name"]: c for c in data["checks"]}
    assert statuses["boundary_identity"]["flagged"] is True
    assert "flagged" not in statuses["closed"]
    assert data["details"] == {"amplitude": [0.5, -1.0], "per_edge": [0.0, 1.0]}


def test_json_without_details():
    data = json.loads(JSONReportGenerator(ReportConfig(include_details=False)).render(sample_report()))
    assert "details" not in data


def test_duplicate_check_names_are_rejected():
    report = sample_report()
    with pytest.raises(ValueError):
        report.add(CheckResult("closed", "pass"))


def test_csv_has_one_row_per_check(tmp_path):
    path = tmp_path / "report.csv"
    CSVReportGenerator().generate(sample_report(), str(path))
    df = pd.read_csv(path)
    assert list(df["name"]) == ["closed", "boundary_identity", "homology"]
    assert list(df["status"]) == ["pass", "fail", "skip"]


def test_excel_highlights_failed_and_skipped_checks(tmp_path):
    path = tmp_path / "report.xlsx"
    ExcelReportGenerator().generate(sample_report(), str(path))
    wb = load_workbook(path)
    assert wb.sheetnames == ["Summary", "Checks"]
    checks = wb["Checks"]
    assert checks.cell(3, 2).value == "FAIL"
    assert checks.cell(3, 1).fill.start_color.rgb.endswith("FF6B6B")
    assert checks.cell(3, 1).font.bold
    assert checks.cell(4, 1).fill.start_color.rgb.endswith("FFFF00")
    assert not checks.cell(2, 1).font.bold
    summary = {row[0].value: row[1].value for row in wb["Summary"].iter_rows(min_row=2)}
    assert summary["Checks Failed"] == 1
