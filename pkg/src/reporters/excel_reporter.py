"""Excel report generator with failure highlighting"""

import logging

import pandas as pd
from openpyxl import load_workbook
from openpyxl.styles import Font, PatternFill

from .base import ReportGenerator
from ..models import RunReport

logger = logging.getLogger(__name__)


class ExcelReportGenerator(ReportGenerator):
    """Generate run reports in Excel format"""

    def generate(self, report: RunReport, output_path: str) -> None:
        """Generate Excel report with a summary and a checks sheet

        Args:
            report: RunReport with checks
            output_path: Path where Excel file should be saved
        """
        with pd.ExcelWriter(output_path, engine="openpyxl") as writer:
            self._write_summary_sheet(report, writer)
            self._write_checks_sheet(report, writer)

        if self.config.highlight_failures:
            self._apply_conditional_formatting(output_path)

    def _write_summary_sheet(self, report: RunReport, writer):
        statuses = [c.status for c in report.checks]
        summary = {
            "Metric": ["Command", "Input SHA-256", "Elapsed (ms)", "Checks Passed", "Checks Failed", "Checks Skipped"],
            "Value": [
                report.command,
                report.input_sha256 or "",
                round(report.elapsed_ms, 3),
                statuses.count("pass"),
                statuses.count("fail"),
                statuses.count("skip"),
            ],
        }
        pd.DataFrame(summary).to_excel(writer, sheet_name="Summary", index=False)

    def _write_checks_sheet(self, report: RunReport, writer):
        rows = [
            {
                "Check": row["name"],
                "Status": row["status"].upper(),
                "Value": row["value"],
                "Tolerance": row["tol"],
                "Message": row["message"],
            }
            for row in self.check_rows(report)
        ]
        df = pd.DataFrame(rows, columns=["Check", "Status", "Value", "Tolerance", "Message"])
        df.to_excel(writer, sheet_name="Checks", index=False)

    def _apply_conditional_formatting(self, output_path: str):
        """Highlight failed checks red and skipped checks yellow

        Args:
            output_path: Path to Excel file
        """
        try:
            wb = load_workbook(output_path)
            ws = wb["Checks"]

            yellow_fill = PatternFill(start_color="FFFF00", end_color="FFFF00", fill_type="solid")
            red_fill = PatternFill(start_color="FF6B6B", end_color="FF6B6B", fill_type="solid")
            bold_font = Font(bold=True)

            header_row = [cell.value for cell in ws[1]]
            status_col = header_row.index("Status") + 1

            for row_idx in range(2, ws.max_row + 1):
                status = ws.cell(row_idx, status_col).value or ""
                if status == "FAIL":
                    for col_idx in range(1, ws.max_column + 1):
                        ws.cell(row_idx, col_idx).fill = red_fill
                        ws.cell(row_idx, col_idx).font = bold_font
                elif status == "SKIP":
                    for col_idx in range(1, ws.max_column + 1):
                        ws.cell(row_idx, col_idx).fill = yellow_fill

            wb.save(output_path)

        except Exception as e:
            logger.warning(f"Could not apply conditional formatting: {e}")
