"""CSV report generator"""

import pandas as pd

from .base import ReportGenerator
from ..models import RunReport


class CSVReportGenerator(ReportGenerator):
    """Generate run reports in CSV format, one row per check"""

    def generate(self, report: RunReport, output_path: str) -> None:
        """Generate CSV report

        Args:
            report: RunReport with checks
            output_path: Path where CSV file should be saved
        """
        df = pd.DataFrame(
            self.check_rows(report),
            columns=["command", "input_sha256", "name", "status", "value", "tol", "message"],
        )
        df.to_csv(output_path, index=False)
