"""Abstract base class for report generators"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List

from ..models import ReportConfig, RunReport


class ReportGenerator(ABC):
    """Abstract base class for generating run reports"""

    def __init__(self, config: ReportConfig = None):
        """Initialize report generator

        Args:
            config: Report configuration
        """
        self.config = config or ReportConfig()

    @abstractmethod
    def generate(self, report: RunReport, output_path: str) -> None:
        """Write a run report

        Args:
            report: RunReport with checks and details
            output_path: Path where the report should be saved
        """
        pass

    @staticmethod
    def check_rows(report: RunReport) -> List[Dict[str, Any]]:
        """One flat row per check, in execution order"""
        return [
            {
                "command": report.command,
                "input_sha256": report.input_sha256 or "",
                "name": check.name,
                "status": check.status,
                "value": check.value,
                "tol": check.tol,
                "message": check.message,
            }
            for check in report.checks
        ]
