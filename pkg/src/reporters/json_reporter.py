"""JSON report generator"""

import json
from typing import Any, Dict

import numpy as np

from .base import ReportGenerator
from ..models import RunReport


class JSONReportGenerator(ReportGenerator):
    """Generate run reports as a stable JSON document"""

    def generate(self, report: RunReport, output_path: str) -> None:
        """Generate JSON report

        Args:
            report: RunReport to serialize
            output_path: Path where JSON file should be saved
        """
        with open(output_path, "w", encoding="utf-8") as f:
            f.write(self.render(report))
            f.write("\n")

    def render(self, report: RunReport) -> str:
        """Serialized report with sorted keys"""
        return json.dumps(self._build_report_data(report), indent=2, sort_keys=True, default=self._json_serializer)

    def _build_report_data(self, report: RunReport) -> Dict[str, Any]:
        data = {
            "command": report.command,
            "input_sha256": report.input_sha256,
            "elapsed_ms": round(report.elapsed_ms, 3),
            "checks": [],
        }
        for check in report.checks:
            item = {"name": check.name, "status": check.status, "value": check.value, "tol": check.tol}
            if check.message:
                item["message"] = check.message
            if self.config.highlight_failures and check.status == "fail":
                item["flagged"] = True
            data["checks"].append(item)
        if self.config.include_details:
            data["details"] = report.details
        return data

    def _json_serializer(self, obj: Any) -> Any:
        """JSON serializer for numpy and complex values

        Args:
            obj: Object to serialize

        Returns:
            Serializable representation
        """
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, complex):
            return [obj.real, obj.imag]
        if isinstance(obj, (set, tuple)):
            return list(obj)
        raise TypeError(f"Type {type(obj)} not serializable")
