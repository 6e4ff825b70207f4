"""
JSON and CSV serialization of reports.

JSON goes through pydantic; CSV flattens the same fields, nested dicts as
dotted column names, floats with 17 significant digits.
"""
import csv
import io
import math
import sys
from pathlib import Path

from pydantic import BaseModel

from ffharmonic.logging_config import get_logger
from models.reports import ExponentReport, SubspaceReport, SweepReport, VerifyReport
from models.run_config import OutputFormat

logger = get_logger(__name__)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    if isinstance(value, (list, tuple)):
        return " ".join(_format_cell(item) for item in value)
    return str(value)


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), item, out)
    else:
        out[prefix] = value


class ReportWriter:
    """
    Service class that renders reports and writes them to a path or stdout.
    """

    @staticmethod
    def rows(report: BaseModel) -> list[dict]:
        """The flat records a report contributes to CSV output."""
        if isinstance(report, VerifyReport):
            records = [result.model_dump(by_alias=True) for result in report.results]
        elif isinstance(report, (SweepReport, ExponentReport, SubspaceReport)):
            records = [row.model_dump() for row in report.rows]
        else:
            raise TypeError(f"unsupported report type: {type(report).__name__}")
        flat = []
        for record in records:
            out: dict = {}
            _flatten("", record, out)
            flat.append(out)
        return flat

    @staticmethod
    def to_csv(report: BaseModel) -> str:
        rows = ReportWriter.rows(report)
        columns: list[str] = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row.get(column)) for column in columns])
        return buffer.getvalue()

    @staticmethod
    def to_json(report: BaseModel) -> str:
        return report.model_dump_json(by_alias=True, indent=2) + "\n"

    @staticmethod
    def render(report: BaseModel, output_format: OutputFormat) -> str:
        if output_format is OutputFormat.CSV:
            return ReportWriter.to_csv(report)
        return ReportWriter.to_json(report)

    @staticmethod
    def write(report: BaseModel, output_format: OutputFormat, path: str | None = None) -> None:
        """
        Write a report as UTF-8.

        Args:
            report: Any report model
            output_format: JSON or CSV
            path: Destination file, stdout when None
        """
        text = ReportWriter.render(report, output_format)
        if path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        Path(path).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output_format.value} report to {path}")
