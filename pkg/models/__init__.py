"""
Configuration and report models package.
"""
from models.reports import (
    CheckResult,
    ExponentReport,
    ExponentRow,
    SubspaceReport,
    SubspaceRow,
    Summary,
    SweepReport,
    SweepRow,
    VerifyReport,
)
from models.run_config import Budget, JRule, OutputFormat, RunConfig, format_exponent, parse_exponent

__all__ = [
    "Budget",
    "CheckResult",
    "ExponentReport",
    "ExponentRow",
    "JRule",
    "OutputFormat",
    "RunConfig",
    "SubspaceReport",
    "SubspaceRow",
    "Summary",
    "SweepReport",
    "SweepRow",
    "VerifyReport",
    "format_exponent",
    "parse_exponent",
]
