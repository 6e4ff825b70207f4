"""
Orchestration services package.
"""
from services.exponent_service import ExponentService
from services.report_writer import ReportWriter
from services.subspace_service import SubspaceService
from services.sweep_service import SweepService
from services.verification_service import VerificationService

__all__ = ["ExponentService", "ReportWriter", "SubspaceService", "SweepService", "VerificationService"]
