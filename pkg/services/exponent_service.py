"""
Exponent tables: conjectured critical exponents per case, the Stein-Tomas
baseline and the thresholds forced by affine subspaces in spheres.
"""
from fractions import Fraction

from ffharmonic.field import max_affine_dimension
from ffharmonic.logging_config import get_logger
from ffharmonic.models import CaseKind, CaseTag
from ffharmonic.restriction import conjectured_exponent, necessary_threshold, stein_tomas
from models.reports import ExponentReport, ExponentRow
from models.run_config import RunConfig

logger = get_logger(__name__)

NOT_APPLICABLE = "n/a"


class ExponentService:
    """
    Service class for the exponent calculators.
    """

    @staticmethod
    def case_kinds(d: int) -> list[CaseKind]:
        """Cases a dimension d can realize."""
        if d % 2 == 0:
            return [CaseKind.EVEN]
        if d % 4 == 1:
            return [CaseKind.D1MOD4_NONSQ, CaseKind.D1MOD4_SQ]
        return [CaseKind.D3MOD4_NEG_NONSQ, CaseKind.D3MOD4_NEG_SQ]

    @staticmethod
    def tag_for(kind: CaseKind, d: int) -> CaseTag:
        if kind is CaseKind.EVEN:
            alpha = Fraction(d, 2)
        elif kind.sign == -1:
            alpha = Fraction(d + 1, 2)
        else:
            alpha = Fraction(d - 1, 2)
        return CaseTag(kind, d, alpha)

    @staticmethod
    def exponent_row(d: int) -> ExponentRow:
        """
        Build the table row for one dimension.

        Args:
            d: Dimension, at least 2

        Returns:
            ExponentRow with every case column filled, n/a where d cannot realize the case
        """
        if d < 2:
            raise ValueError(f"exponent tables need d >= 2, got {d}")
        conjectured = {kind.value: NOT_APPLICABLE for kind in CaseKind}
        affine_k = dict(conjectured)
        necessary = dict(conjectured)
        consistent = True

        for kind in ExponentService.case_kinds(d):
            tag = ExponentService.tag_for(kind, d)
            k = max_affine_dimension(tag)
            expected = conjectured_exponent(d, tag)
            threshold = necessary_threshold(d, k, 2)
            conjectured[kind.value] = str(expected)
            affine_k[kind.value] = str(k)
            necessary[kind.value] = str(threshold)
            consistent = consistent and threshold == expected

        return ExponentRow(
            d=d,
            stein_tomas=str(stein_tomas(d)),
            conjectured=conjectured,
            affine_k=affine_k,
            necessary=necessary,
            consistent=consistent,
        )

    @staticmethod
    def build_report(config: RunConfig) -> ExponentReport:
        rows = [ExponentService.exponent_row(d) for d in sorted(set(config.ds))]
        logger.info(f"Exponent table for d in {[row.d for row in rows]}")
        return ExponentReport(config=config.model_dump(mode="json"), rows=rows)
