"""
Sup-ratio sweeps behind the `sweep` subcommand.
"""
import time
from dataclasses import dataclass
from functools import partial

from ffharmonic.field import case_tag, make_field
from ffharmonic.logging_config import get_logger
from ffharmonic.restriction import conjectured_exponent, sup_ratio_search
from ffharmonic.varieties import check_ambient_budget, sphere_spec
from models.reports import SweepReport, SweepRow
from models.run_config import RunConfig, format_exponent
from services.cells import cell_rng, run_cells

logger = get_logger(__name__)


@dataclass(frozen=True)
class SweepCell:
    d: int
    q: int
    j: int


class SweepService:
    """
    Service class for restriction-ratio sweeps over (q, d, j) grids.
    """

    @staticmethod
    def cells(config: RunConfig) -> list[SweepCell]:
        """
        Cells in report order, sorted by (d, q, j).

        Raises:
            BudgetExceeded: If some q^d is over the ambient budget
        """
        cells = []
        for d in sorted(set(config.ds)):
            for q in sorted(set(config.qs)):
                check_ambient_budget(q, d, config.budget.max_ambient_points)
                cells.extend(SweepCell(d, q, j) for j in config.resolve_js(q))
        return cells

    @staticmethod
    def run_cell(cell: SweepCell, config: RunConfig) -> SweepRow:
        """
        Search one cell for the largest restriction ratio on S_j^{d-1}.

        Args:
            cell: The (d, q, j) coordinates
            config: Run configuration supplying p, r, class, seed and budgets

        Returns:
            SweepRow with the observed lower bound and its witness
        """
        started = time.perf_counter()
        prime_field = make_field(cell.q)
        tag = case_tag(prime_field, cell.d, cell.j)
        p = config.p_value
        if p is None:
            p = conjectured_exponent(cell.d, tag)
        r = config.r_value
        seed = int(cell_rng(config.seed, "sweep", cell.d, cell.q, cell.j).integers(2**63))

        logger.info(f"Sweep cell d={cell.d}, q={cell.q}, j={cell.j}, p={format_exponent(p)}")
        result = sup_ratio_search(
            sphere_spec(prime_field, cell.d, cell.j),
            p,
            r,
            config.search_class,
            max_evaluations=config.budget.max_evaluations,
            seed=seed,
            trials=config.trials,
            max_ambient_points=config.budget.max_ambient_points,
        )
        return SweepRow(
            d=cell.d,
            q=cell.q,
            j=cell.j,
            case=tag.kind.value,
            p=format_exponent(p),
            r=format_exponent(r),
            search_class=config.search_class.value,
            max_ratio=result.max_ratio,
            witness=result.witness_description,
            evaluations=result.evaluations,
            exhaustive=result.exhaustive,
            lower_bound_only=result.lower_bound_only,
            wall_time=time.perf_counter() - started if config.timing else None,
        )

    @staticmethod
    def run(config: RunConfig) -> SweepReport:
        cells = SweepService.cells(config)
        rows = run_cells(partial(SweepService.run_cell, config=config), cells, config.workers)
        logger.info(f"Sweep finished: {len(rows)} cells")
        return SweepReport(config=config.model_dump(mode="json"), rows=rows)
