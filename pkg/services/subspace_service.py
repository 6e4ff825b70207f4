"""
Affine subspaces inside spheres behind the `subspace` subcommand.
"""
from ffharmonic.errors import BudgetExceeded, FiniteFieldError
from ffharmonic.field import case_tag, max_affine_dimension, make_field
from ffharmonic.logging_config import get_logger
from ffharmonic.varieties import affine_contains, bruteforce_max_affine, build_affine_in_sphere, sphere_spec
from models.reports import SubspaceReport, SubspaceRow
from models.run_config import RunConfig

logger = get_logger(__name__)


class SubspaceService:
    """
    Service class building certified affine subspaces of maximal dimension.
    """

    @staticmethod
    def build_row(q: int, d: int, j: int, seed: int, brute_force: bool = False) -> SubspaceRow:
        """
        Build, certify and optionally confirm maximality for one (q, d, j).

        Returns:
            SubspaceRow; a search failure is recorded in its error field
        """
        prime_field = make_field(q)
        tag = case_tag(prime_field, d, j)
        expected = max_affine_dimension(tag)
        try:
            subspace = build_affine_in_sphere(prime_field, d, j, seed)
            brute_force_k = None
            if brute_force:
                brute_force_k = bruteforce_max_affine(prime_field, d, j, min(expected + 1, d))
        except BudgetExceeded:
            raise
        except FiniteFieldError as e:
            logger.warning(f"Subspace construction failed for q={q}, d={d}, j={j}: {e}")
            return SubspaceRow(
                q=q, d=d, j=j, case=tag.kind.value, k=-1, expected_k=expected,
                base=[], directions=[], certified=False, error=f"{type(e).__name__}: {e}",
            )

        return SubspaceRow(
            q=q,
            d=d,
            j=j,
            case=tag.kind.value,
            k=subspace.k,
            expected_k=expected,
            base=list(subspace.base),
            directions=[list(direction) for direction in subspace.directions],
            certified=affine_contains(subspace, sphere_spec(prime_field, d, j)),
            brute_force_k=brute_force_k,
        )

    @staticmethod
    def run(config: RunConfig) -> SubspaceReport:
        rows = []
        for d in sorted(set(config.ds)):
            if d < 2:
                raise ValueError(f"affine subspaces in spheres need d >= 2, got {d}")
            for q in sorted(set(config.qs)):
                for j in config.resolve_js(q):
                    rows.append(SubspaceService.build_row(q, d, j, config.seed, config.brute_force))
        logger.info(f"Built {len(rows)} subspaces, {sum(row.passed for row in rows)} certified at the expected dimension")
        return SubspaceReport(config=config.model_dump(mode="json"), rows=rows)
