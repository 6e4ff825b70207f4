"""
Identity suites behind the `verify` subcommand.

Every suite returns CheckResult rows; a check that raises is recorded as a
failed row carrying the error type, and the run keeps going. Budget errors
are configuration errors and propagate.
"""
import time
from collections.abc import Callable
from fractions import Fraction
from functools import partial

import numpy as np

from config.settings import DIRECT_TRANSFORM_LIMIT
from ffharmonic.errors import BudgetExceeded, FiniteFieldError
from ffharmonic.field import (
    case_tag,
    complete_square_closed,
    eta,
    gauss_identity_errors,
    max_affine_dimension,
    make_field,
    orthogonality_error,
)
from ffharmonic.grid import (
    check_dyadic_mass,
    dyadic_decompose,
    dyadic_transform_ratio,
    majorant_violation,
    plancherel_error,
    transform_values,
)
from ffharmonic.logging_config import get_logger
from ffharmonic.models import GridFunction, HomogeneousFunction
from ffharmonic.restriction import (
    critical_exponent,
    extremizer_check,
    norm_monotone_in_p,
    omega_bound_check,
    operator_norm_p2,
    transfer_identity_check,
)
from ffharmonic.soperator import (
    orbit_count,
    s_apply,
    s_apply_homogeneous,
    s_hat_check,
    s_lp_factor,
    s_lp_identity,
    to_grid,
)
from ffharmonic.varieties import (
    affine_contains,
    affine_indices,
    bruteforce_max_affine,
    build_affine_in_sphere,
    homogeneous_spec,
    hom_fourier_bruteforce_many,
    hom_fourier_closed_table,
    lift_to_homogeneous,
    random_affine_subspace,
    sparse_points,
    sphere_size_closed,
    sphere_spec,
    variety_points,
)
from models.reports import CheckResult, Summary, VerifyReport
from models.run_config import RunConfig
from services.cells import cell_rng, run_cells
from services.exponent_service import ExponentService

logger = get_logger(__name__)

S_LP_EXPONENTS = (1.0, 1.5, 1.6, 2.0)
TRANSFER_EXPONENTS = (1.0, 2.0, 4.0)
EXTREMIZER_EXPONENTS = (1.0, Fraction(4, 3), 2.0)
EXPONENT_TABLE_RANGE = range(3, 13)
# (q, d) cells small enough for the exhaustive maximality search
BRUTE_FORCE_CELLS = {(3, 2), (3, 3), (5, 2), (5, 3)}
OMEGA_SINGLETONS = 5


def _result(check: str, params: dict, lhs, rhs, tol, passed) -> CheckResult:
    return CheckResult(
        check=check,
        params=params,
        lhs=float(lhs),
        rhs=float(rhs),
        tol=float(tol),
        passed=bool(passed),
    )


def _guard(check: str, params: dict, run: Callable[[], list[CheckResult]]) -> list[CheckResult]:
    """Run one check, turning a raised error into a failed row."""
    try:
        return run()
    except BudgetExceeded:
        raise
    except FiniteFieldError as e:
        logger.warning(f"Check {check} {params} raised {type(e).__name__}: {e}")
        error = f"{type(e).__name__}: {e}"
    except Exception as e:
        logger.exception(f"Unexpected error in check {check} {params}")
        error = f"{type(e).__name__}: {e}"
    return [CheckResult(check=check, params=params, lhs=float("nan"), rhs=float("nan"), tol=0.0, passed=False, error=error)]


def _random_grid(prime_field, dim: int, rng: np.random.Generator) -> GridFunction:
    size = prime_field.q ** dim
    return GridFunction(prime_field, dim, rng.standard_normal(size) + 1j * rng.standard_normal(size))


def _random_homogeneous(prime_field, d: int, rng: np.random.Generator) -> HomogeneousFunction:
    lines = orbit_count(prime_field.q, d)
    values = rng.standard_normal(lines) + 1j * rng.standard_normal(lines)
    return HomogeneousFunction(prime_field, d, values, complex(rng.standard_normal(), rng.standard_normal()))


class VerificationService:
    """
    Service class running the identity suites.
    """

    @staticmethod
    def check_budget(config: RunConfig) -> None:
        """
        Refuse configurations whose grids would exceed the budgets.

        The pair cap must hold a pairwise Omega sum over a set the size of
        F_q^d, the scale of the homogeneous variety and of its lifted subspaces.

        Raises:
            BudgetExceeded: Naming the cap that is exceeded
        """
        budget = config.budget
        for q in config.qs:
            for d in config.ds:
                ambient = q ** (d + 1)
                if ambient > budget.max_ambient_points:
                    raise BudgetExceeded("max_ambient_points", ambient, budget.max_ambient_points)
                pairs = q ** (2 * d)
                if pairs > budget.max_pair_evaluations:
                    raise BudgetExceeded("max_pair_evaluations", pairs, budget.max_pair_evaluations)

    @staticmethod
    def field_suite(q: int, config: RunConfig) -> list[CheckResult]:
        """Character orthogonality, Gauss sum identities and the completed square, exhaustive in a and b."""
        prime_field = make_field(q)
        params = {"q": q}
        results = []

        def orthogonality():
            worst = max(orthogonality_error(prime_field, a) for a in range(1, q))
            tol = config.tolerance("character_sum") * q
            return [_result("character_orthogonality", params, worst, 0.0, tol, worst <= tol)]

        def gauss():
            tol = config.tolerance("gauss") * q
            worst: dict[str, float] = {}
            for a in range(1, q):
                for name, error in gauss_identity_errors(prime_field, a).items():
                    worst[name] = max(worst.get(name, 0.0), error)
            return [_result(f"gauss_{name}", params, error, 0.0, tol, error <= tol) for name, error in worst.items()]

        def completed_square():
            tol = config.tolerance("gauss") * q
            s = np.arange(q)
            worst = 0.0
            for a in range(1, q):
                for b in range(q):
                    direct = complex(prime_field.chi_table[(a * s * s + b * s) % q].sum())
                    worst = max(worst, abs(direct - complete_square_closed(prime_field, a, b)))
            return [_result("complete_square", params, worst, 0.0, tol, worst <= tol)]

        def parity():
            expected = -1 if q % 4 == 3 else 1
            observed = eta(prime_field, -1)
            return [_result("eta_minus_one", params, observed, expected, 0.0, observed == expected)]

        for name, run in (
            ("character_orthogonality", orthogonality),
            ("gauss", gauss),
            ("complete_square", completed_square),
            ("eta_minus_one", parity),
        ):
            results.extend(_guard(name, params, run))
        return results

    @staticmethod
    def grid_suite(q: int, d: int, config: RunConfig) -> list[CheckResult]:
        """Plancherel, inversion, the direct transform oracle and the dyadic machinery."""
        prime_field = make_field(q)
        params = {"q": q, "d": d}
        rng = cell_rng(config.seed, "grid", q, d)
        functions = [_random_grid(prime_field, d, rng) for _ in range(config.trials)]
        results = []

        def plancherel():
            worst = max(plancherel_error(g) for g in functions)
            tol = config.tolerance("plancherel")
            return [_result("plancherel", params, worst, 0.0, tol, worst <= tol)]

        def inversion():
            stack = np.stack([g.values for g in functions])
            round_trip = transform_values(transform_values(stack, prime_field, d), prime_field, d, inverse=True)
            worst = float(np.max(np.abs(round_trip - stack)))
            tol = config.tolerance("inversion") * q ** d
            return [_result("fourier_inversion", params, worst, 0.0, tol, worst <= tol)]

        def direct_method():
            if q ** d > DIRECT_TRANSFORM_LIMIT:
                return []
            stack = np.stack([g.values for g in functions])
            factorized = transform_values(stack, prime_field, d)
            direct = transform_values(stack, prime_field, d, method="direct")
            worst = float(np.max(np.abs(factorized - direct)))
            tol = config.tolerance("inversion") * q ** d
            return [_result("direct_transform", params, worst, 0.0, tol, worst <= tol)]

        def dyadic():
            p = 2.0
            lhs_worst, violation_worst = 0.0, 0.0
            ratios = []
            hom = variety_points(homogeneous_spec(prime_field, d, 1), config.budget.max_ambient_points)
            for _ in range(config.trials):
                raw = np.abs(rng.standard_normal(q ** (d + 1)))
                F = GridFunction(prime_field, d + 1, raw / np.sum(raw ** p) ** (1.0 / p))
                lhs_worst = max(lhs_worst, check_dyadic_mass(F, p).lhs)
                decomposition = dyadic_decompose(F)
                violation_worst = max(violation_worst, majorant_violation(decomposition))
                ratios.append(dyadic_transform_ratio(decomposition, hom.points))
            low, high = min(ratios), max(ratios)
            return [
                _result("dyadic_mass", params, lhs_worst, 2.0 ** p, 0.0, lhs_worst <= 2.0 ** p),
                _result("dyadic_majorant", params, violation_worst, 0.0, 0.0, violation_worst == 0.0),
                _result("dyadic_transform_ratio", params, low, high, 4.0, 0.25 <= low and high <= 4.0),
            ]

        for name, run in (
            ("plancherel", plancherel),
            ("fourier_inversion", inversion),
            ("direct_transform", direct_method),
            ("dyadic", dyadic),
        ):
            results.extend(_guard(name, params, run))
        return results

    @staticmethod
    def soperator_suite(q: int, d: int, config: RunConfig) -> list[CheckResult]:
        """Closed-form transform of S g, linearity, the homogeneous closed form and the l^p identity."""
        prime_field = make_field(q)
        params = {"q": q, "d": d}
        rng = cell_rng(config.seed, "soperator", q, d)
        results = []

        def s_hat():
            tol = config.tolerance("s_hat") * q ** d
            worst = max(s_hat_check(_random_grid(prime_field, d, rng), tol).max_err for _ in range(config.trials))
            return [_result("s_hat_closed_form", params, worst, 0.0, tol, worst <= tol)]

        def linearity():
            tol = config.tolerance("s_homogeneous")
            worst = 0.0
            for _ in range(config.trials):
                g, h = _random_grid(prime_field, d, rng), _random_grid(prime_field, d, rng)
                a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
                combined = s_apply(g.combine(a, h, b)).values
                separate = a * s_apply(g).values + b * s_apply(h).values
                worst = max(worst, float(np.max(np.abs(combined - separate))))
            return [_result("s_linearity", params, worst, 0.0, tol, worst <= tol)]

        def homogeneous():
            tol = config.tolerance("s_homogeneous")
            worst = 0.0
            for _ in range(config.trials):
                h = _random_homogeneous(prime_field, d, rng)
                gap = np.abs(s_apply_homogeneous(h).values - s_apply(to_grid(h)).values)
                worst = max(worst, float(gap.max()))
            return [_result("s_homogeneous_closed_form", params, worst, 0.0, tol, worst <= tol)]

        def lp_identity():
            tol = config.tolerance("s_lp")
            rows = []
            h = _random_homogeneous(prime_field, d, rng)
            for p in S_LP_EXPONENTS:
                report = s_lp_identity(h, p, tol)
                factor = s_lp_factor(q, p)
                rows.append(_result("s_lp_identity", {**params, "p": p}, report.lhs, report.rhs, tol, report.passed and factor <= 2.0))
            return rows

        for name, run in (
            ("s_hat_closed_form", s_hat),
            ("s_linearity", linearity),
            ("s_homogeneous_closed_form", homogeneous),
            ("s_lp_identity", lp_identity),
        ):
            results.extend(_guard(name, params, run))
        return results

    @staticmethod
    def variety_suite(q: int, d: int, j: int, config: RunConfig) -> list[CheckResult]:
        """Sphere sizes, the closed transform of H_j^d against brute force, and affine subspaces in spheres."""
        prime_field = make_field(q)
        params = {"q": q, "d": d, "j": j}
        rng = cell_rng(config.seed, "varieties", q, d, j)
        cap = config.budget.max_ambient_points
        results = []

        def sphere_size():
            enumerated = variety_points(sphere_spec(prime_field, d, j), cap).size
            closed = sphere_size_closed(prime_field, d, j)
            return [_result("sphere_size", params, enumerated, closed, 0.0, enumerated == closed)]

        def hom_fourier():
            spec = homogeneous_spec(prime_field, d, j)
            n = d + 1
            points = variety_points(spec, cap)
            table = hom_fourier_closed_table(spec, cap)
            samples = np.vstack([rng.integers(0, q, size=(config.trials, n)), sparse_points(q, n)])
            indices = samples @ (q ** np.arange(n))
            brute = hom_fourier_bruteforce_many(spec, samples, points)
            worst = float(np.max(np.abs(brute - table[indices])))
            tol = config.tolerance("hom_fourier") * q ** (n / 2)
            return [_result("hom_fourier_closed_form", params, worst, 0.0, tol, worst <= tol)]

        def affine():
            if d < 2:
                return []
            subspace = build_affine_in_sphere(prime_field, d, j, config.seed)
            expected = max_affine_dimension(case_tag(prime_field, d, j))
            certified = affine_contains(subspace, sphere_spec(prime_field, d, j))
            rows = [_result("affine_dimension", params, subspace.k, expected, 0.0, certified and subspace.k == expected)]
            if (q, d) in BRUTE_FORCE_CELLS or config.brute_force:
                best = bruteforce_max_affine(prime_field, d, j, min(expected + 1, d))
                rows.append(_result("affine_maximality", params, best, expected, 0.0, best == expected))
            return rows

        for name, run in (
            ("sphere_size", sphere_size),
            ("hom_fourier_closed_form", hom_fourier),
            ("affine_dimension", affine),
        ):
            results.extend(_guard(name, params, run))
        return results

    @staticmethod
    def restriction_suite(q: int, d: int, j: int, config: RunConfig) -> list[CheckResult]:
        """Norm transfer, Omega(E) and its bounds, extremizers and the p = 2 operator norm."""
        prime_field = make_field(q)
        params = {"q": q, "d": d, "j": j}
        rng = cell_rng(config.seed, "restriction", q, d, j)
        budgets = {
            "max_ambient_points": config.budget.max_ambient_points,
            "max_pair_evaluations": config.budget.max_pair_evaluations,
        }
        hom = homogeneous_spec(prime_field, d, j)
        sphere = sphere_spec(prime_field, d, j)
        results = []

        def transfer():
            tol = config.tolerance("transfer")
            if variety_points(sphere, budgets["max_ambient_points"]).size == 0:
                return []
            functions = [_random_grid(prime_field, d, rng) for _ in range(config.trials)]
            rows = []
            for r in TRANSFER_EXPONENTS:
                worst = max(transfer_identity_check(g, j, r, tol).rel_err for g in functions)
                rows.append(_result("transfer_identity", {**params, "r": r}, worst, 0.0, tol, worst <= tol))
            return rows

        def omega_checks():
            n = d + 1
            size = q ** n
            candidates = [np.array([x]) for x in rng.choice(size, size=min(OMEGA_SINGLETONS, size), replace=False)]
            candidates.append(np.arange(size))
            if d >= 2:
                subspace = build_affine_in_sphere(prime_field, d, j, config.seed)
                candidates.append(lift_to_homogeneous(subspace))
            for k in range(1, min(3, n)):
                affine = random_affine_subspace(prime_field, n, k, rng)
                candidates.append(affine_indices(affine))
            for _ in range(config.trials):
                count = int(rng.integers(1, size + 1))
                candidates.append(rng.choice(size, size=count, replace=False))

            agreement_tol = config.tolerance("omega")
            bound_tol = config.tolerance("omega_bound")
            worst_gap, worst_fraction, failures = 0.0, 0.0, 0
            plancherel_row = None
            for E in candidates:
                report = omega_bound_check(E, hom, bound_tol, **budgets)
                scale = max(abs(report.omega), abs(report.omega_kernel)) or 1.0
                worst_gap = max(worst_gap, abs(report.omega - report.omega_kernel) / scale)
                if report.bound > 0:
                    worst_fraction = max(worst_fraction, report.omega / report.bound)
                failures += not report.passed
                if report.size == size:
                    expected = float(q ** (2 * n))
                    plancherel_row = _result(
                        "omega_plancherel", params, report.omega, expected, agreement_tol,
                        abs(report.omega - expected) <= agreement_tol * expected,
                    )
            rows = [
                _result("omega_agreement", params, worst_gap, 0.0, agreement_tol, worst_gap <= agreement_tol),
                _result("omega_bound", params, worst_fraction, 1.0, bound_tol, failures == 0),
            ]
            if plancherel_row is not None:
                rows.append(plancherel_row)
            return rows

        def extremizer():
            if d < 2:
                return []
            subspace = build_affine_in_sphere(prime_field, d, j, config.seed)
            tol = config.tolerance("extremizer")
            rows = []
            for p in EXTREMIZER_EXPONENTS:
                report = extremizer_check(subspace, j, p, 2, tol)
                rows.append(_result("extremizer_ratio", {**params, "p": float(p), "k": subspace.k}, report.lhs, report.rhs, tol, report.passed))
            return rows

        def operator_norm():
            tol = config.tolerance("operator_norm")
            rows = []
            for label, spec in (("sphere", sphere), ("homvariety", hom)):
                if variety_points(spec, budgets["max_ambient_points"]).size == 0:
                    continue
                report = operator_norm_p2(spec, seed=config.seed, tol=tol)
                rows.append(_result("operator_norm_p2", {**params, "variety": label}, report.lhs, report.rhs, tol, report.passed))
            return rows

        def monotone():
            if variety_points(sphere, budgets["max_ambient_points"]).size == 0:
                return []
            held = sum(
                norm_monotone_in_p(_random_grid(prime_field, d, rng), sphere, 1.2, 2.0, 2.0)
                for _ in range(config.trials)
            )
            return [_result("ratio_monotone_in_p", params, held, config.trials, 0.0, held == config.trials)]

        for name, run in (
            ("transfer_identity", transfer),
            ("omega", omega_checks),
            ("extremizer_ratio", extremizer),
            ("operator_norm_p2", operator_norm),
            ("ratio_monotone_in_p", monotone),
        ):
            results.extend(_guard(name, params, run))
        return results

    @staticmethod
    def exponent_suite(ds: list[int]) -> list[CheckResult]:
        """Affine-subspace thresholds reproduce the conjectured exponents exactly."""
        results = []
        for d in sorted(set(ds) | set(EXPONENT_TABLE_RANGE)):
            if d < 2:
                continue
            row = ExponentService.exponent_row(d)
            for kind in ExponentService.case_kinds(d):
                tag = ExponentService.tag_for(kind, d)
                threshold = Fraction(row.necessary[kind.value])
                expected = Fraction(row.conjectured[kind.value])
                critical = critical_exponent(tag.alpha)
                results.append(
                    _result(
                        "necessary_threshold",
                        {"d": d, "case": kind.value},
                        threshold,
                        expected,
                        0.0,
                        threshold == expected == critical,
                    )
                )
        return results

    @staticmethod
    def cell_checks(cell: tuple[int, int], config: RunConfig) -> list[CheckResult]:
        """All (q, d) and (q, d, j) suites for one cell."""
        q, d = cell
        logger.info(f"Verifying cell q={q}, d={d}")
        results = VerificationService.grid_suite(q, d, config)
        results += VerificationService.soperator_suite(q, d, config)
        for j in config.resolve_js(q):
            results += VerificationService.variety_suite(q, d, j, config)
            results += VerificationService.restriction_suite(q, d, j, config)
        return results

    @staticmethod
    def run(config: RunConfig) -> VerifyReport:
        """
        Run every suite over the configured grid.

        Args:
            config: Validated run configuration

        Returns:
            VerifyReport with one row per check and a pass/fail summary

        Raises:
            BudgetExceeded: If a configured grid exceeds the budgets
        """
        VerificationService.check_budget(config)
        started = time.perf_counter()

        results: list[CheckResult] = []
        for q in sorted(set(config.qs)):
            results += VerificationService.field_suite(q, config)

        cells = [(q, d) for d in sorted(set(config.ds)) for q in sorted(set(config.qs))]
        for cell_results in run_cells(partial(VerificationService.cell_checks, config=config), cells, config.workers):
            results += cell_results
        results += VerificationService.exponent_suite(config.ds)

        summary = Summary.from_results(results)
        for result in results:
            if not result.passed:
                logger.warning(f"FAILED {result.check} {result.params}: lhs={result.lhs} rhs={result.rhs} tol={result.tol}")
        logger.info(f"Verification finished: {summary.passed}/{summary.total} checks passed")

        return VerifyReport(
            config=config.model_dump(mode="json"),
            results=results,
            summary=summary,
            wall_time=time.perf_counter() - started if config.timing else None,
        )
