"""
Restriction norms and ratios on spheres and homogeneous varieties.

Besides the norms themselves this module holds the exact sphere to H_j^d
transfer identity, the Omega(E) energy with its regime bounds, the exponent
calculators, the affine-subspace extremizers and the sup-ratio search.
"""
import itertools
import math
from fractions import Fraction

import numpy as np

from config.settings import (
    DEFAULT_MAX_AMBIENT_POINTS,
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_MAX_PAIR_EVALUATIONS,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    EXHAUSTIVE_PATTERN_LIMIT,
    POWER_ITERATIONS,
    TOL_EXTREMIZER_REL,
    TOL_OMEGA_BOUND,
    TOL_OMEGA_REL,
    TOL_OPERATOR_NORM_REL,
    TOL_TRANSFER_REL,
)
from ffharmonic.errors import (
    DimensionMismatch,
    EmptyVariety,
    IdentityViolation,
    InvalidK,
    NotContained,
    UnsupportedExponent,
    ZeroFunction,
)
from ffharmonic.field import case_tag, make_field
from ffharmonic.grid import Exponent, all_coords, encode, lp_norm, transform_values
from ffharmonic.logging_config import get_logger
from ffharmonic.models import (
    AffineSubspace,
    BlowupReport,
    CaseKind,
    CaseTag,
    GridFunction,
    IdentityReport,
    Measure,
    OmegaReport,
    PointSet,
    SearchClass,
    SearchResult,
    VarietyKind,
    VarietySpec,
)
from ffharmonic.soperator import homogeneous_values, s_apply
from ffharmonic.varieties import (
    affine_contains,
    affine_indices,
    build_affine_in_sphere,
    check_ambient_budget,
    homogeneous_spec,
    hom_fourier_closed_table,
    lift_to_homogeneous,
    sphere_size_closed,
    sphere_spec,
    variety_points,
)

logger = get_logger(__name__)

INF = float("inf")

# value grid for g(0) in the exhaustive homogeneous search
ZERO_VALUE_GRID = (0.0, 0.5, 1.0, 2.0)
_BATCH_CELLS = 1 << 22


def _resolve_points(variety: VarietySpec | PointSet, max_ambient_points: int = DEFAULT_MAX_AMBIENT_POINTS) -> PointSet:
    points = variety if isinstance(variety, PointSet) else variety_points(variety, max_ambient_points)
    if points.size == 0:
        raise EmptyVariety(f"{points.spec.describe()} has no points")
    return points


def _relative_error(lhs: float, rhs: float) -> float:
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale if scale else 0.0


# Norms and ratios

def restriction_norm(g: GridFunction, variety: VarietySpec | PointSet, r: Exponent) -> float:
    """
    ||g_hat||_{L^r(V)} with the normalized counting measure on V.

    Raises:
        EmptyVariety: If V has no points
        DimensionMismatch: If g does not live on V's ambient space
    """
    points = _resolve_points(variety)
    if g.dim != points.ambient_dim or g.q != points.spec.field.q:
        raise DimensionMismatch(
            f"function on F_{g.q}^{g.dim} cannot be restricted to {points.spec.describe()}"
        )
    g_hat = transform_values(g.values, g.field, g.dim)
    return lp_norm(g_hat, r, Measure.NORMALIZED, domain=points.points)


def restriction_ratio(g: GridFunction, variety: VarietySpec | PointSet, p: Exponent, r: Exponent) -> float:
    """
    ||g_hat||_{L^r(V)} / ||g||_{l^p}; R(p -> r) is its supremum over g != 0.

    Raises:
        ZeroFunction: If g vanishes identically
    """
    if not np.any(g.values):
        raise ZeroFunction("the restriction ratio is undefined for g = 0")
    return restriction_norm(g, variety, r) / lp_norm(g.values, p)


def transfer_identity_check(g: GridFunction, j: int, r: Exponent, tol: float = TOL_TRANSFER_REL) -> IdentityReport:
    """
    (q-1) |S| ||g_hat||^r_{L^r(S_j^{d-1})} = |H| ||(S g)^||^r_{L^r(H_j^d)}.

    Both sides are computed as plain sums of |.|^r over the point sets.

    Raises:
        UnsupportedExponent: If r is infinite
        EmptyVariety: If the sphere has no points
    """
    r = float(r)
    if math.isinf(r):
        raise UnsupportedExponent("the transfer identity holds for finite r only")
    if r < 1.0:
        raise UnsupportedExponent(f"exponent must be at least 1, got {r}")

    sphere = _resolve_points(sphere_spec(g.field, g.dim, j))
    hom = variety_points(homogeneous_spec(g.field, g.dim, j))

    g_hat = transform_values(g.values, g.field, g.dim)
    lifted_hat = transform_values(s_apply(g).values, g.field, g.dim + 1)

    lhs = (g.q - 1) * float(np.sum(np.abs(g_hat[sphere.points]) ** r))
    rhs = float(np.sum(np.abs(lifted_hat[hom.points]) ** r))
    rel_err = _relative_error(lhs, rhs)
    return IdentityReport(lhs=lhs, rhs=rhs, rel_err=rel_err, tol=tol, passed=rel_err <= tol)


def norm_monotone_in_p(g: GridFunction, variety: VarietySpec | PointSet, p1: Exponent, p2: Exponent, r: Exponent) -> bool:
    """For p1 <= p2, ratio(p1) <= ratio(p2) because l^p norms decrease in p."""
    lo, hi = sorted((float(p1), float(p2)))
    return restriction_ratio(g, variety, lo, r) <= restriction_ratio(g, variety, hi, r) * (1.0 + 1e-12)


# Omega(E)

def _as_indices(E, q: int, n: int) -> np.ndarray:
    E = np.asarray(E, dtype=np.int64)
    if E.ndim == 2:
        E = encode(E, q)
    return np.unique(np.atleast_1d(E))


def _omega_direct(E: np.ndarray, spec: VarietySpec, points: PointSet) -> float:
    q, n = spec.field.q, spec.ambient_dim
    indicator = np.zeros(q ** n, dtype=np.complex128)
    indicator[E] = 1.0
    E_hat = transform_values(indicator, spec.field, n)
    return float(np.sum(np.abs(E_hat[points.points]) ** 2))


def pairwise_is_cheaper(size: int, q: int, n: int, max_pair_evaluations: int = DEFAULT_MAX_PAIR_EVALUATIONS) -> bool:
    """
    Whether the |E|^2 pair sum beats the autocorrelation, whose two transforms
    cost about n q^(n+1) each, and fits the pair cap.
    """
    pairs = size * size
    return pairs <= max_pair_evaluations and pairs <= n * q ** (n + 1)


def _omega_kernel(E: np.ndarray, spec: VarietySpec, table: np.ndarray, max_pair_evaluations: int) -> float:
    """sum over X, Y in E of H_hat(X - Y), pairwise or through the autocorrelation of E."""
    q, n = spec.field.q, spec.ambient_dim
    if pairwise_is_cheaper(E.size, q, n, max_pair_evaluations):
        X = all_coords(q, n)[E]
        total = 0
        chunk = max(1, _BATCH_CELLS // max(1, E.size * n))
        for start in range(0, E.size, chunk):
            diff = (X[start:start + chunk, None, :] - X[None, :, :]) % q
            total += int(table[encode(diff, q)].sum())
        return float(total)

    indicator = np.zeros(q ** n, dtype=np.complex128)
    indicator[E] = 1.0
    energy = np.abs(transform_values(indicator, spec.field, n)) ** 2
    autocorrelation = transform_values(energy, spec.field, n, inverse=True).real
    return float(np.dot(table, np.rint(autocorrelation)))


def omega_both(
    E,
    spec: VarietySpec,
    max_ambient_points: int = DEFAULT_MAX_AMBIENT_POINTS,
    max_pair_evaluations: int = DEFAULT_MAX_PAIR_EVALUATIONS,
) -> tuple[float, float]:
    """
    Omega(E) = sum over M in H of |E_hat(M)|^2 by direct summation and through
    the closed-form transform of H.

    Raises:
        BudgetExceeded: If the ambient space is over max_ambient_points
    """
    if spec.kind is VarietyKind.SPHERE:
        raise ValueError("Omega(E) is defined for homogeneous varieties")
    q, n = spec.field.q, spec.ambient_dim
    check_ambient_budget(q, n, max_ambient_points)
    E = _as_indices(E, q, n)
    points = variety_points(spec, max_ambient_points)
    table = hom_fourier_closed_table(spec, max_ambient_points)
    return _omega_direct(E, spec, points), _omega_kernel(E, spec, table, max_pair_evaluations)


def omega(E, spec: VarietySpec, tol: float = TOL_OMEGA_REL, **budgets) -> float:
    """
    Omega(E), cross-checked between both algorithms.

    Raises:
        IdentityViolation: If the two algorithms disagree beyond tol
    """
    direct, kernel = omega_both(E, spec, **budgets)
    if _relative_error(direct, kernel) > tol:
        raise IdentityViolation(f"Omega mismatch on {spec.describe()}: direct={direct}, kernel={kernel}")
    return direct


def omega_exponent_and_constant(tag: CaseTag, q: int) -> tuple[Fraction, float]:
    """Exponent and constant of the |E|^2 term in the Omega bound for the case."""
    d = tag.d
    if tag.kind is CaseKind.EVEN:
        return Fraction(d, 2), 1.0
    if tag.kind.sign == -1:
        return Fraction(d - 1, 2), 1.0
    return Fraction(d + 1, 2), 1.0 - 1.0 / q


def omega_regime(size: int, tag: CaseTag, q: int) -> tuple[str, float]:
    """
    Which branch of the three-regime L^2 estimate applies at |E| = size, and
    its value: |E|^(1/2) up to q^alpha, q^(-alpha/2)|E| up to q^(alpha+1),
    q^(1/2)|E|^(1/2) beyond.
    """
    alpha = float(tag.alpha)
    if size <= q ** alpha:
        return "small", size ** 0.5
    if size <= q ** (alpha + 1):
        return "middle", q ** (-alpha / 2) * size
    return "large", q ** 0.5 * size ** 0.5


def omega_bound_check(E, spec: VarietySpec, tol: float = TOL_OMEGA_BOUND, **budgets) -> OmegaReport:
    """
    Omega(E) <= min(q^d |E| + C q^a |E|^2, q^(d+1) |E|) with the case-exact
    exponent a and constant C.
    """
    q, d = spec.field.q, spec.d
    E = _as_indices(E, q, spec.ambient_dim)
    direct, kernel = omega_both(E, spec, **budgets)
    if _relative_error(direct, kernel) > TOL_OMEGA_REL:
        raise IdentityViolation(f"Omega mismatch on {spec.describe()}: direct={direct}, kernel={kernel}")

    tag = case_tag(spec.field, d, spec.effective_j)
    exponent, constant = omega_exponent_and_constant(tag, q)
    size = int(E.size)
    bound = min(q ** d * size + constant * q ** float(exponent) * size ** 2, float(q ** (d + 1) * size))
    regime, branch_value = omega_regime(size, tag, q)
    hom_size = variety_points(spec).size

    return OmegaReport(
        size=size,
        omega=direct,
        omega_kernel=kernel,
        regime=regime,
        bound=bound,
        normalized_norm=(direct / hom_size) ** 0.5,
        branch_value=branch_value,
        passed=direct <= bound * (1.0 + tol),
    )


# Exponents

def critical_exponent(alpha: Fraction) -> Fraction:
    """(2 alpha + 2) / (alpha + 2)."""
    alpha = Fraction(alpha)
    return (2 * alpha + 2) / (alpha + 2)


def conjectured_exponent(d: int, tag: CaseTag | CaseKind) -> Fraction:
    """
    Largest p with R(p -> 2) conjecturally bounded for the case:
    (2d+4)/(d+4) even, (2d+6)/(d+5) for the nonsquare cases, (2d+2)/(d+3)
    for the square cases.
    """
    kind = tag.kind if isinstance(tag, CaseTag) else CaseKind(tag)
    if kind is CaseKind.EVEN:
        if d % 2:
            raise ValueError(f"case EVEN needs even d, got {d}")
        return Fraction(2 * d + 4, d + 4)
    if d % 2 == 0:
        raise ValueError(f"case {kind.value} needs odd d, got {d}")
    if kind.sign == -1:
        return Fraction(2 * d + 6, d + 5)
    return Fraction(2 * d + 2, d + 3)


def stein_tomas(d: int) -> Fraction:
    return Fraction(2 * d + 2, d + 3)


def _exponent(value: Exponent) -> Fraction | float:
    if isinstance(value, float) and math.isinf(value):
        return INF
    return Fraction(value).limit_denominator(10**9) if isinstance(value, float) else Fraction(value)


def holder_conjugate(a: Exponent) -> Fraction | float:
    """a' with 1/a + 1/a' = 1; 1 and infinity are swapped."""
    a = _exponent(a)
    if a == INF:
        return Fraction(1)
    if a < 1:
        raise UnsupportedExponent(f"exponent must be at least 1, got {a}")
    if a == 1:
        return INF
    return a / (a - 1)


def _check_k(d: int, k: int) -> None:
    if not 0 <= k <= d - 2:
        raise InvalidK(f"affine dimension must satisfy 0 <= k <= d - 2, got k={k}, d={d}")


def necessary_threshold(d: int, k: int, r: Exponent = 2) -> Fraction:
    """
    Largest p allowed by the obstruction from a k-dimensional affine subspace
    inside the sphere: p' >= 2d/(d-1) and p' >= r (d-k)/(d-1-k).

    For r = 2 this is 2(d-k)/(d+1-k).

    Raises:
        InvalidK: Unless 0 <= k <= d - 2
    """
    _check_k(d, k)
    r = _exponent(r)
    if r == INF:
        return Fraction(1)
    required = max(Fraction(2 * d, d - 1), r * Fraction(d - k, d - 1 - k))
    return holder_conjugate(required)


def necessary_hull_vertices(d: int, k: int) -> tuple[tuple[Fraction, Fraction], ...]:
    """Vertices (1/p, 1/r) of the region cut out by the necessary conditions."""
    _check_k(d, k)
    corner = Fraction(d + 1, 2 * d)
    return (
        (Fraction(1), Fraction(0)),
        (Fraction(1), Fraction(1)),
        (corner, Fraction(1)),
        (corner, Fraction((d - 1) * (d - k), 2 * d * (d - 1 - k))),
    )


def in_necessary_region(d: int, k: int, p: Exponent, r: Exponent) -> bool:
    _check_k(d, k)
    p_conj = holder_conjugate(p)
    r = _exponent(r)
    if r < 1:
        raise UnsupportedExponent(f"exponent must be at least 1, got {r}")
    if p_conj == INF:
        return True
    if r == INF:
        return False
    return p_conj >= Fraction(2 * d, d - 1) and p_conj >= r * Fraction(d - k, d - 1 - k)


# Extremizers

def extremizer_from_subspace(subspace: AffineSubspace) -> GridFunction:
    """g with g_hat = 1_H exactly: g(m) = q^-d sum over x in H of chi(m.x)."""
    indicator = np.zeros(subspace.field.q ** subspace.d, dtype=np.complex128)
    indicator[affine_indices(subspace)] = 1.0
    values = transform_values(indicator, subspace.field, subspace.d, inverse=True)
    return GridFunction(subspace.field, subspace.d, values)


def extremizer_ratio(subspace: AffineSubspace, j: int, p: Exponent, r: Exponent) -> float:
    """
    Closed restriction ratio of the extremizer of H inside S_j^{d-1}:
    (|H|/|S|)^(1/r) / (q^(k-d) q^((d-k)/p)).

    Raises:
        NotContained: If H is not inside the sphere
    """
    prime_field = subspace.field
    q, d, k = prime_field.q, subspace.d, subspace.k
    if not affine_contains(subspace, sphere_spec(prime_field, d, j)):
        raise NotContained(f"subspace of dimension {k} leaves S_{j}^{d - 1} over F_{q}")
    p, r = float(p), float(r)
    sphere_size = sphere_size_closed(prime_field, d, j)
    numerator = (q ** k / sphere_size) ** (1.0 / r)
    denominator = float(q) ** (k - d) * float(q) ** ((d - k) / p)
    return numerator / denominator


def extremizer_check(subspace: AffineSubspace, j: int, p: Exponent, r: Exponent, tol: float = TOL_EXTREMIZER_REL) -> IdentityReport:
    """The closed extremizer ratio against restriction_ratio on the built function."""
    closed = extremizer_ratio(subspace, j, p, r)
    computed = restriction_ratio(extremizer_from_subspace(subspace), sphere_spec(subspace.field, subspace.d, j), p, r)
    rel_err = _relative_error(computed, closed)
    return IdentityReport(lhs=computed, rhs=closed, rel_err=rel_err, tol=tol, passed=rel_err <= tol)


def first_j_for_case(prime_field, d: int, kind: CaseKind) -> int | None:
    """Smallest j in F_q^* whose case is kind, or None when q cannot realize it."""
    for j in range(1, prime_field.q):
        if case_tag(prime_field, d, j).kind is kind:
            return j
    return None


def _log_slope(qs, values) -> float:
    x = np.log(np.asarray(qs, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def extremizer_blowup(
    d: int,
    kind: CaseKind,
    qs,
    p: Exponent,
    r: Exponent = 2,
    seed: int = DEFAULT_SEED,
    max_ambient_points: int = DEFAULT_MAX_AMBIENT_POINTS,
) -> BlowupReport:
    """
    Extremizer ratios across field sizes for one case.

    Ratios are computed from the built functions when q^d fits the ambient
    budget and from the closed formula otherwise; the closed slope is the
    least-squares log-slope of the closed formula over the same qs.
    """
    ratios, closed_ratios, used = [], [], []
    k = None
    for q in qs:
        prime_field = make_field(q)
        j = first_j_for_case(prime_field, d, kind)
        if j is None:
            logger.warning(f"q={q} does not realize case {kind.value} in dimension {d}, skipping")
            continue
        subspace = build_affine_in_sphere(prime_field, d, j, seed)
        k = subspace.k
        closed = extremizer_ratio(subspace, j, p, r)
        if q ** d <= max_ambient_points:
            computed = restriction_ratio(extremizer_from_subspace(subspace), sphere_spec(prime_field, d, j), p, r)
        else:
            computed = closed
        used.append(q)
        ratios.append(computed)
        closed_ratios.append(closed)
        logger.debug(f"Extremizer ratio q={q}, j={j}, k={k}: {computed:.6g}")

    if len(used) < 2:
        raise ValueError("need at least two field sizes realizing the case")

    p, r = float(p), float(r)
    asymptotic = (k - d + 1) / r + (d - k) * (1.0 - 1.0 / p)
    return BlowupReport(
        qs=tuple(used),
        ratios=tuple(ratios),
        closed_ratios=tuple(closed_ratios),
        slope=_log_slope(used, ratios),
        closed_slope=_log_slope(used, closed_ratios),
        asymptotic_slope=asymptotic,
    )


def operator_norm_p2(
    variety: VarietySpec | PointSet,
    iterations: int = POWER_ITERATIONS,
    seed: int = DEFAULT_SEED,
    tol: float = TOL_OPERATOR_NORM_REL,
) -> IdentityReport:
    """
    R(2 -> 2) for the variety by power iteration on the extension-restriction
    composition, against the closed value (q^n / |V|)^(1/2).

    Returns:
        IdentityReport with lhs the power-iteration value and rhs the closed value
    """
    points = _resolve_points(variety)
    prime_field = points.spec.field
    q, n = prime_field.q, points.ambient_dim
    mask = points.mask()
    scale = q ** n / points.size

    rng = np.random.default_rng(seed)
    g = rng.standard_normal(q ** n) + 1j * rng.standard_normal(q ** n)
    g /= np.linalg.norm(g)
    eigenvalue = 0.0
    for _ in range(iterations):
        g_hat = transform_values(g, prime_field, n)
        image = scale * transform_values(np.where(mask, g_hat, 0.0), prime_field, n, inverse=True)
        eigenvalue = float(np.linalg.norm(image))
        if eigenvalue == 0.0:
            break
        g = image / eigenvalue

    power = eigenvalue ** 0.5
    closed = scale ** 0.5
    rel_err = _relative_error(power, closed)
    return IdentityReport(lhs=power, rhs=closed, rel_err=rel_err, tol=tol, passed=rel_err <= tol)


# Sup-ratio search

class _RatioScorer:
    """Scores stacks of candidate functions and keeps the running best."""

    def __init__(self, points: PointSet, p: Exponent, r: Exponent, max_evaluations: int):
        self.points = points
        self.field = points.spec.field
        self.n = points.ambient_dim
        self.p = float(p)
        self.r = float(r)
        self.max_evaluations = max_evaluations
        self.evaluations = 0
        self.best_ratio = -1.0
        self.best_values: np.ndarray | None = None
        self.best_description = ""

    @property
    def remaining(self) -> int:
        return self.max_evaluations - self.evaluations

    def _norms(self, values: np.ndarray, exponent: float, normalized: bool) -> np.ndarray:
        magnitudes = np.abs(values)
        if math.isinf(exponent):
            return magnitudes.max(axis=-1)
        total = np.sum(magnitudes ** exponent, axis=-1)
        if normalized:
            total = total / values.shape[-1]
        return total ** (1.0 / exponent)

    def ratios(self, values: np.ndarray) -> np.ndarray:
        g_hat = transform_values(values, self.field, self.n)[..., self.points.points]
        numerators = self._norms(g_hat, self.r, normalized=True)
        denominators = self._norms(values, self.p, normalized=False)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(denominators > 0, numerators / denominators, -1.0)

    def score(self, values: np.ndarray, describe) -> np.ndarray:
        """Score at most `remaining` rows; describe(i) names row i."""
        values = np.atleast_2d(values)[: max(self.remaining, 0)]
        if values.shape[0] == 0:
            return np.empty(0)
        chunk = max(1, _BATCH_CELLS // values.shape[1])
        scores = np.concatenate([self.ratios(values[i:i + chunk]) for i in range(0, values.shape[0], chunk)])
        self.evaluations += values.shape[0]
        best = int(np.argmax(scores))
        if scores[best] > self.best_ratio:
            self.best_ratio = float(scores[best])
            self.best_values = np.array(values[best])
            self.best_description = describe(best)
        return scores


def _pattern_values(field, n: int, patterns: np.ndarray, zero_values) -> np.ndarray:
    return homogeneous_values(field, n, patterns.astype(np.complex128), zero_values)


def _pattern_chunks(units: int, chunk: int):
    """All 0/1 patterns over `units` in lexicographic order, in blocks of at most chunk rows."""
    combos = itertools.product((0.0, 1.0), repeat=units)
    while True:
        block = list(itertools.islice(combos, chunk))
        if not block:
            return
        yield np.array(block, dtype=float)


def _exhaustive_homogeneous(scorer: _RatioScorer, search_class: SearchClass, lines: int) -> None:
    zero_grid = (0.0, 1.0) if search_class.characteristic else ZERO_VALUE_GRID
    chunk = max(1, _BATCH_CELLS // scorer.field.q ** scorer.n)
    for zero_value in zero_grid:
        for patterns in _pattern_chunks(lines, chunk):
            scorer.score(
                _pattern_values(scorer.field, scorer.n, patterns, zero_value),
                lambda i, block=patterns, z=zero_value: f"lines={np.flatnonzero(block[i]).tolist()} g(0)={z:g}",
            )


def _exhaustive_subsets(scorer: _RatioScorer) -> None:
    size = scorer.field.q ** scorer.n
    for patterns in _pattern_chunks(size, max(1, _BATCH_CELLS // size)):
        scorer.score(patterns, lambda i, block=patterns: f"subset={np.flatnonzero(block[i]).tolist()}")


def _greedy(scorer: _RatioScorer, units: int, to_values, label: str, rng: np.random.Generator, sample: int = 32) -> None:
    """Grow a 0/1 pattern over `units` one unit at a time while the ratio improves."""
    chosen = np.zeros(units, dtype=float)
    current = -1.0
    while scorer.remaining > 0 and chosen.sum() < units:
        free = np.flatnonzero(chosen == 0)
        candidates = rng.choice(free, size=min(sample, free.size), replace=False)
        trial = np.repeat(chosen[None, :], candidates.size, axis=0)
        trial[np.arange(candidates.size), candidates] = 1.0
        scores = scorer.score(to_values(trial), lambda i, t=trial: f"{label} greedy {np.flatnonzero(t[i]).tolist()}")
        if scores.size == 0 or scores.max() <= current:
            break
        pick = int(np.argmax(scores))
        chosen[candidates[pick]] = 1.0
        current = float(scores[pick])


def _subspace_family(points: PointSet, seed: int) -> list[tuple[np.ndarray, str]]:
    """Extremizers of affine subspaces lying in a sphere or lifted into H_j^d."""
    spec = points.spec
    prime_field = spec.field
    if spec.kind is VarietyKind.DUAL_HOMVARIETY:
        return []
    subspace = build_affine_in_sphere(prime_field, spec.d, spec.j, seed)
    description = f"extremizer k={subspace.k} base={subspace.base} directions={subspace.directions}"
    if spec.kind is VarietyKind.SPHERE:
        return [(extremizer_from_subspace(subspace).values, description)]
    indicator = np.zeros(prime_field.q ** points.ambient_dim, dtype=np.complex128)
    indicator[lift_to_homogeneous(subspace)] = 1.0
    values = transform_values(indicator, prime_field, points.ambient_dim, inverse=True)
    return [(values, f"lifted {description}")]


def sup_ratio_search(
    variety: VarietySpec | PointSet,
    p: Exponent,
    r: Exponent,
    search_class: SearchClass = SearchClass.ALL,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
    seed: int = DEFAULT_SEED,
    trials: int = DEFAULT_TRIALS,
    max_ambient_points: int = DEFAULT_MAX_AMBIENT_POINTS,
) -> SearchResult:
    """
    Lower bound on sup restriction_ratio(g, V, p, r) over a function class.

    Homogeneous classes are enumerated exhaustively over line patterns when
    there are at most 20 lines and the budget allows; characteristic
    functions likewise over subsets of small grids. Otherwise the search
    scores seeded random candidates, greedy growth, point masses on the
    transform side and affine-subspace extremizers. Deterministic in seed.

    Raises:
        BudgetExceeded: If the variety's ambient space is over max_ambient_points
    """
    points = _resolve_points(variety, max_ambient_points)
    prime_field = points.spec.field
    q, n = prime_field.q, points.ambient_dim
    rng = np.random.default_rng(seed)
    scorer = _RatioScorer(points, p, r, max_evaluations)
    exhaustive = False

    if search_class.homogeneous:
        lines = (q ** n - 1) // (q - 1)
        zero_grid = 2 if search_class.characteristic else len(ZERO_VALUE_GRID)
        if lines <= EXHAUSTIVE_PATTERN_LIMIT and zero_grid * 2 ** lines <= max_evaluations:
            _exhaustive_homogeneous(scorer, search_class, lines)
            exhaustive = True
        else:
            densities = rng.uniform(0.05, 1.0, size=(trials, 1))
            patterns = (rng.uniform(size=(trials, lines)) < densities).astype(float)
            scorer.score(
                _pattern_values(prime_field, n, patterns, 0.0),
                lambda i: f"random lines trial={i} count={int(patterns[i].sum())}",
            )
            if not search_class.characteristic:
                weights = np.abs(rng.standard_normal((trials, lines)))
                scorer.score(_pattern_values(prime_field, n, weights, 0.0), lambda i: f"random homogeneous trial={i}")
            _greedy(scorer, lines, lambda t: _pattern_values(prime_field, n, t, 0.0), "lines", rng)
    elif search_class.characteristic:
        if q ** n <= EXHAUSTIVE_PATTERN_LIMIT and 2 ** (q ** n) <= max_evaluations:
            _exhaustive_subsets(scorer)
            exhaustive = True
        else:
            densities = rng.uniform(0.0, 1.0, size=(trials, 1))
            subsets = (rng.uniform(size=(trials, q ** n)) < densities).astype(float)
            scorer.score(subsets, lambda i: f"random subset trial={i} size={int(subsets[i].sum())}")
            _greedy(scorer, q ** n, lambda t: t, "subset", rng)
    else:
        x0 = int(points.points[0])
        point_mass = np.zeros(q ** n, dtype=np.complex128)
        point_mass[x0] = 1.0
        scorer.score(
            transform_values(point_mass, prime_field, n, inverse=True),
            lambda i: f"transform point mass at {tuple(int(c) for c in all_coords(q, n)[x0])}",
        )
        family = _subspace_family(points, seed) if points.spec.d >= 2 else []
        for values, description in family:
            scorer.score(values, lambda i, text=description: text)
        randoms = rng.standard_normal((trials, q ** n)) + 1j * rng.standard_normal((trials, q ** n))
        scorer.score(randoms, lambda i: f"random complex trial={i}")
        _greedy(scorer, q ** n, lambda t: t, "subset", rng)

    if scorer.best_values is None:
        raise ZeroFunction("search produced no nonzero candidate")

    witness = GridFunction(prime_field, n, scorer.best_values)
    max_ratio = restriction_ratio(witness, points, p, r)
    logger.info(
        f"Sup-ratio search on {points.spec.describe()} class={search_class.value}: "
        f"{max_ratio:.6g} after {scorer.evaluations} evaluations (exhaustive={exhaustive})"
    )
    return SearchResult(
        max_ratio=max_ratio,
        witness=witness,
        witness_description=scorer.best_description,
        evaluations=scorer.evaluations,
        exhaustive=exhaustive,
    )
