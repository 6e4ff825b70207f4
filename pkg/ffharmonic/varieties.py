"""
Spheres S_j^{d-1} in F_q^d and homogeneous varieties H_j^d in F_q^{d+1}:
enumeration, the exact Fourier transform of 1_{H_j^d}, and affine subspaces
lying inside spheres.
"""
import numpy as np

from config.settings import (
    DEFAULT_MAX_AMBIENT_POINTS,
    SEARCH_RETRY_BUDGET,
    SUBSPACE_CANDIDATE_LIMIT,
)
from ffharmonic.errors import BudgetExceeded, IdentityViolation, NotContained, SearchFailed
from ffharmonic.field import case_tag, eta, inverse, max_affine_dimension
from ffharmonic.grid import all_coords, encode
from ffharmonic.linalg import echelon_bases, gaussian_binomial, null_space, rank, span_points
from ffharmonic.logging_config import get_logger
from ffharmonic.models import AffineSubspace, PointSet, PrimeField, VarietyKind, VarietySpec

logger = get_logger(__name__)

_SEARCH_BATCH = 256
_SWEEP_LIMIT = 1_000_000


def quadratic_norm(coords: np.ndarray, q: int) -> np.ndarray:
    """||x|| = sum x_i^2 mod q along the last axis."""
    coords = np.asarray(coords, dtype=np.int64)
    return (coords * coords).sum(axis=-1) % q


def sphere_spec(prime_field: PrimeField, d: int, j: int) -> VarietySpec:
    return VarietySpec(VarietyKind.SPHERE, prime_field, d, j)


def homogeneous_spec(prime_field: PrimeField, d: int, j: int) -> VarietySpec:
    return VarietySpec(VarietyKind.HOMVARIETY, prime_field, d, j)


def dual_spec(spec: VarietySpec) -> VarietySpec:
    """(H_j^d)^* = H_{1/j}^d, kept as DUAL_HOMVARIETY(j)."""
    if spec.kind is VarietyKind.SPHERE:
        raise ValueError("spheres have no dual variety here")
    kind = VarietyKind.HOMVARIETY if spec.kind is VarietyKind.DUAL_HOMVARIETY else VarietyKind.DUAL_HOMVARIETY
    return VarietySpec(kind, spec.field, spec.d, spec.j)


def check_ambient_budget(q: int, n: int, cap: int = DEFAULT_MAX_AMBIENT_POINTS) -> None:
    if q ** n > cap:
        raise BudgetExceeded("max_ambient_points", q ** n, cap)


def membership_mask(spec: VarietySpec, coords: np.ndarray) -> np.ndarray:
    """Which rows of coords satisfy the defining equation of spec."""
    q = spec.field.q
    coords = np.asarray(coords, dtype=np.int64)
    norm = quadratic_norm(coords[..., : spec.d], q)
    if spec.kind is VarietyKind.SPHERE:
        return norm == spec.j
    last = coords[..., spec.d]
    return norm == (spec.effective_j * last * last) % q


def sphere_size_closed(prime_field: PrimeField, d: int, j: int) -> int:
    """Exact |S_j^{d-1}| from the count of solutions of a diagonal quadratic form."""
    q = prime_field.q
    if d % 2 == 0:
        return q ** (d - 1) - eta(prime_field, (-1) ** (d // 2)) * q ** ((d - 2) // 2)
    return q ** (d - 1) + eta(prime_field, (-1) ** ((d - 1) // 2) * j) * q ** ((d - 1) // 2)


def variety_points(spec: VarietySpec, max_ambient_points: int = DEFAULT_MAX_AMBIENT_POINTS) -> PointSet:
    """
    Enumerate a variety by scanning its ambient space.

    Raises:
        BudgetExceeded: If the ambient space is larger than max_ambient_points
        IdentityViolation: If the count disagrees with its closed form
    """
    q = spec.field.q
    n = spec.ambient_dim
    check_ambient_budget(q, n, max_ambient_points)

    points = np.flatnonzero(membership_mask(spec, all_coords(q, n)))

    if spec.kind is VarietyKind.SPHERE:
        expected = sphere_size_closed(spec.field, spec.d, spec.j)
    else:
        expected = hom_fourier_closed(spec, (0,) * n)
    if points.size != expected:
        raise IdentityViolation(f"{spec.describe()} has {points.size} points, closed form gives {expected}")

    logger.debug(f"Enumerated {spec.describe()}: {points.size} points")
    return PointSet(spec=spec, points=points, ambient_dim=n)


def _closed_form(spec: VarietySpec, m_norm, last, is_zero):
    """Shared closed-form evaluation; works on scalars and on arrays."""
    prime_field = spec.field
    q, d = prime_field.q, spec.d
    j = spec.effective_j
    in_dual = m_norm == (inverse(prime_field, j) * last * last) % q
    delta = np.where(is_zero, q ** d, 0)

    if d % 2 == 0:
        scale = q ** (d // 2) * eta(prime_field, -1) ** ((d + 2) // 2)
        off_dual = scale * prime_field.eta_table[(j * m_norm - last * last) % q]
        return np.where(in_dual, delta, off_dual)

    sign = case_tag(prime_field, d, j).kind.sign
    half = q ** ((d - 1) // 2)
    return np.where(in_dual, delta + sign * (q - 1) * half, -sign * half)


def hom_fourier_closed(spec: VarietySpec, M) -> int:
    """
    Exact value of the Fourier transform of 1_{H_j^d} at M in F_q^{d+1}.

    M lies on the dual variety when ||m|| = j^-1 m_{d+1}^2. Even d gives
    q^d delta_0(M) there and q^(d/2) eta(-1)^((d+2)/2) eta(j||m|| - m_{d+1}^2)
    off it; odd d gives q^d delta_0(M) + s (q-1) q^((d-1)/2) and
    -s q^((d-1)/2) with s the case sign.
    """
    if spec.kind is VarietyKind.SPHERE:
        raise ValueError("the closed form is stated for homogeneous varieties")
    q = spec.field.q
    coords = np.asarray(M, dtype=np.int64) % q
    m_norm = int(quadratic_norm(coords[: spec.d], q))
    last = int(coords[spec.d])
    return int(_closed_form(spec, m_norm, last, not coords.any()))


def hom_fourier_closed_table(spec: VarietySpec, max_ambient_points: int = DEFAULT_MAX_AMBIENT_POINTS) -> np.ndarray:
    """hom_fourier_closed at every point of F_q^{d+1}, as an int64 array."""
    q = spec.field.q
    n = spec.d + 1
    check_ambient_budget(q, n, max_ambient_points)
    coords = all_coords(q, n)
    m_norm = quadratic_norm(coords[:, : spec.d], q)
    last = coords[:, spec.d]
    is_zero = np.arange(q ** n) == 0
    return _closed_form(spec, m_norm, last, is_zero).astype(np.int64)


def hom_fourier_bruteforce_many(spec: VarietySpec, Ms: np.ndarray, points: PointSet | None = None) -> np.ndarray:
    """sum over X in H of chi(-M.X) for each row M of Ms."""
    q = spec.field.q
    if points is None:
        points = variety_points(spec)
    X = all_coords(q, points.ambient_dim)[points.points]
    Ms = np.atleast_2d(np.asarray(Ms, dtype=np.int64)) % q
    out = np.empty(Ms.shape[0], dtype=np.complex128)
    chunk = max(1, 4_000_000 // max(1, X.shape[0]))
    for start in range(0, Ms.shape[0], chunk):
        block = Ms[start:start + chunk]
        phases = (-(block @ X.T)) % q
        out[start:start + chunk] = spec.field.chi_table[phases].sum(axis=1)
    return out


def hom_fourier_bruteforce(spec: VarietySpec, M, max_ambient_points: int = DEFAULT_MAX_AMBIENT_POINTS) -> complex:
    """Direct character sum over the enumerated variety; the oracle for the closed form."""
    points = variety_points(spec, max_ambient_points)
    return complex(hom_fourier_bruteforce_many(spec, np.asarray(M)[None, :], points)[0])


def sparse_points(q: int, n: int, max_nonzero: int = 2) -> np.ndarray:
    """All points of F_q^n with at most max_nonzero nonzero coordinates."""
    coords = all_coords(q, n) if q ** n <= DEFAULT_MAX_AMBIENT_POINTS else None
    if coords is not None:
        return coords[(coords != 0).sum(axis=1) <= max_nonzero]
    rows = [np.zeros(n, dtype=np.int64)]
    for i in range(n):
        for a in range(1, q):
            row = np.zeros(n, dtype=np.int64)
            row[i] = a
            rows.append(row)
    if max_nonzero >= 2:
        for i in range(n):
            for k in range(i + 1, n):
                for a in range(1, q):
                    for b in range(1, q):
                        row = np.zeros(n, dtype=np.int64)
                        row[i], row[k] = a, b
                        rows.append(row)
    return np.array(rows)


def affine_points(subspace: AffineSubspace) -> np.ndarray:
    """The q^k points base + span(directions), as coordinate rows."""
    q = subspace.field.q
    directions = np.array(subspace.directions, dtype=np.int64).reshape(subspace.k, subspace.d)
    return (np.array(subspace.base, dtype=np.int64)[None, :] + span_points(directions, q)) % q


def affine_indices(subspace: AffineSubspace) -> np.ndarray:
    return np.sort(encode(affine_points(subspace), subspace.field.q))


def affine_contains(subspace: AffineSubspace, spec: VarietySpec) -> bool:
    """Pointwise certificate: every point of the subspace satisfies spec's equation."""
    return bool(np.all(membership_mask(spec, affine_points(subspace))))


def affine_is_proper(subspace: AffineSubspace) -> bool:
    """Directions are independent, so all q^k points are distinct."""
    if subspace.k == 0:
        return True
    return rank(np.array(subspace.directions), subspace.field.q) == subspace.k


def lift_to_homogeneous(subspace: AffineSubspace) -> np.ndarray:
    """
    Indices in F_q^{d+1} of (x, 1) for x in the subspace; a subspace of
    S_j^{d-1} lifts into H_j^d.
    """
    q = subspace.field.q
    pts = affine_points(subspace)
    lifted = np.hstack([pts, np.ones((pts.shape[0], 1), dtype=np.int64)])
    return np.sort(encode(lifted, q))


def random_affine_subspace(prime_field: PrimeField, n: int, k: int, rng: np.random.Generator) -> AffineSubspace:
    """A uniformly drawn base with k independent random directions in F_q^n."""
    q = prime_field.q
    if k > n:
        raise ValueError(f"cannot fit {k} independent directions in dimension {n}")
    while True:
        directions = rng.integers(0, q, size=(k, n))
        if k == 0 or rank(directions, q) == k:
            break
    base = rng.integers(0, q, size=n)
    return AffineSubspace(
        field=prime_field,
        base=tuple(int(x) for x in base),
        directions=tuple(tuple(int(x) for x in row) for row in directions),
    )


def _find_on_sphere(prime_field: PrimeField, d: int, j: int, rng: np.random.Generator) -> np.ndarray:
    q = prime_field.q
    for _ in range(SEARCH_RETRY_BUDGET // _SEARCH_BATCH):
        draws = rng.integers(0, q, size=(_SEARCH_BATCH, d))
        hits = np.flatnonzero(quadratic_norm(draws, q) == j)
        if hits.size:
            return draws[hits[0]]
    # every element of F_q is a sum of two squares
    for a in range(q):
        for b in range(q):
            if (a * a + b * b) % q == j:
                v = np.zeros(d, dtype=np.int64)
                v[0], v[1] = a, b
                return v
    raise SearchFailed(f"no point of norm {j} found in F_{q}^{d}")


def _find_isotropic(basis: np.ndarray, q: int, rng: np.random.Generator) -> np.ndarray | None:
    """A nonzero x in span(basis) with ||x|| = 0, or None when the span is anisotropic."""
    n = basis.shape[0]
    if n < 2:
        return None
    if n >= 3:
        # three or more variables always represent zero
        for _ in range(SEARCH_RETRY_BUDGET // _SEARCH_BATCH):
            coefficients = rng.integers(0, q, size=(_SEARCH_BATCH, n))
            vectors = (coefficients @ basis) % q
            hits = np.flatnonzero((quadratic_norm(vectors, q) == 0) & vectors.any(axis=1))
            if hits.size:
                return vectors[hits[0]]
    if q ** n > _SWEEP_LIMIT:
        raise SearchFailed(f"isotropic search exhausted in a {n}-dimensional space over F_{q}")
    vectors = (span_points(basis, q))
    hits = np.flatnonzero((quadratic_norm(vectors, q) == 0) & vectors.any(axis=1))
    return vectors[hits[0]] if hits.size else None


def build_affine_in_sphere(prime_field: PrimeField, d: int, j: int, seed: int = 0) -> AffineSubspace:
    """
    Construct an affine subspace v + W of maximal dimension inside S_j^{d-1}.

    v has norm j and W is a maximal totally isotropic subspace of v-perp, found
    by splitting off hyperbolic planes: pick an isotropic e, a partner f with
    e.f = 1, recurse on the orthogonal complement of span(e, f).

    Raises:
        SearchFailed: If a seeded search runs out of retries
        NotContained: If the result fails its pointwise certificate
    """
    q = prime_field.q
    j = int(j) % q
    rng = np.random.default_rng(seed)
    v = _find_on_sphere(prime_field, d, j, rng)

    basis = null_space(v[None, :], q)
    isotropic: list[np.ndarray] = []
    while basis.shape[0] >= 2:
        e = _find_isotropic(basis, q, rng)
        if e is None:
            break
        products = (basis @ e) % q
        partner_row = int(np.flatnonzero(products)[0])
        f = (basis[partner_row] * inverse(prime_field, int(products[partner_row]))) % q
        isotropic.append(e)
        constraints = np.stack([(basis @ e) % q, (basis @ f) % q])
        basis = (null_space(constraints, q) @ basis) % q

    subspace = AffineSubspace(
        field=prime_field,
        base=tuple(int(x) for x in v),
        directions=tuple(tuple(int(x) for x in e) for e in isotropic),
    )

    expected = max_affine_dimension(case_tag(prime_field, d, j))
    if subspace.k != expected:
        raise SearchFailed(f"built a {subspace.k}-dimensional subspace, expected {expected}")
    if not affine_contains(subspace, sphere_spec(prime_field, d, j)):
        raise NotContained(f"constructed subspace leaves S_{j}^{d - 1} over F_{q}")

    logger.debug(f"Built {subspace.k}-dimensional affine subspace in S_{j}^{d - 1} over F_{q}")
    return subspace


def bruteforce_max_affine(
    prime_field: PrimeField,
    d: int,
    j: int,
    k_max: int,
    candidate_limit: int = SUBSPACE_CANDIDATE_LIMIT,
) -> int:
    """
    Largest k <= k_max such that some k-dimensional affine subspace lies in
    S_j^{d-1}, by exhaustive search over echelon bases and sphere base points.

    Raises:
        BudgetExceeded: If the number of candidate direction sets is over the limit
    """
    q = prime_field.q
    spec = sphere_spec(prime_field, d, j)
    sphere = all_coords(q, d)[variety_points(spec).points]
    if sphere.shape[0] == 0:
        return -1

    total = sum(gaussian_binomial(d, k, q) for k in range(1, k_max + 1))
    if total > candidate_limit:
        raise BudgetExceeded("subspace_candidate_limit", total, candidate_limit)

    best = 0
    for k in range(1, k_max + 1):
        found = False
        for basis in echelon_bases(d, k, q):
            shifted = (sphere[:, None, :] + span_points(basis, q)[None, :, :]) % q
            if np.any(np.all(quadratic_norm(shifted, q) == j, axis=1)):
                found = True
                break
        if not found:
            break
        best = k
    logger.debug(f"Brute-force maximal affine dimension in S_{j}^{d - 1} over F_{q}: {best}")
    return best
