"""
Dense functions on F_q^n: point encoding, the Fourier transform and its
inverse, L^p / l^p norms, and the dyadic level-set decomposition.

A point x = (x_0, ..., x_{n-1}) is stored at index sum_i x_i q^i.
"""
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from config.settings import DIRECT_TRANSFORM_LIMIT, TOL_NORMALIZATION
from ffharmonic.errors import (
    BudgetExceeded,
    EmptyDomain,
    NotNormalized,
    OutOfRangeValue,
    UnsupportedExponent,
)
from ffharmonic.logging_config import get_logger
from ffharmonic.models import DyadicDecomposition, DyadicMassReport, GridFunction, Measure, PrimeField

logger = get_logger(__name__)

Exponent = float | int | Fraction


@lru_cache(maxsize=8)
def all_coords(q: int, n: int) -> np.ndarray:
    """Coordinates of every point of F_q^n, row i is the point with index i."""
    index = np.arange(q ** n, dtype=np.int64)
    powers = q ** np.arange(n, dtype=np.int64)
    coords = (index[:, None] // powers[None, :]) % q
    coords.setflags(write=False)
    return coords


def encode(coords, q: int) -> np.ndarray | int:
    """Canonical index of one point or of each row of a coordinate array."""
    coords = np.asarray(coords, dtype=np.int64) % q
    powers = q ** np.arange(coords.shape[-1], dtype=np.int64)
    encoded = coords @ powers
    return int(encoded) if encoded.ndim == 0 else encoded


def decode(index: int, q: int, n: int) -> tuple[int, ...]:
    return tuple(int((index // q ** i) % q) for i in range(n))


@lru_cache(maxsize=256)
def dilation_index(q: int, n: int, t: int) -> np.ndarray:
    """perm[i] = index of t * x where x is the point with index i."""
    perm = encode((int(t) * all_coords(q, n)) % q, q)
    perm.setflags(write=False)
    return perm


def _kernel(prime_field: PrimeField, sign: int) -> np.ndarray:
    t = np.arange(prime_field.q)
    return prime_field.chi_table[(sign * np.outer(t, t)) % prime_field.q]


def _apply_per_axis(values: np.ndarray, q: int, n: int, kernel: np.ndarray) -> np.ndarray:
    batch_shape = values.shape[:-1]
    arr = values.reshape(batch_shape + (q,) * n)
    for axis in range(len(batch_shape), arr.ndim):
        arr = np.moveaxis(np.tensordot(kernel, arr, axes=([1], [axis])), 0, axis)
    return arr.reshape(batch_shape + (q ** n,))


def _direct_matrix(prime_field: PrimeField, n: int, sign: int) -> np.ndarray:
    q = prime_field.q
    if q ** n > DIRECT_TRANSFORM_LIMIT:
        raise BudgetExceeded("direct_transform_limit", q ** n, DIRECT_TRANSFORM_LIMIT)
    coords = all_coords(q, n)
    return prime_field.chi_table[(sign * (coords @ coords.T)) % q]


def transform_values(
    values: np.ndarray,
    prime_field: PrimeField,
    n: int,
    inverse: bool = False,
    method: str = "factorized",
) -> np.ndarray:
    """
    Fourier transform (or its inverse) of one function or a stack of them.

    Args:
        values: Array of shape (..., q^n)
        prime_field: The field
        n: Dimension of the grid
        inverse: Apply q^-n sum_x chi(m.x) G(x) instead of sum_m chi(-m.x) g(m)
        method: "factorized" (n passes of size-q transforms) or "direct"

    Returns:
        Array of the same shape
    """
    values = np.asarray(values, dtype=np.complex128)
    sign = 1 if inverse else -1
    if method == "factorized":
        out = _apply_per_axis(values, prime_field.q, n, _kernel(prime_field, sign))
    elif method == "direct":
        out = values @ _direct_matrix(prime_field, n, sign).T
    else:
        raise ValueError(f"unknown transform method: {method}")
    if inverse:
        out = out / float(prime_field.q ** n)
    return out


def fourier_transform(g: GridFunction, method: str = "factorized") -> GridFunction:
    """g_hat(x) = sum_m chi(-m.x) g(m)."""
    return GridFunction(g.field, g.dim, transform_values(g.values, g.field, g.dim, method=method))


def inverse_fourier_transform(G: GridFunction, method: str = "factorized") -> GridFunction:
    """g(m) = q^-d sum_x chi(m.x) G(x)."""
    return GridFunction(G.field, G.dim, transform_values(G.values, G.field, G.dim, inverse=True, method=method))


def plancherel_error(g: GridFunction) -> float:
    """Relative gap between sum |g_hat|^2 and q^d sum |g|^2."""
    g_hat = fourier_transform(g)
    lhs = float(np.sum(np.abs(g_hat.values) ** 2))
    rhs = float(g.q ** g.dim * np.sum(np.abs(g.values) ** 2))
    if rhs == 0.0:
        return lhs
    return abs(lhs - rhs) / rhs


def _check_exponent(p: Exponent) -> float:
    p = float(p)
    if not p >= 1.0:
        raise UnsupportedExponent(f"exponent must lie in [1, inf], got {p}")
    return p


def lp_norm(
    values: np.ndarray,
    p: Exponent,
    measure: Measure = Measure.COUNTING,
    domain: np.ndarray | None = None,
) -> float:
    """
    L^p (normalized counting measure) or l^p (counting measure) norm.

    Args:
        values: Function values; restricted to `domain` when it is given
        p: Exponent in [1, inf]
        measure: NORMALIZED divides the sum by the domain size
        domain: Optional index array selecting the domain points

    Raises:
        EmptyDomain: If the domain has no points
    """
    p = _check_exponent(p)
    values = np.asarray(values)
    if domain is not None:
        values = values[np.asarray(domain, dtype=np.int64)]
    size = values.shape[-1]
    if size == 0:
        raise EmptyDomain("norm over an empty domain")

    magnitudes = np.abs(values)
    if math.isinf(p):
        return float(magnitudes.max())
    total = float(np.sum(magnitudes ** p))
    if measure is Measure.NORMALIZED:
        total /= size
    return total ** (1.0 / p)


def norm_nesting_holds(values: np.ndarray, p1: Exponent, p2: Exponent, rel_tol: float = 1e-12) -> bool:
    """For p1 <= p2 the counting-measure norms satisfy l^p2 <= l^p1."""
    lo, hi = sorted((float(p1), float(p2)))
    return lp_norm(values, hi) <= lp_norm(values, lo) * (1.0 + rel_tol)


def default_truncation(q: int, n: int) -> int:
    """ceil(n log2 q): levels beyond it carry total mass below 1."""
    return math.ceil(n * math.log2(q))


def _real_unit_values(F: GridFunction) -> np.ndarray:
    values = F.values
    if np.any(np.abs(values.imag) > 0):
        raise OutOfRangeValue("dyadic decomposition needs a real-valued function")
    real = values.real
    if np.any(real < 0.0) or np.any(real > 1.0):
        raise OutOfRangeValue("dyadic decomposition needs values in [0, 1]")
    return real


def dyadic_decompose(F: GridFunction, K: int | None = None) -> DyadicDecomposition:
    """
    Split F: F_q^n -> [0, 1] into level sets F_k = {2^(-k-1) < F <= 2^(-k)}.

    Args:
        F: Real function with values in [0, 1]
        K: Last level kept; defaults to ceil(n log2 q)

    Raises:
        OutOfRangeValue: If F is complex or leaves [0, 1]
    """
    real = _real_unit_values(F)
    if K is None:
        K = default_truncation(F.q, F.dim)
    if K < 0:
        raise ValueError("truncation level must be non-negative")

    # frexp is exact: v = m 2^e with m in [0.5, 1), and m == 0.5 marks a power of two
    mantissa, exponent = np.frexp(real)
    level = np.where(mantissa == 0.5, 1 - exponent, -exponent)
    kept = (real > 0.0) & (level <= K)

    levels = tuple(np.flatnonzero(kept & (level == k)) for k in range(K + 1))
    majorant = np.where(kept, np.ldexp(1.0, -np.where(kept, level, 0)), 0.0)

    logger.debug(f"Dyadic decomposition on F_{F.q}^{F.dim}: K={K}, sizes={[lvl.size for lvl in levels]}")
    return DyadicDecomposition(
        source=F,
        levels=levels,
        majorant=GridFunction(F.field, F.dim, majorant),
        truncation=K,
    )


def majorant_violation(decomposition: DyadicDecomposition) -> float:
    """
    Largest violation of F <= F_tilde <= 2F on the support of F_tilde; 0 when
    the sandwich holds everywhere.
    """
    F = decomposition.source.values.real
    F_tilde = decomposition.majorant.values.real
    support = F_tilde > 0
    if not np.any(support):
        return 0.0
    below = np.max(F[support] - F_tilde[support])
    above = np.max(F_tilde[support] - 2.0 * F[support])
    return float(max(below, above, 0.0))


def check_dyadic_mass(F: GridFunction, p: Exponent, K: int | None = None) -> DyadicMassReport:
    """
    sum_k 2^(-pk) |F_k| <= 2^p for F normalized so that sum F^p = 1.

    Raises:
        NotNormalized: If sum F^p differs from 1 by more than 1e-9
    """
    p = _check_exponent(p)
    real = _real_unit_values(F)
    mass = float(np.sum(real ** p))
    if abs(mass - 1.0) > TOL_NORMALIZATION:
        raise NotNormalized(f"sum F^p = {mass}, expected 1")

    decomposition = dyadic_decompose(F, K)
    lhs = float(sum(2.0 ** (-p * k) * size for k, size in enumerate(decomposition.level_sizes())))
    bound = 2.0 ** p
    return DyadicMassReport(lhs=lhs, bound=bound, passed=lhs <= bound)


def dyadic_transform_ratio(decomposition: DyadicDecomposition, points: np.ndarray) -> float:
    """
    sum_{X in points} |F_hat(X)|^2 divided by the same sum for the majorant.
    """
    F = decomposition.source
    F_hat = transform_values(F.values, F.field, F.dim)[points]
    F_tilde_hat = transform_values(decomposition.majorant.values, F.field, F.dim)[points]
    numerator = float(np.sum(np.abs(F_hat) ** 2))
    denominator = float(np.sum(np.abs(F_tilde_hat) ** 2))
    if denominator == 0.0:
        return float("nan") if numerator == 0.0 else float("inf")
    return numerator / denominator
