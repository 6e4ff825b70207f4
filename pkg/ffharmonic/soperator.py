"""
The S-operator lifting functions on F_q^d to F_q^{d+1}, its Fourier transform
in closed form, and homogeneous functions of degree zero.
"""
from functools import lru_cache

import numpy as np

from config.settings import TOL_S_HAT, TOL_S_HOMOGENEOUS, TOL_S_LP_REL
from ffharmonic.errors import NotHomogeneous, UnsupportedExponent
from ffharmonic.grid import Exponent, dilation_index, fourier_transform, transform_values
from ffharmonic.logging_config import get_logger
from ffharmonic.models import GridFunction, HomogeneousFunction, IdentityReport, PrimeField, SHatReport

logger = get_logger(__name__)


@lru_cache(maxsize=32)
def line_orbits(q: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Punctured lines {t m : t != 0} of F_q^d.

    Each line is represented by the smallest index among its points; lines are
    numbered in increasing order of that representative.

    Returns:
        (orbit_of, representatives): orbit_of[i] is the line of point i
        (-1 at the origin), representatives[o] is the index of line o's
        representative
    """
    size = q ** d
    dilates = np.stack([dilation_index(q, d, t) for t in range(1, q)])
    smallest = dilates.min(axis=0)
    representatives, inverse = np.unique(smallest[1:], return_inverse=True)

    orbit_of = np.full(size, -1, dtype=np.int64)
    orbit_of[1:] = inverse
    orbit_of.setflags(write=False)
    representatives.setflags(write=False)
    logger.debug(f"Line orbit table for F_{q}^{d}: {representatives.size} lines")
    return orbit_of, representatives


def orbit_count(q: int, d: int) -> int:
    return (q ** d - 1) // (q - 1)


def homogeneous_values(prime_field: PrimeField, d: int, line_values: np.ndarray, value_at_zero=0.0) -> np.ndarray:
    """Grid values (..., q^d) induced by line values (..., lines)."""
    orbit_of, _ = line_orbits(prime_field.q, d)
    line_values = np.asarray(line_values, dtype=np.complex128)
    values = line_values[..., np.maximum(orbit_of, 0)]
    values[..., 0] = value_at_zero
    return values


def to_grid(h: HomogeneousFunction) -> GridFunction:
    return GridFunction(h.field, h.d, homogeneous_values(h.field, h.d, h.line_values, h.value_at_zero))


def from_grid(g: GridFunction, tol: float = TOL_S_HOMOGENEOUS) -> HomogeneousFunction:
    """
    Read off line values from a grid function.

    Raises:
        NotHomogeneous: If g(t m) differs from g(m) for some t != 0
    """
    orbit_of, representatives = line_orbits(g.q, g.dim)
    line_values = g.values[representatives]
    deviation = np.abs(g.values[1:] - line_values[orbit_of[1:]])
    if deviation.size and deviation.max() > tol:
        raise NotHomogeneous(f"function varies along a line by {deviation.max():.3e}")
    return HomogeneousFunction(g.field, g.dim, line_values, g.values[0])


def is_homogeneous(g: GridFunction, tol: float = TOL_S_HOMOGENEOUS) -> bool:
    try:
        from_grid(g, tol)
    except NotHomogeneous:
        return False
    return True


def s_apply_values(values: np.ndarray, prime_field: PrimeField, d: int) -> np.ndarray:
    """
    S on a function or a stack of functions (..., q^d) -> (..., q^(d+1)).

    Sg(m, s) = q^-1 sum_{t != 0} chi(t s) g(t m), stored at index m + q^d s.
    """
    q = prime_field.q
    values = np.asarray(values, dtype=np.complex128)
    dilated = np.stack([values[..., dilation_index(q, d, t)] for t in range(1, q)], axis=-2)
    s = np.arange(q)
    kernel = prime_field.chi_table[np.outer(s, np.arange(1, q)) % q]
    lifted = np.matmul(kernel, dilated) / q
    return lifted.reshape(values.shape[:-1] + (q ** (d + 1),))


def s_apply(g: GridFunction) -> GridFunction:
    return GridFunction(g.field, g.dim + 1, s_apply_values(g.values, g.field, g.dim))


def s_hat_closed(g: GridFunction) -> np.ndarray:
    """g_hat(x / s) for s != 0 and 0 on the slab s = 0, indexed like S g."""
    q, d = g.q, g.dim
    g_hat = transform_values(g.values, g.field, d)
    closed = np.zeros((q, q ** d), dtype=np.complex128)
    for s in range(1, q):
        closed[s] = g_hat[dilation_index(q, d, int(g.field.inv_table[s]))]
    return closed.reshape(-1)


def s_hat_check(g: GridFunction, tol: float | None = None) -> SHatReport:
    """
    Compare the transform of S g with its closed form.

    The tolerance scales with q^d unless given explicitly.
    """
    if tol is None:
        tol = TOL_S_HAT * g.q ** g.dim
    transformed = fourier_transform(s_apply(g)).values
    max_err = float(np.max(np.abs(transformed - s_hat_closed(g))))
    return SHatReport(max_err=max_err, tol=tol, passed=max_err <= tol)


def s_hat_scaling_error(g: GridFunction) -> float:
    """Largest spread of the transform of S g across the dilates (t x, t s), t != 0."""
    q, d = g.q, g.dim
    lifted = fourier_transform(s_apply(g)).values.reshape(q, q ** d)
    worst = 0.0
    for t in range(2, q):
        dilated = np.empty_like(lifted)
        perm = dilation_index(q, d, t)
        for s in range(q):
            dilated[(t * s) % q, perm] = lifted[s]
        worst = max(worst, float(np.max(np.abs(dilated - lifted))))
    return worst


def _as_homogeneous(g: HomogeneousFunction | GridFunction) -> HomogeneousFunction:
    if isinstance(g, GridFunction):
        return from_grid(g)
    return g


def s_apply_homogeneous(g: HomogeneousFunction | GridFunction) -> GridFunction:
    """
    S g(m, s) = g(m) (q delta_0(s) - 1) / q for homogeneous g.

    Raises:
        NotHomogeneous: If a grid function is passed that is not homogeneous
    """
    h = _as_homogeneous(g)
    q = h.field.q
    base = homogeneous_values(h.field, h.d, h.line_values, h.value_at_zero)
    factor = np.full(q, -1.0 / q)
    factor[0] = (q - 1) / q
    values = (factor[:, None] * base[None, :]).reshape(-1)
    return GridFunction(h.field, h.d + 1, values)


def s_lp_factor(q: int, p: Exponent) -> float:
    """(q-1)/q^p + ((q-1)/q)^p, at most 2 for p >= 1."""
    p = float(p)
    return (q - 1) / q ** p + ((q - 1) / q) ** p


def s_lp_identity(g: HomogeneousFunction | GridFunction, p: Exponent, tol: float = TOL_S_LP_REL) -> IdentityReport:
    """
    ||S g||_p^p against s_lp_factor(q, p) ||g||_p^p for homogeneous g.

    Raises:
        UnsupportedExponent: If p is infinite or below 1
        NotHomogeneous: If g is not homogeneous
    """
    p = float(p)
    if not 1.0 <= p < float("inf"):
        raise UnsupportedExponent(f"the l^p identity needs 1 <= p < inf, got {p}")
    h = _as_homogeneous(g)
    base = to_grid(h).values
    lifted = s_apply_homogeneous(h).values

    lhs = float(np.sum(np.abs(lifted) ** p))
    rhs = s_lp_factor(h.field.q, p) * float(np.sum(np.abs(base) ** p))
    rel_err = abs(lhs - rhs) / rhs if rhs else abs(lhs)
    return IdentityReport(lhs=lhs, rhs=rhs, rel_err=rel_err, tol=tol, passed=rel_err <= tol)
