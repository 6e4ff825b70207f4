"""
Arithmetic in F_q for odd primes q: the additive character chi, the
quadratic character eta, Gauss sums and the five-case classifier.
"""
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import isprime
from sympy.functions.combinatorial.numbers import legendre_symbol

from config.settings import TOL_CHARACTER_SUM, TOL_GAUSS
from ffharmonic.errors import EvenCharacteristic, IdentityViolation, NotPrime, ZeroArgument
from ffharmonic.logging_config import get_logger
from ffharmonic.models import CaseKind, CaseTag, PrimeField

logger = get_logger(__name__)


@lru_cache(maxsize=64)
def make_field(q: int) -> PrimeField:
    """
    Build F_q with its character tables.

    Args:
        q: Field modulus, an odd prime

    Returns:
        PrimeField with chi, eta and inverse tables populated

    Raises:
        EvenCharacteristic: If q == 2
        NotPrime: If q is not prime
    """
    q = int(q)
    if q == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if q < 3 or not isprime(q):
        raise NotPrime(f"{q} is not an odd prime")

    t = np.arange(q)
    chi_table = np.exp(2j * np.pi * t / q)
    eta_table = np.array([0] + [legendre_symbol(a, q) for a in range(1, q)], dtype=np.int64)
    inv_table = np.array([0] + [pow(a, -1, q) for a in range(1, q)], dtype=np.int64)

    logger.debug(f"Built prime field q={q}")
    return PrimeField(q=q, chi_table=chi_table, eta_table=eta_table, inv_table=inv_table)


def chi(prime_field: PrimeField, t: int) -> complex:
    return complex(prime_field.chi_table[int(t) % prime_field.q])


def eta(prime_field: PrimeField, t: int) -> int:
    return int(prime_field.eta_table[int(t) % prime_field.q])


def is_square(prime_field: PrimeField, t: int) -> bool:
    """True for nonzero squares."""
    return eta(prime_field, t) == 1


def inverse(prime_field: PrimeField, a: int) -> int:
    a = int(a) % prime_field.q
    if a == 0:
        raise ZeroArgument("0 has no inverse")
    return int(prime_field.inv_table[a])


def orthogonality_error(prime_field: PrimeField, a: int) -> float:
    """|sum_t chi(a t)| for a != 0; zero up to rounding."""
    a = int(a) % prime_field.q
    if a == 0:
        raise ZeroArgument("orthogonality needs a nonzero multiplier")
    t = np.arange(prime_field.q)
    return float(abs(prime_field.chi_table[(a * t) % prime_field.q].sum()))


def gauss_sum(prime_field: PrimeField, a: int) -> complex:
    """G_a = sum over s != 0 of eta(s) chi(a s)."""
    q = prime_field.q
    a = int(a) % q
    if a == 0:
        raise ZeroArgument("the Gauss sum G_a needs a != 0")
    s = np.arange(1, q)
    return complex(np.dot(prime_field.eta_table[s], prime_field.chi_table[(a * s) % q]))


def complete_square_closed(prime_field: PrimeField, a: int, b: int) -> complex:
    """eta(a) G_1 chi(-b^2 / (4a)), the completed-square value of sum_s chi(a s^2 + b s)."""
    shift = (-int(b) * int(b) * inverse(prime_field, 4 * int(a))) % prime_field.q
    return eta(prime_field, a) * gauss_sum(prime_field, 1) * chi(prime_field, shift)


def complete_square_sum(prime_field: PrimeField, a: int, b: int, tol: float = TOL_GAUSS) -> complex:
    """
    sum_s chi(a s^2 + b s), evaluated directly and through the closed form
    eta(a) G_1 chi(-b^2 / (4a)).

    Returns:
        The direct sum

    Raises:
        ZeroArgument: If a == 0
        IdentityViolation: If the two paths differ by more than tol * q
    """
    q = prime_field.q
    a = int(a) % q
    b = int(b) % q
    if a == 0:
        raise ZeroArgument("completing the square needs a != 0")

    s = np.arange(q)
    direct = complex(prime_field.chi_table[(a * s * s + b * s) % q].sum())
    closed = complete_square_closed(prime_field, a, b)

    if abs(direct - closed) > tol * q:
        raise IdentityViolation(
            f"completed-square sum mismatch at q={q}, a={a}, b={b}: direct={direct}, closed={closed}"
        )
    return direct


def conjugate_gauss_sum_error(prime_field: PrimeField, a: int) -> float:
    """|conj(G_a) - eta(-1) G_a|."""
    g = gauss_sum(prime_field, a)
    return abs(g.conjugate() - eta(prime_field, -1) * g)


def gauss_identity_errors(prime_field: PrimeField, a: int) -> dict[str, float]:
    """
    Deviations of the standard Gauss sum identities at a.

    Keys: modulus (|G_a|^2 - q), multiplicative (G_a - eta(a) G_1),
    square (G_a^2 - eta(-1) q), conjugate (conj G_a - eta(-1) G_a).
    """
    q = prime_field.q
    g_a = gauss_sum(prime_field, a)
    g_1 = gauss_sum(prime_field, 1)
    return {
        "modulus": abs(abs(g_a) ** 2 - q),
        "multiplicative": abs(g_a - eta(prime_field, a) * g_1),
        "square": abs(g_a * g_a - eta(prime_field, -1) * q),
        "conjugate": conjugate_gauss_sum_error(prime_field, a),
    }


def case_tag(prime_field: PrimeField, d: int, j: int) -> CaseTag:
    """
    Classify (d, j) into one of the five cases and attach alpha.

    Odd d branches on eta(j) when d = 1 mod 4 and on eta(-j) when d = 3 mod 4.
    """
    if d % 2 == 0:
        return CaseTag(CaseKind.EVEN, d, Fraction(d, 2))
    if d % 4 == 1:
        nonsquare = eta(prime_field, j) == -1
        kind = CaseKind.D1MOD4_NONSQ if nonsquare else CaseKind.D1MOD4_SQ
    else:
        nonsquare = eta(prime_field, -j) == -1
        kind = CaseKind.D3MOD4_NEG_NONSQ if nonsquare else CaseKind.D3MOD4_NEG_SQ
    alpha = Fraction(d + 1, 2) if nonsquare else Fraction(d - 1, 2)
    return CaseTag(kind, d, alpha)


def sign_factor(prime_field: PrimeField, d: int, j: int) -> int:
    """eta(-1)^((d+3)/2) eta(j) for odd d; it equals the case sign."""
    if d % 2 == 0:
        raise ValueError("the sign factor is only defined for odd d")
    return eta(prime_field, -1) ** ((d + 3) // 2) * eta(prime_field, j)


def max_affine_dimension(tag: CaseTag) -> int:
    """Dimension of the largest affine subspace inside S_j^{d-1} for the case."""
    if tag.kind is CaseKind.EVEN:
        return (tag.d - 2) // 2
    if tag.kind.sign == -1:
        return (tag.d - 3) // 2
    return (tag.d - 1) // 2


def character_tolerance(prime_field: PrimeField) -> float:
    return TOL_CHARACTER_SUM * prime_field.q
