"""
Domain types for harmonic analysis over odd prime fields.

Numeric containers are frozen dataclasses holding read-only numpy arrays;
the persisted report models live in the top-level ``models`` package.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from ffharmonic.errors import ZeroArgument


def _freeze(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PrimeField:
    """
    The prime field F_q with its character tables.

    Attributes:
        q: Odd prime modulus
        chi_table: chi_table[t] = exp(2 pi i t / q)
        eta_table: Quadratic character, eta_table[0] = 0
        inv_table: Multiplicative inverses, inv_table[0] = 0
    """
    q: int
    chi_table: np.ndarray
    eta_table: np.ndarray
    inv_table: np.ndarray

    def __post_init__(self):
        for name in ("chi_table", "eta_table", "inv_table"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    def __repr__(self) -> str:
        return f"PrimeField(q={self.q})"

    def reduce(self, t: int) -> int:
        return int(t) % self.q


class CaseKind(str, Enum):
    """The five (d mod 4, eta) cases."""
    EVEN = "even"
    D1MOD4_NONSQ = "d1mod4_nonsq"
    D1MOD4_SQ = "d1mod4_sq"
    D3MOD4_NEG_NONSQ = "d3mod4_neg_nonsq"
    D3MOD4_NEG_SQ = "d3mod4_neg_sq"

    @property
    def sign(self) -> int:
        """+1 for the square cases, -1 for the nonsquare cases, 0 for EVEN."""
        if self is CaseKind.EVEN:
            return 0
        if self in (CaseKind.D1MOD4_NONSQ, CaseKind.D3MOD4_NEG_NONSQ):
            return -1
        return 1


@dataclass(frozen=True)
class CaseTag:
    kind: CaseKind
    d: int
    alpha: Fraction

    @property
    def is_even(self) -> bool:
        return self.kind is CaseKind.EVEN


class Measure(str, Enum):
    """Normalized counting measure (L^p) or plain counting measure (l^p)."""
    NORMALIZED = "normalized"
    COUNTING = "counting"


@dataclass(frozen=True, eq=False)
class GridFunction:
    """
    A dense complex-valued function on F_q^dim.

    Values are indexed by the base-q encoding of a point with the first
    coordinate least significant.
    """
    field: PrimeField
    dim: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != (self.field.q ** self.dim,):
            raise ValueError(
                f"GridFunction on F_{self.field.q}^{self.dim} needs "
                f"{self.field.q ** self.dim} values, got shape {values.shape}"
            )
        object.__setattr__(self, "values", _freeze(values))

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @classmethod
    def zeros(cls, prime_field: PrimeField, dim: int) -> "GridFunction":
        return cls(prime_field, dim, np.zeros(prime_field.q ** dim, dtype=np.complex128))

    @classmethod
    def indicator(cls, prime_field: PrimeField, dim: int, indices) -> "GridFunction":
        values = np.zeros(prime_field.q ** dim, dtype=np.complex128)
        values[np.asarray(indices, dtype=np.int64)] = 1.0
        return cls(prime_field, dim, values)

    def scaled(self, c: complex) -> "GridFunction":
        return GridFunction(self.field, self.dim, c * self.values)

    def combine(self, a: complex, other: "GridFunction", b: complex) -> "GridFunction":
        return GridFunction(self.field, self.dim, a * self.values + b * other.values)


@dataclass(frozen=True, eq=False)
class DyadicDecomposition:
    """
    Level sets F_k = {2^(-k-1) < F <= 2^(-k)} for k = 0..truncation and the
    step majorant sum_k 2^(-k) 1_{F_k}.
    """
    source: GridFunction
    levels: tuple[np.ndarray, ...]
    majorant: GridFunction
    truncation: int

    def level_sizes(self) -> list[int]:
        return [int(level.shape[0]) for level in self.levels]


class VarietyKind(str, Enum):
    SPHERE = "sphere"
    HOMVARIETY = "homvariety"
    DUAL_HOMVARIETY = "dual_homvariety"


@dataclass(frozen=True, eq=False)
class VarietySpec:
    """
    Declarative description of a sphere S_j^{d-1} in F_q^d, a homogeneous
    variety H_j^d in F_q^{d+1}, or the dual variety H_{1/j}^d.
    """
    kind: VarietyKind
    field: PrimeField
    d: int
    j: int

    def __post_init__(self):
        j = int(self.j) % self.field.q
        if j == 0:
            raise ZeroArgument("variety parameter j must be nonzero")
        object.__setattr__(self, "j", j)

    @property
    def ambient_dim(self) -> int:
        return self.d if self.kind is VarietyKind.SPHERE else self.d + 1

    @property
    def effective_j(self) -> int:
        """The j of the defining equation, inverted for the dual variety."""
        if self.kind is VarietyKind.DUAL_HOMVARIETY:
            return int(self.field.inv_table[self.j])
        return self.j

    def describe(self) -> str:
        return f"{self.kind.value}(q={self.field.q}, d={self.d}, j={self.j})"


@dataclass(frozen=True, eq=False)
class PointSet:
    spec: VarietySpec
    points: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        object.__setattr__(self, "points", _freeze(np.sort(np.asarray(self.points, dtype=np.int64))))

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def mask(self) -> np.ndarray:
        mask = np.zeros(self.spec.field.q ** self.ambient_dim, dtype=bool)
        mask[self.points] = True
        return mask


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """base + span(directions) inside F_q^d."""
    field: PrimeField
    base: tuple[int, ...]
    directions: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.directions)

    @property
    def d(self) -> int:
        return len(self.base)

    @property
    def size(self) -> int:
        return self.field.q ** self.k


@dataclass(frozen=True, eq=False)
class HomogeneousFunction:
    """
    A degree-zero homogeneous function: one value per punctured line through
    the origin plus a free value at the origin.
    """
    field: PrimeField
    d: int
    line_values: np.ndarray
    value_at_zero: complex = 0.0

    def __post_init__(self):
        q = self.field.q
        expected = (q ** self.d - 1) // (q - 1)
        values = np.asarray(self.line_values, dtype=np.complex128)
        if values.shape != (expected,):
            raise ValueError(f"expected {expected} line values, got shape {values.shape}")
        object.__setattr__(self, "line_values", _freeze(values))
        object.__setattr__(self, "value_at_zero", complex(self.value_at_zero))


@dataclass(frozen=True)
class DyadicMassReport:
    lhs: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class SHatReport:
    max_err: float
    tol: float
    passed: bool


@dataclass(frozen=True)
class IdentityReport:
    """Two evaluations of one identity and their relative discrepancy."""
    lhs: float
    rhs: float
    rel_err: float
    tol: float
    passed: bool

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs else float("nan")


@dataclass(frozen=True)
class OmegaReport:
    size: int
    omega: float
    omega_kernel: float
    regime: str
    bound: float
    normalized_norm: float
    branch_value: float
    passed: bool


@dataclass(frozen=True, eq=False)
class SearchResult:
    """A lower bound on a restriction constant with the witness attaining it."""
    max_ratio: float
    witness: GridFunction
    witness_description: str
    evaluations: int
    exhaustive: bool
    lower_bound_only: bool = field(default=True)


@dataclass(frozen=True)
class BlowupReport:
    """Extremizer ratios across a scan of field sizes with their log-slopes."""
    qs: tuple[int, ...]
    ratios: tuple[float, ...]
    closed_ratios: tuple[float, ...]
    slope: float
    closed_slope: float
    asymptotic_slope: float

    @property
    def spread(self) -> float:
        return max(self.ratios) / min(self.ratios)


class SearchClass(str, Enum):
    """Function classes the sup-ratio search ranges over."""
    ALL = "all"
    HOMOGENEOUS = "homogeneous"
    CHARACTERISTIC = "characteristic"
    HOMOGENEOUS_CHARACTERISTIC = "homogeneous_characteristic"

    @property
    def homogeneous(self) -> bool:
        return self in (SearchClass.HOMOGENEOUS, SearchClass.HOMOGENEOUS_CHARACTERISTIC)

    @property
    def characteristic(self) -> bool:
        return self in (SearchClass.CHARACTERISTIC, SearchClass.HOMOGENEOUS_CHARACTERISTIC)
