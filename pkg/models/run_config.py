"""
Run configuration for the verifier command line.
"""
import math
from enum import Enum
from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, Field, PositiveInt, field_validator, model_validator

from config.settings import (
    DEFAULT_MAX_AMBIENT_POINTS,
    DEFAULT_MAX_EVALUATIONS,
    DEFAULT_MAX_PAIR_EVALUATIONS,
    DEFAULT_SEED,
    DEFAULT_TOLERANCES,
    DEFAULT_TRIALS,
)
from ffharmonic.errors import FiniteFieldError
from ffharmonic.field import eta, make_field
from ffharmonic.models import SearchClass

AUTO = "auto"


class JRule(str, Enum):
    """Which nonzero j each (q, d) cell runs over."""
    ALL = "all"
    SQUARES = "squares"
    NONSQUARES = "nonsquares"
    EXPLICIT = "explicit"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


def parse_exponent(text: str | int | float | Fraction) -> Fraction | float | None:
    """
    Parse an exponent given as an integer, a fraction like 8/5, a decimal,
    "inf", or "auto" (returned as None).
    """
    if isinstance(text, (int, Fraction)):
        value = Fraction(text)
    elif isinstance(text, float):
        value = math.inf if math.isinf(text) else Fraction(text).limit_denominator(10**9)
    else:
        cleaned = text.strip().lower()
        if cleaned == AUTO:
            return None
        if cleaned in ("inf", "infinity", "oo"):
            return math.inf
        value = Fraction(cleaned)
    if value < 1:
        raise ValueError(f"exponent must be at least 1, got {text}")
    return value


def format_exponent(value: Fraction | float) -> str:
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return str(Fraction(value))


class Budget(BaseModel):
    """Caps on enumeration and evaluation work."""
    max_ambient_points: PositiveInt = Field(default=DEFAULT_MAX_AMBIENT_POINTS, description="Largest q^n grid enumerated")
    max_evaluations: PositiveInt = Field(default=DEFAULT_MAX_EVALUATIONS, description="Ratio evaluations per sweep cell")
    max_pair_evaluations: PositiveInt = Field(default=DEFAULT_MAX_PAIR_EVALUATIONS, description="Pairs X, Y summed by the Omega kernel check")


class RunConfig(BaseModel):
    """Validated settings for one verifier run."""
    subcommand: Literal["verify", "sweep", "exponents", "subspace"]
    qs: list[int] = Field(default_factory=lambda: [3, 5], description="Field sizes, all odd primes")
    ds: list[int] = Field(default_factory=lambda: [2, 3], description="Dimensions d")
    j_rule: JRule = Field(default=JRule.ALL)
    js: list[int] = Field(default_factory=list, description="Explicit j values for JRule.EXPLICIT")
    p: str = Field(default=AUTO, description="Source exponent, a rational, inf or auto")
    r: str = Field(default="2", description="Target exponent, a rational or inf")
    search_class: SearchClass = Field(default=SearchClass.ALL)
    seed: int = Field(default=DEFAULT_SEED, ge=0, lt=2**64)
    trials: PositiveInt = Field(default=DEFAULT_TRIALS)
    budget: Budget = Field(default_factory=Budget)
    output: str | None = Field(default=None, description="Report path, stdout when unset")
    format: OutputFormat = Field(default=OutputFormat.JSON)
    tolerances: dict[str, float] = Field(default_factory=dict)
    workers: PositiveInt = Field(default=1)
    timing: bool = Field(default=False, description="Add wall-clock columns; breaks byte-identical reruns")
    brute_force: bool = Field(default=False, description="Confirm subspace maximality by exhaustive search")

    @field_validator("qs")
    @classmethod
    def validate_qs(cls, qs: list[int]) -> list[int]:
        if not qs:
            raise ValueError("at least one q is required")
        for q in qs:
            try:
                make_field(q)
            except FiniteFieldError as exc:
                raise ValueError(f"{type(exc).__name__}: {exc}") from exc
        return qs

    @field_validator("ds")
    @classmethod
    def validate_ds(cls, ds: list[int]) -> list[int]:
        if not ds or any(d < 1 for d in ds):
            raise ValueError("dimensions must be positive")
        return ds

    @field_validator("p", "r")
    @classmethod
    def validate_exponent(cls, value: str) -> str:
        parse_exponent(value)
        return value

    @field_validator("tolerances")
    @classmethod
    def validate_tolerances(cls, tolerances: dict[str, float]) -> dict[str, float]:
        unknown = set(tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        if any(value <= 0 for value in tolerances.values()):
            raise ValueError("tolerances must be positive")
        return tolerances

    @model_validator(mode="after")
    def validate_rules(self) -> "RunConfig":
        if self.j_rule is JRule.EXPLICIT and not self.js:
            raise ValueError("j rule 'explicit' needs at least one j")
        if parse_exponent(self.r) is None:
            raise ValueError("the target exponent cannot be auto")
        if self.p_value is None and any(d < 2 for d in self.ds):
            raise ValueError("p = auto needs d >= 2 to resolve a case")
        return self

    @property
    def p_value(self) -> Fraction | float | None:
        return parse_exponent(self.p)

    @property
    def r_value(self) -> Fraction | float:
        return parse_exponent(self.r)

    def tolerance(self, key: str) -> float:
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])

    def resolve_js(self, q: int) -> list[int]:
        """The j values this run visits for field size q, in increasing order."""
        prime_field = make_field(q)
        if self.j_rule is JRule.EXPLICIT:
            return sorted({j % q for j in self.js if j % q})
        nonzero = range(1, q)
        if self.j_rule is JRule.SQUARES:
            return [j for j in nonzero if eta(prime_field, j) == 1]
        if self.j_rule is JRule.NONSQUARES:
            return [j for j in nonzero if eta(prime_field, j) == -1]
        return list(nonzero)
