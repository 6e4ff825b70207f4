"""
Report models written by the verifier.
"""
from pydantic import BaseModel, ConfigDict, Field


class CheckResult(BaseModel):
    """One evaluated identity or inequality."""
    model_config = ConfigDict(populate_by_name=True)

    check: str = Field(description="Name of the suite check")
    params: dict[str, int | float | str] = Field(default_factory=dict)
    lhs: float
    rhs: float
    tol: float
    passed: bool = Field(alias="pass")
    error: str | None = Field(default=None, description="Exception type and message when the check raised")


class CheckCounts(BaseModel):
    passed: int = 0
    failed: int = 0


class Summary(BaseModel):
    total: int
    passed: int
    failed: int
    by_check: dict[str, CheckCounts] = Field(default_factory=dict)

    @classmethod
    def from_results(cls, results: list[CheckResult]) -> "Summary":
        by_check: dict[str, CheckCounts] = {}
        for result in results:
            counts = by_check.setdefault(result.check, CheckCounts())
            if result.passed:
                counts.passed += 1
            else:
                counts.failed += 1
        passed = sum(1 for result in results if result.passed)
        return cls(total=len(results), passed=passed, failed=len(results) - passed, by_check=by_check)


class VerifyReport(BaseModel):
    config: dict
    results: list[CheckResult]
    summary: Summary
    wall_time: float | None = None

    @property
    def all_passed(self) -> bool:
        return self.summary.failed == 0


class SweepRow(BaseModel):
    """One (q, d, j, p, class) cell of a sup-ratio sweep."""
    d: int
    q: int
    j: int
    case: str
    p: str
    r: str
    search_class: str
    max_ratio: float
    witness: str
    evaluations: int
    exhaustive: bool
    lower_bound_only: bool = True
    wall_time: float | None = None


class SweepReport(BaseModel):
    config: dict
    rows: list[SweepRow]
    note: str = "max_ratio is a lower bound on the restriction constant"


class ExponentRow(BaseModel):
    """Exponent table for one dimension; fractions are rendered as strings."""
    d: int
    stein_tomas: str
    conjectured: dict[str, str]
    affine_k: dict[str, str]
    necessary: dict[str, str]
    consistent: bool


class ExponentReport(BaseModel):
    config: dict
    rows: list[ExponentRow]


class SubspaceRow(BaseModel):
    """An affine subspace built inside S_j^{d-1}."""
    q: int
    d: int
    j: int
    case: str
    k: int
    expected_k: int
    base: list[int]
    directions: list[list[int]]
    certified: bool
    brute_force_k: int | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        if self.error is not None or not self.certified or self.k != self.expected_k:
            return False
        return self.brute_force_k is None or self.brute_force_k == self.k


class SubspaceReport(BaseModel):
    config: dict
    rows: list[SubspaceRow]
