import math
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

R_MAX = math.pi / 4
MU_MAX = 0.5


class Subsystem(str, Enum):
    QUBIT = "qubit"
    QUTRIT = "qutrit"


class FilterMode(str, Enum):
    POSTSELECT = "postselect"
    CHANNEL = "channel"


class PairPolicy(str, Enum):
    DISCARD = "discard"
    KEEP = "keep"


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    EXPECTED_DISCREPANCY = "EXPECTED-DISCREPANCY"


class ValidationReport(BaseModel):
    hermiticity_deviation: float = Field(..., description="Max entry of |rho - rho^dagger|")
    trace_deviation: float = Field(..., description="|trace(rho) - 1|")
    min_eigenvalue: float = Field(..., description="Smallest eigenvalue of the Hermitian part")
    passed: bool = Field(..., description="All quantities within tolerance")


class PaperCoefficients(BaseModel):
    model_config = ConfigDict(frozen=True)

    table: str = Field(..., description="Printed table the values come from (A or B)")
    mu: float = Field(..., description="Family parameter")
    r: float = Field(..., description="Rindler parameter")
    values: Dict[str, float] = Field(..., description="Coefficient label -> value")

    def __getitem__(self, label: str) -> float:
        return self.values[label]


class DiscrepancyRow(BaseModel):
    row: int
    col: int
    element: str = Field(..., description="Ket-bra label, e.g. |02><02|")
    derived: float = Field(..., description="Value from the isometry construction")
    printed: float = Field(..., description="Value from the printed coefficient table")
    difference: float


class DiscrepancyReport(BaseModel):
    accelerated: Subsystem
    mu: float
    r: float
    rows: List[DiscrepancyRow]
    max_difference: float
    derived_trace: float
    printed_trace: float
    trace_gap: float = Field(..., description="derived_trace - printed_trace")
    consistent: bool = Field(..., description="Every |difference| <= 1e-12")

    @property
    def missing(self) -> List[DiscrepancyRow]:
        """Rows where the printed table lacks part of the derived weight."""
        return [row for row in self.rows if row.derived - row.printed > 1e-12]


def default_pair_policy(mode: FilterMode) -> PairPolicy:
    """A channel keeps the pair level so that it stays trace-preserving."""
    return PairPolicy.KEEP if FilterMode(mode) == FilterMode.CHANNEL else PairPolicy.DISCARD


def _fill_pair_policy(data):
    if isinstance(data, dict) and data.get("pair_policy") is None:
        mode = data.get("mode") or FilterMode.POSTSELECT
        try:
            policy = default_pair_policy(mode)
        except ValueError:
            # the field validator reports the bad mode
            return data
        data = {**data, "pair_policy": policy}
    return data


def _check_filter_combination(target: Subsystem, mode: FilterMode, pair_policy: PairPolicy):
    if target == Subsystem.QUBIT and mode != FilterMode.POSTSELECT:
        raise ValueError("the qubit filter is a single operator; mode must be postselect")
    if mode == FilterMode.CHANNEL and pair_policy == PairPolicy.DISCARD:
        raise ValueError(
            "pair_policy=discard is not trace-preserving; a channel keeps the pair level"
        )


class FilterSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: Subsystem = Field(..., description="Filtered subsystem")
    strength: float = Field(..., gt=0.0, lt=1.0, description="kappa (qubit) or Q (qutrit)")
    mode: FilterMode = Field(FilterMode.POSTSELECT, description="postselect or channel")
    pair_policy: PairPolicy = Field(
        PairPolicy.DISCARD,
        description="Pair level of a 4-level qutrit; defaults to keep for a channel",
    )

    @model_validator(mode="before")
    @classmethod
    def _default_pair(cls, data):
        return _fill_pair_policy(data)

    @model_validator(mode="after")
    def _valid_combination(self):
        _check_filter_combination(self.target, self.mode, self.pair_policy)
        return self


class ScenarioFilter(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: Subsystem
    strength: Optional[float] = Field(
        None, gt=0.0, lt=1.0, description="Fixed strength; omitted when a strength grid is swept"
    )
    mode: FilterMode = FilterMode.POSTSELECT
    pair_policy: PairPolicy = PairPolicy.DISCARD

    @model_validator(mode="before")
    @classmethod
    def _default_pair(cls, data):
        return _fill_pair_policy(data)

    @model_validator(mode="after")
    def _valid_combination(self):
        _check_filter_combination(self.target, self.mode, self.pair_policy)
        return self

    def spec(self, strength: float) -> FilterSpec:
        return FilterSpec(
            target=self.target, strength=strength, mode=self.mode, pair_policy=self.pair_policy
        )


def _strictly_increasing(values: List[float], name: str) -> List[float]:
    if not values:
        raise ValueError(f"{name} must not be empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return values


class ScenarioConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    mu: float = Field(..., ge=0.0, le=MU_MAX, description="Family parameter")
    accelerated: Subsystem = Field(..., description="Subsystem that is accelerated")
    filtered: Optional[ScenarioFilter] = Field(None, description="Local filter, if any")
    r_grid: List[float] = Field(..., description="Rindler parameters, strictly increasing")
    strength_grid: Optional[List[float]] = Field(None, description="Filter strengths to sweep")

    @field_validator("r_grid")
    @classmethod
    def _check_r_grid(cls, values: List[float]) -> List[float]:
        _strictly_increasing(values, "r_grid")
        if values[0] < 0.0 or values[-1] > R_MAX:
            raise ValueError("r_grid must lie within [0, pi/4]")
        return values

    @field_validator("strength_grid")
    @classmethod
    def _check_strength_grid(cls, values: Optional[List[float]]) -> Optional[List[float]]:
        if values is None:
            return values
        _strictly_increasing(values, "strength_grid")
        if values[0] <= 0.0 or values[-1] >= 1.0:
            raise ValueError("strength_grid must lie within (0, 1)")
        return values

    @model_validator(mode="after")
    def _check_filter(self):
        if self.strength_grid is not None and self.filtered is None:
            raise ValueError("strength_grid requires a filter")
        if self.filtered is not None:
            if self.filtered.strength is None and self.strength_grid is None:
                raise ValueError("filter strength or strength_grid is required")
        return self

    @property
    def label(self) -> str:
        if self.filtered is None:
            return "unfiltered"
        name = "kappa" if self.filtered.target == Subsystem.QUBIT else "Q"
        if self.filtered.strength is not None and self.strength_grid is None:
            return f"{self.filtered.target.value} {name}={self.filtered.strength:g}"
        return f"{self.filtered.target.value} filter, r={self.r_grid[0]:.4g}"


class SweepRow(BaseModel):
    r: float
    strength: Optional[float] = None
    negativity: Optional[float] = Field(None, description="Null when post-selection failed")


class SweepResult(BaseModel):
    scenario: ScenarioConfig
    rows: List[SweepRow]
    version: str = Field(..., description="Library version that produced the rows")

    @property
    def label(self) -> str:
        return self.scenario.label


class CheckResult(BaseModel):
    name: str
    status: CheckStatus
    detail: str = ""


class CheckReport(BaseModel):
    results: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(result.status != CheckStatus.FAIL for result in self.results)


class EvalRequest(BaseModel):
    pipeline: str = Field(..., description="Pipeline expression, e.g. state(mu=0) | negativity")


class EvalResponse(BaseModel):
    kind: str = Field(..., description="scalar or dump")
    value: Optional[float] = Field(None, description="Scalar result")
    dims: List[int] = Field(..., description="Factor dimensions of the final state")
    dump: Optional[str] = Field(None, description="Matrix dump when kind is dump")


class CheckResponse(BaseModel):
    passed: bool
    results: List[CheckResult]
