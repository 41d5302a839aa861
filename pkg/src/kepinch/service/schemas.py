"""Request/response models for the service and the CLI.

The models carry the library preconditions, so neither the HTTP layer nor
the CLI can reach an operation with invalid inputs; a request that builds
is a request that runs.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field, model_validator

SCHEMA_VERSION = 1


class ProfileParams(BaseModel):
    """Normal-form profile input (min-direction frame)."""

    a: float = Field(allow_inf_nan=False)
    b: float = Field(allow_inf_nan=False)
    bmod: float = Field(ge=0.0, allow_inf_nan=False)
    phase: float = Field(default=0.0, allow_inf_nan=False)

    @model_validator(mode="after")
    def _min_direction(self):
        if 2.0 * self.b - self.a - self.bmod < 0.0:
            raise ValueError(
                "profile must satisfy tau = 2b - a - bmod >= 0 (min-direction frame)"
            )
        return self


class AnalyzeRequest(ProfileParams):
    pass


class ProfileInfo(BaseModel):
    a: float
    b: float
    bmod: float
    phase: float
    tag: str
    big_a: float
    sigma: float
    tau: float
    rho: float
    t: float | None


class SummaryInfo(BaseModel):
    k_min: float
    k_max: float
    k_av: float
    locus_min: str
    locus_max: str
    argmin: list[list[list[float]]]
    argmax: list[list[list[float]]]


class RegimeInfo(BaseModel):
    ratio: float | None
    t: float | None
    ball_like: bool
    nonpositive_bisectional: bool
    in_siu_yang: bool
    in_improved: bool
    in_guan: bool


class VariationalInfo(BaseModel):
    lap_r1111: float
    lap_r1212: float
    phi: float
    c_const: float
    phi1: float | None
    f: float


class AnalyzeResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    profile: ProfileInfo
    summary: SummaryInfo
    regime: RegimeInfo
    variational: VariationalInfo


class ThresholdRow(BaseModel):
    name: str
    chi: float
    t_star: float


class ConstantsResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    thresholds: list[ThresholdRow]


class SweepRequest(BaseModel):
    a: float = Field(default=-3.0, allow_inf_nan=False)
    b: float = Field(default=-1.0, allow_inf_nan=False)
    t_min: float = Field(default=0.0, ge=0.0, le=1.0)
    t_max: float = Field(default=1.0, ge=0.0, le=1.0)
    steps: int = Field(default=101, ge=1, le=1_000_000)

    @model_validator(mode="after")
    def _usable_range(self):
        if 2.0 * self.b - self.a <= 0.0:
            raise ValueError("sweep base profile needs A = 2b - a > 0")
        if self.t_max < self.t_min:
            raise ValueError("t_max must be >= t_min")
        return self


class SweepRow(BaseModel):
    t: float
    ratio: float
    in_sy: bool
    in_improved: bool
    in_guan: bool
    phi: float
    c_const: float


class SweepResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    rows: list[SweepRow]


class AverageRequest(ProfileParams):
    samples: int = Field(default=100_000, ge=100)
    seed: int = Field(default=0)


class AverageResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    closed_form: float
    exact_moment: float
    estimate: float
    stderr: float
    abs_error: float
    z_score: float


class OracleRequest(ProfileParams):
    grid: int = Field(default=64, ge=8)
    refine: int = Field(default=200, ge=0)


class ExtremaInfo(BaseModel):
    k_min: float
    k_max: float


class BruteInfo(ExtremaInfo):
    argmin: list[list[float]]
    argmax: list[list[float]]


class TensorDoc(BaseModel):
    frame_label: str
    components: list[list[float]]


class OracleResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    closed: ExtremaInfo
    brute: BruteInfo
    max_abs_diff: float
    tensor: TensorDoc


class CertifyRequest(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    chi: float = Field(gt=1.0 / 3.0, lt=2.0 / 3.0)
    lam: float = Field(alias="lambda", gt=0.0, lt=1.0)
    samples: int = Field(default=10_000, ge=1)
    seed: int = Field(default=0)
    bounds: tuple[float, float] = (-2.0, 2.0)

    @model_validator(mode="after")
    def _bounds_ordered(self):
        lo, hi = self.bounds
        if not lo < hi:
            raise ValueError("bounds must be an increasing (lo, hi) pair")
        return self


class ViolationRow(BaseModel):
    check: str
    margin: float
    a: float
    b: float
    bmod: float
    d1_xi2: list[float]
    d2_xi2: list[float]
    d1bar_xi2: list[float]
    d2bar_xi2: list[float]
    d1_r1212: list[float]


class CertifyResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = SCHEMA_VERSION
    chi: float
    lam: float = Field(alias="lambda")
    samples: int
    seed: int
    min_margin: float
    product_range: tuple[float, float]
    violation_count: int
    violations: list[ViolationRow]


class LemmaTestRequest(BaseModel):
    samples: int = Field(default=200, ge=1, le=100_000)
    seed: int = Field(default=0)


class LemmaFailure(BaseModel):
    index: int
    three_index_residual: float
    gradient: float
    profile_error: float


class LemmaTestResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    samples: int
    seed: int
    max_three_index_residual: float
    max_gradient: float
    max_profile_error: float
    failures: list[LemmaFailure]
