"""
pydantic models for the files the CLI reads and for per-run settings.
"""
from __future__ import annotations

import math
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import (
    DEFAULT_BINS,
    DEFAULT_COUNT,
    DEFAULT_ELL,
    DEFAULT_SEED,
    ELL_RANGE,
    EXPERIMENT_SAMPLES,
    EXPERIMENT_TRIALS,
    BENCH_REPEATS,
    MAX_COUNT,
)


def ell_for_epsilon(epsilon: float) -> int:
    return math.ceil(math.log2(1.0 / epsilon))


class CurveFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    domain: Tuple[float, float] = (-1.0, 1.0)
    components: List[List[float]] = Field(min_length=1)

    @field_validator("components")
    @classmethod
    def check_components(cls, value):
        for row in value:
            if not row:
                raise ValueError("Every component needs at least one coefficient.")
            if not all(math.isfinite(a) for a in row):
                raise ValueError("Coefficients must be finite.")
        return value


class ReportRecord(BaseModel):
    roots: List[Tuple[float, float]]
    rho_star: Optional[float]  # None encodes the no-root sentinel
    ellipse_sup: float
    degree: int = Field(ge=0)
    normalizer: float
    heuristic_degree: int
    condition: float
    lower_bound: float


class PieceRecord(BaseModel):
    interval: Tuple[float, float]
    density_coeffs: List[float] = Field(min_length=1)
    cdf_coeffs: List[float] = Field(min_length=1)
    probability: float = Field(ge=0.0, le=1.0)
    bisect_depth: int = Field(ge=1)
    report: ReportRecord


class PlanFile(BaseModel):
    version: int
    ell: int = Field(ge=ELL_RANGE[0], le=ELL_RANGE[1])
    splits: int = Field(ge=0)
    split_at_roots: bool
    bound: Literal["search", "bernstein"]
    curve: CurveFile
    pieces: List[PieceRecord] = Field(min_length=1)


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    command: Literal["preprocess", "sample", "validate", "bench", "experiment"]
    curve_path: Optional[Path] = None
    plan_path: Optional[Path] = None
    output_path: Optional[Path] = None
    ell: int = Field(DEFAULT_ELL, ge=ELL_RANGE[0], le=ELL_RANGE[1])
    epsilon: Optional[float] = Field(None, gt=0.0, lt=1.0)
    splits: int = Field(0, ge=0)
    root_split: bool = True
    bound: Literal["search", "bernstein"] = "search"
    count: int = Field(DEFAULT_COUNT, ge=1, le=MAX_COUNT)
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64)
    format: Literal["csv", "jsonl"] = "csv"
    bins: int = Field(DEFAULT_BINS, ge=2)
    workers: int = Field(1, ge=1)
    mode: Literal["table1", "split", "degree"] = "table1"
    trials: int = Field(EXPERIMENT_TRIALS, ge=1)
    samples: int = Field(EXPERIMENT_SAMPLES, ge=1)
    repeats: int = Field(BENCH_REPEATS, ge=1)
    degrees: Optional[List[int]] = None
    dimensions: Optional[List[int]] = None
    epsilons: Optional[List[float]] = None
    ells: Optional[List[int]] = None
    verbose: bool = False

    @model_validator(mode="after")
    def epsilon_to_ell(self):
        # 2^-ell may be given as any real budget in (0, 1)
        if self.epsilon is not None:
            ell = ell_for_epsilon(self.epsilon)
            if not ELL_RANGE[0] <= ell <= ELL_RANGE[1]:
                raise ValueError(f"epsilon {self.epsilon} maps to ell = {ell}, outside {ELL_RANGE}.")
            self.ell = ell
        return self
