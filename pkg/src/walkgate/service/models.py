"""Request and response schemas for the service and the CLI.

All mode and waveguide numbers in these models are 1-based, matching the
device labeling used in figures and in CLI output; the library underneath
is 0-based.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, field_validator, model_validator

N_MODES = 6


def _check_modes(modes: list[int]) -> list[int]:
    for m in modes:
        if not 1 <= m <= N_MODES:
            raise ValueError(f"waveguide numbers are 1..{N_MODES}, got {m}")
    if len(modes) == 2 and modes[0] == modes[1]:
        raise ValueError("input waveguides must be distinct")
    return modes


class TruthTableRequest(BaseModel):
    x: float = Field(1.0, ge=0.0, le=1.0, description="mutual indistinguishability")
    normalize: bool = False


class EncodingModel(BaseModel):
    c0: int
    c1: int
    t0: int
    t1: int
    aux: list[int]


class TruthTableResponse(BaseModel):
    x: float
    normalized: bool
    states: list[str]
    matrix: list[list[float]]
    success: list[float]
    phases_rad: list[float]
    pattern_mass: float
    encoding: EncodingModel


class EvolveRequest(BaseModel):
    input_modes: list[int] = Field(..., min_length=1, max_length=2)
    n_steps: int = Field(101, ge=2)
    x: float = Field(1.0, ge=0.0, le=1.0)

    @field_validator("input_modes")
    @classmethod
    def _modes(cls, v):
        return _check_modes(v)


class TableResponse(BaseModel):
    columns: list[str]
    rows: list[list[float]]


class HomScanRequest(BaseModel):
    input_modes: list[int] = Field(..., min_length=2, max_length=2)
    tau_min_ps: float = -2.0
    tau_max_ps: float = 2.0
    n_steps: int = Field(81, ge=2)
    visibility: float = Field(0.946, ge=0.0, le=1.0)
    wavelength_nm: float = Field(1550.0, gt=0.0)
    bandwidth_nm: float = Field(12.0, gt=0.0)

    @field_validator("input_modes")
    @classmethod
    def _modes(cls, v):
        return _check_modes(v)

    @model_validator(mode="after")
    def _range(self):
        if not self.tau_max_ps > self.tau_min_ps:
            raise ValueError("tau_max_ps must exceed tau_min_ps")
        return self


class BellRequest(BaseModel):
    x: float = Field(1.0, ge=0.0, le=1.0)
    eta: float = Field(0.5, ge=0.0, le=1.0)
    phi: float = 0.0
    target_state: int = Field(0, ge=0, le=1)
    counts: int | None = Field(None, gt=0)
    seed: int = 0


class BellResponse(BaseModel):
    x: float
    eta: float
    phi: float
    target_state: int
    states: list[str]
    probs: list[float]
    leakage: float
    raw: list[float]
    counts: list[int] | None = None
    errors: list[float] | None = None
    total: int | None = None
    seed: int | None = None


class DesignRequest(BaseModel):
    builtin: str | None = "cnot"
    target_file: str | None = None
    length_um: float = Field(700.0, gt=0.0)
    reference_mode: int = Field(1, ge=1, le=N_MODES)
    reference_width_um: float = Field(1.5, gt=0.0)
    table_dir: str | None = None

    @model_validator(mode="after")
    def _one_target(self):
        if self.target_file is not None:
            self.builtin = None
        if (self.builtin is None) == (self.target_file is None):
            raise ValueError("specify exactly one of builtin or target_file")
        return self


class DesignResponse(BaseModel):
    length_um: float
    reference_mode: int
    reference_width_um: float
    decouple_gap_um: float
    widths_um: list[float]
    gaps_um: list[float]


class FidelityRequest(BaseModel):
    g: list[list[float]]
    g_prime: list[list[float]]


class FidelityResponse(BaseModel):
    fidelity: float


class SampleRequest(BaseModel):
    probs: list[float] = Field(..., min_length=1)
    total: int = Field(..., gt=0)
    seed: int = 0


class SampleResponse(BaseModel):
    counts: list[int]
    errors: list[float]
    total: int
    seed: int


class HealthResponse(BaseModel):
    status: str = "ok"
