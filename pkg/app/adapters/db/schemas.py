from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Every rational crosses the boundary as an exact "p/q" string next to a truncated decimal.


class PowerBasisSpec(BaseModel):
    r: str
    k: int = Field(ge=2)
    n: int = Field(ge=1, le=8)


class TargetFile(BaseModel):
    label: str = ""
    precision: int = Field(ge=0)
    # "lo:hi", "p/q" or a decimal truncated to at least ``precision`` digits
    components: Optional[list[str]] = Field(default=None, min_length=1, max_length=8)
    power_basis: Optional[PowerBasisSpec] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def one_source(self):
        if (self.components is None) == (self.power_basis is None):
            raise ValueError("a target file gives exactly one of 'components' or 'power_basis'")
        return self


class RecordRow(BaseModel):
    nu: int
    q: int
    a: list[int]
    zeta_lo: str
    zeta_hi: str
    zeta_decimal: str
    certified: bool = True


class ChainRow(BaseModel):
    nu: int
    r: list[int]
    k: int
    n: int
    det_vi: int
    verified: bool
    T_basis: list[list[int]]
    conditions: dict[str, bool] = Field(default_factory=dict)


class ExponentRow(BaseModel):
    omega_est: str
    omega_est_decimal: str
    omega_hat_est: str
    omega_hat_est_decimal: str
    tail_start: int
    tail_end: int
    enclosure_width: str
    outside_trivial_range: bool
    omega_full: Optional[str] = None
    omega_hat_full: Optional[str] = None
    ratios_file: Optional[str] = None


class PipelineRow(BaseModel):
    label: str
    Q: int
    records: int
    omega_est: Optional[str] = None
    omega_hat_est: Optional[str] = None
    index_proxy: Optional[int] = None
    bound_lo: Optional[str] = None
    bound_hi: Optional[str] = None
    slack: Optional[str] = None
    slack_decimal: Optional[str] = None
    notes: list[str] = Field(default_factory=list)


class CriticalGRow(BaseModel):
    case: str
    system: str
    alpha: str
    alpha_decimal: str
    g_lo: str
    g_hi: str
    g_lo_decimal: str
    g_hi_decimal: str
    certificate_lo: dict
    certificate_hi: dict


class LemmaPointRow(BaseModel):
    case: str
    system: str
    alpha: str
    alpha_decimal: str
    simplicial: bool
    g_lo: Optional[str] = None
    g_hi: Optional[str] = None
    root_lo: Optional[str] = None
    root_hi: Optional[str] = None
    g_decimal: Optional[str] = None
    root_decimal: Optional[str] = None
    overlap: bool = False
    below_infeasible: Optional[bool] = None
    ray_test: Optional[str] = None
    error: Optional[str] = None


class Manifest(BaseModel):
    command: str
    parameters: dict
    inputs: dict[str, str] = Field(default_factory=dict)
    outputs: dict[str, str] = Field(default_factory=dict)
    versions: dict[str, str] = Field(default_factory=dict)
    exit_code: int = 0
    notes: list[str] = Field(default_factory=list)


class RunConfig(BaseModel):
    """Parameters of one command after merging env, config.yml, --config and flags."""

    command: str
    target: Optional[str] = None
    Q: Optional[int] = Field(default=None, ge=1)
    precision: Optional[int] = Field(default=None, ge=0)
    alpha_grid: Optional[str] = None
    tol: str = "1e-9"
    workers: int = Field(default=1, ge=1)
    seed: int = 0
    out: Optional[str] = None
    case: Optional[str] = None
    system: Optional[str] = None
    tail_fraction: str = "1/2"
    mesh: int = Field(default=64, ge=2)
    digits: int = Field(default=15, ge=0)
    max_n: Optional[int] = Field(default=None, ge=1)
    horizon: Optional[int] = Field(default=None, ge=0)

    model_config = ConfigDict(extra="forbid")

    @field_validator("alpha_grid")
    @classmethod
    def grid_shape(cls, v):
        if v is not None and v.count(":") != 2:
            raise ValueError("alpha grid is written lo:hi:steps")
        return v


class EngineRunCreate(BaseModel):
    key: str
    label: str
    Q: int
    payload: str

