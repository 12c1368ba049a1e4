"""Pydantic models for the parametrizations, results and API payloads."""

import math
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Side(str, Enum):
    """Zone of the half-return map."""

    L = "L"
    R = "R"


class Symmetry(str, Enum):
    """Parameter symmetries of the family."""

    x_flip = "x_flip"
    y_flip = "y_flip"
    both = "both"


class Kind(str, Enum):
    """Character of the periodic orbit at infinity."""

    hyperbolic = "Hyperbolic"
    weak_focus = "WeakFocus"
    center = "Center"


class Stability(str, Enum):
    """Stability of the orbit at infinity or of a limit cycle."""

    stable = "stable"
    unstable = "unstable"
    non_isolated = "non_isolated"
    non_hyperbolic = "non_hyperbolic"


class CenterType(str, Enum):
    """The three families of centers at infinity."""

    a = "a"
    b = "b"
    c = "c"


# Relative mismatch allowed between b and the two equilibrium-ordinate expressions
EQUILIBRIUM_TOLERANCE = 1e-12


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


class LienardSpec(_Frozen):
    """Trace/determinant form with the offsets of both zones."""

    T_L: float = Field(..., description="Trace of the left zone")
    D_L: float = Field(..., description="Determinant of the left zone")
    a_L: float = Field(..., description="Offset of the left zone")
    T_R: float = Field(..., description="Trace of the right zone")
    D_R: float = Field(..., description="Determinant of the right zone")
    a_R: float = Field(..., description="Offset of the right zone")
    b: float = Field(..., description="Sliding-set half-length parameter")


class SystemSpec(_Frozen):
    """The five canonical parameters of the family."""

    gamma_L: float = Field(..., description="Left focus damping ratio")
    gamma_R: float = Field(..., description="Right focus damping ratio")
    alpha_L: float = Field(..., description="Left zone offset")
    alpha_R: float = Field(..., description="Right zone offset")
    b: float = Field(..., description="Sliding parameter")

    @field_validator("gamma_L", "gamma_R", "alpha_L", "alpha_R", "b")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("parameters must be finite")
        return value


class EquilibriumSpec(_Frozen):
    """Equilibrium form: damping ratios, focus positions and sliding parameter.

    Construction enforces b = -(y_L - 2 gamma_L x_L) = y_R - 2 gamma_R x_R up to
    rounding. Documents off by a common translation in y go through
    ``params.center_equilibrium`` first.
    """

    gamma_L: float
    gamma_R: float
    x_L: float
    x_R: float
    y_L: float
    y_R: float
    b: float

    @property
    def left_b(self) -> float:
        return -(self.y_L - 2 * self.gamma_L * self.x_L)

    @property
    def right_b(self) -> float:
        return self.y_R - 2 * self.gamma_R * self.x_R

    @model_validator(mode="after")
    def _centered(self) -> "EquilibriumSpec":
        scale = 1 + abs(self.b) + abs(self.y_L) + abs(self.y_R)
        scale += abs(2 * self.gamma_L * self.x_L) + abs(2 * self.gamma_R * self.x_R)
        worst = max(abs(self.left_b - self.b), abs(self.right_b - self.b))
        if not worst <= EQUILIBRIUM_TOLERANCE * scale:
            raise ValueError(
                f"equilibrium ordinates imply b = {self.left_b!r} (left) and "
                f"{self.right_b!r} (right), declared b = {self.b!r}"
            )
        return self


class LoadedSpec(_Frozen):
    """Canonical spec read from a parameter document, with its provenance."""

    spec: SystemSpec
    form: str = Field(..., description="Form the parameters were given in")
    provenance: Dict[str, str] = Field(
        default_factory=dict, description="Verbatim input text per field"
    )
    centering_shift: float = Field(
        default=0.0, description="y-translation removed from an equilibrium document"
    )


class TruncatedSeries(_Frozen):
    """Coefficients c_1..c_N of a series without constant term."""

    order: int = Field(..., ge=1)
    coeffs: List[float]

    @model_validator(mode="after")
    def _length_matches(self) -> "TruncatedSeries":
        if len(self.coeffs) != self.order:
            raise ValueError(f"expected {self.order} coefficients, got {len(self.coeffs)}")
        return self

    def __getitem__(self, index: int) -> float:
        """One-based coefficient access."""
        if not 1 <= index <= self.order:
            raise IndexError(f"coefficient {index} outside 1..{self.order}")
        return self.coeffs[index - 1]


class HalfReturnSeries(_Frozen):
    """Expansion of one half-return map and of its flight-time correction."""

    side: Side
    u_series: TruncatedSeries
    time_series: TruncatedSeries
    exp_factor: float

    @model_validator(mode="after")
    def _leading_coefficient(self) -> "HalfReturnSeries":
        leading = self.u_series[1]
        if abs(leading + self.exp_factor) > 1e-12 * abs(self.exp_factor):
            raise ValueError(
                f"first coefficient {leading!r} is not -exp_factor = {-self.exp_factor!r}"
            )
        return self


class DisplacementSeries(_Frozen):
    """Coefficients of the displacement map."""

    order: int = Field(..., ge=1)
    deltas: List[float]

    def __getitem__(self, index: int) -> float:
        if not 1 <= index <= self.order:
            raise IndexError(f"coefficient {index} outside 1..{self.order}")
        return self.deltas[index - 1]


class ClosedFormCoefficients(_Frozen):
    """Explicit low-order coefficients of both half-return maps."""

    L: List[float] = Field(..., description="L_1..L_4")
    R: List[float] = Field(..., description="R_1..R_4")
    beta: List[float] = Field(..., description="beta_1, beta_2")
    Q_L: float
    Q_R: float


class ZoneFlow(_Frozen):
    """Affine flow of one zone, A (p - p*) with A = [[2 gamma, -1], [1 + gamma^2, 0]]."""

    gamma: float
    x_eq: float = Field(..., description="Focus abscissa")
    y_eq: float = Field(..., description="Focus ordinate")

    @model_validator(mode="after")
    def _rotation_identity(self) -> "ZoneFlow":
        # (A - gamma I)^2 = -I
        g = self.gamma
        rotation = np.array([[g, -1.0], [1 + g * g, -g]])
        if np.max(np.abs(rotation @ rotation + np.eye(2))) > 1e-14 * (1 + g * g):
            raise ValueError(f"zone matrix with gamma={g!r} fails the rotation identity")
        return self


class HalfReturnResult(_Frozen):
    """Numeric half-return map evaluation."""

    side: Side
    y_in: float
    y_out: float
    flight_time: float
    s_correction: float
    dy_out_dy_in: float = Field(..., description="Derivative of y_out with respect to y_in")


class TrajectoryPoint(_Frozen):
    t: float
    x: float
    y: float
    event: Optional[str] = None


class Trajectory(_Frozen):
    """Sampled piecewise-exact trajectory."""

    points: List[TrajectoryPoint]
    crossings: List[TrajectoryPoint]
    sliding_contact: bool = False
    stopped_reason: Optional[str] = None


class InfinityClass(_Frozen):
    """Classification verdict for the periodic orbit at infinity."""

    kind: Kind
    stability: Stability
    order: Optional[int] = Field(default=None, ge=1, le=3)
    center_type: Optional[CenterType] = None
    witness: Dict[str, Any] = Field(default_factory=dict)


class LimitCycle(_Frozen):
    """A big-amplitude limit cycle found as a root of the displacement map."""

    u0_root: float
    y_top: float
    y_bottom: float
    tau_L: float
    tau_R: float
    displacement_slope: float
    multiplier_proxy: float
    stability: Stability


class CycleScan(_Frozen):
    """Result of a displacement scan."""

    cycles: List[LimitCycle]
    period_annulus: bool = False
    effective_u0_max: float
    grid: int


class UnfoldingTarget(_Frozen):
    """Desired leading displacement coefficients."""

    delta1: float = Field(..., ge=-0.1, le=0.1)
    delta2: float = Field(..., ge=-0.1, le=0.1)
    delta3: float = Field(..., ge=-0.1, le=0.1)


class UnfoldingResult(_Frozen):
    """Parameters realizing an unfolding target near a third-order weak focus."""

    gamma_L: float
    x_L: float
    gamma_R: float
    b: float
    x_R: float
    achieved: List[float] = Field(..., description="Delta_1..Delta_4 at the solution")
    residual: float
    newton_iters: int


class PositiveRoots(_Frozen):
    """Positive roots of a quartic u (d4 u^3 + d3 u^2 + d2 u + d1)."""

    count: int = Field(..., ge=0, le=3, description="Positive roots counted with multiplicity")
    roots: List[float] = Field(..., description="Distinct positive roots, ascending")
    multiplicities: List[int]
    on_delta1_axis: bool = False
    on_discriminant: bool = False
    cusp: bool = False


class Window(_Frozen):
    """Rectangle in the (delta1, delta2) plane."""

    delta1_min: float
    delta1_max: float
    delta2_min: float
    delta2_max: float

    @model_validator(mode="after")
    def _ordered(self) -> "Window":
        if not (self.delta1_min < self.delta1_max and self.delta2_min < self.delta2_max):
            raise ValueError("window bounds must be increasing")
        return self


class BoundaryPoint(_Frozen):
    delta1: float
    delta2: float
    curve: str
    double_root: Optional[float] = None


class RegionLabel(_Frozen):
    delta1: float
    delta2: float
    count: int


class RegionMap(_Frozen):
    """Boundary curves and region labels of the model map for one delta3."""

    delta3: float
    window: Window
    boundaries: List[BoundaryPoint]
    labels: List[RegionLabel]


class RunReport(BaseModel):
    """Record of one CLI or API run."""

    command: str
    version: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    outputs: Dict[str, Any] = Field(default_factory=dict)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    timing: float = Field(default=0.0, description="Wall time in seconds")


class HealthResponse(BaseModel):
    """Response model for health check."""

    status: str = Field(..., description="Health status")
    app_name: str = Field(..., description="Application name")
    version: str = Field(..., description="Application version")


class CoeffsRequest(BaseModel):
    """Request model for series coefficients."""

    spec: Dict[str, Any] = Field(..., description="Parameter document")
    order: int = Field(default=4, ge=1, description="Truncation order")


class CyclesRequest(BaseModel):
    """Request model for a limit cycle scan."""

    spec: Dict[str, Any] = Field(..., description="Parameter document")
    u0_max: Optional[float] = Field(default=None, gt=0.0)
    grid: Optional[int] = Field(default=None, ge=8)


class UnfoldRequest(BaseModel):
    """Request model for the third-order unfolding."""

    gamma_L: float
    x_L: float
    target: UnfoldingTarget


class RegionRequest(BaseModel):
    """Request model for a model-map region sweep."""

    delta3: float
    window: Window
    resolution: int = Field(default=32, ge=16, le=512)
