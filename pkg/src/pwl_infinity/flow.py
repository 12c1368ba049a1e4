"""Exact zone flows, numeric half-return maps and trajectory sampling."""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import settings
from .exceptions import InputError, NoCrossing, SlidingContact
from .models import (
    HalfReturnResult,
    Side,
    SystemSpec,
    Trajectory,
    TrajectoryPoint,
    ZoneFlow,
)
from .params import to_equilibrium
from .roots import safeguarded_newton

logger = logging.getLogger(__name__)

# Interior sign of x in each zone
_ZONE_SIGN = {Side.L: -1.0, Side.R: 1.0}


def zone_of(spec: SystemSpec, side: Side) -> ZoneFlow:
    """Flow of the left or right zone of a spec."""
    eq = to_equilibrium(spec)
    if Side(side) is Side.L:
        return ZoneFlow(gamma=eq.gamma_L, x_eq=eq.x_L, y_eq=eq.y_L)
    return ZoneFlow(gamma=eq.gamma_R, x_eq=eq.x_R, y_eq=eq.y_R)


def zone_matrix(zone: ZoneFlow) -> np.ndarray:
    g = zone.gamma
    return np.array([[2 * g, -1.0], [1 + g * g, 0.0]])


def propagator(zone: ZoneFlow, t) -> np.ndarray:
    """
    exp(A t) = exp(gamma t) (cos t I + sin t (A - gamma I)).

    Args:
        zone: Zone flow
        t: Scalar time or array of times

    Returns:
        Array of shape t.shape + (2, 2)
    """
    g = zone.gamma
    t = np.asarray(t, dtype=float)
    rotation = np.array([[g, -1.0], [1 + g * g, -g]])
    scale = np.exp(g * t)[..., None, None]
    cos = np.cos(t)[..., None, None]
    sin = np.sin(t)[..., None, None]
    return scale * (cos * np.eye(2) + sin * rotation)


def vector_field(zone: ZoneFlow, state: Sequence[float]) -> np.ndarray:
    offset = np.asarray(state, dtype=float) - (zone.x_eq, zone.y_eq)
    return zone_matrix(zone) @ offset


def zone_flow(zone: ZoneFlow, state: Sequence[float], t):
    """
    Exact flow of the affine zone field.

    Args:
        zone: Zone flow
        state: Initial point (x, y)
        t: Scalar time or array of times (negative for backward flow)

    Returns:
        Point of shape (2,) for scalar t, otherwise an array of shape t.shape + (2,)
    """
    center = np.array([zone.x_eq, zone.y_eq])
    offset = np.asarray(state, dtype=float) - center
    return propagator(zone, t) @ offset + center


def _next_crossing(
    zone: ZoneFlow,
    start: Sequence[float],
    direction: float,
    interior: float,
    t_max: float,
    samples: int,
) -> Optional[Tuple[float, float, float]]:
    """
    First time |t| in (0, t_max] at which the orbit reaches x = 0 from the zone interior.

    Returns:
        (time magnitude, bracket lower end, bracket upper end) or None if no
        sign change is sampled
    """
    times = np.linspace(0.0, t_max, samples + 1)[1:]
    xs = zone_flow(zone, start, direction * times)[:, 0]
    outside = np.nonzero(interior * xs <= 0.0)[0]
    if outside.size == 0:
        return None
    i = int(outside[0])
    if i == 0:
        # Leaves the zone within the first sample; grazing departure
        return None
    lo, hi = float(times[i - 1]), float(times[i])

    def x_of(t: float) -> Tuple[float, float]:
        point = zone_flow(zone, start, direction * t)
        return float(point[0]), float(direction * vector_field(zone, point)[0])

    scale = 1.0 + float(np.max(np.abs(zone_flow(zone, start, direction * np.array([lo, hi])))))
    t_cross, _ = safeguarded_newton(
        x_of,
        lo,
        hi,
        xtol=4 * np.finfo(float).eps * hi,
        ftol=settings.crossing_tolerance * scale,
    )
    return t_cross, lo, hi


def half_return_numeric(
    spec: SystemSpec, side: Side, y_in: float, *, samples: Optional[int] = None
) -> HalfReturnResult:
    """
    Flow (0, y_in) through one zone back to the switching line.

    The left map flows forward in time, the right map backward.

    Args:
        spec: Canonical spec
        side: Zone to flow through
        y_in: Departure ordinate on x = 0
        samples: Bracketing samples over (0, 3 pi / 2]

    Returns:
        Arrival ordinate, flight time and the exact derivative dy_out/dy_in

    Raises:
        NoCrossing: if the orbit does not enter the zone or does not return
            within (pi/2, 3 pi/2]
        SlidingContact: if the orbit arrives on the sliding segment
    """
    side = Side(side)
    zone = zone_of(spec, side)
    direction = 1.0 if side is Side.L else -1.0
    interior = _ZONE_SIGN[side]
    start = (0.0, float(y_in))

    # The departure velocity, in the direction of integration, must point into the zone
    departing = direction * vector_field(zone, start)[0]
    if not interior * departing > 0:
        raise NoCrossing(side.value, y_in, "orbit does not enter the zone")

    crossing = _next_crossing(
        zone,
        start,
        direction,
        interior,
        1.5 * math.pi,
        samples or settings.crossing_bracket_samples,
    )
    if crossing is None:
        raise NoCrossing(side.value, y_in, "no return to the switching line within 3*pi/2")
    tau, _, hi = crossing
    if hi <= 0.5 * math.pi:
        raise NoCrossing(side.value, y_in, f"returns after {tau!r}, before half a turn")

    t_signed = direction * tau
    arrival = zone_flow(zone, start, t_signed)
    y_out = float(arrival[1])
    if abs(y_out) <= abs(spec.b):
        raise SlidingContact(side.value, y_in, y_out, spec.b)
    if y_out > 0:
        raise NoCrossing(side.value, y_in, "arrival on the upper half-line")

    # Variational equation: column exp(A t) e2 plus the shift of the arrival time
    column = propagator(zone, t_signed)[:, 1]
    field = vector_field(zone, arrival)
    dt_dy = -column[0] / field[0]
    dy_out_dy_in = float(column[1] + field[1] * dt_dy)

    return HalfReturnResult(
        side=side,
        y_in=float(y_in),
        y_out=y_out,
        flight_time=float(tau),
        s_correction=float(tau - math.pi),
        dy_out_dy_in=dy_out_dy_in,
    )


def half_map_u(spec: SystemSpec, side: Side, u0: float) -> Tuple[float, float, HalfReturnResult]:
    """
    Half-return map in the inverse ordinate u = 1/y.

    Returns:
        (u_out, du_out/du0, underlying numeric result)
    """
    result = half_return_numeric(spec, side, 1.0 / u0)
    y_out = result.y_out
    derivative = result.dy_out_dy_in / (y_out * y_out * u0 * u0)
    return 1.0 / y_out, derivative, result


def displacement_numeric(spec: SystemSpec, u0: float) -> float:
    """
    Numeric displacement 1/y_1 - 1/y_2 at u0.

    Args:
        spec: Canonical spec
        u0: Inverse departure ordinate, positive

    Returns:
        Displacement value; positive means orbits move outwards (infinity attracts)
    """
    if not u0 > 0:
        raise InputError(f"u0 must be positive, got {u0!r}")
    left, _, _ = half_map_u(spec, Side.L, u0)
    right, _, _ = half_map_u(spec, Side.R, u0)
    return left - right


def displacement_slope(spec: SystemSpec, u0: float) -> Tuple[float, float]:
    """
    Exact derivative of the displacement at u0 and the pseudo-return multiplier.

    Returns:
        (Delta'(u0), L'(u0) / R'(u0))
    """
    if not u0 > 0:
        raise InputError(f"u0 must be positive, got {u0!r}")
    _, left_slope, _ = half_map_u(spec, Side.L, u0)
    _, right_slope, _ = half_map_u(spec, Side.R, u0)
    return left_slope - right_slope, left_slope / right_slope


def _starting_side(spec: SystemSpec, point: Tuple[float, float]) -> Optional[Side]:
    x, y = point
    if x < 0:
        return Side.L
    if x > 0:
        return Side.R
    left_dx = -y - spec.b
    right_dx = -y + spec.b
    if left_dx < 0 and right_dx < 0:
        return Side.L
    if left_dx > 0 and right_dx > 0:
        return Side.R
    return None


def trace_orbit(
    spec: SystemSpec,
    start: Sequence[float],
    turns: float = 1,
    samples_per_turn: int = 256,
) -> Trajectory:
    """
    Sample a crossing orbit with exact zone flows.

    One turn is one passage through each zone. The trace stops early when
    the orbit reaches the sliding segment or does not return to the
    switching line within the configured time.

    Args:
        spec: Canonical spec
        start: Initial point (x, y), not inside the sliding segment
        turns: Number of turns to follow
        samples_per_turn: Points per 2 pi of flight time

    Returns:
        Sampled polyline with the crossing points
    """
    point = (float(start[0]), float(start[1]))
    side = _starting_side(spec, point)
    if side is None:
        raise InputError(f"start point {point} lies on the sliding segment")

    zones = {Side.L: zone_of(spec, Side.L), Side.R: zone_of(spec, Side.R)}
    step = math.pi / 64
    t_max = settings.trace_max_time
    bracket_samples = int(math.ceil(t_max / step))

    points = [TrajectoryPoint(t=0.0, x=point[0], y=point[1], event="start")]
    crossings = []
    clock = 0.0
    arcs = int(math.ceil(2 * turns))
    stopped: Optional[str] = None
    sliding = False

    for _ in range(arcs):
        zone = zones[side]
        crossing = _next_crossing(zone, point, 1.0, _ZONE_SIGN[side], t_max, bracket_samples)
        duration = t_max if crossing is None else crossing[0]

        count = max(2, int(math.ceil(samples_per_turn * duration / (2 * math.pi))))
        times = np.linspace(0.0, duration, count + 1)[1:]
        arc = zone_flow(zone, point, times)
        for t, (x, y) in zip(times[:-1], arc[:-1]):
            points.append(TrajectoryPoint(t=clock + float(t), x=float(x), y=float(y)))

        if crossing is None:
            x, y = arc[-1]
            points.append(TrajectoryPoint(t=clock + duration, x=float(x), y=float(y), event="end"))
            stopped = "no_return"
            break

        clock += duration
        y_cross = float(arc[-1][1])
        event = TrajectoryPoint(t=clock, x=0.0, y=y_cross, event="crossing")
        points.append(event)
        crossings.append(event)
        point = (0.0, y_cross)

        following = Side.R if side is Side.L else Side.L
        if _starting_side(spec, point) is not following:
            sliding = True
            stopped = "sliding_contact"
            logger.info(f"Orbit reached the sliding segment at y={y_cross!r}")
            break
        side = following

    return Trajectory(
        points=points, crossings=crossings, sliding_contact=sliding, stopped_reason=stopped
    )


def center_first_integral(spec: SystemSpec, point: Sequence[float]) -> float:
    """
    First integral (x - x_L)^2 + y^2 for x < 0 and (x - x_R)^2 + y^2 for x >= 0.

    Only defined for pairs of linear centers with a sewing line
    (gamma_L = gamma_R = b = 0).
    """
    if spec.gamma_L != 0 or spec.gamma_R != 0 or spec.b != 0:
        raise InputError("first integral requires gamma_L = gamma_R = b = 0")
    x, y = float(point[0]), float(point[1])
    x_eq = spec.alpha_L if x < 0 else spec.alpha_R
    return (x - x_eq) ** 2 + y**2
