"""Big-amplitude limit cycles as positive roots of the displacement map."""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import settings
from .exceptions import EmptyRange, InputError, NumericalError
from .flow import half_map_u
from .models import CycleScan, LimitCycle, PositiveRoots, Side, Stability, SystemSpec
from .roots import positive_roots, safeguarded_newton

logger = logging.getLogger(__name__)


def _displacement_with_slope(spec: SystemSpec, u0: float) -> Tuple[float, float]:
    left, left_slope, _ = half_map_u(spec, Side.L, u0)
    right, right_slope, _ = half_map_u(spec, Side.R, u0)
    return left - right, left_slope - right_slope


def _scan(spec: SystemSpec, grid: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Displacement on the grid, truncated at the first point that is not a crossing orbit."""
    values = []
    for u0 in grid:
        try:
            value, _ = _displacement_with_slope(spec, float(u0))
        except NumericalError as e:
            if not values:
                raise EmptyRange(
                    f"no crossing orbits for u0 in [{grid[0]!r}, {grid[-1]!r}]: {e}"
                ) from e
            logger.warning(f"Scan range shrunk to u0 <= {grid[len(values) - 1]!r}: {e}")
            break
        values.append(value)
    return grid[: len(values)], np.array(values)


def _cycle_at(spec: SystemSpec, u0: float) -> LimitCycle:
    _, left_slope, left = half_map_u(spec, Side.L, u0)
    _, right_slope, right = half_map_u(spec, Side.R, u0)
    slope = left_slope - right_slope
    if abs(slope) <= settings.slope_tolerance:
        stability = Stability.non_hyperbolic
    else:
        # Delta' > 0: orbits outside move in, orbits inside move out
        stability = Stability.stable if slope > 0 else Stability.unstable
    return LimitCycle(
        u0_root=u0,
        y_top=1.0 / u0,
        y_bottom=left.y_out,
        tau_L=left.flight_time,
        tau_R=right.flight_time,
        displacement_slope=slope,
        multiplier_proxy=left_slope / right_slope,
        stability=stability,
    )


def find_cycles(
    spec: SystemSpec, u0_max: Optional[float] = None, grid: Optional[int] = None
) -> CycleScan:
    """
    Find the limit cycles near infinity of a spec.

    Scans the numeric displacement on a log-spaced grid over
    (floor * u0_max, u0_max], polishes every sign change with safeguarded
    Newton and reconstructs each cycle. Completeness is relative to the grid.

    Args:
        spec: Canonical spec
        u0_max: Upper end of the scan in the inverse ordinate
        grid: Number of scan points

    Returns:
        Cycles sorted by u0_root, with the period-annulus flag and the range
        actually scanned

    Raises:
        EmptyRange: if no scanned u0 yields crossing orbits
    """
    u0_max = settings.cycle_u0_max if u0_max is None else u0_max
    grid = settings.cycle_grid if grid is None else grid
    if not u0_max > 0:
        raise InputError(f"u0_max must be positive, got {u0_max!r}")
    if grid < 2:
        raise InputError(f"grid must have at least 2 points, got {grid}")

    points = np.geomspace(settings.cycle_scan_floor * u0_max, u0_max, grid)
    us, values = _scan(spec, points)
    effective = float(us[-1])

    if np.all(np.abs(values) <= settings.annulus_tolerance * us):
        logger.info("Displacement vanishes on the whole scan: period annulus at infinity")
        return CycleScan(cycles=[], period_annulus=True, effective_u0_max=effective, grid=grid)

    def func(u0: float) -> Tuple[float, float]:
        return _displacement_with_slope(spec, u0)

    roots: List[float] = []
    for i in range(len(us) - 1):
        lo, hi = float(us[i]), float(us[i + 1])
        if values[i] == 0.0:
            roots.append(lo)
            continue
        if values[i] * values[i + 1] >= 0:
            continue
        # Stop on bracket width only; |Delta| near infinity sits far below any absolute ftol
        root, iterations = safeguarded_newton(
            func,
            lo,
            hi,
            xtol=max(settings.root_tolerance, 4 * np.finfo(float).eps) * hi,
            ftol=0.0,
        )
        logger.debug(f"Root at u0={root!r} after {iterations} iterations")
        roots.append(root)
    if values[-1] == 0.0:
        roots.append(float(us[-1]))

    cycles = [_cycle_at(spec, u0) for u0 in _deduplicate(roots)]
    logger.info(f"Found {len(cycles)} limit cycles with u0 <= {effective!r}")
    return CycleScan(cycles=cycles, period_annulus=False, effective_u0_max=effective, grid=grid)


def _deduplicate(roots: Sequence[float]) -> List[float]:
    unique: List[float] = []
    for root in sorted(roots):
        if unique and abs(root - unique[-1]) <= settings.root_dedup_relative * abs(root):
            continue
        unique.append(root)
    return unique


def truncation_roots(deltas: Sequence[float]) -> PositiveRoots:
    """
    Positive roots of the quartic truncation Delta_1 u + ... + Delta_4 u^4.

    Args:
        deltas: Delta_1..Delta_4

    Returns:
        Distinct positive roots with multiplicities
    """
    if len(deltas) != 4:
        raise InputError(f"expected 4 coefficients, got {len(deltas)}")
    return positive_roots(*(float(d) for d in deltas))
