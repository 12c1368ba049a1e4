"""Unfolding of the third-order weak focus at infinity and the model-map geometry."""

import logging
import math
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from .config import settings
from .exceptions import InputError, NoConvergence, OutsideLocality, StepTooSmall
from .models import (
    BoundaryPoint,
    EquilibriumSpec,
    PositiveRoots,
    RegionLabel,
    RegionMap,
    SystemSpec,
    UnfoldingResult,
    UnfoldingTarget,
    Window,
)
from .params import from_reduced
from .roots import cubic_discriminant, positive_roots
from .series import closed_form_from_equilibrium, displacement_series

logger = logging.getLogger(__name__)

REDUCED_NAMES: Tuple[str, ...] = ("gamma_L", "gamma_R", "b", "x_L", "x_R")


def _reduced_equilibrium(
    gamma_L: float, x_L: float, gamma_R: float, b: float, x_R: float
) -> EquilibriumSpec:
    return EquilibriumSpec(
        gamma_L=gamma_L,
        gamma_R=gamma_R,
        x_L=x_L,
        x_R=x_R,
        y_L=2 * gamma_L * x_L - b,
        y_R=2 * gamma_R * x_R + b,
        b=b,
    )


def reduced_deltas(
    gamma_L: float, x_L: float, gamma_R: float, b: float, x_R: float
) -> np.ndarray:
    """Delta_1..Delta_4 from the closed forms, in reduced coordinates."""
    coeffs = closed_form_from_equilibrium(_reduced_equilibrium(gamma_L, x_L, gamma_R, b, x_R))
    return np.subtract(coeffs.L, coeffs.R)


def critical_point(gamma_L: float, x_L: float) -> np.ndarray:
    """(gamma_R, b, x_R) of the third-order weak focus for given left parameters."""
    return np.array([-gamma_L, 2 * gamma_L * x_L, x_L])


def unfold_jacobian(
    gamma_L: float, x_L: float, gamma_R: float, b: float, x_R: float
) -> np.ndarray:
    """
    Analytic Jacobian of (Delta_1, Delta_2, Delta_3) with respect to (gamma_R, b, x_R).

    Args:
        gamma_L, x_L: Fixed left parameters
        gamma_R, b, x_R: Point of evaluation

    Returns:
        3x3 matrix, rows Delta_i, columns (gamma_R, b, x_R)
    """
    E = math.exp(-gamma_L * math.pi)
    y_L = 2 * gamma_L * x_L - b

    e = math.exp(gamma_R * math.pi)
    p = 1 + gamma_R**2
    y = 2 * gamma_R * x_R + b
    f = e * (1 + e)
    g = e * (1 + e) ** 2
    h = e**3 - e
    df = math.pi * e * (1 + 2 * e)
    dg = math.pi * e * (1 + e) * (1 + 3 * e)
    dh = math.pi * (3 * e**3 - e)

    return np.array(
        [
            [math.pi * e, 0.0, 0.0],
            [df * y + 2 * f * x_R, E * (1 + E) + f, 2 * gamma_R * f],
            [
                gamma_R * h * x_R**2 + p * dh * x_R**2 / 2 + dg * y**2 + 4 * g * x_R * y,
                2 * E * (1 + E) ** 2 * y_L + 2 * g * y,
                p * h * x_R + 4 * gamma_R * g * y,
            ],
        ]
    )


def _check_left(gamma_L: float, x_L: float) -> None:
    if abs(gamma_L) <= 1e-6 or abs(x_L) <= 1e-6:
        raise InputError(
            f"unfolding needs |gamma_L| > 1e-6 and |x_L| > 1e-6, got ({gamma_L!r}, {x_L!r})"
        )


def linear_unfolding(
    gamma_L: float, x_L: float, epsilon: Sequence[float]
) -> Dict[str, float]:
    """
    First-order unfolding: parameters with Delta_i = epsilon_i + O(epsilon^2).

    Args:
        gamma_L, x_L: Left parameters of the critical point
        epsilon: Desired (Delta_1, Delta_2, Delta_3)

    Returns:
        Mapping with gamma_R, b and x_R
    """
    _check_left(gamma_L, x_L)
    center = critical_point(gamma_L, x_L)
    step = np.linalg.solve(unfold_jacobian(gamma_L, x_L, *center), np.asarray(epsilon, float))
    gamma_R, b, x_R = center + step
    return {"gamma_R": float(gamma_R), "b": float(b), "x_R": float(x_R)}


def order3_unfold(
    gamma_L: float, x_L: float, target: UnfoldingTarget
) -> UnfoldingResult:
    """
    Solve (Delta_1, Delta_2, Delta_3)(gamma_R, b, x_R) = target near the critical point.

    Newton iteration with the analytic Jacobian, started at the third-order
    weak focus (gamma_R, b, x_R) = (-gamma_L, 2 gamma_L x_L, x_L).

    Args:
        gamma_L, x_L: Left parameters, both nonzero
        target: Desired leading coefficients

    Returns:
        Solved parameters with the achieved Delta_1..Delta_4

    Raises:
        OutsideLocality: if an iterate leaves the locality ball
        NoConvergence: if the residual does not reach the tolerance
    """
    _check_left(gamma_L, x_L)
    goal = np.array([target.delta1, target.delta2, target.delta3])
    center = critical_point(gamma_L, x_L)
    point = center.copy()
    radius = settings.unfold_locality_radius

    residual = np.inf
    iterations = 0
    for iterations in range(settings.newton_max_iterations + 1):
        deltas = reduced_deltas(gamma_L, x_L, *point)
        mismatch = deltas[:3] - goal
        residual = float(np.max(np.abs(mismatch)))
        logger.debug(f"Unfolding iteration {iterations}: residual {residual!r}")
        if residual <= settings.unfold_tolerance:
            break
        if iterations == settings.newton_max_iterations:
            break
        point = point - np.linalg.solve(unfold_jacobian(gamma_L, x_L, *point), mismatch)
        if np.linalg.norm(point - center) > radius:
            raise OutsideLocality(
                f"Newton iterate {point.tolist()} left the ball of radius {radius} "
                f"around {center.tolist()}"
            )

    if residual > max(settings.unfold_tolerance, 1e-12):
        raise NoConvergence("third-order unfolding", iterations, residual)

    gamma_R, b, x_R = (float(v) for v in point)
    logger.info(
        f"Unfolded to (gamma_R, b, x_R) = ({gamma_R!r}, {b!r}, {x_R!r}) in {iterations} steps"
    )
    return UnfoldingResult(
        gamma_L=gamma_L,
        x_L=x_L,
        gamma_R=gamma_R,
        b=b,
        x_R=x_R,
        achieved=deltas.tolist(),
        residual=residual,
        newton_iters=iterations,
    )


def _series_deltas(point: Mapping[str, float]) -> np.ndarray:
    spec = from_reduced(point["gamma_L"], point["x_L"], point["b"], point["gamma_R"], point["x_R"])
    return np.array(displacement_series(spec, 4).deltas)


def _central_difference(
    point: Dict[str, float], directions: Sequence[str], h: float
) -> np.ndarray:
    columns = []
    for name in directions:
        forward = dict(point, **{name: point[name] + h})
        backward = dict(point, **{name: point[name] - h})
        columns.append((_series_deltas(forward) - _series_deltas(backward)) / (2 * h))
    return np.column_stack(columns)


def delta_jacobian(
    point: Mapping[str, float], directions: Sequence[str], h: float = 1e-5
) -> np.ndarray:
    """
    Numeric Jacobian of Delta_1..Delta_4 with respect to reduced parameters.

    Central differences of the series coefficients at steps h and h/2,
    combined by one Richardson extrapolation.

    Args:
        point: Values of gamma_L, gamma_R, b, x_L and x_R
        directions: Parameter names to differentiate along
        h: Step, in [1e-7, 1e-4]

    Returns:
        4 x len(directions) matrix

    Raises:
        StepTooSmall: if the two step sizes disagree beyond settings.jacobian_agreement
    """
    if not 1e-7 <= h <= 1e-4:
        raise InputError(f"step must lie in [1e-7, 1e-4], got {h!r}")
    missing = set(REDUCED_NAMES) - set(point)
    unknown = set(directions) - set(REDUCED_NAMES)
    if missing or unknown:
        raise InputError(f"missing parameters {sorted(missing)}, unknown {sorted(unknown)}")
    point = {name: float(point[name]) for name in REDUCED_NAMES}

    coarse = _central_difference(point, directions, h)
    fine = _central_difference(point, directions, h / 2)
    extrapolated = (4 * fine - coarse) / 3

    scale = max(float(np.max(np.abs(extrapolated))), np.finfo(float).tiny)
    disagreement = float(np.max(np.abs(extrapolated - fine))) / scale
    if disagreement > settings.jacobian_agreement:
        raise StepTooSmall(
            f"step {h!r}: extrapolated and fine Jacobians differ by {disagreement!r} relative"
        )
    return extrapolated


def cyclicity_rank(
    point: Mapping[str, float],
    directions: Sequence[str] = REDUCED_NAMES,
    h: float = 1e-5,
    rtol: float = 1e-6,
) -> Tuple[int, int]:
    """
    Ranks of the first-order Jacobians in the given directions.

    Returns:
        (rank of the Delta_1..Delta_3 rows, rank of all four rows)
    """
    jacobian = delta_jacobian(point, directions, h)

    def rank(matrix: np.ndarray) -> int:
        singular = np.linalg.svd(matrix, compute_uv=False)
        if singular.size == 0 or singular[0] == 0:
            return 0
        return int(np.sum(singular > rtol * singular[0]))

    return rank(jacobian[:3]), rank(jacobian)


def discriminant(delta: Sequence[float]) -> float:
    """Discriminant of the cofactor cubic u^3 + delta3 u^2 + delta2 u + delta1."""
    delta1, delta2, delta3 = delta
    return cubic_discriminant(delta3, delta2, delta1)


def cusp_point(delta3: float) -> Tuple[float, float]:
    """(delta1, delta2) where the cofactor cubic has a triple root."""
    return delta3**3 / 27, delta3**2 / 3


def model_region_count(delta: Sequence[float]) -> PositiveRoots:
    """
    Positive roots of q(u) = delta1 u + delta2 u^2 + delta3 u^3 + u^4.

    Args:
        delta: (delta1, delta2, delta3)

    Returns:
        Root count with multiplicity and the boundary flags
    """
    delta1, delta2, delta3 = (float(d) for d in delta)
    return positive_roots(delta1, delta2, delta3, 1.0)


def _inside(window: Window, delta1: float, delta2: float) -> bool:
    return (
        window.delta1_min <= delta1 <= window.delta1_max
        and window.delta2_min <= delta2 <= window.delta2_max
    )


def region_boundaries(
    delta3: float, window: Window, resolution: int = 32
) -> RegionMap:
    """
    Boundary curves and region labels of the model map in a window.

    The boundaries are the axis delta1 = 0 and the discriminant curve of the
    cofactor cubic, sampled through its double root r:
    (delta1, delta2) = (-r^2 s, r^2 + 2 r s) with s = -delta3 - 2 r.

    Args:
        delta3: Fixed third coefficient
        window: Rectangle in the (delta1, delta2) plane
        resolution: Samples per axis, at least 16

    Returns:
        Boundary points and a resolution x resolution grid of root counts
    """
    if resolution < 16:
        raise InputError(f"resolution must be at least 16, got {resolution}")

    boundaries: List[BoundaryPoint] = []
    if window.delta1_min <= 0.0 <= window.delta1_max:
        for delta2 in np.linspace(window.delta2_min, window.delta2_max, resolution):
            boundaries.append(BoundaryPoint(delta1=0.0, delta2=float(delta2), curve="delta1_axis"))

    reach = max(abs(window.delta1_min), abs(window.delta1_max)) ** (1 / 3) + math.sqrt(
        max(abs(window.delta2_min), abs(window.delta2_max))
    )
    bound = 2 * (abs(delta3) + reach) + 1e-12
    for r in np.linspace(-bound, bound, 16 * resolution + 1):
        s = -delta3 - 2 * r
        delta1, delta2 = -r * r * s, r * r + 2 * r * s
        if _inside(window, delta1, delta2):
            boundaries.append(
                BoundaryPoint(
                    delta1=float(delta1),
                    delta2=float(delta2),
                    curve="discriminant",
                    double_root=float(r),
                )
            )

    cusp = cusp_point(delta3)
    if _inside(window, *cusp):
        boundaries.append(
            BoundaryPoint(delta1=cusp[0], delta2=cusp[1], curve="cusp", double_root=-delta3 / 3)
        )

    step1 = (window.delta1_max - window.delta1_min) / resolution
    step2 = (window.delta2_max - window.delta2_min) / resolution
    labels = []
    for i in range(resolution):
        delta1 = window.delta1_min + (i + 0.5) * step1
        for j in range(resolution):
            delta2 = window.delta2_min + (j + 0.5) * step2
            count = model_region_count((delta1, delta2, delta3)).count
            labels.append(RegionLabel(delta1=delta1, delta2=delta2, count=count))

    logger.info(
        f"Region map for delta3={delta3!r}: {len(boundaries)} boundary points, "
        f"{len(labels)} labels"
    )
    return RegionMap(delta3=delta3, window=window, boundaries=boundaries, labels=labels)


def unfolded_spec(result: UnfoldingResult) -> SystemSpec:
    """Canonical spec of an unfolding result."""
    return from_reduced(result.gamma_L, result.x_L, result.b, result.gamma_R, result.x_R)

