"""Taylor coefficients of the half-return maps and of the displacement map near infinity."""

import logging
import math
from typing import Tuple

import numpy as np

from .config import settings
from .exceptions import InputError, OrderTooLarge
from .models import (
    ClosedFormCoefficients,
    DisplacementSeries,
    EquilibriumSpec,
    HalfReturnSeries,
    Side,
    SystemSpec,
    TruncatedSeries,
)
from .params import to_equilibrium

logger = logging.getLogger(__name__)


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of two truncated series (index = power), same length."""
    return np.convolve(a, b)[: len(a)]


def _exp(a: np.ndarray) -> np.ndarray:
    """
    Exponential of a truncated series.

    Uses f' = a' f, i.e. n f_n = sum_{k=1}^{n} k a_k f_{n-k}.
    """
    n = len(a)
    f = np.zeros(n, dtype=np.result_type(a, float))
    f[0] = np.exp(a[0])
    k = np.arange(1, n)
    for m in range(1, n):
        f[m] = np.dot(k[:m] * a[1 : m + 1], f[m - 1 :: -1][:m]) / m
    return f


def _zone_parameters(spec: SystemSpec, side: Side) -> Tuple[float, float, float]:
    """(gamma, alpha, b) of the left-type closing equation for one side.

    The right map is the left map of the x-flipped system.
    """
    if Side(side) is Side.L:
        return spec.gamma_L, spec.alpha_L, spec.b
    return -spec.gamma_R, -spec.alpha_R, -spec.b


def _closing(
    gamma: float, alpha: float, b: float, u1: np.ndarray, s: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Both components of the desingularized closing equation as series in u0."""
    n = len(u1)
    e_minus = math.exp(-gamma * math.pi)

    # exp(A s) = exp(gamma s) (cos s I + sin s (A - gamma I))
    rotation = _exp((gamma + 1j) * s)
    g, h = rotation.real, rotation.imag

    u = np.zeros(n)
    v1 = np.zeros(n)
    v2 = np.zeros(n)
    if n > 1:
        u[1] = 1.0
        v1[1] = b
        v2[1] = alpha
    v1[0] = 1.0

    w1 = gamma * v1 - v2
    w2 = (1 + gamma**2) * v1 - gamma * v2
    ev1 = _mul(g, v1) + _mul(h, w1)
    ev2 = _mul(g, v2) + _mul(h, w2)

    f1 = e_minus * (u + b * _mul(u, u1)) + _mul(u1, ev1)
    f2 = e_minus * alpha * u + ev2
    return f1, f2


def _check_order(order: int) -> None:
    if order < 1:
        raise InputError(f"series order must be at least 1, got {order}")
    if order > settings.series_max_order:
        raise OrderTooLarge(order, settings.series_max_order)


def half_return_series(spec: SystemSpec, side: Side, order: int) -> HalfReturnSeries:
    """
    Expand one half-return map and its flight-time correction in u0.

    Args:
        spec: Canonical spec
        side: L for the forward left map, R for the backward right map
        order: Truncation order N

    Returns:
        Coefficients 1..N of the map and of the time correction
    """
    _check_order(order)
    side = Side(side)
    gamma, alpha, b = _zone_parameters(spec, side)

    # Jacobian of the closing equation with respect to (u1, s) at the origin
    jacobian = np.array([[1.0, 0.0], [0.0, 1.0 + gamma**2]])

    u1 = np.zeros(order + 1)
    s = np.zeros(order + 1)
    for k in range(1, order + 1):
        f1, f2 = _closing(gamma, alpha, b, u1, s)
        u1[k], s[k] = np.linalg.solve(jacobian, [-f1[k], -f2[k]])

    logger.debug(f"Side {side.value} series to order {order}: {u1[1:5]}")
    return HalfReturnSeries(
        side=side,
        u_series=TruncatedSeries(order=order, coeffs=u1[1:].tolist()),
        time_series=TruncatedSeries(order=order, coeffs=s[1:].tolist()),
        exp_factor=math.exp(-gamma * math.pi),
    )


def closing_residual(spec: SystemSpec, side: Side, half: HalfReturnSeries) -> np.ndarray:
    """
    Substitute a half-return series back into its closing equation.

    Returns:
        Array of shape (2, N) with the collected coefficients of orders 1..N
    """
    gamma, alpha, b = _zone_parameters(spec, side)
    u1 = np.concatenate([[0.0], half.u_series.coeffs])
    s = np.concatenate([[0.0], half.time_series.coeffs])
    f1, f2 = _closing(gamma, alpha, b, u1, s)
    return np.vstack([f1[1:], f2[1:]])


def displacement_series(spec: SystemSpec, order: int) -> DisplacementSeries:
    """
    Coefficients of the displacement map Delta = L - R.

    Args:
        spec: Canonical spec
        order: Truncation order N

    Returns:
        Delta_1..Delta_N
    """
    left = half_return_series(spec, Side.L, order)
    right = half_return_series(spec, Side.R, order)
    deltas = np.subtract(left.u_series.coeffs, right.u_series.coeffs)
    return DisplacementSeries(order=order, deltas=deltas.tolist())


def closed_form_coeffs(spec: SystemSpec) -> ClosedFormCoefficients:
    """Explicit L_1..L_4, R_1..R_4, beta_1, beta_2."""
    return closed_form_from_equilibrium(to_equilibrium(spec))


def closed_form_from_equilibrium(eq: EquilibriumSpec) -> ClosedFormCoefficients:
    """Closed-form coefficients read directly from the focus positions."""

    def half(gamma: float, x: float, y: float, e: float) -> Tuple[list, float]:
        p = 1 + gamma**2
        q = p * (
            2 * gamma * (1 - e + e**2) / 3 * x**3 + (e - 1) * (2 * e + 3) / 2 * x**2 * y
        ) + (1 + e) ** 2 * y**3
        f = -e * (1 + e)
        coeffs = [
            -e,
            f * y,
            f * (p * (e - 1) / 2 * x**2 + (1 + e) * y**2),
            f * q,
        ]
        return coeffs, q

    e_L = math.exp(-eq.gamma_L * math.pi)
    e_R = math.exp(eq.gamma_R * math.pi)
    L, q_L = half(eq.gamma_L, eq.x_L, eq.y_L, e_L)
    R, q_R = half(eq.gamma_R, eq.x_R, eq.y_R, e_R)

    beta1 = -(1 + e_L) * eq.x_L
    beta2 = -eq.b * beta1 - eq.gamma_L * beta1**2
    return ClosedFormCoefficients(L=L, R=R, beta=[beta1, beta2], Q_L=q_L, Q_R=q_R)


def evaluate(series: TruncatedSeries, u0: float) -> float:
    """Value of a truncated series at u0."""
    total = 0.0
    for c in reversed(series.coeffs):
        total = (total + c) * u0
    return total
