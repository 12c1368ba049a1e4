"""Classification of the periodic orbit at infinity from exact parameter conditions."""

import logging
from typing import Any, Dict, Optional

from .config import settings
from .exceptions import AmbiguousNearBoundary, InputError
from .models import CenterType, InfinityClass, Kind, Stability, SystemSpec
from .params import equilibrium_reality, is_continuous, tangency_visibility, to_equilibrium

logger = logging.getLogger(__name__)


class _Decider:
    """Vanishing test with a refusal band (tol, factor * tol]."""

    def __init__(self, tol: float, factor: float):
        self.tol = tol
        self.upper = factor * tol

    def nonzero(self, quantity: str, value: float) -> bool:
        magnitude = abs(value)
        if magnitude <= self.tol:
            return False
        if magnitude <= self.upper:
            raise AmbiguousNearBoundary(quantity, value, self.tol, self.upper)
        return True


def _stability(positive: bool) -> Stability:
    return Stability.stable if positive else Stability.unstable


def classify_infinity(spec: SystemSpec, tol: Optional[float] = None) -> InfinityClass:
    """
    Classify the periodic orbit at infinity.

    The verdict is read from parameter combinations rather than from computed
    displacement coefficients: hyperbolic when gamma_L + gamma_R does not
    vanish, otherwise a weak focus of order 1, 2 or 3, otherwise one of the
    three center families.

    Args:
        spec: Canonical spec
        tol: Vanishing tolerance; defaults to settings.classification_tolerance

    Returns:
        Verdict with the parameter combinations it was based on

    Raises:
        AmbiguousNearBoundary: if a deciding combination lies in the refusal band
    """
    tol = settings.classification_tolerance if tol is None else tol
    if not tol > 0:
        raise InputError(f"classification tolerance must be positive, got {tol!r}")
    decide = _Decider(tol, settings.ambiguity_factor)

    eq = to_equilibrium(spec)
    combos: Dict[str, float] = {
        "gamma_L+gamma_R": eq.gamma_L + eq.gamma_R,
        "y_R-y_L": eq.y_R - eq.y_L,
        "gamma_L": eq.gamma_L,
        "x_L^2-x_R^2": eq.x_L**2 - eq.x_R**2,
        "x_L-x_R": eq.x_L - eq.x_R,
        "x_L+x_R": eq.x_L + eq.x_R,
        "x_L": eq.x_L,
        "b": eq.b,
    }
    witness: Dict[str, Any] = {
        "combinations": combos,
        "equilibria": equilibrium_reality(spec),
        "tangencies": tangency_visibility(spec),
        "continuous": is_continuous(spec),
    }

    def verdict(kind: Kind, stability: Stability, **extra) -> InfinityClass:
        result = InfinityClass(kind=kind, stability=stability, witness=witness, **extra)
        logger.info(
            f"Infinity classified as {kind.value} ({stability.value}"
            f"{', order ' + str(result.order) if result.order else ''}"
            f"{', type ' + result.center_type.value if result.center_type else ''})"
        )
        return result

    gamma_sum = combos["gamma_L+gamma_R"]
    if decide.nonzero("gamma_L+gamma_R", gamma_sum):
        return verdict(Kind.hyperbolic, _stability(gamma_sum > 0))

    y_gap = combos["y_R-y_L"]
    if decide.nonzero("y_R-y_L", y_gap):
        return verdict(Kind.weak_focus, _stability(y_gap > 0), order=1)

    if not decide.nonzero("gamma_L", eq.gamma_L):
        # Two linear centers glued along a sewing line
        return verdict(Kind.center, Stability.non_isolated, center_type=CenterType.a)

    squares = combos["x_L^2-x_R^2"]
    if decide.nonzero("x_L^2-x_R^2", squares):
        return verdict(Kind.weak_focus, _stability(eq.gamma_L * squares > 0), order=2)

    if not decide.nonzero("x_L+x_R", combos["x_L+x_R"]):
        if decide.nonzero("x_L", eq.x_L):
            return verdict(Kind.center, Stability.non_isolated, center_type=CenterType.c)
        return verdict(Kind.center, Stability.non_isolated, center_type=CenterType.b)

    if not decide.nonzero("x_L-x_R", combos["x_L-x_R"]):
        return verdict(Kind.weak_focus, _stability(eq.gamma_L * eq.x_L < 0), order=3)

    # x_L^2 = x_R^2 forces one of the two branches above
    raise AmbiguousNearBoundary("x_L^2-x_R^2", squares, tol, decide.upper)
