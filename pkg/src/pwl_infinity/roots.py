"""Scalar root finding: safeguarded Newton and closed-form real cubic roots."""

import logging
import math
from typing import Callable, List, Tuple

from .exceptions import DegenerateLeading, NoConvergence
from .models import PositiveRoots

logger = logging.getLogger(__name__)


def safeguarded_newton(
    func: Callable[[float], Tuple[float, float]],
    lo: float,
    hi: float,
    xtol: float,
    ftol: float = 0.0,
    maxit: int = 100,
) -> Tuple[float, int]:
    """
    Find a root of func bracketed by [lo, hi] with Newton steps and bisection fallback.

    Args:
        func: Callable returning (f, df) at x
        lo, hi: Bracketing interval; f(lo) and f(hi) must not have the same strict sign
        xtol: Absolute accuracy in x
        ftol: Stop as soon as |f| <= ftol
        maxit: Maximum number of iterations

    Returns:
        The root and the number of iterations used

    Raises:
        ValueError: if the interval does not bracket a root
        NoConvergence: if maxit is exhausted
    """
    f_lo, _ = func(lo)
    f_hi, _ = func(hi)
    if f_lo == 0.0:
        return lo, 0
    if f_hi == 0.0:
        return hi, 0
    if f_lo * f_hi > 0:
        raise ValueError(f"[{lo!r}, {hi!r}] does not bracket a root")

    # Orient so that f(xl) < 0 < f(xh)
    xl, xh = (lo, hi) if f_lo < 0 else (hi, lo)

    x = 0.5 * (lo + hi)
    dxold = abs(hi - lo)
    dx = dxold
    f, df = func(x)
    for it in range(1, maxit + 1):
        if abs(f) <= ftol:
            return x, it
        # Bisect if Newton would leave the bracket or is not shrinking fast enough
        if ((x - xh) * df - f) * ((x - xl) * df - f) >= 0.0 or abs(2.0 * f) > abs(dxold * df):
            dxold = dx
            dx = 0.5 * (xh - xl)
            x = xl + dx
            if xl == x:
                return x, it
        else:
            dxold = dx
            dx = f / df
            previous = x
            x -= dx
            if previous == x:
                return x, it
        if abs(dx) < xtol:
            return x, it

        f, df = func(x)
        if f < 0:
            xl = x
        else:
            xh = x

    raise NoConvergence("safeguarded Newton", maxit, abs(f))


def cubic_discriminant(a: float, b: float, c: float) -> float:
    """Discriminant of the monic cubic x^3 + a x^2 + b x + c."""
    return 18 * a * b * c - 4 * a**3 * c + a**2 * b**2 - 4 * b**3 - 27 * c**2


def cubic_scale(a: float, b: float, c: float) -> float:
    """Root magnitude scale of the monic cubic, used for relative tolerances."""
    return max(abs(a), math.sqrt(abs(b)), abs(c) ** (1 / 3), 1e-300)


def _polish(a: float, b: float, c: float, x: float, steps: int = 3) -> float:
    for _ in range(steps):
        f = ((x + a) * x + b) * x + c
        df = (3 * x + 2 * a) * x + b
        if df == 0:
            break
        step = f / df
        candidate = x - step
        f_new = ((candidate + a) * candidate + b) * candidate + c
        if abs(f_new) >= abs(f):
            break
        x = candidate
    return x


def cubic_real_roots(a: float, b: float, c: float, tol: float = 1e-12) -> List[Tuple[float, int]]:
    """
    Real roots of x^3 + a x^2 + b x + c with multiplicities.

    A discriminant within tol (relative to the sixth power of the root scale)
    is treated as zero, so double and triple roots are reported as such.

    Returns:
        List of (root, multiplicity) sorted by root
    """
    scale = cubic_scale(a, b, c)
    shift = a / 3
    # Depressed cubic t^3 + p t + q with x = t - a/3
    p = b - a * a / 3
    q = 2 * a**3 / 27 - a * b / 3 + c
    disc = cubic_discriminant(a, b, c)

    if abs(disc) <= tol * scale**6:
        if abs(p) <= 1e-8 * scale**2:
            return [(-shift, 3)]
        simple = 3 * q / p - shift
        double = -3 * q / (2 * p) - shift
        roots = [(_polish(a, b, c, simple), 1), (double, 2)]
        return sorted(roots)

    if disc > 0:
        r = 2 * math.sqrt(-p / 3)
        arg = 3 * q / (p * r)
        theta = math.acos(max(-1.0, min(1.0, arg))) / 3
        ts = [r * math.cos(theta - 2 * math.pi * k / 3) for k in range(3)]
        return sorted((_polish(a, b, c, t - shift), 1) for t in ts)

    half_q = q / 2
    root_d = math.sqrt(half_q * half_q + p**3 / 27)
    t = math.cbrt(-half_q + root_d) + math.cbrt(-half_q - root_d)
    return [(_polish(a, b, c, t - shift), 1)]


def positive_roots(
    d1: float, d2: float, d3: float, d4: float = 1.0, tol: float = 1e-12
) -> PositiveRoots:
    """
    Positive roots of d1 u + d2 u^2 + d3 u^3 + d4 u^4.

    The factor u is removed and the cubic cofactor is solved in closed form.

    Args:
        d1, d2, d3, d4: Quartic coefficients
        tol: Relative tolerance for detecting the boundary cases d1 = 0 and a
            vanishing cofactor discriminant

    Returns:
        Distinct positive roots with multiplicities and boundary flags

    Raises:
        DegenerateLeading: if |d4| < 1e-300
    """
    if abs(d4) < 1e-300:
        raise DegenerateLeading(f"leading coefficient {d4!r} vanishes")
    a, b, c = d3 / d4, d2 / d4, d1 / d4
    scale = cubic_scale(a, b, c)
    real = cubic_real_roots(a, b, c, tol)

    on_axis = abs(c) <= tol * scale**3
    floor = 1e-9 * scale if on_axis else 0.0
    kept = [(r, m) for r, m in real if r > floor]
    return PositiveRoots(
        count=sum(m for _, m in kept),
        roots=[r for r, _ in kept],
        multiplicities=[m for _, m in kept],
        on_delta1_axis=on_axis,
        on_discriminant=any(m > 1 for _, m in real),
        cusp=any(m == 3 for _, m in real),
    )
