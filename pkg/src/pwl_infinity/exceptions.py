"""Errors raised by the analysis operations."""


class AnalysisError(Exception):
    """Base class for every error raised by the toolkit."""


class InputError(AnalysisError):
    """The caller supplied parameters the operation cannot accept."""


class NumericalError(AnalysisError):
    """A numeric procedure could not produce a trustworthy answer."""


class NonFocusZone(InputError):
    """A zone of a Lienard spec is not of focus type (T^2 - 4D >= 0)."""

    def __init__(self, zone: str, discriminant: float):
        self.zone = zone
        self.discriminant = discriminant
        super().__init__(
            f"zone {zone} is not of focus type: T^2 - 4D = {discriminant!r} >= 0"
        )


class ParameterFileError(InputError):
    """A parameter file could not be parsed."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class OrderTooLarge(InputError):
    """Requested series order exceeds the configured cap."""

    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"series order {order} exceeds the configured cap {cap}")


class NoCrossing(NumericalError):
    """The orbit does not come back to the switching line as a crossing orbit."""

    def __init__(self, side: str, y_in: float, reason: str):
        self.side = side
        self.y_in = y_in
        super().__init__(f"side {side}, y_in={y_in!r}: {reason}")


class SlidingContact(NumericalError):
    """The orbit arrives on the sliding segment instead of crossing."""

    def __init__(self, side: str, y_in: float, y_out: float, b: float):
        self.side = side
        self.y_in = y_in
        self.y_out = y_out
        super().__init__(
            f"side {side}, y_in={y_in!r}: arrival ordinate {y_out!r} lies on the "
            f"sliding segment |y| <= {abs(b)!r}"
        )


class AmbiguousNearBoundary(NumericalError):
    """A parameter combination falls inside the classification ambiguity band."""

    def __init__(self, quantity: str, value: float, tol: float, upper: float):
        self.quantity = quantity
        self.value = value
        self.tol = tol
        self.upper = upper
        super().__init__(
            f"{quantity} = {value!r} lies in the ambiguity band ({tol!r}, {upper!r}]"
        )


class NoConvergence(NumericalError):
    """An iteration did not reach its tolerance."""

    def __init__(self, what: str, iterations: int, residual: float):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"{what} did not converge after {iterations} iterations (residual {residual!r})"
        )


class OutsideLocality(NumericalError):
    """An unfolding target or iterate left the local regime."""


class EmptyRange(NumericalError):
    """No inverse ordinate in the requested range yields crossing orbits."""


class DegenerateLeading(NumericalError):
    """The leading coefficient of a truncated displacement vanishes."""


class StepTooSmall(NumericalError):
    """Finite-difference Jacobians at two step sizes disagree."""
