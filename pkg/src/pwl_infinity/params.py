"""Parametrizations of the two-zone family and the conversions among them."""

import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple

from .exceptions import NonFocusZone, ParameterFileError
from .models import EquilibriumSpec, LienardSpec, LoadedSpec, SystemSpec, Symmetry

logger = logging.getLogger(__name__)

# Re-centering below this shift is silent; also the relative check on a declared b
CENTERING_TOLERANCE = 1e-9

FORM_FIELDS: Dict[str, Tuple[str, ...]] = {
    "canonical": ("gamma_L", "gamma_R", "alpha_L", "alpha_R", "b"),
    "lienard": ("T_L", "D_L", "a_L", "T_R", "D_R", "a_R", "b"),
    "equilibrium": ("gamma_L", "gamma_R", "x_L", "x_R", "y_L", "y_R", "b"),
    "reduced": ("gamma_L", "x_L", "b", "gamma_R", "x_R"),
}


def canonicalize(spec: LienardSpec) -> SystemSpec:
    """
    Reduce a trace/determinant spec to the five canonical parameters.

    Args:
        spec: Lienard form of the system

    Returns:
        Canonical spec with gamma = sigma/omega and alpha = a/omega per zone

    Raises:
        NonFocusZone: if T^2 - 4D >= 0 in some zone
    """
    zones = {}
    for zone, trace, det, offset in (
        ("L", spec.T_L, spec.D_L, spec.a_L),
        ("R", spec.T_R, spec.D_R, spec.a_R),
    ):
        discriminant = trace * trace - 4 * det
        if not discriminant < 0:
            raise NonFocusZone(zone, discriminant)
        omega = math.sqrt(-discriminant) / 2
        zones[zone] = (trace / 2 / omega, offset / omega)

    return SystemSpec(
        gamma_L=zones["L"][0],
        gamma_R=zones["R"][0],
        alpha_L=zones["L"][1],
        alpha_R=zones["R"][1],
        b=spec.b,
    )


def to_lienard(spec: SystemSpec, omega_L: float = 1.0, omega_R: float = 1.0) -> LienardSpec:
    """Build a Lienard spec whose canonical form is ``spec``."""
    if omega_L <= 0 or omega_R <= 0:
        raise ValueError("natural frequencies must be positive")
    return LienardSpec(
        T_L=2 * spec.gamma_L * omega_L,
        D_L=(1 + spec.gamma_L**2) * omega_L**2,
        a_L=spec.alpha_L * omega_L,
        T_R=2 * spec.gamma_R * omega_R,
        D_R=(1 + spec.gamma_R**2) * omega_R**2,
        a_R=spec.alpha_R * omega_R,
        b=spec.b,
    )


def to_equilibrium(spec: SystemSpec) -> EquilibriumSpec:
    """Locate the foci of both zones."""
    x_L = spec.alpha_L / (1 + spec.gamma_L**2)
    x_R = spec.alpha_R / (1 + spec.gamma_R**2)
    return EquilibriumSpec(
        gamma_L=spec.gamma_L,
        gamma_R=spec.gamma_R,
        x_L=x_L,
        x_R=x_R,
        y_L=2 * spec.gamma_L * x_L - spec.b,
        y_R=2 * spec.gamma_R * x_R + spec.b,
        b=spec.b,
    )


def centering_shift(values: Mapping[str, float]) -> float:
    """
    Common y-translation that moves the sliding segment to the origin.

    Subtracting the returned shift from both y_L and y_R makes the two
    expressions b = 2 gamma_L x_L - y_L and b = y_R - 2 gamma_R x_R agree.

    Args:
        values: Equilibrium-form fields gamma_L, gamma_R, x_L, x_R, y_L, y_R
    """
    left = values["y_L"] - 2 * values["gamma_L"] * values["x_L"]
    right = values["y_R"] - 2 * values["gamma_R"] * values["x_R"]
    return (left + right) / 2


def center_equilibrium(values: Mapping[str, float]) -> Tuple[EquilibriumSpec, float]:
    """
    Build an equilibrium spec from raw fields, removing a common y-translation.

    Args:
        values: Equilibrium-form fields including the declared b

    Returns:
        Centered spec and the shift subtracted from y_L and y_R

    Raises:
        ParameterFileError: if the declared b disagrees with the centered ordinates
    """
    shift = centering_shift(values)
    if abs(shift) > CENTERING_TOLERANCE:
        logger.warning(f"Equilibrium spec re-centered by y-translation {shift!r}")
    y_L = values["y_L"] - shift
    y_R = values["y_R"] - shift
    implied = y_R - 2 * values["gamma_R"] * values["x_R"]

    declared = values["b"]
    if abs(declared - implied) > CENTERING_TOLERANCE * (1 + abs(declared) + abs(implied)):
        raise ParameterFileError(
            f"declared b = {declared!r} but the centered equilibria imply b = {implied!r}",
            field="b",
        )

    spec = EquilibriumSpec(
        gamma_L=values["gamma_L"],
        gamma_R=values["gamma_R"],
        x_L=values["x_L"],
        x_R=values["x_R"],
        y_L=y_L,
        y_R=y_R,
        b=implied,
    )
    return spec, shift


def from_equilibrium(spec: EquilibriumSpec) -> SystemSpec:
    """Recover the canonical parameters from the equilibrium form."""
    return SystemSpec(
        gamma_L=spec.gamma_L,
        gamma_R=spec.gamma_R,
        alpha_L=(1 + spec.gamma_L**2) * spec.x_L,
        alpha_R=(1 + spec.gamma_R**2) * spec.x_R,
        b=spec.b,
    )


def from_reduced(gamma_L: float, x_L: float, b: float, gamma_R: float, x_R: float) -> SystemSpec:
    """Build a canonical spec from damping ratios, focus abscissas and b."""
    return SystemSpec(
        gamma_L=gamma_L,
        gamma_R=gamma_R,
        alpha_L=(1 + gamma_L**2) * x_L,
        alpha_R=(1 + gamma_R**2) * x_R,
        b=b,
    )


def to_reduced(spec: SystemSpec) -> Dict[str, float]:
    """Reduced coordinates (gamma_L, x_L, b, gamma_R, x_R) of a spec."""
    eq = to_equilibrium(spec)
    return {
        "gamma_L": eq.gamma_L,
        "x_L": eq.x_L,
        "b": eq.b,
        "gamma_R": eq.gamma_R,
        "x_R": eq.x_R,
    }


def is_continuous(spec: SystemSpec) -> bool:
    """True iff both zones agree on the switching line (b = 0, alpha_L = alpha_R)."""
    return spec.b == 0 and spec.alpha_L == spec.alpha_R


def apply_symmetry(spec: EquilibriumSpec, which: Symmetry) -> EquilibriumSpec:
    """
    Apply a parameter symmetry of the family.

    Args:
        spec: Equilibrium form of the system
        which: x_flip, y_flip or their composition

    Returns:
        Transformed spec with equilibrium ordinates recomputed
    """
    which = Symmetry(which)
    g_L, x_L, b, g_R, x_R = spec.gamma_L, spec.x_L, spec.b, spec.gamma_R, spec.x_R
    if which is Symmetry.x_flip:
        g_L, x_L, b, g_R, x_R = -g_R, -x_R, -b, -g_L, -x_L
    elif which is Symmetry.y_flip:
        g_L, x_L, b, g_R, x_R = -g_L, x_L, -b, -g_R, x_R
    else:
        g_L, x_L, b, g_R, x_R = g_R, x_R, b, g_L, x_L

    return EquilibriumSpec(
        gamma_L=g_L,
        gamma_R=g_R,
        x_L=x_L,
        x_R=x_R,
        y_L=2 * g_L * x_L - b,
        y_R=2 * g_R * x_R + b,
        b=b,
    )


def tangency_visibility(spec: SystemSpec) -> Dict[str, str]:
    """Visibility of the tangency points (0, -b), (0, b) and the sliding character."""

    def visibility(value: float) -> str:
        if value > 0:
            return "visible"
        if value < 0:
            return "invisible"
        return "boundary"

    if spec.b < 0:
        segment = "attractive"
    elif spec.b > 0:
        segment = "repulsive"
    else:
        segment = "sewing"

    return {
        "left": visibility(-spec.alpha_L),
        "right": visibility(spec.alpha_R),
        "segment": segment,
    }


def equilibrium_reality(spec: SystemSpec) -> Dict[str, str]:
    """Real, boundary or virtual status of each focus."""

    def status(signed: float) -> str:
        if signed > 0:
            return "real"
        if signed < 0:
            return "virtual"
        return "boundary"

    return {"left": status(-spec.alpha_L), "right": status(spec.alpha_R)}


def parse_number(value: Any, field: str) -> Tuple[float, str]:
    """
    Parse a JSON number or a rational string such as "1638355/13106841".

    Returns:
        The double value and the verbatim text for provenance
    """
    if isinstance(value, bool) or value is None:
        raise ParameterFileError(f"expected a number, got {value!r}", field=field)
    if isinstance(value, (int, float)):
        if not math.isfinite(value):
            raise ParameterFileError("value must be finite", field=field)
        return float(value), repr(value)
    if isinstance(value, str):
        try:
            exact = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ParameterFileError(f"cannot parse {value!r}: {e}", field=field) from e
        return float(exact), value
    raise ParameterFileError(f"unsupported value {value!r}", field=field)


def parse_spec_document(document: Mapping[str, Any]) -> LoadedSpec:
    """
    Convert a parameter document into a canonical spec.

    Args:
        document: Mapping with a "form" key and the fields of that form

    Returns:
        Loaded spec with the form and the verbatim inputs
    """
    if not isinstance(document, Mapping):
        raise ParameterFileError("parameter document must be a JSON object")
    form = document.get("form", "canonical")
    if form not in FORM_FIELDS:
        raise ParameterFileError(
            f"unknown form {form!r}; expected one of {sorted(FORM_FIELDS)}", field="form"
        )

    values: Dict[str, float] = {}
    provenance: Dict[str, str] = {}
    for name in FORM_FIELDS[form]:
        if name not in document:
            raise ParameterFileError("missing field", field=name)
        values[name], provenance[name] = parse_number(document[name], name)

    unknown = set(document) - set(FORM_FIELDS[form]) - {"form", "name"}
    if unknown:
        logger.warning(f"Ignoring unknown fields in parameter document: {sorted(unknown)}")

    shift = 0.0
    if form == "canonical":
        spec = SystemSpec(**values)
    elif form == "lienard":
        spec = canonicalize(LienardSpec(**values))
    elif form == "equilibrium":
        centered, shift = center_equilibrium(values)
        spec = from_equilibrium(centered)
    else:
        spec = from_reduced(**values)

    return LoadedSpec(spec=spec, form=form, provenance=provenance, centering_shift=shift)


def load_spec(path: str | Path) -> LoadedSpec:
    """Read a JSON parameter file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParameterFileError(f"cannot read {path}: {e}") from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParameterFileError(e.msg, line=e.lineno) from e

    loaded = parse_spec_document(document)
    logger.info(f"Loaded {loaded.form} parameters from {path}")
    return loaded
