"""Test cases for the parametrizations and their conversions."""

import logging
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from pwl_infinity.exceptions import NonFocusZone, ParameterFileError
from pwl_infinity.models import EquilibriumSpec, LienardSpec, Symmetry, SystemSpec
from pwl_infinity.params import (
    apply_symmetry,
    canonicalize,
    center_equilibrium,
    centering_shift,
    equilibrium_reality,
    from_equilibrium,
    from_reduced,
    is_continuous,
    load_spec,
    parse_number,
    parse_spec_document,
    tangency_visibility,
    to_equilibrium,
    to_lienard,
    to_reduced,
)

finite = st.floats(min_value=-5, max_value=5, allow_nan=False, allow_infinity=False)
damping = st.floats(min_value=-2, max_value=2, allow_nan=False, allow_infinity=False)
frequency = st.floats(min_value=0.1, max_value=10, allow_nan=False, allow_infinity=False)


def specs():
    return st.builds(
        SystemSpec, gamma_L=damping, gamma_R=damping, alpha_L=finite, alpha_R=finite, b=finite
    )


def assert_specs_close(actual: SystemSpec, expected: SystemSpec, tol: float = 1e-12):
    for name in ("gamma_L", "gamma_R", "alpha_L", "alpha_R", "b"):
        assert getattr(actual, name) == pytest.approx(getattr(expected, name), rel=tol, abs=tol)


def test_canonicalize_normal_form():
    """A Lienard spec already in normal form passes through."""
    spec = canonicalize(LienardSpec(T_L=0, D_L=1, a_L=0, T_R=0, D_R=1, a_R=0, b=0))
    assert spec == SystemSpec(gamma_L=0, gamma_R=0, alpha_L=0, alpha_R=0, b=0)


def test_canonicalize_damping_ratio():
    """T = -1/4 and D = 1 + 1/64 give omega = 1 and gamma = -1/8."""
    spec = canonicalize(
        LienardSpec(T_L=-0.25, D_L=1 + 1 / 64, a_L=0.5, T_R=0, D_R=4, a_R=1, b=0.3)
    )
    assert spec.gamma_L == pytest.approx(-1 / 8, rel=1e-14)
    assert spec.alpha_L == pytest.approx(0.5, rel=1e-14)
    assert spec.gamma_R == 0
    assert spec.alpha_R == pytest.approx(0.5, rel=1e-14)
    assert spec.b == 0.3


def test_canonicalize_rejects_non_focus_zone():
    """T^2 - 4D = 0 is not a focus."""
    with pytest.raises(NonFocusZone) as excinfo:
        canonicalize(LienardSpec(T_L=2, D_L=1, a_L=0, T_R=0, D_R=1, a_R=0, b=0))
    assert excinfo.value.zone == "L"


def test_canonicalize_reports_right_zone():
    with pytest.raises(NonFocusZone) as excinfo:
        canonicalize(LienardSpec(T_L=0, D_L=1, a_L=0, T_R=3, D_R=1, a_R=0, b=0))
    assert excinfo.value.zone == "R"
    assert excinfo.value.discriminant == 5


@given(spec=specs(), omega_L=frequency, omega_R=frequency)
def test_lienard_round_trip(spec, omega_L, omega_R):
    """Canonicalizing a Lienard spec built from a canonical one recovers it."""
    assert_specs_close(canonicalize(to_lienard(spec, omega_L, omega_R)), spec, tol=1e-12)


def test_to_lienard_rejects_nonpositive_frequency(critical):
    with pytest.raises(ValueError):
        to_lienard(critical, omega_L=0.0)


def test_to_equilibrium_critical_point():
    """The critical example has both foci at (1, 0)."""
    spec = SystemSpec(gamma_L=-1 / 8, gamma_R=1 / 8, alpha_L=65 / 64, alpha_R=65 / 64, b=-0.25)
    eq = to_equilibrium(spec)
    assert eq.x_L == pytest.approx(1.0, rel=1e-15)
    assert eq.x_R == pytest.approx(1.0, rel=1e-15)
    assert eq.y_L == pytest.approx(0.0, abs=1e-15)
    assert eq.y_R == pytest.approx(0.0, abs=1e-15)


def test_to_equilibrium_zero_and_simple():
    zero = SystemSpec(gamma_L=0, gamma_R=0, alpha_L=0, alpha_R=0, b=0)
    assert to_equilibrium(zero) == EquilibriumSpec(
        gamma_L=0, gamma_R=0, x_L=0, x_R=0, y_L=0, y_R=0, b=0
    )
    eq = to_equilibrium(SystemSpec(gamma_L=0, gamma_R=0.5, alpha_L=2, alpha_R=1, b=0))
    assert eq.x_L == 2
    assert eq.y_L == 0


def test_from_equilibrium_critical_point(critical):
    spec = from_equilibrium(to_equilibrium(critical))
    assert_specs_close(
        spec,
        SystemSpec(gamma_L=-1 / 8, gamma_R=1 / 8, alpha_L=65 / 64, alpha_R=65 / 64, b=-0.25),
        tol=1e-14,
    )


@given(spec=specs())
def test_equilibrium_round_trip(spec):
    eq = to_equilibrium(spec)
    assert abs(eq.left_b - eq.right_b) <= 1e-12 * (1 + abs(eq.b) + abs(eq.y_L) + abs(eq.y_R))
    assert_specs_close(from_equilibrium(eq), spec, tol=1e-12)


def test_center_equilibrium_removes_shift(perturbed, caplog):
    """A common y-translation is detected, reported and removed."""
    eq = to_equilibrium(perturbed)
    shift = 0.75
    values = eq.model_dump()
    values.update(y_L=eq.y_L + shift, y_R=eq.y_R + shift)

    assert centering_shift(values) == pytest.approx(shift, rel=1e-12)
    with caplog.at_level(logging.WARNING, logger="pwl_infinity.params"):
        centered, applied = center_equilibrium(values)
    assert "re-centered" in caplog.text
    assert applied == pytest.approx(shift, rel=1e-12)
    assert_specs_close(from_equilibrium(centered), perturbed, tol=1e-12)


def test_center_equilibrium_rejects_declared_b(critical):
    values = to_equilibrium(critical).model_dump()
    values["b"] = 0.9
    with pytest.raises(ParameterFileError) as excinfo:
        center_equilibrium(values)
    assert excinfo.value.field == "b"


@pytest.mark.parametrize(
    "fields",
    [
        {"y_L": 5.0, "y_R": -3.0, "b": 7.0},
        {"y_L": 0.25, "y_R": -0.25, "b": 0.0},
    ],
)
def test_equilibrium_spec_enforces_b(fields):
    with pytest.raises(ValidationError):
        EquilibriumSpec(gamma_L=0.0, gamma_R=0.0, x_L=0.0, x_R=0.0, **fields)


def test_equilibrium_document_reports_shift():
    document = {
        "form": "equilibrium",
        "gamma_L": "-1/8",
        "gamma_R": "1/8",
        "x_L": 1,
        "x_R": 1,
        "y_L": 2,
        "y_R": 2,
        "b": "-1/4",
    }
    loaded = parse_spec_document(document)
    assert loaded.centering_shift == 2.0
    assert loaded.spec.b == -0.25

    document["b"] = "9/10"
    with pytest.raises(ParameterFileError):
        parse_spec_document(document)


def test_reduced_round_trip(perturbed):
    reduced = to_reduced(perturbed)
    assert_specs_close(from_reduced(**reduced), perturbed, tol=1e-14)
    assert reduced["x_L"] == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize(
    "spec, expected",
    [
        (SystemSpec(gamma_L=1, gamma_R=-1, alpha_L=3, alpha_R=3, b=0), True),
        (SystemSpec(gamma_L=0, gamma_R=0, alpha_L=1, alpha_R=2, b=0), False),
        (from_reduced(gamma_L=-1 / 8, x_L=1, b=-0.25, gamma_R=1 / 8, x_R=1), False),
    ],
)
def test_is_continuous(spec, expected):
    assert is_continuous(spec) is expected


def test_x_flip_of_critical_point(critical):
    flipped = apply_symmetry(to_equilibrium(critical), Symmetry.x_flip)
    assert flipped.gamma_L == pytest.approx(-1 / 8)
    assert flipped.x_L == pytest.approx(-1.0)
    assert flipped.b == pytest.approx(0.25)
    assert flipped.gamma_R == pytest.approx(1 / 8)
    assert flipped.x_R == pytest.approx(-1.0)
    assert flipped.left_b == pytest.approx(flipped.right_b, abs=1e-15)


@given(spec=specs())
def test_x_flip_is_an_involution(spec):
    eq = to_equilibrium(spec)
    twice = apply_symmetry(apply_symmetry(eq, "x_flip"), "x_flip")
    for name in ("gamma_L", "gamma_R", "x_L", "x_R", "b"):
        assert getattr(twice, name) == getattr(eq, name)


def test_y_flip_fixes_type_a_center(center_a):
    eq = to_equilibrium(center_a)
    assert apply_symmetry(eq, Symmetry.y_flip) == eq


def test_both_swaps_zones(perturbed):
    eq = to_equilibrium(perturbed)
    swapped = apply_symmetry(eq, Symmetry.both)
    assert (swapped.gamma_L, swapped.x_L, swapped.b) == (eq.gamma_R, eq.x_R, eq.b)
    assert (swapped.gamma_R, swapped.x_R) == (eq.gamma_L, eq.x_L)


def test_tangency_visibility_and_reality():
    spec = from_reduced(gamma_L=0.1, x_L=-1.0, b=-0.5, gamma_R=0.2, x_R=-2.0)
    assert tangency_visibility(spec) == {
        "left": "visible",
        "right": "invisible",
        "segment": "attractive",
    }
    assert equilibrium_reality(spec) == {"left": "real", "right": "virtual"}

    sewing = from_reduced(gamma_L=0.0, x_L=0.0, b=0.0, gamma_R=0.0, x_R=1.0)
    assert tangency_visibility(sewing)["segment"] == "sewing"
    assert equilibrium_reality(sewing) == {"left": "boundary", "right": "real"}


@pytest.mark.parametrize(
    "value, expected",
    [("-1/8", -0.125), ("1638355/13106841", 1638355 / 13106841), (3, 3.0), (" 0.5 ", 0.5)],
)
def test_parse_number(value, expected):
    number, text = parse_number(value, "gamma_L")
    assert number == expected
    assert text == (value if isinstance(value, str) else repr(value))


@pytest.mark.parametrize("value", ["1/0", "one", None, True, [1], math.inf])
def test_parse_number_rejects(value):
    with pytest.raises(ParameterFileError) as excinfo:
        parse_number(value, "b")
    assert excinfo.value.field == "b"


def test_parse_document_forms(critical, critical_document):
    reduced = parse_spec_document(critical_document)
    assert reduced.form == "reduced"
    assert reduced.provenance["gamma_L"] == "-1/8"
    assert reduced.spec == critical

    canonical = parse_spec_document(
        {"gamma_L": "-1/8", "gamma_R": "1/8", "alpha_L": "65/64", "alpha_R": "65/64", "b": "-1/4"}
    )
    assert canonical.form == "canonical"
    assert_specs_close(canonical.spec, critical, tol=1e-15)

    equilibrium = parse_spec_document(
        {
            "form": "equilibrium",
            "gamma_L": "-1/8",
            "gamma_R": "1/8",
            "x_L": 1,
            "x_R": 1,
            "y_L": 0,
            "y_R": 0,
            "b": "-1/4",
        }
    )
    assert_specs_close(equilibrium.spec, critical, tol=1e-15)

    lienard = parse_spec_document(
        {
            "form": "lienard",
            "T_L": "-1/4",
            "D_L": "65/64",
            "a_L": "65/64",
            "T_R": "1/4",
            "D_R": "65/64",
            "a_R": "65/64",
            "b": "-1/4",
        }
    )
    assert_specs_close(lienard.spec, critical, tol=1e-14)


def test_parse_document_errors():
    with pytest.raises(ParameterFileError, match="unknown form"):
        parse_spec_document({"form": "polar"})
    with pytest.raises(ParameterFileError) as excinfo:
        parse_spec_document({"form": "reduced", "gamma_L": 0, "x_L": 0, "b": 0, "gamma_R": 0})
    assert excinfo.value.field == "x_R"
    with pytest.raises(ParameterFileError):
        parse_spec_document([1, 2, 3])


def test_load_spec(write_spec, perturbed, perturbed_document):
    loaded = load_spec(write_spec(perturbed_document))
    assert loaded.spec == perturbed
    assert loaded.provenance["gamma_R"] == "1638355/13106841"


def test_load_spec_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "form": "reduced",\n  "gamma_L": \n}\n', encoding="utf-8")
    with pytest.raises(ParameterFileError) as excinfo:
        load_spec(path)
    assert excinfo.value.line == 4


def test_load_spec_missing_file(tmp_path):
    with pytest.raises(ParameterFileError, match="cannot read"):
        load_spec(tmp_path / "missing.json")
