"""Test cases for the classification of the orbit at infinity."""

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pwl_infinity.classify import classify_infinity
from pwl_infinity.exceptions import AmbiguousNearBoundary, InputError
from pwl_infinity.flow import displacement_numeric
from pwl_infinity.models import CenterType, Kind, Stability, SystemSpec
from pwl_infinity.params import from_reduced
from pwl_infinity.series import displacement_series


def test_hyperbolic(hyperbolic):
    verdict = classify_infinity(hyperbolic)
    assert verdict.kind is Kind.hyperbolic
    assert verdict.stability is Stability.stable
    assert verdict.order is None


def test_hyperbolic_unstable():
    spec = from_reduced(gamma_L=-0.5, x_L=1.0, b=0.3, gamma_R=-0.2, x_R=0.0)
    verdict = classify_infinity(spec)
    assert (verdict.kind, verdict.stability) == (Kind.hyperbolic, Stability.unstable)


def test_critical_point_is_stable_third_order_focus(critical):
    verdict = classify_infinity(critical)
    assert verdict.kind is Kind.weak_focus
    assert verdict.order == 3
    assert verdict.stability is Stability.stable


@pytest.mark.parametrize(
    "reduced, order, stability",
    [
        ((-0.1, 1.0, 0.1, 0.1, 1.0), 1, Stability.stable),
        ((0.1, 1.0, -0.1, -0.1, 1.0), 1, Stability.unstable),
        ((-0.1, 1.0, -0.3, 0.1, 2.0), 2, Stability.stable),
        ((0.1, 1.0, 0.3, -0.1, 2.0), 2, Stability.unstable),
        ((0.1, 1.0, 0.2, -0.1, 1.0), 3, Stability.unstable),
    ],
)
def test_weak_focus_orders(reduced, order, stability):
    verdict = classify_infinity(from_reduced(*reduced))
    assert verdict.kind is Kind.weak_focus
    assert verdict.order == order
    assert verdict.stability is stability


@pytest.mark.parametrize(
    "family, center_type",
    [("center_a", CenterType.a), ("center_b", CenterType.b), ("center_c", CenterType.c)],
)
def test_center_families(family, center_type, request):
    verdict = classify_infinity(request.getfixturevalue(family))
    assert verdict.kind is Kind.center
    assert verdict.stability is Stability.non_isolated
    assert verdict.center_type is center_type
    assert verdict.order is None


def test_perturbed_center_is_not_a_center(center_b):
    spec = center_b.model_copy(update={"gamma_R": center_b.gamma_R + 1e-3})
    verdict = classify_infinity(spec)
    assert verdict.kind is Kind.hyperbolic
    assert verdict.stability is Stability.stable


def test_witness_reports_combinations(critical):
    witness = classify_infinity(critical).witness
    assert set(witness) == {"combinations", "equilibria", "tangencies", "continuous"}
    assert witness["combinations"]["gamma_L+gamma_R"] == pytest.approx(0.0, abs=1e-15)
    assert witness["combinations"]["x_L+x_R"] == pytest.approx(2.0, rel=1e-14)
    assert witness["continuous"] is False


def test_ambiguous_damping_sum():
    spec = SystemSpec(gamma_L=0.1, gamma_R=-0.1 + 5e-11, alpha_L=1.0, alpha_R=1.0, b=0.0)
    with pytest.raises(AmbiguousNearBoundary) as excinfo:
        classify_infinity(spec)
    assert excinfo.value.quantity == "gamma_L+gamma_R"
    assert excinfo.value.upper == pytest.approx(1e-10)

    verdict = classify_infinity(spec, tol=1e-12)
    assert verdict.kind is Kind.hyperbolic


def test_ambiguous_ordinate_gap():
    spec = from_reduced(gamma_L=0.1, x_L=1.0, b=0.2 + 2.5e-11, gamma_R=-0.1, x_R=1.0)
    with pytest.raises(AmbiguousNearBoundary) as excinfo:
        classify_infinity(spec)
    assert excinfo.value.quantity == "y_R-y_L"


@pytest.mark.parametrize("tol", [0.0, -1e-9])
def test_tolerance_must_be_positive(critical, tol):
    with pytest.raises(InputError):
        classify_infinity(critical, tol=tol)


damping = st.floats(min_value=0.05, max_value=0.5).flatmap(lambda g: st.sampled_from([g, -g]))
position = st.floats(min_value=-2, max_value=2)
offsets = st.floats(min_value=-2, max_value=2)
right_damping = st.floats(min_value=-0.5, max_value=0.5)


def assert_first_nonvanishing_coefficient(stratum, gamma, gamma_R, x_L, x_R, b):
    """Order k means Delta_1..Delta_k vanish and the sign of Delta_{k+1} is the stability."""
    if stratum == 0:
        assume(abs(gamma + gamma_R) >= 0.05)
        spec = from_reduced(gamma, x_L, b, gamma_R, x_R)
    elif stratum == 1:
        spec = from_reduced(gamma, x_L, b, -gamma, x_R)
        assume(abs(2 * b - gamma * (x_L + x_R) * 2) >= 0.05)
    elif stratum == 2:
        assume(abs(x_L**2 - x_R**2) >= 0.05)
        spec = from_reduced(gamma, x_L, gamma * (x_L + x_R), -gamma, x_R)
    else:
        assume(abs(x_L) >= 0.1)
        spec = from_reduced(gamma, x_L, 2 * gamma * x_L, -gamma, x_L)

    verdict = classify_infinity(spec)
    deltas = displacement_series(spec, 4).deltas
    leading = 0 if verdict.kind is Kind.hyperbolic else verdict.order
    assert leading == stratum

    for k in range(leading):
        assert deltas[k] == pytest.approx(0.0, abs=1e-10)
    expected = Stability.stable if deltas[leading] > 0 else Stability.unstable
    assert verdict.stability is expected

    # Where the leading term dominates at u0 = 1e-3 the numeric map agrees in sign
    u0 = 1e-3
    higher = displacement_series(spec, 6).deltas
    lead = abs(deltas[leading]) * u0 ** (leading + 1)
    rest = sum(abs(d) * u0 ** (k + 1) for k, d in enumerate(higher) if k > leading)
    if lead > 10 * rest and lead > 1e-14:
        assert (displacement_numeric(spec, u0) > 0) == (deltas[leading] > 0)


@settings(max_examples=200, deadline=None)
@given(
    stratum=st.integers(min_value=0, max_value=3),
    gamma=damping,
    gamma_R=right_damping,
    x_L=position,
    x_R=position,
    b=offsets,
)
def test_verdict_matches_first_nonvanishing_coefficient(stratum, gamma, gamma_R, x_L, x_R, b):
    assert_first_nonvanishing_coefficient(stratum, gamma, gamma_R, x_L, x_R, b)


@pytest.mark.slow
@pytest.mark.parametrize("stratum", [0, 1, 2, 3])
@settings(max_examples=1000, deadline=None)
@given(gamma=damping, gamma_R=right_damping, x_L=position, x_R=position, b=offsets)
def test_sign_rules_per_branch(stratum, gamma, gamma_R, x_L, x_R, b):
    assert_first_nonvanishing_coefficient(stratum, gamma, gamma_R, x_L, x_R, b)
