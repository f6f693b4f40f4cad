import json

import pytest
from hypothesis import given, strategies as st

from galpha import (
    DissipationSpec,
    check_stability_conditions,
    derive_high_order,
    derive_k1,
    from_alphas,
)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def test_derive_k1_no_dissipation():
    p = derive_k1(1.0)
    assert p.alpha_f == 0.5
    assert p.alpha[0] == 0.5  # alpha_m
    assert p.gamma[0] == 0.5
    assert p.beta[0] == 0.25


def test_derive_k1_max_dissipation():
    p = derive_k1(0.0)
    assert p.alpha_f == 1.0
    assert p.alpha[0] == 2.0
    assert p.gamma[0] == 1.5
    assert p.beta[0] == 1.0


def test_derive_k1_half():
    p = derive_k1(0.5)
    assert p.alpha_f == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert p.alpha[0] == pytest.approx(1.0, rel=1e-15)
    assert p.gamma[0] == pytest.approx(5.0 / 6.0, rel=1e-15)
    assert p.beta[0] == pytest.approx(4.0 / 9.0, rel=1e-15)


def test_derive_k1_rejects_out_of_range():
    with pytest.raises(ValueError):
        derive_k1(-0.01)
    with pytest.raises(ValueError):
        derive_k1(1.01)


@pytest.mark.parametrize(
    "rho, alpha, alpha_f, gamma, beta",
    [
        ((0.0, 0.0), (2.0, 2.0), 1.0, (1.5, 1.5), (1.0, 1.0)),
        ((1.0, 1.0), (1.0, 0.5), 0.5, (0.5, 0.5), (0.25, 0.25)),
    ],
)
def test_derive_k2_endpoints(rho, alpha, alpha_f, gamma, beta):
    p = derive_high_order(DissipationSpec(2, rho))
    assert p.alpha == pytest.approx(alpha, rel=1e-15)
    assert p.alpha_f == pytest.approx(alpha_f, rel=1e-15)
    assert p.gamma == pytest.approx(gamma, rel=1e-15)
    assert p.beta == pytest.approx(beta, rel=1e-15)


def test_derive_k3_half():
    p = derive_high_order(DissipationSpec(3, (0.5, 0.5, 0.5)))
    assert p.alpha == pytest.approx((4 / 3, 4 / 3, 1.0), rel=1e-15)
    assert p.alpha_f == pytest.approx(2 / 3, rel=1e-15)
    assert p.gamma == pytest.approx((5 / 6, 5 / 6, 5 / 6), rel=1e-15)
    assert p.beta == pytest.approx((4 / 9, 4 / 9, 4 / 9), rel=1e-15)


def test_derive_high_order_rejects_k1():
    with pytest.raises(ValueError):
        derive_high_order(DissipationSpec(1, (0.5,)))


def test_spec_validation():
    with pytest.raises(ValueError):
        DissipationSpec(0, ())
    with pytest.raises(ValueError):
        DissipationSpec(2, (0.5,))
    with pytest.raises(ValueError):
        DissipationSpec(2, (0.5, 1.5))


@given(st.integers(min_value=2, max_value=5), st.data())
def test_algebraic_invariants_hold(k, data):
    rho = tuple(data.draw(unit) for _ in range(k))
    p = derive_high_order(DissipationSpec(k, rho))
    for i in range(k - 1):
        assert p.gamma[i] == pytest.approx(p.alpha[i] - 0.5, rel=1e-15, abs=1e-15)
    assert p.gamma[-1] == pytest.approx(
        0.5 - p.alpha_f + p.alpha[-1], rel=1e-15, abs=1e-15
    )
    for b, g in zip(p.beta, p.gamma):
        assert b == pytest.approx(((2 * g + 1) / 4) ** 2, rel=1e-15, abs=1e-15)


@given(unit)
def test_k1_invariants_hold(rho):
    p = derive_k1(rho)
    am, af = p.alpha[0], p.alpha_f
    assert p.gamma[0] == pytest.approx(0.5 + am - af, rel=1e-15)
    assert p.beta[0] == pytest.approx(0.25 * (1 + am - af) ** 2, rel=1e-15)


@given(st.integers(min_value=1, max_value=5), st.data())
def test_rho_parametrization_maps_into_stable_region(k, data):
    rho = tuple(data.draw(unit) for _ in range(k))
    p = derive_k1(rho[0]) if k == 1 else derive_high_order(DissipationSpec(k, rho))
    report = check_stability_conditions(p)
    assert report.passed, report.violations


def test_stability_conditions_pass_example():
    p = from_alphas(2, (2.0, 1.0), 0.6)
    assert check_stability_conditions(p).passed


def test_stability_conditions_alpha1_violation():
    p = from_alphas(2, (0.9, 1.0), 0.6)
    report = check_stability_conditions(p)
    assert not report.passed
    assert report.violations == ("alpha_1 >= 1",)


def test_stability_conditions_alpha_f_violation():
    p = from_alphas(2, (2.0, 0.6), 0.7)
    report = check_stability_conditions(p)
    assert not report.passed
    assert report.violations == ("alpha_f <= alpha_2",)


def test_json_serialization_round_trip():
    p = derive_high_order(DissipationSpec(2, (0.5, 0.5)))
    data = json.loads(p.to_json())
    assert set(data) == {"k", "rho", "alpha", "alpha_f", "beta", "gamma"}
    assert data["k"] == 2
    assert data["rho"] == [0.5, 0.5]
    assert data["alpha"] == [1.3333333333333333, 1.0]
    assert data["alpha_f"] == 0.6666666666666666
