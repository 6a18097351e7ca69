import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from wellblock.core import ConfigError
from wellblock.radial_flow import (
    Annulus,
    darcy_drop,
    darcy_profile,
    forchheimer_drop,
    radial_ode_oracle,
    rate_from_drop_forchheimer,
    reconstruct_pw_darcy,
)

# 0.59444046263497...: ln(10)/2pi + 9/(4 pi^2), confirmed by Simpson quadrature
FORCH_EXAMPLE = 0.594440462634974

radius = st.floats(1e-3, 1e2)
coef = st.floats(1e-3, 1e3)


def test_darcy_drop_examples():
    assert darcy_drop(1.0, 2 * math.pi, Annulus(1.0, math.e)) == pytest.approx(1.0, abs=1e-15)
    assert darcy_drop(1.0, 1.0, Annulus(0.3, 0.3)) == 0.0
    assert darcy_drop(2.0, 1.0, Annulus(0.1, 1.0)) == pytest.approx(
        radial_ode_oracle(2.0, 1.0, 0.0, Annulus(0.1, 1.0)), abs=1e-10
    )


def test_annulus_rejects_zero_and_inverted():
    with pytest.raises(ConfigError, match="singular"):
        Annulus(0.0, 1.0)
    with pytest.raises(ConfigError):
        Annulus(2.0, 1.0)


def test_darcy_profile():
    assert darcy_profile(3.0, 2.0, 0.7, 0.7, 5.0) == 5.0
    assert darcy_profile(1.0, 2 * math.pi, math.e * 0.2, 0.2, 0.0) == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        darcy_profile(1.0, 1.0, 0.0, 1.0, 0.0)


@given(radius, radius, coef, st.floats(-1e3, 1e3))
def test_profile_difference_is_antisymmetric_drop(r1, r2, alpha, q):
    a = darcy_profile(q, alpha, r1, r2, 0.0)
    b = darcy_profile(q, alpha, r2, r1, 0.0)
    assert a == pytest.approx(-b, rel=1e-12, abs=1e-300)
    lo, hi = sorted((r1, r2))
    assert darcy_profile(q, alpha, hi, lo, 0.0) == pytest.approx(
        darcy_drop(q, alpha, Annulus(lo, hi)), rel=1e-14, abs=1e-300
    )


def test_profile_at_well_matches_drop():
    alpha, q, delta, r_w, p1 = 1.3, 0.7, 0.5, 0.01, 2.0
    p_w = darcy_profile(q, alpha, r_w, delta, p1)
    assert p1 - p_w == pytest.approx(darcy_drop(q, alpha, Annulus(r_w, delta)), rel=1e-14)


@given(st.floats(1e-3, 1e2), st.floats(1.0, 50.0), st.floats(1.0, 50.0), coef, st.floats(-1e3, 1e3))
def test_darcy_drop_additive(r1, f1, f2, alpha, q):
    r2, r3 = r1 * f1, r1 * f1 * f2
    whole = darcy_drop(q, alpha, Annulus(r1, r3))
    parts = darcy_drop(q, alpha, Annulus(r1, r2)) + darcy_drop(q, alpha, Annulus(r2, r3))
    assert parts == pytest.approx(whole, rel=1e-13, abs=1e-13)


def test_forchheimer_examples():
    ann = Annulus(0.1, 1.0)
    assert forchheimer_drop(1.0, 1.0, 0.0, ann) == darcy_drop(1.0, 1.0, ann)
    assert forchheimer_drop(5.0, 1.0, 2.0, Annulus(0.4, 0.4)) == 0.0
    assert forchheimer_drop(1.0, 1.0, 1.0, ann) == pytest.approx(FORCH_EXAMPLE, rel=1e-14)
    assert radial_ode_oracle(1.0, 1.0, 1.0, ann) == pytest.approx(FORCH_EXAMPLE, abs=1e-10)


def test_forchheimer_negative_rate_keeps_velocity_sign():
    ann = Annulus(0.1, 1.0)
    assert forchheimer_drop(-2.0, 1.0, 1.0, ann) == -forchheimer_drop(2.0, 1.0, 1.0, ann)


@settings(max_examples=200)
@given(st.floats(1e-3, 10), st.floats(1.01, 100), st.floats(1e-3, 1e3), coef, coef, st.floats(1.01, 3))
def test_forchheimer_monotone(r1, ratio, q, alpha, beta, bump):
    ann = Annulus(r1, r1 * ratio)
    base = forchheimer_drop(q, alpha, beta, ann)
    assert forchheimer_drop(q, alpha, 0.0, ann) < base
    assert forchheimer_drop(q * bump, alpha, beta, ann) > base
    assert forchheimer_drop(q, alpha, beta * bump, ann) > base
    assert forchheimer_drop(q, alpha, beta, Annulus(r1, r1 * ratio * bump)) > base
    assume(r1 * bump < r1 * ratio)
    assert forchheimer_drop(q, alpha, beta, Annulus(r1 * bump, r1 * ratio)) < base


def test_rate_inversion_examples():
    ann = Annulus(0.1, 1.0)
    assert rate_from_drop_forchheimer(0.0, 1.0, 1.0, ann) == 0.0
    b = math.log(10.0) / (2 * math.pi)
    assert rate_from_drop_forchheimer(b, 1.0, 0.0, ann) == pytest.approx(1.0, rel=1e-15)
    assert rate_from_drop_forchheimer(FORCH_EXAMPLE, 1.0, 1.0, ann) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ConfigError):
        rate_from_drop_forchheimer(-1.0, 1.0, 1.0, ann)


@settings(max_examples=300)
@given(st.floats(1e-6, 1e6), coef, st.floats(0, 1e3), st.floats(1e-3, 1.0), st.floats(1.01, 1e3))
def test_rate_roundtrip(q, alpha, beta, r1, ratio):
    ann = Annulus(r1, r1 * ratio)
    back = rate_from_drop_forchheimer(forchheimer_drop(q, alpha, beta, ann), alpha, beta, ann)
    assert back == pytest.approx(q, rel=1e-10)


def test_reconstruct_branches():
    r_w = 0.01
    edge = math.exp(math.pi / 2) * r_w
    # branch 1 formula at the edge and branch 2 just below it
    p_b1 = reconstruct_pw_darcy(3.0, 1.0, 1.0, edge * (1 + 1e-15), r_w)
    p_b2 = reconstruct_pw_darcy(3.0, 1.0, 1.0, edge, r_w)
    assert p_b1 == pytest.approx(3.0, abs=1e-12)
    assert p_b2 == pytest.approx(3.0, abs=1e-12)
    assert reconstruct_pw_darcy(3.0, 0.0, 1.0, 1.0, r_w) == 3.0
    # exp(-pi/2) = 0.2078795764 -> ln(20.78795764) = 3.0343738592
    assert reconstruct_pw_darcy(0.0, 1.0, 2 * math.pi, 1.0, r_w) == pytest.approx(
        -3.034373859193195, rel=1e-13
    )
    with pytest.raises(ConfigError):
        reconstruct_pw_darcy(0.0, 1.0, 1.0, 0.01, 0.02)


@given(st.floats(1.0001, 1.5), coef, st.floats(0.1, 10))
def test_branch_two_matches_direct_neighbour_profile(ratio, alpha, q):
    r_w = 0.01
    delta = r_w * ratio
    p0 = 1.0
    p1 = p0 + alpha * q / 4
    direct = darcy_profile(q, alpha, r_w, delta, p1)
    assert reconstruct_pw_darcy(p0, q, alpha, delta, r_w) == pytest.approx(direct, rel=1e-13)


def test_oracle_examples():
    assert radial_ode_oracle(1.0, 2 * math.pi, 0.0, Annulus(1.0, math.e), 1000) == pytest.approx(1.0, abs=1e-10)
    assert radial_ode_oracle(0.0, 1.0, 1.0, Annulus(0.1, 1.0)) == 0.0
    with pytest.raises(ConfigError):
        radial_ode_oracle(1.0, 1.0, 1.0, Annulus(0.1, 1.0), n_steps=10)


def test_oracle_fourth_order():
    ann = Annulus(0.1, 1.0)
    exact = forchheimer_drop(1.0, 1.0, 1.0, ann)
    errs = [abs(radial_ode_oracle(1.0, 1.0, 1.0, ann, n) - exact) for n in (100, 200, 400)]
    assert errs[0] / errs[1] >= 15
    assert errs[1] / errs[2] >= 15


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 1.0), st.floats(1.1, 20), st.floats(1e-2, 1e2), coef, st.floats(0, 1e2))
def test_closed_form_matches_oracle(r1, ratio, q, alpha, beta):
    ann = Annulus(r1, r1 * ratio)
    exact = forchheimer_drop(q, alpha, beta, ann)
    assert radial_ode_oracle(q, alpha, beta, ann, 10_000) == pytest.approx(exact, rel=1e-8)
