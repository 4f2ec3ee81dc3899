import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from harmonic_duality.errors import RadiusError, SingularPointError
from harmonic_duality.geometry import (
    CartesianPoint,
    angle_chord_constant,
    canonical_angle,
    cartesian_to_polar_derivatives,
    normal_derivative_from_radial,
    polar_cartesian_derivative_bridge,
    polar_chord_constant,
    to_cartesian,
    to_polar,
)


@pytest.mark.parametrize(
    "x, y, r, theta",
    [(1, 0, 1, 0), (-1, 0, 1, math.pi), (0, -2, 2, -math.pi / 2), (-1, -0.0, 1, math.pi), (0, 0, 0, 0)],
)
def test_to_polar(x, y, r, theta):
    p = to_polar(x, y)
    assert p.r == pytest.approx(r) and p.theta == pytest.approx(theta)


def test_to_polar_accepts_complex_and_named_tuple():
    z = np.array([1j, -1 - 1j])
    p = to_polar(z)
    q = to_polar(CartesianPoint(z.real, z.imag))
    assert np.allclose(p.theta, [math.pi / 2, -3 * math.pi / 4])
    assert np.array_equal(p.r, q.r)


@given(st.floats(-50, 50))
def test_canonical_angle_range(t):
    c = canonical_angle(t)
    assert -math.pi < c <= math.pi
    assert math.cos(c) == pytest.approx(math.cos(t), abs=1e-9)


def test_cartesian_roundtrip():
    rng = np.random.default_rng(1)
    r = rng.uniform(0.1, 5, 50)
    t = rng.uniform(-3.1, 3.1, 50)
    p = to_polar(*to_cartesian(r, t))
    assert np.allclose(p.r, r) and np.allclose(p.theta, t)


def test_normal_derivative_signs():
    assert normal_derivative_from_radial(3.0, 2.0, 0.5, 2.0) == 3.0
    assert normal_derivative_from_radial(3.0, 0.5, 0.5, 2.0) == -3.0
    assert normal_derivative_from_radial(0.0, 0.5, 0.5, 2.0) == 0.0
    with pytest.raises(RadiusError):
        normal_derivative_from_radial(1.0, 1.0, 0.5, 2.0)


@pytest.mark.parametrize("r1, L", [(1.0, math.pi / 2), (0.5, math.pi), (2.0, math.pi / 4)])
def test_angle_chord_constant_values(r1, L):
    assert angle_chord_constant(r1) == pytest.approx(L)


def test_angle_chord_constant_rejects_zero():
    with pytest.raises(RadiusError):
        angle_chord_constant(0.0)


def test_polar_chord_inequality_sampled():
    rng = np.random.default_rng(2)
    r2 = 3.0
    c = polar_chord_constant(r2)
    rho = rng.uniform(0, r2, (2, 20000))
    th = rng.uniform(-math.pi, math.pi, (2, 20000))
    z = rho * np.exp(1j * th)
    lhs = np.abs(z[1] - z[0])
    rhs = c * np.hypot(rho[1] - rho[0], th[1] - th[0])
    assert np.all(lhs <= rhs + 1e-12)


def test_bridge_for_x():
    # u = r cos θ is w = x
    r, t = 1.7, 0.6
    d = polar_cartesian_derivative_bridge(r, t, math.cos(t), -r * math.sin(t), 0.0, -math.sin(t), -r * math.cos(t))
    assert d["w_x"] == pytest.approx(1) and d["w_y"] == pytest.approx(0, abs=1e-15)
    for key in ("w_xx", "w_xy", "w_yy"):
        assert d[key] == pytest.approx(0, abs=1e-15)


def test_bridge_for_log_r():
    r, t = 0.8, -2.0
    d = polar_cartesian_derivative_bridge(r, t, 1 / r, 0.0, -1 / r**2, 0.0, 0.0)
    assert d["w_x"] == pytest.approx(math.cos(t) / r)
    assert d["w_y"] == pytest.approx(math.sin(t) / r)
    # second partials of log|z|: (y² − x²)/|z|⁴ and −2xy/|z|⁴
    x, y = r * math.cos(t), r * math.sin(t)
    assert d["w_xx"] == pytest.approx((y * y - x * x) / r**4)
    assert d["w_xy"] == pytest.approx(-2 * x * y / r**4)


def test_bridge_inverts_forward_chain_rule():
    rng = np.random.default_rng(3)
    for _ in range(100):
        r, t = rng.uniform(0.2, 3), rng.uniform(-math.pi, math.pi)
        polar = dict(zip(("u_r", "u_t", "u_rr", "u_rt", "u_tt"), rng.normal(size=5)))
        cart = polar_cartesian_derivative_bridge(r, t, *polar.values())
        back = cartesian_to_polar_derivatives(r, t, *cart.values())
        for k, v in polar.items():
            assert back[k] == pytest.approx(v, abs=1e-12)


def test_bridge_refuses_origin():
    with pytest.raises(SingularPointError):
        polar_cartesian_derivative_bridge(0.0, 0.0, 1, 0, 0, 0, 0)
