"""Polar/Cartesian bookkeeping.

Angles are principal arguments in (−π, π].  The derivative bridge converts
polar partials of a function u(r, θ) into Cartesian partials of
w(x, y) = u(√(x²+y²), atan2(y, x)) with the ordinary chain rule.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import RadiusError, SingularPointError


class PolarPoint(NamedTuple):
    r: np.ndarray
    theta: np.ndarray


class CartesianPoint(NamedTuple):
    x: np.ndarray
    y: np.ndarray


def canonical_angle(theta):
    """Map angles into (−π, π]."""
    t = np.asarray(theta, dtype=float)
    out = np.pi - np.mod(np.pi - t, 2.0 * np.pi)
    return out if out.ndim else float(out)


def to_polar(x, y=None) -> PolarPoint:
    """Cartesian → polar with the principal argument; the origin maps to (0, 0).

    Accepts ``(x, y)``, a :class:`CartesianPoint`, or a complex array.
    """
    if y is None:
        if isinstance(x, CartesianPoint):
            x, y = x
        else:
            z = np.asarray(x, dtype=complex)
            x, y = z.real, z.imag
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.hypot(x, y)
    # adding +0.0 turns a negative zero into +0.0, so (-1, -0.0) lands on +π
    theta = np.arctan2(y + 0.0, x)
    theta = np.where(r == 0, 0.0, theta)
    if r.ndim == 0:
        return PolarPoint(float(r), float(theta))
    return PolarPoint(r, theta)


def to_cartesian(r, theta) -> CartesianPoint:
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    x, y = r * np.cos(theta), r * np.sin(theta)
    if x.ndim == 0:
        return CartesianPoint(float(x), float(y))
    return CartesianPoint(x, y)


def normal_derivative_from_radial(u_r_value, at_radius, r1, r2, rtol=1e-12):
    """Outward normal derivative on an annulus boundary circle.

    The outer normal is +e_r on |z| = r2 and −e_r on |z| = r1.
    """
    if math.isclose(at_radius, r2, rel_tol=rtol, abs_tol=rtol):
        return u_r_value
    if math.isclose(at_radius, r1, rel_tol=rtol, abs_tol=rtol):
        return -np.asarray(u_r_value) if np.ndim(u_r_value) else -u_r_value
    raise RadiusError(f"radius {at_radius} is on neither boundary circle ({r1}, {r2})")


def angle_chord_constant(r1: float) -> float:
    """L with |θ₂ − θ₁| ≤ L |z₂ − z₁| for |z_i| ≥ r1 and |θ₂ − θ₁| ≤ π.

    |z₂ − z₁| ≥ 2 r1 sin(|Δθ|/2) ≥ (2/π) r1 |Δθ| by Jordan's inequality, so
    L = π / (2 r1).
    """
    if not r1 > 0:
        raise RadiusError(f"inner radius must be positive, got {r1}")
    return math.pi / (2.0 * r1)


def polar_chord_constant(r2: float) -> float:
    """Constant c in |z₂ − z₁| ≤ c·√(|ρ₂ − ρ₁|² + |θ₂ − θ₁|²) for z_i = ρ_i e^{iθ_i}, ρ_i ≤ r2.

    From |z₂ − z₁| ≤ |ρ₂ − ρ₁| + r2·|θ₂ − θ₁|.
    """
    return r2 + 1.0


def polar_cartesian_derivative_bridge(r, theta, u_r, u_t, u_rr, u_rt, u_tt) -> dict:
    """Cartesian partials of w from polar partials of u at (r, θ).

    Returns a dict with keys ``w_x, w_y, w_xx, w_xy, w_yy``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r == 0):
        raise SingularPointError("polar partials carry no information at r = 0")
    c, s = np.cos(theta), np.sin(theta)
    w_x = c * u_r - s * u_t / r
    w_y = s * u_r + c * u_t / r
    # second partials in the rotated (e_r, e_θ) frame, then rotate back
    p = u_rr
    q = (u_rt - (c * w_y - s * w_x)) / r
    t = (u_tt + r * (c * w_x + s * w_y)) / r**2
    w_xx = c * c * p - 2 * c * s * q + s * s * t
    w_xy = c * s * p + (c * c - s * s) * q - c * s * t
    w_yy = s * s * p + 2 * c * s * q + c * c * t
    return {"w_x": w_x, "w_y": w_y, "w_xx": w_xx, "w_xy": w_xy, "w_yy": w_yy}


def cartesian_to_polar_derivatives(r, theta, w_x, w_y, w_xx, w_xy, w_yy) -> dict:
    """Forward chain rule: polar partials of u(r, θ) = w(r cos θ, r sin θ)."""
    c, s = np.cos(theta), np.sin(theta)
    u_r = w_x * c + w_y * s
    u_t = r * (w_y * c - w_x * s)
    u_rr = w_xx * c * c + 2 * w_xy * c * s + w_yy * s * s
    u_rt = (w_y * c - w_x * s) + r * (c * c - s * s) * w_xy + r * c * s * (w_yy - w_xx)
    u_tt = r * r * (s * s * w_xx - 2 * s * c * w_xy + c * c * w_yy) - r * (c * w_x + s * w_y)
    return {"u_r": u_r, "u_t": u_t, "u_rr": u_rr, "u_rt": u_rt, "u_tt": u_tt}
