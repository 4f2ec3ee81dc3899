"""Neumann solutions built from Dirichlet solutions, and back.

On an annulus r1 < r < r2 put s = √(r1 r2).  If u solves the Dirichlet
problem with data r·ϕ on both circles, then

    U(r, θ) = ∫_{s/r}^{1} u(rρ, θ)/ρ dρ + ∫₀^θ (𝒞 − s ∫₀^t u_r(s, τ) dτ) dt,
    𝒞 = (s / 2π) ∫₀^{2π} ∫₀^t u_r(s, τ) dτ dt,

solves the Neumann problem U_r = ϕ with U(s, 0) = 0, and conversely
u = r U_r.  Mode by mode everything integrates in closed form:

    A           ↦ A log(r/s)
    C r^k cos   ↦ (C/k) r^k cos,      D r^-k cos ↦ −(D/k) r^-k cos
    E r^k sin   ↦ (E/k) r^k sin,      G r^-k sin ↦ −(G/k) r^-k sin

plus a constant fixing U(s, 0) = 0.  The quadrature form above is kept in
:mod:`harmonic_duality.verify` as an independent oracle.

Note the placement of s: it multiplies the inner integral only.  Putting it
in front of the outer θ-integral (as one might read the formula for the
scaled annulus 1/a < r < a, where s = 1) leaves an angular term that is not
2π-periodic once s ≠ 1; the general case is obtained by solving on the scaled
annulus and substituting R = r/s, which gives the form above.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .boundary import (
    DEFAULT_TOL,
    TWO_PI,
    AnnulusBoundaryData,
    PeriodicFunction,
    check_neumann_compatibility,
    check_punctured_neumann_data,
    fourier_analyze,
)
from .dirichlet import (
    AnnulusHarmonicSeries,
    _times_power,
    harmonic_conjugate_on_cut,
    require_zero_log,
    solve_dirichlet_annulus,
    solve_dirichlet_disk,
)
from .errors import (
    CompatibilityError,
    DataMismatchError,
    NonZeroMeanError,
    NumericalError,
    PreconditionError,
    RadiusError,
    SchemaError,
    SymmetryError,
)

log = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class NeumannSolution:
    """A Neumann potential together with its normalization and 𝒞."""

    field: AnnulusHarmonicSeries
    normalization: tuple = (1.0, 0.0)
    C_const: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def __call__(self, r, theta):
        return self.field(r, theta)

    def derivative(self, r, theta, nr=0, nt=0, check=True):
        return self.field.derivative(r, theta, nr, nt, check)

    def gradient(self, z):
        return self.field.gradient(z)

    @property
    def r1(self):
        return self.field.r1

    @property
    def r2(self):
        return self.field.r2

    def to_dict(self) -> dict:
        d = self.field.to_dict()
        d["C"] = float(self.C_const)
        d["normalization"] = [float(x) for x in self.normalization]
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "NeumannSolution":
        try:
            norm = tuple(float(x) for x in d.get("normalization", (1.0, 0.0)))
            return cls(AnnulusHarmonicSeries.from_dict(d), norm, float(d.get("C", 0.0)))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad Neumann solution JSON: {exc}") from exc


def potential_from_dirichlet(u: AnnulusHarmonicSeries, tol: float = DEFAULT_TOL) -> AnnulusHarmonicSeries:
    """Closed-form U with r·U_r = u and U(√(r1 r2), 0) = 0.

    Requires a vanishing log coefficient in ``u``.  For a disk series the
    normalization point is the centre.
    """
    require_zero_log(u, tol)
    k = np.arange(1, u.K + 1)
    if u.is_disk:
        return AnnulusHarmonicSeries(0.0, u.r2, 0.0, 0.0, u.C / k, (), u.E / k, ())
    s = u.s
    ls = math.log(s)
    const = -u.A * ls - float(((_times_power(u.C, ls, k) - _times_power(u.D, -ls, k)) / k).sum())
    return AnnulusHarmonicSeries(u.r1, u.r2, const, u.A, u.C / k, -u.D / k, u.E / k, -u.G / k)


def compute_C(u: AnnulusHarmonicSeries, tol: float = DEFAULT_TOL) -> float:
    """𝒞 = (s/2π)∫₀^{2π}∫₀^t u_r(s, τ) dτ dt in closed form.

    With ẽ_k the sin kτ coefficient of u_r(s, ·), the inner integral has mean
    Σ ẽ_k / k, so 𝒞 = s Σ ẽ_k / k = Σ (E_k s^k − G_k s^−k).
    """
    require_zero_log(u, tol)
    if u.is_disk or u.K == 0:
        return 0.0
    s = u.s
    k = np.arange(1, u.K + 1)
    ls = math.log(s)
    return float((_times_power(u.E, ls, k) - _times_power(u.G, -ls, k)).sum())


def compute_C_via_conjugate(u: AnnulusHarmonicSeries, n: int | None = None, tol: float = DEFAULT_TOL) -> float:
    """Mean over the circle |z| = √(r1 r2), θ ∈ (−π, π], of the conjugate v₀.

    The mean is taken with the trapezoidal rule on ``n`` nodes, exact for
    trigonometric polynomials of degree < n.
    """
    v = harmonic_conjugate_on_cut(u, tol)
    if n is None:
        n = max(64, 4 * u.K + 8)
    theta = -math.pi + TWO_PI * np.arange(1, n + 1) / n
    return float(np.mean(v(np.full(n, u.s), theta)))


def _neumann_inputs(data: AnnulusBoundaryData, tol: float, K: int | None):
    if data.kind != "neumann":
        raise PreconditionError("expected Neumann data (kind='neumann')")
    if data.r1 <= 0:
        raise RadiusError("annulus Neumann problems need r1 > 0")
    report = check_neumann_compatibility(data, tol)
    if not report.passed:
        raise CompatibilityError(
            f"Neumann data carry net flux: defect {report.defect:.6g}", defect=report.defect
        )
    return data.coefficient_form(K)


def _weighted_dirichlet(data: AnnulusBoundaryData, r1: float, r2: float) -> AnnulusBoundaryData:
    return AnnulusBoundaryData(r1, r2, data.r1 * data.inner, data.r2 * data.outer, "dirichlet")


def _zero_log(u: AnnulusHarmonicSeries, tol: float) -> AnnulusHarmonicSeries:
    require_zero_log(u, tol)
    return AnnulusHarmonicSeries(u.r1, u.r2, u.A, 0.0, u.C, u.D, u.E, u.G)


def neumann_from_dirichlet_annulus(
    data: AnnulusBoundaryData, tol: float = DEFAULT_TOL, K: int | None = None
) -> NeumannSolution:
    """Solve U_r = ϕ on both circles via the Dirichlet problem with data r·ϕ.

    The computation runs on the scaled annulus 1/a < R < a (a = √(r2/r1),
    R = r/√(r1 r2)) and is mapped back, so the recorded 𝒞 is the one of the
    scaled problem; it coincides with :func:`compute_C` of the unscaled u.
    """
    data = _neumann_inputs(data, tol, K)
    s = math.sqrt(data.r1 * data.r2)
    lam = 1.0 / s
    a = math.sqrt(data.r2 / data.r1)
    u_hat = _zero_log(solve_dirichlet_annulus(_weighted_dirichlet(data, 1.0 / a, a)), tol)
    U_hat = potential_from_dirichlet(u_hat, tol)
    c_hat = compute_C(u_hat, tol)
    U = U_hat.rescaled(lam)
    diagnostics = {
        # angular term over one period if the prefactor s sat outside the θ-integral
        "outer_prefactor_period_defect": TWO_PI * c_hat * (s - 1.0),
    }
    return NeumannSolution(U, (s, 0.0), c_hat, diagnostics)


def dirichlet_from_neumann(U) -> AnnulusHarmonicSeries:
    """u = r·U_r, again a series of the same family."""
    series = U.field if isinstance(U, NeumannSolution) else U
    return series.r_times_radial()


def neumann_from_dirichlet_symmetric(
    data: AnnulusBoundaryData, tol: float = SYMMETRY_TOL, K: int | None = None
) -> NeumannSolution:
    """Shortcut for data with r1·ϕ(r1, ·) = r2·ϕ(r2, ·).

    Then u_r(√(r1 r2), ·) ≡ 0 and the angular term vanishes, leaving only
    U(r, θ) = ∫_{s/r}^1 u(rρ, θ)/ρ dρ.
    """
    if data.kind != "neumann":
        raise PreconditionError("expected Neumann data (kind='neumann')")
    if data.r1 <= 0:
        raise RadiusError("annulus Neumann problems need r1 > 0")
    data = data.coefficient_form(K)
    wi, wo = data.r1 * data.inner, data.r2 * data.outer
    diff = wi - wo
    scale = max(1.0, wi.sup_bound(), wo.sup_bound())
    per_mode = {0: abs(diff.a0)}
    per_mode.update({k: math.hypot(diff.a[k - 1], diff.b[k - 1]) for k in range(1, diff.K + 1)})
    bad = {k: v for k, v in per_mode.items() if v > tol * scale}
    if bad:
        raise SymmetryError(
            f"r1*phi(r1) != r2*phi(r2) in modes {sorted(bad)}", defect=max(bad.values()), modes=bad
        )
    u = _zero_log(solve_dirichlet_annulus(_weighted_dirichlet(data, data.r1, data.r2)), tol)
    s = u.s
    flux = u.radial_derivative_trace(s).sup_bound()
    if flux > 1e-9 * max(1.0, u.sup_bound()):
        raise NumericalError(f"u_r(√(r1 r2), ·) should vanish for symmetric data, got {flux:.3e}")
    k = np.arange(1, u.K + 1)
    U = AnnulusHarmonicSeries(
        u.r1, u.r2, -u.A * math.log(s), u.A, u.C / k, -u.D / k, u.E / k, -u.G / k
    )
    return NeumannSolution(U, (s, 0.0), compute_C(u, tol))


def _zero_mean(f: PeriodicFunction, tol: float, what: str) -> PeriodicFunction:
    c = fourier_analyze(f) if f.form == "samples" else f
    if abs(c.a0) > tol * max(1.0, c.sup_bound()):
        raise NonZeroMeanError(f"{what} must have zero mean, got {c.a0:.6g}", defect=TWO_PI * c.a0)
    return PeriodicFunction(0.0, c.a, c.b)


def neumann_from_dirichlet_disk(
    f: PeriodicFunction, tol: float = DEFAULT_TOL, r2: float = 1.0
) -> NeumannSolution:
    """Disk |z| < r2: ∂U/∂ν = f, U(0) = 0, via U(z) = ∫₀¹ u(ρz)/ρ dρ.

    u is the Dirichlet solution with boundary values r2·f; coefficientwise
    a_k r^k ↦ (a_k / k) r^k.
    """
    f = _zero_mean(f, tol, "disk Neumann data")
    u = solve_dirichlet_disk(float(r2) * f, r2)
    return NeumannSolution(potential_from_dirichlet(u, tol), (0.0, 0.0), 0.0)


def dirichlet_from_neumann_disk(U) -> AnnulusHarmonicSeries:
    """u = r·U_r for a disk potential."""
    return dirichlet_from_neumann(U)


def solve_punctured_neumann(
    phi_origin: PeriodicFunction, phi_outer: PeriodicFunction, tol: float = DEFAULT_TOL
) -> NeumannSolution:
    """Neumann problem on the punctured unit disk.

    The data must be consistent (see
    :func:`~harmonic_duality.boundary.check_punctured_neumann_data`).  The
    solution is the disk potential of ``phi_outer``; its radial derivative at
    the centre, read off the k = 1 mode, is checked against ``phi_origin``.
    """
    check_punctured_neumann_data(phi_origin, phi_outer, tol)
    sol = neumann_from_dirichlet_disk(phi_outer, tol)
    grad0 = complex(sol.field.gradient(0j))
    origin = phi_origin.coefficients().padded(1)
    err = abs(grad0 - complex(origin.a[0], origin.b[0]))
    if err > tol * max(1.0, abs(grad0)):
        raise DataMismatchError("radial derivative at the centre disagrees with the origin datum",
                                defect=err, modes={1: err})
    sol.diagnostics["origin_gradient"] = [grad0.real, grad0.imag]
    return sol
