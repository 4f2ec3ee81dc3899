"""Independent checks: finite differences, quadrature, residuals, Hölder slopes.

Nothing here reuses the coefficient transforms it is meant to check.  The FD
solvers discretize the polar Laplacian directly, and the quadrature oracle
integrates the defining formula of the Neumann potential pointwise with
adaptive Gauss–Kronrod rules.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy import integrate

from .boundary import (
    DEFAULT_TOL,
    TWO_PI,
    AnnulusBoundaryData,
    PeriodicFunction,
    check_dirichlet_mean_compatibility,
    check_neumann_compatibility,
)
from .dirichlet import AnnulusHarmonicSeries, solve_dirichlet_annulus, solve_dirichlet_disk
from .duality import neumann_from_dirichlet_annulus, neumann_from_dirichlet_disk
from .errors import (
    CompatibilityError,
    ConvergenceError,
    DegenerateRangeError,
    PreconditionError,
    RadiusError,
)

MEMORY_BUDGET = 1 << 30  # bytes allowed for the sparse LU before falling back to SOR
SOR_OMEGA = 1.8
SOLVE_TOL = 1e-10
BC_TOL = 1e-8
CHUNK = 1 << 15  # lattice points per evaluator call in holder_estimate


# --------------------------------------------------------------------------
# grids


@dataclass(frozen=True, eq=False)
class PolarGrid:
    """Nodal values on r_i × θ_j, θ_j = 2πj/Ntheta."""

    r: np.ndarray
    theta: np.ndarray
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.values.shape != (self.r.size, self.theta.size):
            raise PreconditionError("values must have shape (Nr, Ntheta)")
        if self.r.size < 3 or self.theta.size < 8 or self.theta.size % 2:
            raise PreconditionError("need Nr >= 3 and an even Ntheta >= 8")
        if not np.all(np.isfinite(self.values)):
            raise PreconditionError("grid values must be finite")

    @property
    def Nr(self) -> int:
        return self.r.size

    @property
    def Ntheta(self) -> int:
        return self.theta.size

    @property
    def r1(self) -> float:
        return float(self.meta.get("r1", self.r[0]))

    @property
    def r2(self) -> float:
        return float(self.r[-1])

    @classmethod
    def sample(cls, evaluator: Callable, r: np.ndarray, n_theta: int, **meta) -> "PolarGrid":
        theta = TWO_PI * np.arange(n_theta) / n_theta
        R, T = np.meshgrid(r, theta, indexing="ij")
        return cls(np.asarray(r, float), theta, np.asarray(evaluator(R, T), float), meta)

    def to_csv(self, fh=None) -> str:
        """CSV text with header ``r,theta,value`` (17 significant digits)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "theta", "value"])
        for i, ri in enumerate(self.r):
            for j, tj in enumerate(self.theta):
                w.writerow([f"{ri:.17g}", f"{tj:.17g}", f"{self.values[i, j]:.17g}"])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text


def radial_nodes(r1: float, r2: float, n: int) -> np.ndarray:
    return r1 + (r2 - r1) * np.arange(n) / (n - 1)


def _check_grid_sizes(nr, nt):
    if nr < 3 or nt < 8 or nt % 2:
        raise PreconditionError(f"need Nr >= 3 and an even Ntheta >= 8, got {nr}x{nt}")


# --------------------------------------------------------------------------
# finite-difference oracles


def _stencil(r, h, dth):
    """Coefficients of u_{i+1}, u_{i-1}, u_{j±1} and the centre for the polar Laplacian."""
    up = 1.0 / h**2 + 1.0 / (2 * h * r)
    dn = 1.0 / h**2 - 1.0 / (2 * h * r)
    ang = 1.0 / (r * dth) ** 2
    centre = -2.0 / h**2 - 2.0 * ang
    return up, dn, ang, centre


def _solve(A, b, n_unknowns, bandwidth, sor: Callable | None, memory_budget):
    """Direct sparse solve, or SOR when the estimated LU fill exceeds the budget."""
    estimate = 16 * n_unknowns * bandwidth
    if estimate > memory_budget and sor is not None:
        return sor(), "sor"
    x = spla.spsolve(A.tocsc(), b)
    return x, "direct"


def _sor_sweeps(
    U: np.ndarray,
    coeffs: tuple,
    rhs: np.ndarray,
    omega: float,
    tol: float,
    max_iter: int,
) -> np.ndarray:
    """Red-black SOR on interior rows 1..Nr-2 of ``U`` (θ periodic)."""
    up, dn, ang, centre = (c[:, None] for c in coeffs)
    nr, nt = U.shape
    ii, jj = np.meshgrid(np.arange(1, nr - 1), np.arange(nt), indexing="ij")
    colors = [(ii + jj) % 2 == c for c in (0, 1)]
    scale = max(1.0, float(np.abs(U).max()))
    res = np.inf
    for it in range(1, max_iter + 1):
        for mask in colors:
            inner = U[1:-1]
            nb = (up * U[2:] + dn * U[:-2]
                  + ang * (np.roll(inner, 1, axis=1) + np.roll(inner, -1, axis=1)))
            gs = (rhs - nb) / centre
            inner[mask] = (1 - omega) * inner[mask] + omega * gs[mask]
        if it % 10 == 0:
            inner = U[1:-1]
            lap = (up * U[2:] + dn * U[:-2] + centre * inner
                   + ang * (np.roll(inner, 1, axis=1) + np.roll(inner, -1, axis=1)))
            res = float(np.abs(lap - rhs).max())
            if res <= tol * scale:
                return U
    raise ConvergenceError(f"SOR did not converge in {max_iter} iterations (residual {res:.3e})",
                           iterations=max_iter, residual=res)


def fd_dirichlet_solve(
    data: AnnulusBoundaryData,
    Nr: int,
    Ntheta: int,
    memory_budget: int = MEMORY_BUDGET,
    omega: float = SOR_OMEGA,
    max_iter: int = 200_000,
) -> PolarGrid:
    """Second-order finite differences for the Dirichlet problem on an annulus."""
    if data.kind != "dirichlet":
        raise PreconditionError("fd_dirichlet_solve needs Dirichlet data")
    if data.r1 <= 0:
        raise RadiusError("fd_dirichlet_solve needs r1 > 0 (see fd_dirichlet_disk)")
    _check_grid_sizes(Nr, Ntheta)
    r = radial_nodes(data.r1, data.r2, Nr)
    h = r[1] - r[0]
    dth = TWO_PI / Ntheta
    theta = TWO_PI * np.arange(Ntheta) / Ntheta
    U = np.zeros((Nr, Ntheta))
    U[0] = data.inner(theta)
    U[-1] = data.outer(theta)
    ri = r[1:-1]
    up, dn, ang, centre = _stencil(ri, h, dth)
    m = Nr - 2
    n = m * Ntheta
    idx = np.arange(n).reshape(m, Ntheta)
    rows, cols, vals = [idx.ravel()], [idx.ravel()], [np.repeat(centre, Ntheta)]
    for shift in (1, -1):
        rows.append(idx.ravel())
        cols.append(np.roll(idx, shift, axis=1).ravel())
        vals.append(np.repeat(ang, Ntheta))
    rows.append(idx[:-1].ravel()); cols.append(idx[1:].ravel()); vals.append(np.repeat(up[:-1], Ntheta))
    rows.append(idx[1:].ravel()); cols.append(idx[:-1].ravel()); vals.append(np.repeat(dn[1:], Ntheta))
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    b = np.zeros((m, Ntheta))
    b[0] -= dn[0] * U[0]
    b[-1] -= up[-1] * U[-1]

    def sor():
        V = U.copy()
        return _sor_sweeps(V, (up, dn, ang, centre), np.zeros((m, Ntheta)), omega,
                           SOLVE_TOL, max_iter)[1:-1].ravel()

    x, method = _solve(A, b.ravel(), n, Ntheta, sor, memory_budget)
    U[1:-1] = x.reshape(m, Ntheta)
    residual = float(np.abs(A @ x - b.ravel()).max())
    return PolarGrid(r, theta, U, {"r1": data.r1, "method": method, "residual": residual, "h": h})


def fd_dirichlet_disk(phi: PeriodicFunction, r2: float, Nr: int, Ntheta: int) -> PolarGrid:
    """Finite differences on a disk with cell-centred radii r_i = (i + ½)h.

    The flux form (1/r)(r u_r)_r avoids any special treatment of the centre:
    the inner face of the first cell sits at r = 0 and carries no flux.
    The last row holds the boundary values at r = r2.
    """
    _check_grid_sizes(Nr, Ntheta)
    h = r2 / (Nr - 0.5)
    r = (np.arange(Nr) + 0.5) * h
    r[-1] = r2
    dth = TWO_PI / Ntheta
    theta = TWO_PI * np.arange(Ntheta) / Ntheta
    ri = r[:-1]
    m = Nr - 1
    rp = ri + h / 2
    rm = np.maximum(ri - h / 2, 0.0)
    up = rp / (ri * h**2)
    dn = rm / (ri * h**2)
    ang = 1.0 / (ri * dth) ** 2
    centre = -(up + dn) - 2 * ang
    n = m * Ntheta
    idx = np.arange(n).reshape(m, Ntheta)
    rows, cols, vals = [idx.ravel()], [idx.ravel()], [np.repeat(centre, Ntheta)]
    for shift in (1, -1):
        rows.append(idx.ravel()); cols.append(np.roll(idx, shift, axis=1).ravel())
        vals.append(np.repeat(ang, Ntheta))
    rows.append(idx[:-1].ravel()); cols.append(idx[1:].ravel()); vals.append(np.repeat(up[:-1], Ntheta))
    rows.append(idx[1:].ravel()); cols.append(idx[:-1].ravel()); vals.append(np.repeat(dn[1:], Ntheta))
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    U = np.zeros((Nr, Ntheta))
    U[-1] = phi(theta)
    b = np.zeros((m, Ntheta))
    b[-1] -= up[-1] * U[-1]
    x = spla.spsolve(A.tocsc(), b.ravel())
    U[:-1] = x.reshape(m, Ntheta)
    return PolarGrid(r, theta, U, {"r1": 0.0, "method": "direct", "h": h,
                                    "residual": float(np.abs(A @ x - b.ravel()).max())})


def fd_neumann_solve(data: AnnulusBoundaryData, Nr: int, Ntheta: int, tol: float = DEFAULT_TOL) -> PolarGrid:
    """Finite differences for U_r = ϕ on both circles.

    Ghost nodes u_{-1} = u_1 − 2hϕ(r1) and u_{N} = u_{N−2} + 2hϕ(r2) close
    the boundary rows.  The node nearest (√(r1 r2), 0) is pinned to zero to
    remove the constant from the kernel; ``meta['pin']`` records it.
    """
    if data.kind != "neumann":
        raise PreconditionError("fd_neumann_solve needs Neumann data")
    if data.r1 <= 0:
        raise RadiusError("fd_neumann_solve needs r1 > 0")
    report = check_neumann_compatibility(data, tol)
    if not report.passed:
        raise CompatibilityError(f"Neumann data carry net flux {report.defect:.6g}", report.defect)
    _check_grid_sizes(Nr, Ntheta)
    r = radial_nodes(data.r1, data.r2, Nr)
    h = r[1] - r[0]
    dth = TWO_PI / Ntheta
    theta = TWO_PI * np.arange(Ntheta) / Ntheta
    up, dn, ang, centre = _stencil(r, h, dth)
    n = Nr * Ntheta
    idx = np.arange(n).reshape(Nr, Ntheta)
    b = np.zeros((Nr, Ntheta))
    phi1 = data.inner(theta)
    phi2 = data.outer(theta)
    up = up.copy()
    dn = dn.copy()
    # ghost elimination: the centred first difference equals ϕ exactly, so the
    # boundary rows become (2u_1 − 2u_0)/h² + angular part = 2ϕ/h − ϕ/r.
    up[0] = 2.0 / h**2
    b[0] = 2.0 * phi1 / h - phi1 / r[0]
    dn[-1] = 2.0 / h**2
    b[-1] = -2.0 * phi2 / h - phi2 / r[-1]
    rows, cols, vals = [idx.ravel()], [idx.ravel()], [np.repeat(centre, Ntheta)]
    for shift in (1, -1):
        rows.append(idx.ravel()); cols.append(np.roll(idx, shift, axis=1).ravel())
        vals.append(np.repeat(ang, Ntheta))
    rows.append(idx[:-1].ravel()); cols.append(idx[1:].ravel()); vals.append(np.repeat(up[:-1], Ntheta))
    rows.append(idx[1:].ravel()); cols.append(idx[:-1].ravel()); vals.append(np.repeat(dn[1:], Ntheta))
    A = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n))
    pin_i = int(np.argmin(np.abs(r - math.sqrt(data.r1 * data.r2))))
    p = idx[pin_i, 0]
    A = A.tolil()
    A.rows[p] = [p]
    A.data[p] = [1.0]
    bb = b.ravel()
    bb[p] = 0.0
    x = spla.spsolve(A.tocsc(), bb)
    U = x.reshape(Nr, Ntheta)
    U = U - U[pin_i, 0]
    return PolarGrid(r, theta, U, {"r1": data.r1, "method": "direct", "h": h, "pin": [pin_i, 0]})


def grid_error(grid: PolarGrid, evaluator: Callable, relative: bool = True) -> float:
    """L∞ distance between grid values and ``evaluator`` at the nodes.

    For pinned (Neumann) grids the exact values are shifted to agree at the
    pinned node first, since the FD solution is only defined up to that node.
    """
    R, T = np.meshgrid(grid.r, grid.theta, indexing="ij")
    exact = np.asarray(evaluator(R, T), float)
    if "pin" in grid.meta:
        i, j = grid.meta["pin"]
        exact = exact - exact[i, j]
    err = float(np.abs(grid.values - exact).max())
    if relative:
        err /= max(float(np.abs(exact).max()), 1e-300)
    return err


def observed_order(hs: Sequence[float], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(h)."""
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])


def richardson_order(coarse: PolarGrid, medium: PolarGrid, fine: PolarGrid) -> float:
    """Convergence order from three grids, each refining the previous one by two.

    Compares values at the coarse nodes, which all three grids share:
    p = log2(|u_c − u_m| / |u_m − u_f|).  Neumann grids are determined only
    up to a constant, and their pinned nodes differ between refinements, so
    all three are shifted to vanish at the coarse grid's pinned node first.
    """
    def restrict(g, factor):
        return g.values[::factor, ::factor]

    c = coarse.values
    m = restrict(medium, 2)
    f = restrict(fine, 4)
    if m.shape != c.shape or f.shape != c.shape:
        raise PreconditionError("grids are not nested refinements by a factor of two")
    if "pin" in coarse.meta:
        i, j = coarse.meta["pin"]
        c, m, f = c - c[i, j], m - m[i, j], f - f[i, j]
    return float(math.log2(np.abs(c - m).max() / np.abs(m - f).max()))


# --------------------------------------------------------------------------
# residual reports


@dataclass(frozen=True)
class ResidualReport:
    laplace_linf: float
    bc_linf: dict
    compat_defect: float
    h: float
    laplace_const: float
    notes: tuple = ()

    @property
    def flagged(self) -> bool:
        return any(v > BC_TOL for v in self.bc_linf.values())

    def to_dict(self) -> dict:
        return {
            "laplace_linf": self.laplace_linf,
            "bc_linf": dict(self.bc_linf),
            "compat_defect": self.compat_defect,
            "h": self.h,
            "laplace_const": self.laplace_const,
            "flagged": self.flagged,
            "notes": list(self.notes),
        }


def _radial_derivative(evaluator, r, theta, inward: float):
    """u_r at radius r; analytic when the evaluator offers it, else a 5-point one-sided rule."""
    if hasattr(evaluator, "derivative"):
        return evaluator.derivative(np.full_like(theta, r), theta, 1, 0)
    d = inward
    f = [evaluator(np.full_like(theta, r + j * d), theta) for j in range(5)]
    return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * d)


def residual_report(evaluator: Callable, data: AnnulusBoundaryData, Nr: int = 64, Ntheta: int = 128) -> ResidualReport:
    """FD Laplace residual on interior nodes and boundary-condition residuals.

    ``evaluator(r, theta)`` must accept broadcast arrays.  For Neumann data
    the radial derivative comes from ``evaluator.derivative`` if present.
    """
    _check_grid_sizes(Nr, Ntheta)
    r1, r2 = data.r1, data.r2
    if r1 == 0:
        r = r2 * np.arange(1, Nr + 1) / Nr
    else:
        r = radial_nodes(r1, r2, Nr)
    theta = TWO_PI * np.arange(Ntheta) / Ntheta
    grid = PolarGrid.sample(evaluator, r, Ntheta)
    h = r[1] - r[0]
    dth = TWO_PI / Ntheta
    up, dn, ang, centre = _stencil(r[1:-1], h, dth)
    V = grid.values
    inner = V[1:-1]
    lap = (up[:, None] * V[2:] + dn[:, None] * V[:-2] + centre[:, None] * inner
           + ang[:, None] * (np.roll(inner, 1, axis=1) + np.roll(inner, -1, axis=1)))
    lap_linf = float(np.abs(lap).max())
    hh = max(h, dth)
    bc = {}
    step = 2e-4 * (r2 - r1)
    if data.kind == "dirichlet":
        if r1 > 0:
            bc["inner"] = float(np.abs(evaluator(np.full(Ntheta, r1), theta) - data.inner(theta)).max())
        bc["outer"] = float(np.abs(evaluator(np.full(Ntheta, r2), theta) - data.outer(theta)).max())
        compat = check_dirichlet_mean_compatibility(data).defect
    else:
        if r1 > 0:
            bc["inner"] = float(np.abs(_radial_derivative(evaluator, r1, theta, step) - data.inner(theta)).max())
            compat = check_neumann_compatibility(data).defect
        else:
            compat = TWO_PI * data.outer.a0
        bc["outer"] = float(np.abs(_radial_derivative(evaluator, r2, theta, -step) - data.outer(theta)).max())
    notes = []
    if any(v > BC_TOL for v in bc.values()):
        notes.append(f"boundary residual above {BC_TOL:g}")
    return ResidualReport(lap_linf, bc, float(compat), hh, lap_linf / hh**2, tuple(notes))


# --------------------------------------------------------------------------
# round trips and the quadrature oracle


def _sample_radii(r1, r2, n):
    return radial_nodes(r1, r2, n)


def roundtrip_report(data: AnnulusBoundaryData, Nr: int = 64, Ntheta: int = 128, tol: float = DEFAULT_TOL) -> float:
    """max |r·U_r − u| on an Nr × Ntheta grid, U the Neumann potential of ϕ, u the Dirichlet solution for r·ϕ."""
    U = neumann_from_dirichlet_annulus(data, tol)
    d = data.coefficient_form()
    u = solve_dirichlet_annulus(
        AnnulusBoundaryData(d.r1, d.r2, d.r1 * d.inner, d.r2 * d.outer, "dirichlet")
    )
    R, T = np.meshgrid(_sample_radii(d.r1, d.r2, Nr), TWO_PI * np.arange(Ntheta) / Ntheta, indexing="ij")
    return float(np.abs(R * U.derivative(R, T, 1, 0) - u(R, T)).max())


def roundtrip_report_disk(f: PeriodicFunction, Nr: int = 64, Ntheta: int = 128, tol: float = DEFAULT_TOL) -> float:
    """Disk version: max |r·U_r − u| with U the disk Neumann potential of f."""
    U = neumann_from_dirichlet_disk(f, tol)
    u = solve_dirichlet_disk(f.coefficients() - PeriodicFunction(f.coefficients().a0), 1.0)
    R, T = np.meshgrid(_sample_radii(0.0, 1.0, Nr), TWO_PI * np.arange(Ntheta) / Ntheta, indexing="ij")
    return float(np.abs(R * U.derivative(R, T, 1, 0) - u(R, T)).max())


_QUAD = {"epsabs": 1e-13, "epsrel": 1e-12, "limit": 200}


def _quad(fn, a, b):
    # The tolerances above sit at the roundoff floor on purpose; QUADPACK then
    # sometimes complains that it cannot certify them, which is harmless here.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(fn, a, b, **_QUAD)


def quadrature_C(u: AnnulusHarmonicSeries) -> float:
    """𝒞 = (s/2π)∫₀^{2π}∫₀^t u_r(s, τ) dτ dt by adaptive quadrature.

    Swapping the order of integration gives (s/2π)∫₀^{2π} (2π − τ) u_r(s, τ) dτ.
    """
    s = u.s
    val, _ = _quad(lambda t: (TWO_PI - t) * u.derivative(s, t, 1, 0), 0.0, TWO_PI)
    return s * val / TWO_PI


def quadrature_potential(u: AnnulusHarmonicSeries, r: float, theta: float, C: float | None = None) -> float:
    """Neumann potential at (r, θ) by direct quadrature of its defining integrals.

        U(r, θ) = ∫_{s/r}^{1} u(rρ, θ)/ρ dρ + ∫₀^θ (𝒞 − s ∫₀^t u_r(s, τ) dτ) dt

    The double integral is evaluated as 𝒞θ − s∫₀^θ (θ − τ) u_r(s, τ) dτ.
    Disk series (r1 = 0) use U(z) = ∫₀¹ u(ρz)/ρ dρ.
    """
    theta = float(theta)
    if u.is_disk:
        val, _ = _quad(lambda p: u.derivative(r * p, theta) / p if p > 0 else
                       u.derivative(0.0, theta, 1, 0) * r, 0.0, 1.0)
        return val
    s = u.s
    if C is None:
        C = quadrature_C(u)
    radial, _ = _quad(lambda p: u.derivative(r * p, theta) / p, s / r, 1.0)
    if theta == 0.0:
        return radial
    inner, _ = _quad(lambda t: (theta - t) * u.derivative(s, t, 1, 0), 0.0, theta)
    return radial + C * theta - s * inner


# --------------------------------------------------------------------------
# Hölder exponent estimation


@dataclass(frozen=True)
class HolderEstimate:
    """Slope of log sup|f(x) − f(y)| against log |x − y|.

    ``alpha_hat`` is capped at 1 (anything smoother is reported as
    Lipschitz); ``alpha_raw`` is the fitted slope.
    """

    alpha_hat: float
    const_hat: float
    pairs: int
    r2_fit: float
    alpha_raw: float
    scales: tuple = ()
    sups: tuple = ()

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def holder_estimate(
    fn: Callable,
    lower,
    upper,
    n_pairs: int = 2000,
    h_range: tuple[float, float] | None = None,
    n_scales: int = 16,
    seed: int = 0,
    density: int = 64,
    max_points: int = 2_000_000,
) -> HolderEstimate:
    """Empirical Hölder exponent of ``fn`` on the box [lower, upper].

    For each of ``n_scales`` log-spaced separations h the worst difference
    |fn(x + h·e) − fn(x)| is recorded.  In one dimension the base points x
    form a lattice of spacing h/``density`` covering the whole interval, so
    isolated singular points are not missed; in higher dimensions they are
    ``n_pairs`` uniform random points with random directions e, which can
    miss an isolated cusp; restrict to a line through it when that matters.

    Truncated series are smooth, so on computed solutions this gives a
    one-sided sanity bound at the sampled scales, not a certificate.
    """
    lo = np.atleast_1d(np.asarray(lower, float))
    hi = np.atleast_1d(np.asarray(upper, float))
    dim = lo.size
    width = float(np.min(hi - lo))
    if h_range is None:
        h_range = (1e-4 * width, 1e-1 * width)
    h_min, h_max = h_range
    if not h_max / h_min >= 100:
        raise DegenerateRangeError(f"scale range {h_min:g}..{h_max:g} spans less than 10^2")
    if h_max >= width:
        raise DegenerateRangeError("largest separation must be smaller than the box")
    rng = np.random.default_rng(seed)
    hs = np.geomspace(h_min, h_max, n_scales)
    sups = []
    pairs = 0
    for h in hs:
        if dim == 1:
            step = h / density
            count = int((width - h) / step) + 1
            if count > max_points:
                step = (width - h) / (max_points - 1)
                count = max_points
            x = lo[0] + step * np.arange(count) + rng.uniform(0, 1) * min(step, width - h - step * (count - 1))
            # chunked so that evaluators which broadcast over modes stay in memory
            d = np.concatenate([np.abs(np.asarray(fn(xc + h)) - np.asarray(fn(xc)))
                                for xc in np.array_split(x, -(-count // CHUNK))])
        else:
            count = n_pairs
            x = rng.uniform(lo + h, hi - h, size=(count, dim))
            e = rng.normal(size=(count, dim))
            e /= np.linalg.norm(e, axis=1, keepdims=True)
            d = np.abs(np.asarray(fn(x + h * e)) - np.asarray(fn(x)))
        pairs += count
        sups.append(float(np.max(d)))
    sups = np.array(sups)
    ok = sups > 0
    if ok.sum() < 2:
        return HolderEstimate(1.0, 0.0, pairs, 1.0, math.inf, tuple(hs), tuple(sups))
    x, y = np.log(hs[ok]), np.log(sups[ok])
    slope, intercept = np.polyfit(x, y, 1)
    fit = slope * x + intercept
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float(((y - fit) ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0
    alpha = float(np.clip(slope, 1e-12, 1.0))
    return HolderEstimate(alpha, float(math.exp(intercept)), int(pairs), r2, float(slope),
                          tuple(float(v) for v in hs), tuple(float(v) for v in sups))


def report_json(obj) -> str:
    """Deterministic JSON text for a report-like object."""
    d = obj.to_dict() if hasattr(obj, "to_dict") else obj
    return json.dumps(d, indent=2, sort_keys=True) + "\n"
