"""Ellipses via the Joukowsky map, and transfer through user conformal maps.

Ellipse
    J(w) = (w + 1/w)/2 maps the annulus 1/ρ < |w| < ρ two-to-one onto the
    ellipse E_ρ with foci ±1.  Its inverse branch T₊ (|T₊| ≥ 1) is computed
    as z + √(z − 1)·√(z + 1) with principal roots.  That product equals the
    principal √(z² − 1) only for Re z ≥ 0; for Re z < 0 the principal
    √(z² − 1) picks the wrong sheet and |z + √(z² − 1)| drops below 1
    (z = −2 gives −2 + √3).  The product form is the branch with its cut on
    [−1, 1], where T₊(cos θ) = e^{iθ} for θ ∈ [0, π].

Mapped regions
    A doubly connected region D comes with G: D → {1 < |z| < r2} and its
    inverse F.  The Neumann datum Φ pulls back to Φ(F(z))·|F′(z)| (outward
    normals go to outward normals whichever contour lands on which circle),
    the annulus problem is solved exactly, and U = V∘G.  Simply connected
    regions work the same way through a Riemann map f: 𝕌 → D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .boundary import DEFAULT_TOL, TWO_PI, AnnulusBoundaryData, PeriodicFunction, fourier_analyze
from .dirichlet import AnnulusHarmonicSeries, require_zero_log, solve_dirichlet_annulus
from .duality import (
    NeumannSolution,
    neumann_from_dirichlet_annulus,
    neumann_from_dirichlet_disk,
    potential_from_dirichlet,
)
from .errors import (
    CompatibilityError,
    MapValidationError,
    PreconditionError,
    RadiusError,
    SchemaError,
    SingularPointError,
)
from .expressions import Expression

DEFAULT_SAMPLES = 256

# --------------------------------------------------------------------------
# Joukowsky transform and its inverse branches


def joukowsky(w):
    """J(w) = (w + 1/w) / 2."""
    w = np.asarray(w, dtype=complex)
    if np.any(w == 0):
        raise SingularPointError("the Joukowsky map is undefined at w = 0")
    out = 0.5 * (w + 1.0 / w)
    return out if out.ndim else complex(out)


def joukowsky_prime(w):
    w = np.asarray(w, dtype=complex)
    return 0.5 * (1.0 - 1.0 / (w * w))


def _root_product(z):
    """√(z − 1)·√(z + 1): the branch of √(z² − 1) cut along [−1, 1]."""
    return np.sqrt(z - 1.0) * np.sqrt(z + 1.0)


def t_plus(z):
    """Inverse of J with |T₊(z)| ≥ 1."""
    z = np.asarray(z, dtype=complex)
    out = z + _root_product(z)
    return out if out.ndim else complex(out)


def t_minus(z):
    """Inverse of J with |T₋(z)| ≤ 1, computed as 1/T₊(z)."""
    out = 1.0 / np.asarray(t_plus(z), dtype=complex)
    return out if out.ndim else complex(out)


def t_plus_prime(z):
    """T₊′(z) = T₊(z)/√(z² − 1) (same branch); singular at the foci ±1."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        return t_plus(z) / _root_product(z)


def t_plus_prime_modulus_on_circle(w):
    """|T₊′(J(w))| = |2w²/(w² − 1)|, evaluated from the annulus side."""
    w = np.asarray(w, dtype=complex)
    return np.abs(2.0 * w * w / (w * w - 1.0))


@dataclass(frozen=True)
class EllipseRegion:
    """Interior of the ellipse J(ρ e^{iθ}), semi-axes (ρ ± 1/ρ)/2."""

    rho: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 1.0):
            raise RadiusError(f"ellipse parameter rho must be > 1, got {self.rho}")

    @property
    def semi_axes(self) -> tuple[float, float]:
        return 0.5 * (self.rho + 1 / self.rho), 0.5 * (self.rho - 1 / self.rho)

    def boundary_point(self, theta):
        return joukowsky(self.rho * np.exp(1j * np.asarray(theta, dtype=float)))

    def outward_normal(self, theta):
        w = self.rho * np.exp(1j * np.asarray(theta, dtype=float))
        t = w * joukowsky_prime(w)
        return t / np.abs(t)

    def arclength_density(self, theta):
        """|dz/dθ| along the boundary parametrization."""
        w = self.rho * np.exp(1j * np.asarray(theta, dtype=float))
        return self.rho * np.abs(joukowsky_prime(w))

    def contains(self, z, rtol: float = 1e-12):
        return np.abs(t_plus(z)) <= self.rho * (1 + rtol)


def _sample_real(f, z) -> np.ndarray:
    vals = np.asarray(f(z))
    if np.iscomplexobj(vals):
        vals = vals.real
    vals = np.broadcast_to(vals.astype(float), np.shape(z))
    if not np.all(np.isfinite(vals)):
        raise PreconditionError("boundary datum returned non-finite values")
    return np.array(vals)


def ellipse_boundary_transform(
    f: Callable, rho: float, n: int = DEFAULT_SAMPLES, K: int | None = None, tol: float = DEFAULT_TOL
) -> AnnulusBoundaryData:
    """Dirichlet data on 1/ρ < |w| < ρ for the ellipse Neumann problem ∂U/∂ν = f.

    With V = U∘J, the annulus solution is u = r V_r, whose traces are
    ρ·f(J(w))·|J′(w)| at |w| = ρ and −f(J(w))·|J′(w)|/ρ at |w| = 1/ρ
    (|J′(w)| = 1/|T₊′(J(w))|).  The minus sign on the inner circle is the
    outward normal of the annulus there pointing towards the origin.
    """
    region = EllipseRegion(rho)
    theta = TWO_PI * np.arange(n) / n
    w_out = rho * np.exp(1j * theta)
    w_in = np.exp(1j * theta) / rho
    f_out = _sample_real(f, joukowsky(w_out))
    density = region.arclength_density(theta)
    flux = float(np.sum(f_out * density) * TWO_PI / n)
    scale = float(np.sum(np.abs(f_out) * density) * TWO_PI / n)
    if abs(flux) > tol * max(1.0, scale):
        raise CompatibilityError(f"∫ f dσ over the ellipse is {flux:.6g}, not 0", defect=flux)
    outer = rho * f_out / t_plus_prime_modulus_on_circle(w_out)
    inner = -_sample_real(f, joukowsky(w_in)) / (rho * t_plus_prime_modulus_on_circle(w_in))
    return AnnulusBoundaryData(
        1.0 / rho,
        rho,
        fourier_analyze(PeriodicFunction(samples=inner), K),
        fourier_analyze(PeriodicFunction(samples=outer), K),
        "dirichlet",
    )


class EllipseNeumannSolution:
    """U on the closed ellipse with ∂U/∂ν = f and U(1) = 0.

    With T₊(z) = R e^{iΘ}, Θ ∈ (−π, π]:

        U(z) = Σ_k [(C_k/k)(R^k − 1) − (D_k/k)(R^−k − 1)] cos kΘ + (same with E, G) sin kΘ
               + A log R − ∫₀^Θ ∫₀^t u_r(1, τ) dτ dt

    and the double integral is
    Σ_k (c̃_k/k²)(1 − cos kΘ) + (ẽ_k/k)Θ − (ẽ_k/k²) sin kΘ with
    c̃_k = k(C_k − D_k), ẽ_k = k(E_k − G_k).
    """

    def __init__(self, rho: float, u: AnnulusHarmonicSeries, data: AnnulusBoundaryData):
        self.region = EllipseRegion(rho)
        self.rho = rho
        self.u = u
        self.data = data
        self.field = potential_from_dirichlet(u)  # the same U, as a series in w
        k = np.arange(1, u.K + 1)
        self._k = k
        self._c_tilde = k * (u.C - u.D)
        self._e_tilde = k * (u.E - u.G)

    @property
    def theta_linear_coefficient(self) -> float:
        """Σ ẽ_k/k; zero up to rounding because u(r, θ) = −u(1/r, −θ) here."""
        return float((self._e_tilde / self._k).sum())

    def _polar(self, z):
        w = np.asarray(t_plus(z), dtype=complex)
        R = np.abs(w)
        if np.any(R > self.rho * (1 + 1e-12)):
            raise RadiusError("point outside the closed ellipse")
        return R, np.angle(w)

    def radial_term(self, z):
        R, T = self._polar(z)
        u, k = self.u, self._k
        R_ = np.atleast_1d(R)[..., None]
        T_ = np.atleast_1d(T)[..., None]
        Rk = R_**k
        rad_c = (u.C / k) * (Rk - 1) - (u.D / k) * (1 / Rk - 1)
        rad_s = (u.E / k) * (Rk - 1) - (u.G / k) * (1 / Rk - 1)
        out = (rad_c * np.cos(k * T_) + rad_s * np.sin(k * T_)).sum(axis=-1)
        out = out + u.A * np.log(np.atleast_1d(R))
        return out.reshape(np.shape(R))

    def angular_term(self, theta):
        """∫₀^Θ ∫₀^t u_r(1, τ) dτ dt for real Θ."""
        T_ = np.atleast_1d(np.asarray(theta, dtype=float))[..., None]
        k = self._k
        ct, et = self._c_tilde, self._e_tilde
        out = (ct / k**2 * (1 - np.cos(k * T_)) + et / k * T_ - et / k**2 * np.sin(k * T_)).sum(-1)
        return out.reshape(np.shape(theta))

    def __call__(self, z):
        _, T = self._polar(z)
        out = self.radial_term(z) - self.angular_term(T)
        return out if np.ndim(out) else float(out)

    def annulus_value(self, z):
        """U(z) via the annulus series evaluated at T₊(z) (an independent path)."""
        w = np.asarray(t_plus(z), dtype=complex)
        return self.field.derivative(np.abs(w), np.angle(w), check=False)

    def gradient(self, z):
        """U_x + i U_y = ∇V(T₊(z))·conj(T₊′(z)); undefined at the foci ±1."""
        w = np.asarray(t_plus(z), dtype=complex)
        dT = 1.0 / joukowsky_prime(w)
        return self.field.gradient(w) * np.conj(dT)

    def z0_star(self, z):
        """Point where the hyperbola through z meets [−1, 1]: cos Θ(z)."""
        _, T = self._polar(z)
        return np.cos(T)


def neumann_on_ellipse(
    f: Callable, rho: float, n: int = DEFAULT_SAMPLES, K: int | None = None, tol: float = DEFAULT_TOL
) -> EllipseNeumannSolution:
    """Neumann problem ∂U/∂ν = f on the ellipse E_ρ, normalized by U(1) = 0."""
    data = ellipse_boundary_transform(f, rho, n, K, tol)
    u = solve_dirichlet_annulus(data)
    require_zero_log(u, tol)
    u = AnnulusHarmonicSeries(u.r1, u.r2, u.A, 0.0, u.C, u.D, u.E, u.G)
    return EllipseNeumannSolution(rho, u, data)


# --------------------------------------------------------------------------
# Conformal map pairs


def _evaluator(fn):
    def call(z):
        return np.asarray(fn(np.asarray(z, dtype=complex)), dtype=complex) * np.ones(np.shape(z))

    return call


@dataclass(frozen=True)
class ConformalMapPair:
    """G: D → {1 < |z| < r2} with inverse F, plus derivatives.

    ``Fprime`` may be omitted; it then defaults to 1/G′(F(z)).
    """

    G: Callable
    Gprime: Callable
    F: Callable
    r2: float
    Fprime: Callable | None = None
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (math.isfinite(self.r2) and self.r2 > 1.0):
            raise RadiusError(f"canonical annulus needs r2 > 1, got {self.r2}")

    def g(self, w):
        return _evaluator(self.G)(w)

    def gprime(self, w):
        return _evaluator(self.Gprime)(w)

    def f(self, z):
        return _evaluator(self.F)(z)

    def fprime(self, z):
        if self.Fprime is None:
            return 1.0 / self.gprime(self.f(z))
        return _evaluator(self.Fprime)(z)

    @cached_property
    def basepoint(self) -> complex:
        """F(√r2), where transferred potentials vanish."""
        return complex(self.f(np.array([math.sqrt(self.r2)]))[0])

    def describe(self) -> dict:
        return {"name": self.name, "r2": self.r2, **self.params}


@dataclass(frozen=True)
class RiemannMapPair:
    """f: 𝕌 → D with inverse g; w0 = f(0)."""

    f: Callable
    fprime: Callable
    g: Callable
    gprime: Callable
    name: str = "custom"
    params: dict = field(default_factory=dict)

    @cached_property
    def w0(self) -> complex:
        return complex(_evaluator(self.f)(np.zeros(1))[0])

    def describe(self) -> dict:
        return {"name": self.name, **self.params}


@dataclass(frozen=True)
class MapValidationReport:
    """Runtime checks of a supplied map; ``passed`` requires every check."""

    roundtrip_err: float
    moduli_err: float
    cr_residual: float
    min_abs_gprime: float
    derivative_product_err: float
    gprime_fd_err: float
    orientation: str
    samples: int
    passed: bool
    notes: tuple = ()

    def to_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, tuple):
                v = list(v)
            elif isinstance(v, float):
                v = float(v)
            out[k] = v
        return out


LIMITS = {
    "roundtrip_err": 1e-8,
    "moduli_err": 1e-6,
    "cr_residual": 1e-5,
    "min_abs_gprime": 1e-12,
    "derivative_product_err": 1e-8,
    "gprime_fd_err": 1e-5,
}


def _fd_derivatives(fn, w, h):
    gx = (fn(w + h) - fn(w - h)) / (2 * h)
    gy = (fn(w + 1j * h) - fn(w - 1j * h)) / (2 * h)
    return gx, gy


def _polygon_area(z) -> float:
    x, y = z.real, z.imag
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def validate_map(m: ConformalMapPair, n: int = 64, seed: int = 0) -> MapValidationReport:
    """Check a map pair on boundary and interior samples.

    (a) G(F(z)) = z; (b) |G| = 1 and r2 on the two boundary contours;
    (c) Cauchy–Riemann residual of G by central differences; (d) min |G′|;
    (e) F′·(G′∘F) = 1; (f) G′ agrees with the difference quotient of G.
    The report also records which contour of D goes to |z| = r2.
    """
    rng = np.random.default_rng(seed)
    notes = []
    theta = TWO_PI * np.arange(n) / n
    z_in = np.exp(1j * theta)
    z_out = m.r2 * z_in
    delta = 0.05 * (m.r2 - 1.0)
    rad = rng.uniform(1.0 + delta, m.r2 - delta, n)
    z_mid = rad * np.exp(1j * rng.uniform(-math.pi, math.pi, n))
    inf = float("inf")
    try:
        w_in, w_out, w_mid = m.f(z_in), m.f(z_out), m.f(z_mid)
        z_all = np.concatenate([z_in, z_out, z_mid])
        w_all = np.concatenate([w_in, w_out, w_mid])
        back = m.g(w_all)
        roundtrip = float(np.max(np.abs(back - z_all)) / m.r2)
        moduli = float(max(np.max(np.abs(np.abs(m.g(w_in)) - 1.0)),
                           np.max(np.abs(np.abs(m.g(w_out)) - m.r2)) / m.r2))
        orientation = "outer->r2" if _polygon_area(w_out) >= _polygon_area(w_in) else "outer->1"
        scale = max(1.0, float(np.max(np.abs(w_all))))
        h = 1e-5 * scale
        gx, gy = _fd_derivatives(m.g, w_mid, h)
        gp_mid = m.gprime(w_mid)
        denom = np.maximum(np.abs(gp_mid), 1e-300)
        cr = float(np.max(np.abs(gy - 1j * gx) / denom))
        gfd = float(np.max(np.abs(gx - gp_mid) / denom))
        gp_all = m.gprime(w_all)
        min_gp = float(np.min(np.abs(gp_all)))
        prod = float(np.max(np.abs(m.fprime(z_all) * gp_all - 1.0)))
        values = np.array([roundtrip, moduli, cr, gfd, prod, min_gp])
        if not np.all(np.isfinite(values)):
            notes.append("non-finite values from the map evaluators")
            roundtrip = moduli = cr = gfd = prod = inf
            min_gp = 0.0
    except Exception as exc:  # evaluator blew up: report, don't crash
        notes.append(f"evaluation failed: {exc}")
        roundtrip = moduli = cr = gfd = prod = inf
        min_gp = 0.0
        orientation = "unknown"
    measured = {
        "roundtrip_err": roundtrip,
        "moduli_err": moduli,
        "cr_residual": cr,
        "derivative_product_err": prod,
        "gprime_fd_err": gfd,
    }
    failed = [k for k, v in measured.items() if not v <= LIMITS[k]]
    if not min_gp > LIMITS["min_abs_gprime"]:
        failed.append("min_abs_gprime")
    notes.extend(f"check failed: {k}" for k in failed)
    return MapValidationReport(
        roundtrip, moduli, cr, min_gp, prod, gfd, orientation, 3 * n, not failed, tuple(notes)
    )


@dataclass(frozen=True)
class RiemannValidationReport:
    roundtrip_err: float
    center_err: float
    derivative_product_err: float
    gprime_fd_err: float
    fprime0: complex
    normalized: bool
    passed: bool
    notes: tuple = ()

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["fprime0"] = [self.fprime0.real, self.fprime0.imag]
        d["notes"] = list(self.notes)
        return d


def validate_riemann_map(m: RiemannMapPair, n: int = 64, seed: int = 0) -> RiemannValidationReport:
    """Checks for a Riemann map pair.

    ``normalized`` records f′(0) > 0.  A rotated Riemann map still transfers
    solutions correctly, so it does not affect ``passed``.
    """
    rng = np.random.default_rng(seed)
    theta = TWO_PI * np.arange(n) / n
    z = np.concatenate([np.exp(1j * theta),
                        np.sqrt(rng.uniform(0, 0.95, n)) * np.exp(1j * rng.uniform(-np.pi, np.pi, n))])
    f, fp, g, gp = (_evaluator(x) for x in (m.f, m.fprime, m.g, m.gprime))
    w = f(z)
    roundtrip = float(np.max(np.abs(g(w) - z)))
    center = float(abs(complex(g(np.array([m.w0]))[0])))
    prod = float(np.max(np.abs(fp(z) * gp(w) - 1.0)))
    interior = w[n:]
    h = 1e-5 * max(1.0, float(np.max(np.abs(w))))
    gx, _ = _fd_derivatives(g, interior, h)
    gfd = float(np.max(np.abs(gx - gp(interior)) / np.maximum(np.abs(gp(interior)), 1e-300)))
    f0 = complex(fp(np.zeros(1))[0])
    normalized = abs(f0.imag) <= 1e-12 * abs(f0) and f0.real > 0
    notes = []
    checks = {"roundtrip_err": (roundtrip, 1e-8), "center_err": (center, 1e-8),
              "derivative_product_err": (prod, 1e-8), "gprime_fd_err": (gfd, 1e-5)}
    failed = [k for k, (v, lim) in checks.items() if not v <= lim]
    notes.extend(f"check failed: {k}" for k in failed)
    if not normalized:
        notes.append("f'(0) is not a positive real: the map is a rotated Riemann map")
    return RiemannValidationReport(roundtrip, center, prod, gfd, f0, normalized, not failed, tuple(notes))


# --------------------------------------------------------------------------
# Transfer of Neumann solutions


class MappedNeumannSolution:
    """U = V∘G on a doubly connected region, V an annulus Neumann potential."""

    def __init__(self, m: ConformalMapPair, V: NeumannSolution, data: AnnulusBoundaryData,
                 report: MapValidationReport):
        self.map = m
        self.V = V
        self.data = data
        self.report = report

    @property
    def basepoint(self) -> complex:
        return self.map.basepoint

    def __call__(self, w):
        return self.V.field.at_point(self.map.g(w))

    def gradient(self, w):
        """U_x + i U_y."""
        return self.V.field.gradient(self.map.g(w)) * np.conj(self.map.gprime(w))

    def dirichlet_field(self, w):
        """The Dirichlet partner u = (r V_r)∘G."""
        return self.V.field.r_times_radial().at_point(self.map.g(w))


def _neumann_pullback(m: ConformalMapPair, Phi: Callable, n: int, K: int | None):
    theta = TWO_PI * np.arange(n) / n
    z_in = np.exp(1j * theta)
    z_out = m.r2 * z_in
    phi_in = _sample_real(Phi, m.f(z_in)) * np.abs(m.fprime(z_in))
    phi_out = _sample_real(Phi, m.f(z_out)) * np.abs(m.fprime(z_out))
    return AnnulusBoundaryData(
        1.0,
        m.r2,
        fourier_analyze(PeriodicFunction(samples=-phi_in), K),
        fourier_analyze(PeriodicFunction(samples=phi_out), K),
        "neumann",
    )


def doubly_connected_neumann(
    m: ConformalMapPair,
    Phi: Callable,
    n: int = DEFAULT_SAMPLES,
    K: int | None = None,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> MappedNeumannSolution:
    """Neumann problem ∂U/∂ν = Φ on the region D of a validated map pair.

    ``Phi`` takes complex boundary points of D.  The result vanishes at
    F(√r2).
    """
    report = validate_map(m, seed=seed)
    if not report.passed:
        raise MapValidationError(f"map {m.name!r} failed validation: {list(report.notes)}", report)
    data = _neumann_pullback(m, Phi, n, K)
    V = neumann_from_dirichlet_annulus(data, tol)
    return MappedNeumannSolution(m, V, data, report)


def doubly_connected_dirichlet_from_neumann(m: ConformalMapPair, U) -> Callable:
    """u(w) = ⟨∇U, ∇ω⟩/|∇ω|² with ∇ω = conj(G′/G), i.e. ℜ(∇U / conj(p)).

    ``U`` is an object with a ``gradient(w)`` method returning U_x + i U_y,
    or such a gradient callable itself.
    """
    grad = U.gradient if hasattr(U, "gradient") else U

    def u(w):
        w = np.asarray(w, dtype=complex)
        p = m.gprime(w) / m.g(w)
        if np.any(np.abs(p) < 1e-14):
            raise SingularPointError("∇ω vanishes at an evaluation point")
        return np.real(np.asarray(grad(w)) / np.conj(p))

    return u


class MappedDiskNeumannSolution:
    """U = V∘g on a simply connected region, V a unit-disk Neumann potential."""

    def __init__(self, m: RiemannMapPair, V: NeumannSolution, phi: PeriodicFunction,
                 report: RiemannValidationReport):
        self.map = m
        self.V = V
        self.phi = phi
        self.report = report

    def __call__(self, w):
        return self.V.field.at_point(_evaluator(self.map.g)(w))

    def gradient(self, w):
        g = _evaluator(self.map.g)
        gp = _evaluator(self.map.gprime)
        return self.V.field.gradient(g(w)) * np.conj(gp(w))


def simply_connected_transfer(
    m: RiemannMapPair,
    Phi: Callable,
    n: int = DEFAULT_SAMPLES,
    K: int | None = None,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> MappedDiskNeumannSolution:
    """Neumann problem on f(𝕌) with U(w0) = 0, through disk data Φ(f)/|g′∘f|."""
    report = validate_riemann_map(m, seed=seed)
    if not report.passed:
        raise MapValidationError(f"Riemann map {m.name!r} failed validation: {list(report.notes)}",
                                 report)
    theta = TWO_PI * np.arange(n) / n
    z = np.exp(1j * theta)
    w = _evaluator(m.f)(z)
    phi_vals = _sample_real(Phi, w) / np.abs(_evaluator(m.gprime)(w))
    phi = fourier_analyze(PeriodicFunction(samples=phi_vals), K)
    V = neumann_from_dirichlet_disk(phi, tol)
    return MappedDiskNeumannSolution(m, V, phi, report)


def simply_connected_dirichlet(m: RiemannMapPair, U) -> Callable:
    """u(w) = ℜ(conj(∇U(w))·g(w)/g′(w))."""
    grad = U.gradient if hasattr(U, "gradient") else U
    g = _evaluator(m.g)
    gp = _evaluator(m.gprime)

    def u(w):
        w = np.asarray(w, dtype=complex)
        return np.real(np.conj(np.asarray(grad(w))) * g(w) / gp(w))

    return u


# --------------------------------------------------------------------------
# Named and expression maps


def identity_map(r2: float) -> ConformalMapPair:
    one = lambda z: np.ones_like(z)  # noqa: E731
    ident = lambda z: z  # noqa: E731
    return ConformalMapPair(ident, one, ident, r2, one, "identity", {})


def scale_map(c: float, r2: float) -> ConformalMapPair:
    """D = {c < |w| < c·r2}, G(w) = w/c."""
    if not c > 0:
        raise PreconditionError("scale factor must be positive")
    return ConformalMapPair(
        lambda w: w / c,
        lambda w: np.full_like(w, 1.0 / c),
        lambda z: c * z,
        r2,
        lambda z: np.full_like(z, c),
        "scale",
        {"c": c},
    )


def rotation_map(alpha: float, r2: float) -> ConformalMapPair:
    """Annulus 1 < |w| < r2 with G(w) = e^{−iα} w."""
    rot = np.exp(1j * alpha)
    return ConformalMapPair(
        lambda w: w / rot,
        lambda w: np.full_like(w, 1 / rot),
        lambda z: rot * z,
        r2,
        lambda z: np.full_like(z, rot),
        "rotate",
        {"alpha": alpha},
    )


def rotation_riemann_map(alpha: float) -> RiemannMapPair:
    """f(z) = e^{iα} z on the unit disk."""
    rot = np.exp(1j * alpha)
    return RiemannMapPair(
        lambda z: rot * z,
        lambda z: np.full_like(z, rot),
        lambda w: w / rot,
        lambda w: np.full_like(w, 1 / rot),
        "rotate",
        {"alpha": alpha},
    )


def identity_riemann_map() -> RiemannMapPair:
    m = rotation_riemann_map(0.0)
    return RiemannMapPair(m.f, m.fprime, m.g, m.gprime, "identity", {})


def joukowsky_ring_map(a: float, b: float) -> ConformalMapPair:
    """Region between the confocal ellipses J(a e^{iθ}) and J(b e^{iθ}), 1 < a < b.

    G(w) = T₊(w)/a onto 1 < |z| < b/a, F(z) = J(a z).
    """
    if not 1.0 < a < b:
        raise PreconditionError(f"need 1 < a < b, got a={a}, b={b}")
    return ConformalMapPair(
        lambda w: t_plus(w) / a,
        lambda w: t_plus_prime(w) / a,
        lambda z: joukowsky(a * z),
        b / a,
        lambda z: a * joukowsky_prime(a * z),
        "joukowsky-ring",
        {"a": a, "b": b},
    )


def joukowsky_ellipse_map(rho: float) -> ConformalMapPair:
    """Ellipse E_ρ slit along [−1, 1]: G = T₊ onto 1 < |z| < ρ, F = J.

    The two banks of the slit are the same points of ℂ, so the pointwise
    round trip G(F(z)) = z cannot hold on the lower half of the unit circle
    and T₊′ blows up at the foci; :func:`validate_map` rejects this pair.
    It is listed for inspection.  Neumann problems on the full ellipse go
    through :func:`neumann_on_ellipse`.
    """
    EllipseRegion(rho)
    return ConformalMapPair(t_plus, t_plus_prime, joukowsky, float(rho), joukowsky_prime,
                            "joukowsky-ellipse", {"rho": float(rho)})


def expression_map(G: str, Gprime: str, F: str, r2: float, Fprime: str | None = None) -> ConformalMapPair:
    """Map pair from expression strings (see :mod:`harmonic_duality.expressions`).

    ``G`` and ``Gprime`` are written in the region variable ``w`` (``z`` also
    accepted), ``F`` and ``Fprime`` in ``z``.
    """
    eg = Expression(G, ("w", "z"))
    egp = Expression(Gprime, ("w", "z"))
    ef = Expression(F, ("z",))
    efp = None if Fprime is None else Expression(Fprime, ("z",))
    region = lambda e: (lambda w: e(w=w, z=w))  # noqa: E731
    params = {"G": str(eg), "Gprime": str(egp), "F": str(ef)}
    if efp is not None:
        params["Fprime"] = str(efp)
    return ConformalMapPair(region(eg), region(egp), ef, float(r2), efp, "expression", params)


def named_map(spec: str, r2: float | None = None) -> ConformalMapPair:
    """``identity``, ``scale:c``, ``rotate:alpha``, ``joukowsky-ring:a,b`` or ``joukowsky-ellipse:rho``."""
    name, _, arg = spec.partition(":")
    try:
        args = [float(x) for x in arg.split(",")] if arg else []
    except ValueError as exc:
        raise SchemaError(f"bad map spec {spec!r}: {exc}") from exc
    if name == "identity" and not args:
        return identity_map(_need_r2(r2))
    if name == "scale" and len(args) == 1:
        return scale_map(args[0], _need_r2(r2))
    if name == "rotate" and len(args) == 1:
        return rotation_map(args[0], _need_r2(r2))
    if name == "joukowsky-ellipse" and len(args) == 1:
        return joukowsky_ellipse_map(args[0])
    if name == "joukowsky-ring" and len(args) == 2:
        return joukowsky_ring_map(*args)
    raise SchemaError(f"unknown map spec {spec!r}")


def named_riemann_map(spec: str) -> RiemannMapPair:
    """``identity`` or ``rotate:alpha`` on the unit disk."""
    name, _, arg = spec.partition(":")
    if name == "identity" and not arg:
        return identity_riemann_map()
    if name == "rotate" and arg:
        try:
            alpha = float(arg)
        except ValueError as exc:
            raise SchemaError(f"bad map spec {spec!r}: {exc}") from exc
        return rotation_riemann_map(alpha)
    raise SchemaError(f"unknown Riemann map spec {spec!r}")


def _need_r2(r2):
    if r2 is None:
        raise SchemaError("this map needs the canonical outer radius r2")
    return float(r2)
