"""Exact Fourier–Laurent solutions of the Dirichlet problem on annuli and disks.

Every harmonic function on an annulus with band-limited traces is

    u(r, θ) = A + B log r + Σ_k [(C_k r^k + D_k r^−k) cos kθ + (E_k r^k + G_k r^−k) sin kθ]

and :class:`AnnulusHarmonicSeries` stores exactly those numbers.  The disk is
the special case r1 = 0 with B = D = G = 0.
"""

from __future__ import annotations

import json
import logging
import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np

from .boundary import (
    DEFAULT_TOL,
    TWO_PI,
    AnnulusBoundaryData,
    PeriodicFunction,
    check_dirichlet_mean_compatibility,
    fourier_analyze,
)
from .errors import NonZeroLogError, NonZeroMeanError, PreconditionError, RadiusError, SchemaError

log = logging.getLogger(__name__)

#: exp(±EXP_LIMIT) is comfortably inside the double range
EXP_LIMIT = 700.0
RADIUS_RTOL = 1e-12

_DERIV_RE = re.compile(r"^u(?:_([rtθ]+))?$")


def parse_derivative(name: str) -> tuple[int, int]:
    """``'u_rrt'`` → (2, 1).  ``t`` and ``θ`` both denote the angle."""
    if name in ("u_theta", "u_θ"):
        return 0, 1
    m = _DERIV_RE.match(name.replace("theta", "t"))
    if not m:
        raise PreconditionError(f"unknown derivative name {name!r}")
    letters = m.group(1) or ""
    nr = letters.count("r")
    nt = len(letters) - nr
    if nr + nt > 3:
        raise PreconditionError("derivatives are available up to total order 3")
    return nr, nt


def _falling(x: np.ndarray, n: int) -> np.ndarray:
    out = np.ones_like(x, dtype=float)
    for j in range(n):
        out = out * (x - j)
    return out


def _times_power(c: np.ndarray, log_base: float, k: np.ndarray) -> np.ndarray:
    """c·base^k evaluated in log space (zero coefficients stay zero)."""
    out = np.zeros_like(c, dtype=float)
    nz = c != 0
    out[nz] = np.sign(c[nz]) * np.exp(np.log(np.abs(c[nz])) + k[nz] * log_base)
    return out


def _ro(arr) -> np.ndarray:
    a = np.array(arr, dtype=float).reshape(-1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AnnulusHarmonicSeries:
    """Harmonic field on r1 ≤ r ≤ r2 in Fourier–Laurent form.

    Arrays ``C, D, E, G`` are indexed by k − 1.  With ``r1 == 0`` the object
    is a disk field and must have ``B = 0`` and ``D = G = 0``.
    """

    r1: float
    r2: float
    A: float = 0.0
    B: float = 0.0
    C: np.ndarray = ()
    D: np.ndarray = ()
    E: np.ndarray = ()
    G: np.ndarray = ()

    def __post_init__(self):
        r1, r2 = float(self.r1), float(self.r2)
        if r1 < 0 or not r1 < r2 or not math.isfinite(r2):
            raise RadiusError(f"need 0 <= r1 < r2 < inf, got r1={r1}, r2={r2}")
        arrs = [np.asarray(x, dtype=float).reshape(-1) for x in (self.C, self.D, self.E, self.G)]
        K = max(a.size for a in arrs)
        padded = []
        for a in arrs:
            p = np.zeros(K)
            p[: a.size] = a
            padded.append(_ro(p))
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "A", float(self.A))
        object.__setattr__(self, "B", float(self.B))
        for name, a in zip("CDEG", padded):
            object.__setattr__(self, name, a)
        if r1 == 0 and (self.B != 0 or np.any(self.D) or np.any(self.G)):
            raise PreconditionError("a disk series (r1 = 0) cannot carry log r or r^-k terms")
        vals = np.concatenate([[self.A, self.B], *padded])
        if not np.all(np.isfinite(vals)):
            raise PreconditionError("series coefficients must be finite")

    # -- basic properties ---------------------------------------------------

    @property
    def K(self) -> int:
        return self.C.size

    @property
    def is_disk(self) -> bool:
        return self.r1 == 0.0

    @property
    def s(self) -> float:
        """Geometric mean radius √(r1 r2), the default normalization radius."""
        return math.sqrt(self.r1 * self.r2)

    def coefficient_vector(self) -> np.ndarray:
        """[A, B, C..., D..., E..., G...] for coefficientwise comparisons."""
        return np.concatenate([[self.A, self.B], self.C, self.D, self.E, self.G])

    def padded(self, K: int) -> "AnnulusHarmonicSeries":
        def cut(a):
            p = np.zeros(K)
            m = min(K, a.size)
            p[:m] = a[:m]
            return p

        return AnnulusHarmonicSeries(
            self.r1, self.r2, self.A, self.B, cut(self.C), cut(self.D), cut(self.E), cut(self.G)
        )

    def sup_bound(self) -> float:
        """Crude upper bound for max |u| over the closed annulus."""
        k = np.arange(1, self.K + 1)
        out = abs(self.A) + abs(self.B) * max(abs(math.log(self.r2)), 0.0)
        lo2 = math.log(self.r2)
        out += float((np.abs(_times_power(self.C, lo2, k)) + np.abs(_times_power(self.E, lo2, k))).sum())
        if not self.is_disk:
            lo1 = -math.log(self.r1)
            out += abs(self.B) * abs(math.log(self.r1))
            out += float((np.abs(_times_power(self.D, lo1, k)) + np.abs(_times_power(self.G, lo1, k))).sum())
        return out

    # -- evaluation ---------------------------------------------------------

    def _check_radius(self, r: np.ndarray):
        lo = self.r1 * (1 - RADIUS_RTOL)
        hi = self.r2 * (1 + RADIUS_RTOL)
        if np.any(r < lo) or np.any(r > hi) or np.any(np.isnan(r)):
            bad = r[(r < lo) | (r > hi) | np.isnan(r)]
            raise RadiusError(
                f"radius {bad.flat[0]!r} outside the series range [{self.r1}, {self.r2}]"
            )

    def derivative(self, r, theta, nr: int = 0, nt: int = 0, check: bool = True):
        """∂^{nr}_r ∂^{nt}_θ u at (r, θ), broadcasting ``r`` against ``theta``."""
        if nr < 0 or nt < 0 or nr + nt > 3:
            raise PreconditionError("derivative orders must satisfy 0 <= nr + nt <= 3")
        r, theta = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(theta, dtype=float))
        shape = r.shape
        r = r.reshape(-1)
        theta = theta.reshape(-1)
        if check:
            self._check_radius(r)
        out = np.zeros(r.shape)
        if nt == 0:
            if nr == 0:
                out += self.A
            if self.B != 0.0:
                if nr == 0:
                    out += self.B * np.log(r)
                else:
                    out += self.B * (-1.0) ** (nr - 1) * math.factorial(nr - 1) / r**nr
        if self.K:
            # Powers are taken relative to the boundary radii, (r/r2)^k and
            # (r1/r)^k, both ≤ 1 inside, so high modes cannot overflow.
            k = np.arange(1, self.K + 1, dtype=float)
            lo2 = math.log(self.r2)
            C, E = _times_power(self.C, lo2, k), _times_power(self.E, lo2, k)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                fp = _falling(k, nr)
                rp = np.where(fp == 0, 0.0, fp * (r[:, None] / self.r2) ** (k - nr)) / self.r2**nr
                if self.is_disk:
                    rm = np.zeros_like(rp)
                    D = G = np.zeros_like(k)
                else:
                    lo1 = -math.log(self.r1)
                    D, G = _times_power(self.D, lo1, k), _times_power(self.G, lo1, k)
                    rm = _falling(-k, nr) * (self.r1 / r[:, None]) ** (k + nr) / self.r1**nr
            phase = k * theta[:, None] + nt * (math.pi / 2)
            kn = k**nt
            cos_part = (C * rp + D * rm) * kn
            sin_part = (E * rp + G * rm) * kn
            out += (cos_part * np.cos(phase) + sin_part * np.sin(phase)).sum(axis=1)
        return out.reshape(shape) if shape else float(out[0])

    def __call__(self, r, theta):
        return self.derivative(r, theta)

    def at_point(self, z, nr: int = 0, nt: int = 0):
        """Evaluate at complex point(s) ``z``."""
        z = np.asarray(z, dtype=complex)
        return self.derivative(np.abs(z), np.angle(z), nr, nt)

    def gradient(self, z) -> np.ndarray:
        """Complex gradient u_x + i u_y at complex point(s) ``z`` (not the origin)."""
        z = np.asarray(z, dtype=complex)
        r, t = np.abs(z), np.angle(z)
        u_r = np.asarray(self.derivative(r, t, 1, 0))
        u_t = np.asarray(self.derivative(r, t, 0, 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            g = np.exp(1j * t) * (u_r + 1j * u_t / r)
        if self.is_disk and np.any(r == 0):
            # at the centre only the k = 1 mode has a gradient
            g0 = (self.C[0] + 1j * self.E[0]) if self.K else 0j
            g = np.where(r == 0, g0, g)
        return g if np.ndim(g) else complex(g)

    # -- traces and algebra -------------------------------------------------

    def trace(self, r: float) -> PeriodicFunction:
        """Coefficients of θ ↦ u(r, θ)."""
        self._check_radius(np.array([r]))
        k = np.arange(1, self.K + 1)
        a0 = self.A + (self.B * math.log(r) if self.B else 0.0)
        lr = math.log(r) if r > 0 else -math.inf
        if r == 0:
            return PeriodicFunction(a0, np.zeros(self.K), np.zeros(self.K))
        cos = _times_power(self.C, lr, k)
        sin = _times_power(self.E, lr, k)
        if not self.is_disk:
            cos = cos + _times_power(self.D, -lr, k)
            sin = sin + _times_power(self.G, -lr, k)
        return PeriodicFunction(a0, cos, sin)

    def radial_derivative_trace(self, r: float) -> PeriodicFunction:
        """Coefficients of θ ↦ u_r(r, θ)."""
        return self.r_times_radial().trace(r) * (1.0 / r)

    def r_times_radial(self) -> "AnnulusHarmonicSeries":
        """The series of r·u_r, again harmonic: log r ↦ 1, r^k ↦ k r^k, r^-k ↦ −k r^-k."""
        k = np.arange(1, self.K + 1)
        return AnnulusHarmonicSeries(
            self.r1, self.r2, self.B, 0.0, k * self.C, -k * self.D, k * self.E, -k * self.G
        )

    def rescaled(self, lam: float) -> "AnnulusHarmonicSeries":
        """The field R ↦ u(λR, θ) on [r1/λ, r2/λ]."""
        k = np.arange(1, self.K + 1)
        logs = k * math.log(lam)

        def scale(c, sign):
            # c·λ^{±k} in log space: λ^k alone overflows long before the product does
            out = np.zeros_like(c)
            nz = c != 0
            out[nz] = np.sign(c[nz]) * np.exp(np.log(np.abs(c[nz])) + sign * logs[nz])
            return out

        return AnnulusHarmonicSeries(
            self.r1 / lam,
            self.r2 / lam,
            self.A + (self.B * math.log(lam) if self.B else 0.0),
            self.B,
            scale(self.C, 1),
            scale(self.D, -1),
            scale(self.E, 1),
            scale(self.G, -1),
        )

    def laplace_residual(self, r, theta):
        """u_rr + u_r/r + u_θθ/r², evaluated from the analytic partials."""
        return (
            self.derivative(r, theta, 2, 0)
            + self.derivative(r, theta, 1, 0) / r
            + self.derivative(r, theta, 0, 2) / np.asarray(r) ** 2
        )

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        modes = [
            {"k": k + 1, "C": float(self.C[k]), "D": float(self.D[k]),
             "E": float(self.E[k]), "G": float(self.G[k])}
            for k in range(self.K)
        ]
        return {"r1": self.r1, "r2": self.r2, "A": self.A, "B": self.B, "modes": modes}

    @classmethod
    def from_dict(cls, d: Mapping) -> "AnnulusHarmonicSeries":
        try:
            modes = d.get("modes", [])
            K = max((int(m["k"]) for m in modes), default=0)
            arr = {n: np.zeros(K) for n in "CDEG"}
            for m in modes:
                k = int(m["k"])
                if k < 1:
                    raise SchemaError("mode index k must be >= 1")
                for n in "CDEG":
                    arr[n][k - 1] = float(m.get(n, 0.0))
            return cls(float(d["r1"]), float(d["r2"]), float(d.get("A", 0.0)),
                       float(d.get("B", 0.0)), arr["C"], arr["D"], arr["E"], arr["G"])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"bad series JSON: {exc!r}") from exc

    @classmethod
    def load(cls, path) -> "AnnulusHarmonicSeries":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def __repr__(self):
        return (f"AnnulusHarmonicSeries(r1={self.r1}, r2={self.r2}, A={self.A:.6g}, "
                f"B={self.B:.6g}, K={self.K})")


def evaluate(series: AnnulusHarmonicSeries, r, theta, *names: str):
    """Evaluate ``series`` and/or its partials at (r, θ).

    ``names`` are strings like ``'u'``, ``'u_r'``, ``'u_rt'``, ``'u_ttt'``.
    One name returns an array; several return a dict keyed by name.

    >>> u = AnnulusHarmonicSeries(1.0, 3.0, B=1.0)
    >>> round(evaluate(u, math.e, 0.0, "u_r") * math.e, 12)
    1.0
    """
    names = names or ("u",)
    out = {n: series.derivative(r, theta, *parse_derivative(n)) for n in names}
    return out[names[0]] if len(names) == 1 else out


def _overflow_mask(K: int, radii) -> np.ndarray:
    k = np.arange(1, K + 1)
    worst = max(abs(math.log(x)) for x in radii if x > 0) if any(x > 0 for x in radii) else 0.0
    return k * worst > EXP_LIMIT


def _warn_dropped(mask: np.ndarray):
    if mask.any():
        warnings.warn(
            f"dropped {int(mask.sum())} modes (k >= {int(np.argmax(mask)) + 1}) whose "
            "radial powers leave the floating-point exponent range",
            RuntimeWarning,
            stacklevel=3,
        )


def solve_dirichlet_annulus(data: AnnulusBoundaryData, K: int | None = None) -> AnnulusHarmonicSeries:
    """Series solution of Δu = 0 on r1 < r < r2 with u = inner/outer on the circles.

    Each mode is solved in the scaled basis (r/r2)^k, (r1/r)^k, which keeps
    the 2×2 system well conditioned for every k; coefficients are converted to
    the plain r^{±k} basis afterwards.
    """
    if data.kind != "dirichlet":
        raise PreconditionError("solve_dirichlet_annulus needs kind='dirichlet' data")
    if data.r1 <= 0:
        raise RadiusError("annulus solve needs r1 > 0; use solve_dirichlet_disk for disks")
    data = data.coefficient_form(K)
    r1, r2 = data.r1, data.r2
    fin, fout = data.inner, data.outer
    K = fin.K

    B = (fout.a0 - fin.a0) / math.log(r2 / r1)
    A = fin.a0 - B * math.log(r1)
    report = check_dirichlet_mean_compatibility(data)
    if not report.passed:
        log.info("circle means differ (defect %.3e): log coefficient B = %.6g", report.defect, B)

    k = np.arange(1, K + 1)
    q = (r1 / r2) ** k
    den = 1.0 - q * q
    drop = _overflow_mask(K, (r1, r2))
    _warn_dropped(drop)
    with np.errstate(over="ignore", under="ignore"):
        up = np.where(drop, 0.0, r2 ** (-k.astype(float)))
        down = np.where(drop, 0.0, r1 ** k.astype(float))

    def pair(inner, outer):
        alpha = (outer - q * inner) / den
        beta = (inner - q * outer) / den
        return alpha * up, beta * down

    C, D = pair(fin.a, fout.a)
    E, G = pair(fin.b, fout.b)
    return AnnulusHarmonicSeries(r1, r2, A, B, C, D, E, G)


def solve_dirichlet_disk(phi: PeriodicFunction, r2: float = 1.0) -> AnnulusHarmonicSeries:
    """u = a0 + Σ (r/r2)^k (a_k cos kθ + b_k sin kθ) on the disk of radius r2."""
    if not r2 > 0:
        raise RadiusError(f"disk radius must be positive, got {r2}")
    c = fourier_analyze(phi) if phi.form == "samples" else phi
    k = np.arange(1, c.K + 1)
    drop = _overflow_mask(c.K, (r2,))
    _warn_dropped(drop)
    with np.errstate(over="ignore", under="ignore"):
        scale = np.where(drop, 0.0, float(r2) ** (-k.astype(float)))
    return AnnulusHarmonicSeries(0.0, r2, c.a0, 0.0, c.a * scale, (), c.b * scale, ())


def solve_dirichlet_punctured(phi: PeriodicFunction, tol: float = DEFAULT_TOL) -> AnnulusHarmonicSeries:
    """Dirichlet problem on the punctured unit disk with u(0) = 0.

    Solvable only for zero-mean data; the solution is then the ordinary disk
    solution, which vanishes at the centre automatically.
    """
    c = fourier_analyze(phi) if phi.form == "samples" else phi
    if abs(c.a0) > tol * max(1.0, c.sup_bound()):
        raise NonZeroMeanError(
            f"punctured-disk data must have zero mean, got mean {c.a0:.6g}",
            defect=TWO_PI * c.a0,
        )
    return solve_dirichlet_disk(PeriodicFunction(0.0, c.a, c.b), 1.0)


@dataclass(frozen=True)
class CircleMeanProfile:
    """∫₀^{2π} u(r, θ) dθ = alpha·log r + beta."""

    alpha: float
    beta: float

    def at(self, r):
        return self.alpha * np.log(r) + self.beta


def circle_mean(series: AnnulusHarmonicSeries) -> CircleMeanProfile:
    return CircleMeanProfile(TWO_PI * series.B, TWO_PI * series.A)


def require_zero_log(series: AnnulusHarmonicSeries, tol: float = DEFAULT_TOL) -> None:
    """Raise unless the log r coefficient is negligible."""
    if series.is_disk or series.B == 0.0:
        return
    span = max(1.0, abs(math.log(series.r1)), abs(math.log(series.r2)))
    if abs(series.B) * span > tol * max(1.0, series.sup_bound()):
        raise NonZeroLogError(f"log coefficient B = {series.B:.3e} must vanish here")


def harmonic_conjugate_on_cut(series: AnnulusHarmonicSeries, tol: float = DEFAULT_TOL) -> AnnulusHarmonicSeries:
    """Harmonic conjugate v₀ with v₀(√(r1 r2), 0) = 0.

    Termwise, r^k cos kθ ↦ r^k sin kθ, r^k sin kθ ↦ −r^k cos kθ,
    r^-k cos kθ ↦ −r^-k sin kθ and r^-k sin kθ ↦ r^-k cos kθ.  A nonzero
    log term would make the conjugate multivalued (its conjugate is Bθ), so
    it is refused.  For disks the normalization point is the centre.
    """
    require_zero_log(series, tol)
    s = series.s
    k = np.arange(1, series.K + 1)
    if series.is_disk:
        const = 0.0
    else:
        ls = math.log(s)
        const = float((_times_power(series.E, ls, k) - _times_power(series.G, -ls, k)).sum())
    return AnnulusHarmonicSeries(
        series.r1, series.r2, const, 0.0, -series.E, series.G, series.C, -series.D
    )
