"""Periodic boundary data on circles and the solvability checks that go with them.

Boundary functions are real and 2π-periodic.  They are held either as a
truncated Fourier series

    f(θ) = a0 + Σ_{k=1..K} (a_k cos kθ + b_k sin kθ)

or as N equispaced samples on [0, 2π).  Every solver in the package works on
coefficients; samples are analysed on demand with :func:`fourier_analyze`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

import numpy as np

from .errors import (
    DataMismatchError,
    NonZeroMeanError,
    PreconditionError,
    RadiusError,
    SchemaError,
    TooFewSamplesError,
)

DEFAULT_ORDER = 64
DEFAULT_TOL = 1e-9
TWO_PI = 2.0 * math.pi

KINDS = ("dirichlet", "neumann")


def _as_real_vector(values, name):
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise PreconditionError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


def default_order(n_samples: int) -> int:
    """Largest order resolvable from ``n_samples`` points, floor((N - 2) / 2)."""
    return max((int(n_samples) - 2) // 2, 0)


class PeriodicFunction:
    """A real 2π-periodic function.

    Parameters
    ----------
    a0 : float
        Mean value.
    a, b : sequence of float
        Cosine and sine coefficients for k = 1..K.  Shorter of the two is
        zero-padded.
    samples : sequence of float, optional
        Equispaced values on [0, 2π).  Mutually exclusive with coefficients.
    tail : float
        Bound on what truncation threw away (set by :func:`fourier_analyze`).

    Instances are immutable.
    """

    __slots__ = ("_a0", "_a", "_b", "_samples", "_coef", "tail")

    def __init__(self, a0=0.0, a=(), b=(), *, samples=None, tail=0.0):
        if samples is not None:
            if len(a) or len(b) or a0 != 0.0:
                raise PreconditionError("give either coefficients or samples, not both")
            s = _as_real_vector(samples, "samples")
            if s.size < 4 or s.size % 2:
                raise TooFewSamplesError(
                    f"sample count must be even and >= 4, got {s.size}"
                )
            self._samples = s
            self._a0 = None
            self._a = self._b = None
        else:
            a = _as_real_vector(a, "a")
            b = _as_real_vector(b, "b")
            K = max(a.size, b.size)
            aa = np.zeros(K)
            bb = np.zeros(K)
            aa[: a.size] = a
            bb[: b.size] = b
            aa.setflags(write=False)
            bb.setflags(write=False)
            if not math.isfinite(float(a0)):
                raise PreconditionError("a0 is not finite")
            self._a0 = float(a0)
            self._a, self._b = aa, bb
            self._samples = None
        self._coef = None
        self.tail = float(tail)

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: float) -> "PeriodicFunction":
        return cls(a0=c)

    @classmethod
    def mode(cls, k: int, cos: float = 0.0, sin: float = 0.0) -> "PeriodicFunction":
        """Single Fourier mode ``cos*cos(kθ) + sin*sin(kθ)`` (k = 0 gives a constant)."""
        if k < 0:
            raise PreconditionError("mode index must be >= 0")
        if k == 0:
            return cls(a0=cos)
        a = np.zeros(k)
        b = np.zeros(k)
        a[k - 1] = cos
        b[k - 1] = sin
        return cls(0.0, a, b)

    @classmethod
    def from_samples(cls, values) -> "PeriodicFunction":
        return cls(samples=values)

    @classmethod
    def from_callable(cls, fn: Callable, n: int) -> "PeriodicFunction":
        """Sample ``fn(theta)`` at ``n`` equispaced nodes."""
        theta = TWO_PI * np.arange(n) / n
        return cls(samples=np.asarray(fn(theta), dtype=float) * np.ones(n))

    # -- introspection ------------------------------------------------------

    @property
    def form(self) -> str:
        return "samples" if self._samples is not None else "coefficients"

    @property
    def N(self) -> int:
        """Sample count (0 for coefficient form)."""
        return 0 if self._samples is None else self._samples.size

    @property
    def samples_array(self) -> np.ndarray:
        if self._samples is None:
            raise PreconditionError("function is in coefficient form")
        return self._samples

    def coefficients(self) -> "PeriodicFunction":
        """Coefficient form (sampled data analysed at the default order)."""
        if self._samples is None:
            return self
        if self._coef is None:
            self._coef = fourier_analyze(self)
        return self._coef

    @property
    def a0(self) -> float:
        return self.coefficients()._a0

    @property
    def a(self) -> np.ndarray:
        return self.coefficients()._a

    @property
    def b(self) -> np.ndarray:
        return self.coefficients()._b

    @property
    def K(self) -> int:
        return self.a.size

    def mean(self) -> float:
        return self.a0

    def sup_bound(self) -> float:
        """|a0| + Σ(|a_k| + |b_k|), an upper bound for max |f|."""
        return abs(self.a0) + float(np.abs(self.a).sum() + np.abs(self.b).sum())

    # -- evaluation ---------------------------------------------------------

    def __call__(self, theta):
        theta = np.mod(np.asarray(theta, dtype=float), TWO_PI)
        a, b = self.a, self.b
        out = np.full(theta.shape, self.a0)
        if a.size:
            k = np.arange(1, a.size + 1)
            kt = theta[..., None] * k
            out = out + np.cos(kt) @ a + np.sin(kt) @ b
        return out

    def sample(self, n: int) -> np.ndarray:
        """Values on ``n`` equispaced nodes of [0, 2π)."""
        if self._samples is not None and n == self._samples.size:
            return np.array(self._samples)
        return self(TWO_PI * np.arange(n) / n)

    # -- algebra ------------------------------------------------------------

    def padded(self, K: int) -> "PeriodicFunction":
        """Coefficient form with exactly ``K`` modes (truncating if larger)."""
        a, b = self.a, self.b
        aa = np.zeros(K)
        bb = np.zeros(K)
        m = min(K, a.size)
        aa[:m] = a[:m]
        bb[:m] = b[:m]
        return PeriodicFunction(self.a0, aa, bb, tail=self.coefficients().tail)

    def rotated(self, c: float) -> "PeriodicFunction":
        """The function θ ↦ f(θ + c)."""
        k = np.arange(1, self.K + 1)
        cs, sn = np.cos(k * c), np.sin(k * c)
        a, b = self.a, self.b
        return PeriodicFunction(self.a0, a * cs + b * sn, b * cs - a * sn)

    def _binary(self, other, op):
        if isinstance(other, PeriodicFunction):
            K = max(self.K, other.K)
            p, q = self.padded(K), other.padded(K)
            return PeriodicFunction(op(p.a0, q.a0), op(p.a, q.a), op(p.b, q.b))
        return NotImplemented

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self):
        return self * -1.0

    def __mul__(self, c):
        if isinstance(c, PeriodicFunction):
            return NotImplemented
        c = float(c)
        return PeriodicFunction(c * self.a0, c * self.a, c * self.b)

    __rmul__ = __mul__

    def __repr__(self):
        if self._samples is not None:
            return f"PeriodicFunction(samples=<{self._samples.size}>)"
        return f"PeriodicFunction(a0={self._a0!r}, K={self._a.size})"

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        if self._samples is not None:
            return {"samples": self._samples.tolist()}
        return {"a0": self._a0, "a": self._a.tolist(), "b": self._b.tolist()}

    @classmethod
    def from_dict(cls, d: Mapping) -> "PeriodicFunction":
        if not isinstance(d, Mapping):
            raise SchemaError("boundary function must be a JSON object")
        try:
            if "samples" in d:
                extra = set(d) - {"samples"}
                if extra:
                    raise SchemaError(f"unexpected keys next to 'samples': {sorted(extra)}")
                return cls(samples=d["samples"])
            return cls(float(d.get("a0", 0.0)), d.get("a", []), d.get("b", []))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"bad boundary function: {exc}") from exc


def fourier_analyze(f, K: int | None = None) -> PeriodicFunction:
    """Discrete Fourier analysis of sampled data.

    Parameters
    ----------
    f : PeriodicFunction or array_like
        Sample-form function (or the raw sample array).
    K : int, optional
        Truncation order; defaults to floor((N - 2) / 2).

    Returns
    -------
    PeriodicFunction
        Coefficient form.  ``tail`` holds Σ of the amplitudes of the
        discarded modes, which bounds the reconstruction error at the nodes.
    """
    if isinstance(f, PeriodicFunction):
        if f.form == "coefficients":
            K = f.K if K is None else K
            out = f.padded(K)
            dropped = np.hypot(f.a[K:], f.b[K:]).sum() if f.K > K else 0.0
            out.tail = float(dropped)
            return out
        x = f.samples_array
    else:
        x = _as_real_vector(f, "samples")
    n = x.size
    if K is None:
        K = default_order(n)
    if n < 2 * K + 2:
        raise TooFewSamplesError(f"need N >= 2K + 2 samples, got N={n} for K={K}")
    c = np.fft.rfft(x) / n
    a0 = c[0].real
    a = 2.0 * c[1 : K + 1].real
    b = -2.0 * c[1 : K + 1].imag
    rest = np.abs(c[K + 1 :])
    tail = 2.0 * rest.sum()
    if n % 2 == 0 and rest.size:
        tail -= rest[-1]  # the Nyquist bin counts once
    return PeriodicFunction(a0, a, b, tail=float(tail))


@dataclass(frozen=True)
class AnnulusBoundaryData:
    """Dirichlet or Neumann data on the two circles |z| = r1 and |z| = r2.

    Neumann data follow the radial-derivative convention: ``inner`` and
    ``outer`` are u_r on the respective circles, so the outward normal
    derivative at r1 is ``-inner``.  Use :meth:`from_normal_derivative` to
    build them from outward normal derivatives instead.
    """

    r1: float
    r2: float
    inner: PeriodicFunction
    outer: PeriodicFunction
    kind: str = "dirichlet"

    def __post_init__(self):
        r1, r2 = float(self.r1), float(self.r2)
        if not (math.isfinite(r1) and math.isfinite(r2)):
            raise RadiusError("radii must be finite")
        if r1 < 0 or not r1 < r2:
            raise RadiusError(f"need 0 <= r1 < r2, got r1={r1}, r2={r2}")
        kind = str(self.kind).lower()
        if kind not in KINDS:
            raise SchemaError(f"kind must be one of {KINDS}, got {self.kind!r}")
        object.__setattr__(self, "r1", r1)
        object.__setattr__(self, "r2", r2)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def from_normal_derivative(cls, r1, r2, f_inner, f_outer) -> "AnnulusBoundaryData":
        """Neumann data from outward normal derivatives on each circle."""
        return cls(r1, r2, -f_inner.coefficients(), f_outer.coefficients(), "neumann")

    @property
    def order(self) -> int:
        return max(self.inner.K, self.outer.K)

    def coefficient_form(self, K: int | None = None) -> "AnnulusBoundaryData":
        """Both sides as coefficients of one common order."""
        inner = fourier_analyze(self.inner) if self.inner.form == "samples" else self.inner
        outer = fourier_analyze(self.outer) if self.outer.form == "samples" else self.outer
        if K is None:
            K = max(inner.K, outer.K)
        return AnnulusBoundaryData(
            self.r1, self.r2, fourier_analyze(inner, K), fourier_analyze(outer, K), self.kind
        )

    def to_dict(self) -> dict:
        return {
            "r1": self.r1,
            "r2": self.r2,
            "kind": self.kind,
            "inner": self.inner.to_dict(),
            "outer": self.outer.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "AnnulusBoundaryData":
        if not isinstance(d, Mapping):
            raise SchemaError("boundary data must be a JSON object")
        missing = {"r1", "r2", "kind", "inner", "outer"} - set(d)
        if missing:
            raise SchemaError(f"boundary data missing keys: {sorted(missing)}")
        try:
            r1, r2 = float(d["r1"]), float(d["r2"])
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"radii must be numbers: {exc}") from exc
        return cls(
            r1,
            r2,
            PeriodicFunction.from_dict(d["inner"]),
            PeriodicFunction.from_dict(d["outer"]),
            d["kind"],
        )

    @classmethod
    def load(cls, path) -> "AnnulusBoundaryData":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")


@dataclass(frozen=True)
class CompatibilityReport:
    """Outcome of a solvability check.  Truthy when the check passed."""

    passed: bool
    defect: float
    scale: float
    tol: float
    notes: tuple = field(default_factory=tuple)

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "defect": float(self.defect),
            "scale": float(self.scale),
            "tol": float(self.tol),
            "notes": list(self.notes),
        }


def check_neumann_compatibility(
    data: AnnulusBoundaryData, tol: float = DEFAULT_TOL
) -> CompatibilityReport:
    """Zero-net-flux condition ∫ r1 ϕ(r1,θ) dθ = ∫ r2 ϕ(r2,θ) dθ.

    The defect is 2π (r1·mean(inner) − r2·mean(outer)); the check passes when
    ``|defect| <= tol * max(1, scale)`` with ``scale`` a sup-norm bound of the
    two weighted boundary functions times 2π.
    """
    if data.kind != "neumann":
        raise PreconditionError("Neumann compatibility needs kind='neumann' data")
    if data.r1 <= 0:
        raise RadiusError("Neumann compatibility is defined for r1 > 0")
    defect = TWO_PI * (data.r1 * data.inner.a0 - data.r2 * data.outer.a0)
    scale = TWO_PI * max(data.r1 * data.inner.sup_bound(), data.r2 * data.outer.sup_bound())
    return CompatibilityReport(abs(defect) <= tol * max(1.0, scale), defect, scale, tol)


def check_dirichlet_mean_compatibility(
    data: AnnulusBoundaryData, tol: float = DEFAULT_TOL
) -> CompatibilityReport:
    """Equal circle means of Dirichlet data; passing means the log term vanishes."""
    if data.kind != "dirichlet":
        raise PreconditionError("mean compatibility needs kind='dirichlet' data")
    defect = TWO_PI * (data.inner.a0 - data.outer.a0)
    scale = TWO_PI * max(data.inner.sup_bound(), data.outer.sup_bound())
    return CompatibilityReport(abs(defect) <= tol * max(1.0, scale), defect, scale, tol)


def origin_datum(phi_outer: PeriodicFunction) -> PeriodicFunction:
    """(1/π)∫ cos(t − θ) ϕ(t) dt, i.e. the first harmonic of ``phi_outer``."""
    c = phi_outer.coefficients()
    if c.K == 0:
        return PeriodicFunction()
    return PeriodicFunction(0.0, c.a[:1], c.b[:1])


def check_punctured_neumann_data(
    phi_origin: PeriodicFunction, phi_outer: PeriodicFunction, tol: float = DEFAULT_TOL
) -> CompatibilityReport:
    """Validate Neumann data for the punctured unit disk.

    ``phi_outer`` must have zero mean and ``phi_origin`` must be exactly the
    first harmonic of ``phi_outer`` (the value the radial derivative of the
    solution takes at the puncture).

    Raises
    ------
    NonZeroMeanError
        if the outer datum carries net flux.
    DataMismatchError
        if the origin datum disagrees with the first harmonic; ``modes`` maps
        each offending mode to the size of the discrepancy.
    """
    outer = phi_outer.coefficients()
    origin = phi_origin.coefficients()
    scale = max(1.0, outer.sup_bound(), origin.sup_bound())
    if abs(outer.a0) > tol * scale:
        raise NonZeroMeanError(
            f"outer Neumann datum has nonzero mean {outer.a0:.3e}", defect=TWO_PI * outer.a0
        )
    diff = origin - origin_datum(outer)
    per_mode = {0: abs(diff.a0)}
    for k in range(1, diff.K + 1):
        per_mode[k] = math.hypot(diff.a[k - 1], diff.b[k - 1])
    bad = {k: v for k, v in per_mode.items() if v > tol * scale}
    worst = max(per_mode.values())
    if bad:
        raise DataMismatchError(
            "origin datum is not the first harmonic of the outer datum "
            f"(offending modes {sorted(bad)})",
            defect=worst,
            modes=bad,
        )
    return CompatibilityReport(True, worst, scale, tol)
