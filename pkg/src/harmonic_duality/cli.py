"""Command-line front end.

    harmonic-duality solve        --config job.json --out DIR [--grid 64x128] [--order K] [--tol X] [--seed N]
    harmonic-duality transform    --config job.json --out DIR
    harmonic-duality verify       --config job.json --out DIR
    harmonic-duality ellipse      --config job.json --out DIR
    harmonic-duality map-validate --config job.json --out DIR
    harmonic-duality export       SOLUTION.json     --out DIR [--grid 64x128]

A job is a JSON document with a versioned ``"schema": 1`` field; see
``CONFIG_SCHEMA`` below and the README for worked examples.  Every command
writes some of ``solution.json``, ``grid.csv`` and ``report.json`` into the
output directory.  Outputs depend only on the config, the flags and the seed.

Exit codes: 0 success, 2 malformed config, 3 mathematical precondition
violated (incompatible data, failed map validation, ...), 4 numerical
failure (including a verification that does not pass).  On failure stderr
receives exactly one line of JSON describing the error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import jsonschema
import numpy as np

from . import __version__
from .boundary import (
    TWO_PI,
    AnnulusBoundaryData,
    PeriodicFunction,
    check_dirichlet_mean_compatibility,
    check_neumann_compatibility,
    origin_datum,
)
from .conformal import (
    ConformalMapPair,
    EllipseNeumannSolution,
    RiemannMapPair,
    doubly_connected_dirichlet_from_neumann,
    doubly_connected_neumann,
    expression_map,
    joukowsky,
    named_map,
    named_riemann_map,
    neumann_on_ellipse,
    simply_connected_transfer,
    validate_map,
    validate_riemann_map,
)
from .dirichlet import (
    AnnulusHarmonicSeries,
    circle_mean,
    solve_dirichlet_annulus,
    solve_dirichlet_disk,
    solve_dirichlet_punctured,
)
from .duality import (
    NeumannSolution,
    compute_C,
    compute_C_via_conjugate,
    neumann_from_dirichlet_annulus,
    neumann_from_dirichlet_disk,
    potential_from_dirichlet,
    solve_punctured_neumann,
)
from .errors import (
    HarmonicDualityError,
    MapValidationError,
    NumericalError,
    PreconditionError,
    SchemaError,
)
from .expressions import real_function_of_point
from .verify import (
    PolarGrid,
    fd_dirichlet_solve,
    fd_neumann_solve,
    grid_error,
    quadrature_potential,
    radial_nodes,
    residual_report,
    roundtrip_report,
    roundtrip_report_disk,
)

SCHEMA_VERSION = 1
DEFAULT_GRID = (64, 128)
EXIT_CODES = {SchemaError: 2, PreconditionError: 3, NumericalError: 4}

_PERIODIC = {
    "oneOf": [
        {
            "type": "object",
            "properties": {"samples": {"type": "array", "items": {"type": "number"}, "minItems": 1}},
            "required": ["samples"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "a0": {"type": "number"},
                "a": {"type": "array", "items": {"type": "number"}},
                "b": {"type": "array", "items": {"type": "number"}},
            },
            "additionalProperties": False,
        },
    ]
}

_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "problem", "region"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "problem": {"enum": ["dirichlet", "neumann", "transfer", "ellipse", "verify"]},
        "region": {
            "type": "object",
            "required": ["type"],
            "properties": {"type": {"enum": ["annulus", "disk", "punctured", "ellipse", "mapped"]}},
            "allOf": [
                {
                    "if": {"properties": {"type": {"const": "annulus"}}},
                    "then": {
                        "properties": {"type": True, "r1": _POSITIVE, "r2": _POSITIVE},
                        "required": ["r1", "r2"],
                        "additionalProperties": False,
                    },
                },
                {
                    "if": {"properties": {"type": {"const": "disk"}}},
                    "then": {
                        "properties": {"type": True, "r2": _POSITIVE},
                        "additionalProperties": False,
                    },
                },
                {
                    "if": {"properties": {"type": {"const": "punctured"}}},
                    "then": {"properties": {"type": True}, "additionalProperties": False},
                },
                {
                    "if": {"properties": {"type": {"const": "ellipse"}}},
                    "then": {
                        "properties": {"type": True, "rho": {"type": "number", "exclusiveMinimum": 1}},
                        "required": ["rho"],
                        "additionalProperties": False,
                    },
                },
                {
                    "if": {"properties": {"type": {"const": "mapped"}}},
                    "then": {
                        "properties": {
                            "type": True,
                            "map": {"type": "string"},
                            "riemann": {"type": "boolean"},
                            "r2": {"type": "number", "exclusiveMinimum": 1},
                            "G": {"type": "string"},
                            "Gprime": {"type": "string"},
                            "F": {"type": "string"},
                            "Fprime": {"type": "string"},
                        },
                        "oneOf": [
                            {"required": ["map"]},
                            {"required": ["G", "Gprime", "F", "r2"]},
                        ],
                        "additionalProperties": False,
                    },
                },
            ],
        },
        "data": {
            "type": "object",
            "properties": {
                "r1": {"type": "number"},
                "r2": {"type": "number"},
                "kind": {"enum": ["dirichlet", "neumann"]},
                "inner": _PERIODIC,
                "outer": _PERIODIC,
                "origin": _PERIODIC,
                "f": {"type": "string"},
            },
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {
                "solution": {"type": ["string", "null"]},
                "grid": {"type": ["string", "null"]},
                "report": {"type": ["string", "null"]},
            },
            "additionalProperties": False,
        },
        "options": {
            "type": "object",
            "properties": {
                "K": {"type": "integer", "minimum": 0},
                "tol": _POSITIVE,
                "grid": {
                    "oneOf": [
                        {"type": "string", "pattern": "^[0-9]+x[0-9]+$"},
                        {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                    ]
                },
                "fd_grid": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
                "seed": {"type": "integer", "minimum": 0},
                "samples": {"type": "integer", "minimum": 8},
                "check_points": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
    },
}

# problem -> regions it is defined on
COMBINATIONS = {
    "dirichlet": {"annulus", "disk", "punctured"},
    "neumann": {"annulus", "disk", "punctured", "mapped"},
    "transfer": {"mapped"},
    "ellipse": {"ellipse"},
    "verify": {"annulus", "disk"},
}


# --------------------------------------------------------------------------
# configuration


@dataclass
class JobConfig:
    problem: str
    region: dict
    data: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    options: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, doc) -> "JobConfig":
        validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
        if errors:
            err = errors[0]
            where = "/".join(str(p) for p in err.absolute_path) or "<root>"
            raise SchemaError(f"config {where}: {err.message}")
        cfg = cls(doc["problem"], dict(doc["region"]), dict(doc.get("data", {})),
                  dict(doc.get("output", {})), dict(doc.get("options", {})))
        cfg._check_combination()
        return cfg

    @classmethod
    def load(cls, path) -> "JobConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise SchemaError(f"cannot read config {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def _check_combination(self):
        rtype = self.region["type"]
        if rtype not in COMBINATIONS[self.problem]:
            raise SchemaError(f"problem {self.problem!r} is not defined on a {rtype!r} region")
        if rtype == "annulus" and not self.region["r1"] < self.region["r2"]:
            raise SchemaError("annulus needs r1 < r2")
        if rtype in ("annulus", "disk", "punctured") and "outer" not in self.data:
            raise SchemaError(f"{rtype} problems need data.outer")
        if rtype == "annulus" and "inner" not in self.data:
            raise SchemaError("annulus problems need data.inner")
        if rtype == "punctured" and self.problem == "dirichlet" and "origin" in self.data:
            raise SchemaError("punctured Dirichlet data take no origin datum")
        if rtype in ("ellipse", "mapped") and "f" not in self.data:
            raise SchemaError(f"{rtype} problems need data.f (an expression in x, y, z)")
        if rtype == "mapped" and self.region.get("riemann") and "r2" in self.region:
            raise SchemaError("a Riemann map (riemann: true) has no r2")

    # -- derived settings --------------------------------------------------

    @property
    def kind(self) -> str:
        if self.problem in ("dirichlet", "neumann"):
            declared = self.data.get("kind", self.problem)
            if declared != self.problem:
                raise SchemaError(f"data.kind {declared!r} contradicts problem {self.problem!r}")
            return declared
        return self.data.get("kind", "neumann")

    @property
    def K(self):
        return self.options.get("K")

    @property
    def tol(self) -> float:
        return float(self.options.get("tol", 1e-9))

    @property
    def seed(self) -> int:
        return int(self.options.get("seed", 0))

    @property
    def samples(self) -> int:
        return int(self.options.get("samples", 256))

    @property
    def grid(self) -> tuple[int, int]:
        return parse_grid(self.options.get("grid", DEFAULT_GRID))

    def annulus_data(self) -> AnnulusBoundaryData:
        r1, r2 = float(self.region["r1"]), float(self.region["r2"])
        for key, val in (("r1", r1), ("r2", r2)):
            if key in self.data and not math.isclose(float(self.data[key]), val, rel_tol=1e-15):
                raise SchemaError(f"data.{key} = {self.data[key]} contradicts region.{key} = {val}")
        return AnnulusBoundaryData(
            r1,
            r2,
            PeriodicFunction.from_dict(self.data["inner"]),
            PeriodicFunction.from_dict(self.data["outer"]),
            self.kind,
        )

    def periodic(self, key: str) -> PeriodicFunction:
        return PeriodicFunction.from_dict(self.data[key])


def parse_grid(spec) -> tuple[int, int]:
    """``"64x128"`` or ``[64, 128]`` → (64, 128)."""
    if isinstance(spec, str):
        parts = spec.lower().split("x")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise SchemaError(f"grid must look like NRxNT, got {spec!r}")
        nr, nt = int(parts[0]), int(parts[1])
    else:
        nr, nt = (int(v) for v in spec)
    if nr < 3 or nt < 8 or nt % 2:
        raise SchemaError(f"grid needs NR >= 3 and an even NT >= 8, got {nr}x{nt}")
    return nr, nt


# --------------------------------------------------------------------------
# parallel sampling


def thread_count() -> int:
    raw = os.environ.get("HD_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise SchemaError(f"HD_THREADS must be an integer, got {raw!r}") from None


def sample_grid(evaluator: Callable, r: np.ndarray, n_theta: int, **meta) -> PolarGrid:
    """Evaluate on r × θ, splitting rows across at most HD_THREADS threads.

    Each row is computed independently, so the result does not depend on the
    thread count.
    """
    theta = TWO_PI * np.arange(n_theta) / n_theta
    threads = min(thread_count(), r.size)
    chunks = np.array_split(np.arange(r.size), threads)

    def rows(idx):
        R, T = np.meshgrid(r[idx], theta, indexing="ij")
        return np.asarray(evaluator(R, T), dtype=float).reshape(R.shape)

    if threads == 1:
        values = rows(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = np.vstack(list(pool.map(rows, chunks)))
    return PolarGrid(np.asarray(r, float), theta, values, dict(meta))


# --------------------------------------------------------------------------
# jobs


@dataclass
class Artifacts:
    solution: dict | None = None
    grid: PolarGrid | None = None
    report: dict | None = None
    failed: str | None = None  # set when the run should exit 4 after writing


def _grid_radii(r1: float, r2: float, nr: int) -> np.ndarray:
    return radial_nodes(r1, r2, nr)


def _series_doc(kind: str, obj) -> dict:
    return {"kind": kind, "series": obj.to_dict()}


def _neumann_check(U, data: AnnulusBoundaryData, nr, nt) -> dict:
    return residual_report(U, data, nr, nt).to_dict()


def job_annulus(cfg: JobConfig, problem: str) -> Artifacts:
    data = cfg.annulus_data()
    nr, nt = cfg.grid
    if problem == "dirichlet":
        u = solve_dirichlet_annulus(data, cfg.K)
        report = {
            "residual": residual_report(u, data, nr, nt).to_dict(),
            "mean_compatibility": check_dirichlet_mean_compatibility(data, cfg.tol).to_dict(),
            "circle_mean_alpha": circle_mean(u).alpha,
        }
        grid = sample_grid(u, _grid_radii(data.r1, data.r2, nr), nt, field="u")
        return Artifacts(_series_doc("dirichlet", u), grid, report)
    U = neumann_from_dirichlet_annulus(data, cfg.tol, cfg.K)
    report = {
        "residual": _neumann_check(U, data, nr, nt),
        "compatibility": check_neumann_compatibility(data, cfg.tol).to_dict(),
        "roundtrip_defect": roundtrip_report(data, tol=cfg.tol),
        "diagnostics": {k: float(v) for k, v in U.diagnostics.items()},
    }
    grid = sample_grid(U, _grid_radii(data.r1, data.r2, nr), nt, field="U")
    return Artifacts(_series_doc("neumann", U), grid, report)


def job_disk(cfg: JobConfig, problem: str) -> Artifacts:
    r2 = float(cfg.region.get("r2", 1.0))
    phi = cfg.periodic("outer")
    nr, nt = cfg.grid
    data = AnnulusBoundaryData(0.0, r2, PeriodicFunction(), phi.coefficients(), problem)
    if problem == "dirichlet":
        u = solve_dirichlet_disk(phi, r2)
        report = {"residual": residual_report(u, data, nr, nt).to_dict()}
        sol = _series_doc("dirichlet", u)
        ev = u
    else:
        U = neumann_from_dirichlet_disk(phi, cfg.tol, r2)
        report = {"residual": _neumann_check(U, data, nr, nt)}
        if r2 == 1.0:
            report["roundtrip_defect"] = roundtrip_report_disk(phi, tol=cfg.tol)
        sol = _series_doc("neumann", U)
        ev = U
    grid = sample_grid(ev, _grid_radii(0.0, r2, nr), nt, field="u" if problem == "dirichlet" else "U")
    return Artifacts(sol, grid, report)


def job_punctured(cfg: JobConfig, problem: str) -> Artifacts:
    outer = cfg.periodic("outer")
    nr, nt = cfg.grid
    if problem == "dirichlet":
        u = solve_dirichlet_punctured(outer, cfg.tol)
        sol, ev = _series_doc("dirichlet", u), u
        data = AnnulusBoundaryData(0.0, 1.0, PeriodicFunction(), outer.coefficients(), "dirichlet")
        report = {"residual": residual_report(u, data, nr, nt).to_dict(), "value_at_origin": u(0.0, 0.0)}
    else:
        origin = cfg.periodic("origin") if "origin" in cfg.data else origin_datum(outer)
        U = solve_punctured_neumann(origin, outer, cfg.tol)
        sol, ev = _series_doc("neumann", U), U
        data = AnnulusBoundaryData(0.0, 1.0, PeriodicFunction(), outer.coefficients(), "neumann")
        report = {
            "residual": _neumann_check(U, data, nr, nt),
            "origin_gradient": U.diagnostics.get("origin_gradient"),
            "origin_datum": origin.coefficients().padded(1).to_dict(),
        }
    grid = sample_grid(ev, _grid_radii(0.0, 1.0, nr), nt, field="u" if problem == "dirichlet" else "U")
    return Artifacts(sol, grid, report)


def _boundary_function(cfg: JobConfig) -> Callable:
    return real_function_of_point(cfg.data["f"])


def _check_points(cfg: JobConfig) -> np.ndarray:
    n = int(cfg.options.get("check_points", 64))
    rng = np.random.default_rng(cfg.seed)
    return np.sort(rng.uniform(0.0, TWO_PI, n))


def job_ellipse(cfg: JobConfig) -> Artifacts:
    rho = float(cfg.region["rho"])
    f = _boundary_function(cfg)
    sol = neumann_on_ellipse(f, rho, cfg.samples, cfg.K, cfg.tol)
    theta = _check_points(cfg)
    z = sol.region.boundary_point(theta)
    normal = sol.region.outward_normal(theta)
    dn = np.real(sol.gradient(z) * np.conj(normal))
    report = {
        "normal_derivative_linf": float(np.abs(dn - f(z)).max()),
        "check_points": int(theta.size),
        "value_at_focus": float(sol(np.array([1.0 + 0j]))[0]),
        "theta_linear_coefficient": sol.theta_linear_coefficient,
        "annulus_order": int(sol.u.K),
    }
    nr, nt = cfg.grid
    R = radial_nodes(1.0, rho, nr)
    grid = sample_grid(lambda r, t: sol(joukowsky(r * np.exp(1j * t))), R, nt,
                       field="U", coordinates="elliptic")
    doc = {"kind": "ellipse", "rho": rho, "annulus_dirichlet": sol.u.to_dict()}
    return Artifacts(doc, grid, report)


def build_map(region: dict) -> ConformalMapPair | RiemannMapPair:
    """Map pair described by a ``mapped`` region object."""
    if region.get("riemann"):
        if "map" not in region:
            raise SchemaError("Riemann maps are selected by name (identity, rotate:alpha)")
        return named_riemann_map(region["map"])
    if "map" in region:
        return named_map(region["map"], region.get("r2"))
    return expression_map(region["G"], region["Gprime"], region["F"], region["r2"], region.get("Fprime"))


def _map_report(m, seed: int) -> dict:
    rep = validate_riemann_map(m, seed=seed) if isinstance(m, RiemannMapPair) else validate_map(m, seed=seed)
    return rep


def job_map_validate(cfg: JobConfig) -> Artifacts:
    m = build_map(cfg.region)
    rep = _map_report(m, cfg.seed)
    doc = {"kind": "map", "map": m.describe()}
    art = Artifacts(doc, None, {"validation": rep.to_dict()})
    if not rep.passed:
        raise MapValidationError(f"map {m.name!r} failed validation: {list(rep.notes)}", rep)
    return art


def job_transfer(cfg: JobConfig) -> Artifacts:
    m = build_map(cfg.region)
    Phi = _boundary_function(cfg)
    theta = _check_points(cfg)
    nr, nt = cfg.grid
    z = np.exp(1j * theta)
    if isinstance(m, RiemannMapPair):
        sol = simply_connected_transfer(m, Phi, cfg.samples, cfg.K, cfg.tol, cfg.seed)
        fz = np.asarray(m.f(z), dtype=complex) * np.ones_like(z)
        n = np.asarray(m.fprime(z), dtype=complex) * z
        n = n / np.abs(n)
        dn = np.real(sol.gradient(fz) * np.conj(n))
        report = {
            "validation": sol.report.to_dict(),
            "normal_derivative_linf": float(np.abs(dn - Phi(fz)).max()),
            "value_at_basepoint": float(np.real(sol(np.array([m.w0]))[0])),
        }
        doc = {"kind": "mapped-disk", "map": m.describe(), "canonical": sol.V.to_dict()}
        R = radial_nodes(0.0, 1.0, nr)
        grid = sample_grid(lambda r, t: sol.V(r, t), R, nt, field="U", coordinates="canonical")
        return Artifacts(doc, grid, report)
    sol = doubly_connected_neumann(m, Phi, cfg.samples, cfg.K, cfg.tol, cfg.seed)
    worst = 0.0
    for radius, sign in ((1.0, -1.0), (m.r2, 1.0)):
        zz = radius * z
        w = m.f(zz)
        n = sign * m.fprime(zz) * zz
        n = n / np.abs(n)
        dn = np.real(sol.gradient(w) * np.conj(n))
        worst = max(worst, float(np.abs(dn - Phi(w)).max()))
    w_mid = m.f(math.sqrt(m.r2) * z * np.exp(0.1j))
    u_conv = doubly_connected_dirichlet_from_neumann(m, sol)(w_mid)
    report = {
        "validation": sol.report.to_dict(),
        "normal_derivative_linf": worst,
        "value_at_basepoint": float(sol(np.array([m.basepoint]))[0]),
        "converse_linf": float(np.abs(u_conv - sol.dirichlet_field(w_mid)).max()),
    }
    doc = {
        "kind": "mapped",
        "map": m.describe(),
        "basepoint": [m.basepoint.real, m.basepoint.imag],
        "canonical": sol.V.to_dict(),
    }
    R = radial_nodes(1.0, m.r2, nr)
    grid = sample_grid(lambda r, t: sol.V(r, t), R, nt, field="U", coordinates="canonical")
    return Artifacts(doc, grid, report)


def job_solve(cfg: JobConfig) -> Artifacts:
    rtype = cfg.region["type"]
    if cfg.problem == "verify":
        return job_verify(cfg)
    if cfg.problem == "ellipse":
        return job_ellipse(cfg)
    if cfg.problem == "transfer" or rtype == "mapped":
        return job_transfer(cfg)
    if rtype == "annulus":
        return job_annulus(cfg, cfg.kind)
    if rtype == "disk":
        return job_disk(cfg, cfg.kind)
    return job_punctured(cfg, cfg.kind)


def job_transform(cfg: JobConfig) -> Artifacts:
    """Dirichlet ↔ Neumann in either direction on an annulus or disk."""
    rtype = cfg.region["type"]
    if rtype not in ("annulus", "disk"):
        raise SchemaError("transform works on annulus or disk regions")
    nr, nt = cfg.grid
    if rtype == "annulus":
        data = cfg.annulus_data()
        r1, r2 = data.r1, data.r2
    else:
        r1, r2 = 0.0, float(cfg.region.get("r2", 1.0))
        data = AnnulusBoundaryData(0.0, r2, PeriodicFunction(), cfg.periodic("outer").coefficients(), cfg.kind)
    if data.kind == "neumann":
        if rtype == "annulus":
            U = neumann_from_dirichlet_annulus(data, cfg.tol, cfg.K)
        else:
            U = neumann_from_dirichlet_disk(data.outer, cfg.tol, r2)
        u = U.field.r_times_radial()
        series_U = U.field
    else:
        u = solve_dirichlet_annulus(data, cfg.K) if rtype == "annulus" else solve_dirichlet_disk(data.outer, r2)
        series_U = potential_from_dirichlet(u, cfg.tol)
        U = NeumannSolution(series_U, (math.sqrt(r1 * r2), 0.0), compute_C(u, cfg.tol))
    neumann_data = {"outer": (u.trace(r2) * (1.0 / r2)).to_dict()}
    if r1 > 0:
        neumann_data["inner"] = (u.trace(r1) * (1.0 / r1)).to_dict()
    doc = {"kind": "transform", "U": U.to_dict(), "u": u.to_dict(), "neumann_data": neumann_data}
    R, T = np.meshgrid(radial_nodes(r1, r2, nr), TWO_PI * np.arange(nt) / nt, indexing="ij")
    report = {"r_times_Ur_minus_u": float(np.abs(R * series_U.derivative(R, T, 1, 0) - u(R, T)).max())}
    grid = sample_grid(series_U, radial_nodes(r1, r2, nr), nt, field="U")
    return Artifacts(doc, grid, report)


def job_verify(cfg: JobConfig) -> Artifacts:
    """Solve, then check against the independent oracles."""
    rtype = cfg.region["type"]
    if rtype not in ("annulus", "disk"):
        raise SchemaError("verify works on annulus or disk regions")
    kind = cfg.data.get("kind", "neumann" if cfg.problem in ("verify", "neumann") else "dirichlet")
    sub = JobConfig("verify", cfg.region, {**cfg.data, "kind": kind}, cfg.output, cfg.options)
    art = job_annulus(sub, kind) if rtype == "annulus" else job_disk(sub, kind)
    report = dict(art.report)
    failures = []
    residual = report["residual"]
    if residual["flagged"]:
        failures.append("boundary residual")
    if "roundtrip_defect" in report and report["roundtrip_defect"] > 1e-10:
        failures.append("round trip")
    if rtype == "annulus":
        data = sub.annulus_data().coefficient_form(cfg.K)
        fnr, fnt = cfg.options.get("fd_grid", (64, 128))
        if kind == "neumann":
            U = neumann_from_dirichlet_annulus(data, cfg.tol)
            fd = fd_neumann_solve(data, fnr, fnt)
            fd_err = grid_error(fd, U)
            w = solve_dirichlet_annulus(AnnulusBoundaryData(
                data.r1, data.r2, data.r1 * data.inner, data.r2 * data.outer, "dirichlet"))
            c1, c2 = compute_C(w, cfg.tol), compute_C_via_conjugate(w, tol=cfg.tol)
            rng = np.random.default_rng(cfg.seed)
            n_q = int(cfg.options.get("check_points", 8))
            pts = np.column_stack([rng.uniform(data.r1, data.r2, n_q), rng.uniform(-math.pi, math.pi, n_q)])
            quad = max(abs(quadrature_potential(w, r, t, c1) - U(r, t)) for r, t in pts)
            report.update({"fd_relative_linf": fd_err, "C": c1, "C_conjugate_gap": abs(c1 - c2),
                           "quadrature_linf": float(quad)})
            if quad > 1e-9:
                failures.append("quadrature oracle")
            if abs(c1 - c2) > 1e-10:
                failures.append("conjugate mean")
        else:
            u = solve_dirichlet_annulus(data)
            fd = fd_dirichlet_solve(data, fnr, fnt)
            fd_err = grid_error(fd, u)
            report["fd_relative_linf"] = fd_err
        report["fd_grid"] = [int(fnr), int(fnt)]
        if fd_err > 0.02:
            failures.append("finite differences")
    report["passed"] = not failures
    report["failures"] = failures
    art.report = report
    if failures:
        art.failed = f"verification failed: {', '.join(failures)}"
    return art


def job_export(path: str, grid_spec, cfg_grid=None) -> Artifacts:
    """Re-sample a solution.json written by an earlier run."""
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA_VERSION or "solution" not in doc:
        raise SchemaError(f"{path} is not a solution file of schema {SCHEMA_VERSION}")
    sol = doc["solution"]
    nr, nt = parse_grid(grid_spec or DEFAULT_GRID)
    kind = sol.get("kind")
    if kind in ("dirichlet", "neumann"):
        series = AnnulusHarmonicSeries.from_dict(sol["series"])
        ev, lo, hi = series, series.r1, series.r2
    elif kind == "transform":
        series = AnnulusHarmonicSeries.from_dict(sol["U"])
        ev, lo, hi = series, series.r1, series.r2
    elif kind in ("mapped", "mapped-disk"):
        series = AnnulusHarmonicSeries.from_dict(sol["canonical"])
        ev, lo, hi = series, series.r1, series.r2
    elif kind == "ellipse":
        rho = float(sol["rho"])
        u = AnnulusHarmonicSeries.from_dict(sol["annulus_dirichlet"])
        e = EllipseNeumannSolution(rho, u, None)
        ev, lo, hi = (lambda r, t: e(joukowsky(r * np.exp(1j * t)))), 1.0, rho
    else:
        raise SchemaError(f"cannot export solutions of kind {kind!r}")
    grid = sample_grid(ev, radial_nodes(lo, hi, nr), nt, field=kind)
    return Artifacts(None, grid, None)


# --------------------------------------------------------------------------
# output


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_artifacts(art: Artifacts, out: Path, cfg: JobConfig | None, command: str) -> list[str]:
    """Write the artifacts single-threaded; returns the file names written."""
    out.mkdir(parents=True, exist_ok=True)
    names = {"solution": "solution.json", "grid": "grid.csv", "report": "report.json"}
    if cfg is not None:
        names.update(cfg.output)
    written = []
    header = {"schema": SCHEMA_VERSION, "command": command, "version": __version__}
    if cfg is not None:
        header.update({"problem": cfg.problem, "region": cfg.region, "options": cfg.options})
    if art.solution is not None and names["solution"]:
        (out / names["solution"]).write_text(_dump_json({**header, "solution": art.solution}))
        written.append(names["solution"])
    if art.grid is not None and names["grid"]:
        with open(out / names["grid"], "w", newline="") as fh:
            art.grid.to_csv(fh)
        written.append(names["grid"])
    if art.report is not None and names["report"]:
        (out / names["report"]).write_text(_dump_json({**header, "report": art.report}))
        written.append(names["report"])
    return written


def _apply_flags(cfg: JobConfig, args) -> JobConfig:
    opts = dict(cfg.options)
    if args.grid is not None:
        opts["grid"] = list(parse_grid(args.grid))
    elif "grid" in opts:
        opts["grid"] = list(parse_grid(opts["grid"]))
    if args.order is not None:
        if args.order < 0:
            raise SchemaError("--order must be non-negative")
        opts["K"] = args.order
    if args.tol is not None:
        if not args.tol > 0:
            raise SchemaError("--tol must be positive")
        opts["tol"] = args.tol
    if args.seed is not None:
        if args.seed < 0:
            raise SchemaError("--seed must be non-negative")
        opts["seed"] = args.seed
    return JobConfig(cfg.problem, cfg.region, cfg.data, cfg.output, opts)


JOBS = {
    "solve": job_solve,
    "transform": job_transform,
    "verify": job_verify,
    "ellipse": job_ellipse,
    "map-validate": job_map_validate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmonic-duality",
        description="Dirichlet/Neumann duality solvers for harmonic functions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "solve": "solve the problem described by the config",
        "transform": "Dirichlet <-> Neumann transform on an annulus or disk",
        "verify": "solve and compare against the FD and quadrature oracles",
        "ellipse": "Neumann problem on a confocal ellipse",
        "map-validate": "run the runtime checks on a conformal map pair",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="job JSON")
        _common(p)
    p = sub.add_parser("export", help="re-sample a solution.json on a grid")
    p.add_argument("solution", help="solution.json from an earlier run")
    _common(p)
    return parser


def _common(p):
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--grid", help="grid as NRxNT, e.g. 64x128")
    p.add_argument("--order", type=int, help="Fourier order K")
    p.add_argument("--tol", type=float, help="compatibility tolerance")
    p.add_argument("--seed", type=int, help="seed for random check points")


def _fail(exc: HarmonicDualityError) -> int:
    code = next((c for cls, c in EXIT_CODES.items() if isinstance(exc, cls)), 4)
    payload = {"error": type(exc).__name__, "exit": code, "message": str(exc)}
    payload.update(exc.details())
    sys.stderr.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
    return code


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        if args.command == "export":
            art = job_export(args.solution, args.grid)
            write_artifacts(art, out, None, "export")
            return 0
        cfg = _apply_flags(JobConfig.load(args.config), args)
        if args.command == "ellipse" and cfg.problem != "ellipse":
            raise SchemaError("the ellipse command needs problem 'ellipse'")
        if args.command == "map-validate" and cfg.region["type"] != "mapped":
            raise SchemaError("map-validate needs a 'mapped' region")
        art = JOBS[args.command](cfg)
        write_artifacts(art, out, cfg, args.command)
        if art.failed:
            raise NumericalError(art.failed)
        return 0
    except MapValidationError as exc:
        if exc.report is not None:
            doc = {"validation": exc.report.to_dict()}
            Path(out).mkdir(parents=True, exist_ok=True)
            (out / "report.json").write_text(_dump_json({"schema": SCHEMA_VERSION, "report": doc}))
        return _fail(exc)
    except HarmonicDualityError as exc:
        return _fail(exc)
    except (ArithmeticError, ValueError, OSError) as exc:
        # anything that escaped the library's own error types is a numerical
        # or environmental failure; keep the one-line stderr contract
        wrapped = NumericalError(f"{type(exc).__name__}: {exc}")
        return _fail(wrapped)


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
