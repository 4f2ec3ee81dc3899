"""Acceptance suite: fourteen criteria, one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` (the lines are printed straight
to the terminal) or ``python3 tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import math
import os
import subprocess
import sys
import time
import warnings

import numpy as np
import pytest

from harmonic_duality.boundary import TWO_PI, AnnulusBoundaryData, PeriodicFunction, origin_datum
from harmonic_duality.conformal import (
    joukowsky,
    named_map,
    doubly_connected_neumann,
    neumann_on_ellipse,
    t_minus,
    t_plus,
)
from harmonic_duality.dirichlet import circle_mean, solve_dirichlet_annulus
from harmonic_duality.duality import (
    compute_C,
    compute_C_via_conjugate,
    neumann_from_dirichlet_annulus,
    neumann_from_dirichlet_disk,
    solve_punctured_neumann,
)
from harmonic_duality.geometry import angle_chord_constant, to_polar
from harmonic_duality.verify import (
    fd_neumann_solve,
    grid_error,
    holder_estimate,
    observed_order,
    quadrature_C,
    quadrature_potential,
    richardson_order,
    roundtrip_report,
)

sys.path.insert(0, os.path.dirname(__file__))
from conftest import random_neumann_data, weighted_dirichlet  # noqa: E402

SEED = 20240611


def announce(number: int, title: str, ok: bool, detail: str, capsys=None):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} -- {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line


# 1 --------------------------------------------------------------------------


def test_criterion_01_symmetric_fixture(capsys):
    t0 = time.perf_counter()
    data = AnnulusBoundaryData(
        0.5, 2.0, PeriodicFunction.mode(1, cos=4.0), PeriodicFunction.mode(1, cos=1.0), "neumann"
    )
    U = neumann_from_dirichlet_annulus(data)
    f = U.field
    coeff_err = max(abs(f.A), abs(f.B), abs(f.C[0] - 0.8), abs(f.D[0] + 0.8),
                    float(np.abs(f.E).max()), float(np.abs(f.G).max()))
    theta = np.linspace(0, TWO_PI, 257)
    trace_err = max(
        float(np.abs(U.derivative(2.0, theta, 1, 0) - np.cos(theta)).max()),
        float(np.abs(U.derivative(0.5, theta, 1, 0) - 4 * np.cos(theta)).max()),
    )
    u10 = abs(U(1.0, 0.0))
    elapsed = time.perf_counter() - t0
    ok = coeff_err <= 1e-11 and trace_err <= 1e-11 and u10 <= 1e-11 and elapsed < 1.0
    announce(1, "U = (4/5)(r - 1/r)cos θ", ok,
             f"coeff {coeff_err:.1e}, traces {trace_err:.1e}, |U(1,0)| {u10:.1e}, {elapsed:.3f}s", capsys)


# 2 --------------------------------------------------------------------------


def test_criterion_02_roundtrip(capsys):
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        worst = max(worst, roundtrip_report(random_neumann_data(rng), 64, 128))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and elapsed < 10.0
    announce(2, "r·U_r = u for 50 random data", ok, f"max defect {worst:.1e}, {elapsed:.2f}s", capsys)


# 3 --------------------------------------------------------------------------


def test_criterion_03_quadrature_oracle(capsys):
    rng = np.random.default_rng(SEED + 3)
    worst = 0.0
    for _ in range(10):
        data = random_neumann_data(rng, K_max=8)
        U = neumann_from_dirichlet_annulus(data)
        u = solve_dirichlet_annulus(weighted_dirichlet(data))
        C = quadrature_C(u)
        r = rng.uniform(data.r1, data.r2, 100)
        th = rng.uniform(-math.pi, math.pi, 100)
        quad = np.array([quadrature_potential(u, ri, ti, C) for ri, ti in zip(r, th)])
        worst = max(worst, float(np.abs(quad - U(r, th)).max()))
    announce(3, "series vs adaptive quadrature", worst <= 1e-9,
             f"max |Δ| {worst:.1e} over 10×100 points", capsys)


# 4 --------------------------------------------------------------------------


def test_criterion_04_conjugate_mean(capsys):
    rng = np.random.default_rng(SEED + 4)
    unit, scaled, solver = 0.0, 0.0, 0.0
    for _ in range(20):
        data = random_neumann_data(rng, product_one=True)
        u = solve_dirichlet_annulus(weighted_dirichlet(data))
        unit = max(unit, abs(compute_C(u) - compute_C_via_conjugate(u)))
    for _ in range(20):
        data = random_neumann_data(rng)
        u = solve_dirichlet_annulus(weighted_dirichlet(data))
        u_hat = u.rescaled(u.s)  # radii r1/s, r2/s with product 1
        scaled = max(scaled, abs(compute_C(u_hat) - compute_C_via_conjugate(u_hat)))
        solver = max(solver, abs(neumann_from_dirichlet_annulus(data).C_const - compute_C(u_hat)))
    ok = max(unit, scaled, solver) <= 1e-10
    announce(4, "𝒞 equals the conjugate mean", ok,
             f"r1r2=1: {unit:.1e}, λ-scaled: {scaled:.1e}, solver: {solver:.1e}", capsys)


# 5 --------------------------------------------------------------------------


def test_criterion_05_circle_mean(capsys):
    rng = np.random.default_rng(SEED + 5)
    worst = 0.0
    for _ in range(100):
        data = random_neumann_data(rng)
        u = solve_dirichlet_annulus(weighted_dirichlet(data))
        worst = max(worst, abs(circle_mean(u).alpha), abs(TWO_PI * u.B))
    announce(5, "circle means constant (α = 2πB = 0)", worst <= 1e-12,
             f"max |α| {worst:.1e} over 100 solutions", capsys)


# 6 --------------------------------------------------------------------------


def test_criterion_06_disk(capsys):
    U1 = neumann_from_dirichlet_disk(PeriodicFunction.mode(1, cos=1.0)).field
    exact = U1.A == 0 and U1.C.tolist() == [1.0] and U1.E.tolist() == [0.0]
    z = np.array([0.3 + 0.2j, -0.5j, 0.9, -0.1 - 0.7j])
    pointwise = float(np.abs(U1.at_point(z) - z.real).max())  # r·cos(arg z) vs x: rounding only
    worst = 0.0
    r = np.linspace(0, 1, 11)[:, None]
    th = np.linspace(0, TWO_PI, 64)[None, :]
    for k in range(1, 17):
        U = neumann_from_dirichlet_disk(PeriodicFunction.mode(k, cos=1.0))
        worst = max(worst, float(np.abs(U(r, th) - r**k / k * np.cos(k * th)).max()))
    ok = exact and pointwise <= 1e-15 and worst <= 1e-12
    announce(6, "disk: cos θ ↦ Re z, cos kθ ↦ r^k cos kθ / k", ok,
             f"coefficients of Re z exact: {exact} (pointwise {pointwise:.1e}), "
             f"k ≤ 16 max err {worst:.1e}", capsys)


# 7 --------------------------------------------------------------------------


def test_criterion_07_punctured(capsys):
    rng = np.random.default_rng(SEED + 7)
    theta = np.linspace(0, TWO_PI, 97)
    worst = 0.0
    for _ in range(20):
        K = int(rng.integers(1, 17))
        phi = PeriodicFunction(0.0, rng.normal(size=K), rng.normal(size=K))
        datum = origin_datum(phi)
        U = solve_punctured_neumann(datum, phi)
        g = complex(U.gradient(0j))
        projection = g.real * np.cos(theta) + g.imag * np.sin(theta)
        worst = max(worst, float(np.abs(datum(theta) - projection).max()))
    announce(7, "punctured disk origin datum = ∇U(0)·e_θ", worst <= 1e-12,
             f"max err {worst:.1e} over 20 data", capsys)


# 8 --------------------------------------------------------------------------


def test_criterion_08_finite_differences(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 8)
    data = random_neumann_data(rng, K_max=4, r1=0.5, r2=2.0)
    U = neumann_from_dirichlet_annulus(data)
    grids = [fd_neumann_solve(data, 32 * 2**j + 1, 64 * 2**j) for j in range(3)]
    errors = [grid_error(g, U) for g in grids]
    hs = [g.r[1] - g.r[0] for g in grids]
    order = observed_order(hs, errors)
    rich = richardson_order(*grids)
    fine = fd_neumann_solve(data, 128, 256)
    rel = grid_error(fine, U)
    elapsed = time.perf_counter() - t0
    ok = rel <= 0.02 and order >= 1.8 and rich >= 1.8 and elapsed < 30.0
    announce(8, "FD Neumann oracle", ok,
             f"128×256 rel L∞ {rel:.2e}, order {order:.2f} (Richardson {rich:.2f}), {elapsed:.1f}s", capsys)


# 9 --------------------------------------------------------------------------


def _ellipse_f(z):
    x, y = z.real, z.imag
    return x + 0.5 * x * y + y**3  # odd in x or y, so zero arclength mean


def test_criterion_09_ellipse(capsys):
    t0 = time.perf_counter()
    sol = neumann_on_ellipse(_ellipse_f, 2.0)
    theta = TWO_PI * (np.arange(64) + 0.5) / 64
    zb = sol.region.boundary_point(theta)
    n = sol.region.outward_normal(theta)
    d = 1e-3
    vals = [sol(zb - j * d * n) for j in range(5)]
    dn = (25 * vals[0] - 48 * vals[1] + 36 * vals[2] - 16 * vals[3] + 3 * vals[4]) / (12 * d)
    dn_err = float(np.abs(dn - _ellipse_f(zb)).max())
    u1 = abs(float(sol(np.array([1.0 + 0j]))[0]))

    # 5-point Laplacian at interior points: the residual must shrink like h²
    rng = np.random.default_rng(SEED + 9)
    R = rng.uniform(1.1, 1.8, 20)
    z = joukowsky(R * np.exp(1j * rng.uniform(0.2, 3.0, 20)))
    res = []
    for h in (4e-3, 2e-3):
        lap = (sol(z + h) + sol(z - h) + sol(z + 1j * h) + sol(z - 1j * h) - 4 * sol(z)) / h**2
        res.append(float(np.abs(lap).max()))
    ratio = res[0] / res[1]
    elapsed = time.perf_counter() - t0
    ok = dn_err <= 1e-4 and u1 <= 1e-10 and 3.0 <= ratio <= 5.0 and elapsed < 30.0
    announce(9, "ellipse ρ = 2 Neumann problem", ok,
             f"∂U/∂ν err {dn_err:.1e}, |U(1)| {u1:.1e}, Laplace FD {res[0]:.1e}→{res[1]:.1e} "
             f"(ratio {ratio:.2f}), {elapsed:.2f}s", capsys)


# 10 -------------------------------------------------------------------------


def test_criterion_10_joukowsky(capsys):
    rng = np.random.default_rng(SEED + 10)
    z = rng.uniform(-3, 3, 10_000) + 1j * rng.uniform(-3, 3, 10_000)
    plus = float(np.abs(joukowsky(t_plus(z)) - z).max())
    minus = float(np.abs(joukowsky(t_minus(z)) - z).max())
    theta = np.linspace(0, math.pi, 1001)
    circle = float(np.abs(t_plus(np.cos(theta) + 0j) - np.exp(1j * theta)).max())
    ok = max(plus, minus, circle) <= 1e-12
    announce(10, "J∘T± = id, T₊(cos θ) = e^{iθ}", ok,
             f"J∘T₊ {plus:.1e}, J∘T₋ {minus:.1e}, T₊(cos θ) {circle:.1e}", capsys)


# 11 -------------------------------------------------------------------------


def test_criterion_11_angle_chord(capsys):
    rng = np.random.default_rng(SEED + 11)
    n = 100_000
    counts = {}
    for r1 in (0.25, 0.5, 1.0, 2.0):
        L = angle_chord_constant(r1)
        r = rng.uniform(r1, 4 * r1, (2, n))
        r[:, :50] = r1  # include pairs on the inner circle, where the bound is tight
        t1 = rng.uniform(-math.pi, math.pi, n)
        t2 = t1 + rng.uniform(-math.pi, math.pi, n)
        z1, z2 = r[0] * np.exp(1j * t1), r[1] * np.exp(1j * t2)
        dtheta = np.abs(np.angle(np.exp(1j * (to_polar(z2).theta - to_polar(z1).theta))))
        # half an ulp of slack for the equality case |Δθ| = π on the inner circle
        counts[r1] = int(np.sum(dtheta > L * np.abs(z2 - z1) * (1 + 1e-15)))
    ok = all(v == 0 for v in counts.values())
    announce(11, "|Δθ| ≤ π/(2r1)·|Δz|", ok,
             "violations " + ", ".join(f"r1={k}: {v}" for k, v in counts.items()), capsys)


# 12 -------------------------------------------------------------------------


def _transfer_vs_direct(spec, r2, lo, hi, rng):
    m = named_map(spec, r2)

    def Phi(w):
        return np.real(w) ** 2 - 0.3 * np.imag(w) + 0.2 * np.real(w) * np.imag(w)

    # make the datum compatible by removing its flux through a multiple of 1/|w|
    theta = TWO_PI * np.arange(256) / 256
    flux = (hi * np.mean(Phi(hi * np.exp(1j * theta))) + lo * np.mean(Phi(lo * np.exp(1j * theta))))

    def Phi0(w):
        return Phi(w) - flux / (2 * np.abs(w))

    sol = doubly_connected_neumann(m, Phi0, n=256)
    inner = PeriodicFunction(samples=-Phi0(lo * np.exp(1j * theta)))
    outer = PeriodicFunction(samples=Phi0(hi * np.exp(1j * theta)))
    direct = neumann_from_dirichlet_annulus(AnnulusBoundaryData(lo, hi, inner, outer, "neumann"))
    w = rng.uniform(lo, hi, 100) * np.exp(1j * rng.uniform(-math.pi, math.pi, 100))
    return float(np.abs(sol(w) - direct.field.at_point(w)).max())


def test_criterion_12_degenerate_maps(capsys):
    rng = np.random.default_rng(SEED + 12)
    ident = _transfer_vs_direct("identity", 2.5, 1.0, 2.5, rng)
    scale = _transfer_vs_direct("scale:0.4", 3.0, 0.4, 1.2, rng)
    ok = max(ident, scale) <= 1e-9
    announce(12, "identity/scaling maps = direct solve", ok,
             f"identity {ident:.1e}, scale {scale:.1e} at 100 points each", capsys)


# 13 -------------------------------------------------------------------------


def test_criterion_13_holder(capsys):
    half = holder_estimate(lambda x: np.abs(x) ** 0.5, -1.0, 1.0).alpha_hat
    eight = holder_estimate(lambda x: np.abs(x) ** 0.8, -1.0, 1.0).alpha_hat

    # Neumann datum with a |sin(θ/2)|^2.5 cusp at θ = 0 (C^{2,α}, α = 1/2); its
    # potential has a C^{0,α} third radial derivative on the outer circle.
    n = 2048
    th = TWO_PI * np.arange(n) / n
    outer = PeriodicFunction(samples=np.abs(np.sin(th / 2)) ** 2.5)
    inner = PeriodicFunction.constant(2.0 * float(np.mean(outer.samples_array)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        U = neumann_from_dirichlet_annulus(AnnulusBoundaryData(0.5, 1.0, inner, outer, "neumann"))
    cusp = holder_estimate(lambda x: U.derivative(1.0, x, 3, 0), -1.0, 1.0,
                           h_range=(4e-3, 0.6), density=16).alpha_hat
    ok = abs(half - 0.5) <= 0.05 and abs(eight - 0.8) <= 0.05 and cusp >= 0.5 - 0.1
    announce(13, "Hölder estimator", ok,
             f"|x|^0.5 → {half:.3f}, |x|^0.8 → {eight:.3f}, U_rrr of C^(2,1/2) fixture → {cusp:.3f} "
             "(sanity bound only)", capsys)


# 14 -------------------------------------------------------------------------

ELLIPSE_JOB = """{
  "schema": 1,
  "problem": "ellipse",
  "region": {"type": "ellipse", "rho": 2},
  "data": {"f": "x"},
  "options": {"grid": "16x32", "seed": 7}
}
"""


def test_criterion_14_determinism(tmp_path, capsys):
    cfg = tmp_path / "job.json"
    cfg.write_text(ELLIPSE_JOB)
    outputs = []
    for run, threads in (("a", "1"), ("b", "3")):
        env = dict(os.environ, HD_THREADS=threads)
        proc = subprocess.run(
            [sys.executable, "-m", "harmonic_duality.cli", "ellipse", "--config", str(cfg),
             "--out", str(tmp_path / run), "--seed", "7"],
            capture_output=True, text=True, env=env,
        )
        assert proc.returncode == 0, proc.stderr
        outputs.append({p.name: p.read_bytes() for p in sorted((tmp_path / run).iterdir())})
    same = outputs[0] == outputs[1] and set(outputs[0]) == {"grid.csv", "report.json", "solution.json"}
    announce(14, "byte-identical CLI reruns", same,
             f"files {sorted(outputs[0])}, HD_THREADS 1 vs 3", capsys)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
