import math

import numpy as np
import pytest

from harmonic_duality.boundary import AnnulusBoundaryData, PeriodicFunction
from harmonic_duality.dirichlet import AnnulusHarmonicSeries, solve_dirichlet_annulus
from harmonic_duality.duality import compute_C, neumann_from_dirichlet_annulus
from harmonic_duality.errors import (
    CompatibilityError,
    DegenerateRangeError,
    PreconditionError,
    RadiusError,
)
from harmonic_duality.verify import (
    PolarGrid,
    fd_dirichlet_solve,
    fd_neumann_solve,
    grid_error,
    holder_estimate,
    observed_order,
    quadrature_C,
    quadrature_potential,
    report_json,
    residual_report,
    richardson_order,
    roundtrip_report,
    roundtrip_report_disk,
)

c = PeriodicFunction.constant


def test_fd_log_r_is_exact_enough():
    data = AnnulusBoundaryData(1.0, math.e, c(0.0), c(1.0))
    grid = fd_dirichlet_solve(data, 33, 16)
    err = grid_error(grid, lambda r, t: np.log(r), relative=False)
    assert err < 1e-4
    assert grid.meta["method"] == "direct"


def test_fd_constant_data():
    grid = fd_dirichlet_solve(AnnulusBoundaryData(0.5, 2.0, c(3.0), c(3.0)), 9, 16)
    assert np.abs(grid.values - 3.0).max() < 1e-12


def test_fd_order_on_symmetric_cosine():
    a = 2.0
    cos = PeriodicFunction.mode(1, cos=1.0)
    data = AnnulusBoundaryData(1 / a, a, cos, cos)
    exact = solve_dirichlet_annulus(data)
    errs, hs = [], []
    for n in (16, 32, 64):
        g = fd_dirichlet_solve(data, n + 1, 2 * n)
        errs.append(grid_error(g, exact))
        hs.append(g.meta["h"])
    assert observed_order(hs, errs) >= 1.8


def test_sor_fallback_matches_direct():
    data = AnnulusBoundaryData(0.5, 2.0, PeriodicFunction.mode(2, cos=1.0), c(0.5))
    direct = fd_dirichlet_solve(data, 9, 16)
    sor = fd_dirichlet_solve(data, 9, 16, memory_budget=1)
    assert sor.meta["method"] == "sor"
    assert np.abs(sor.values - direct.values).max() < 1e-8


def test_fd_preconditions():
    with pytest.raises(PreconditionError):
        fd_dirichlet_solve(AnnulusBoundaryData(0.5, 2.0, c(0), c(0), "neumann"), 9, 16)
    with pytest.raises(PreconditionError):
        fd_dirichlet_solve(AnnulusBoundaryData(0.5, 2.0, c(0), c(0)), 9, 15)
    with pytest.raises(RadiusError):
        fd_dirichlet_solve(AnnulusBoundaryData(0.0, 2.0, c(0), c(0)), 9, 16)


def test_fd_neumann_zero_data_and_fixture(cos_fixture):
    zero = AnnulusBoundaryData(0.5, 2.0, c(0.0), c(0.0), "neumann")
    assert np.abs(fd_neumann_solve(zero, 9, 16).values).max() < 1e-12
    exact = neumann_from_dirichlet_annulus(cos_fixture)
    grids = [fd_neumann_solve(cos_fixture, 8 * 2**j + 1, 16 * 2**j) for j in range(3)]
    assert grid_error(grids[-1], exact) < 2e-2
    assert richardson_order(*grids) == pytest.approx(2, abs=0.3)
    with pytest.raises(CompatibilityError):
        fd_neumann_solve(AnnulusBoundaryData(1.0, 2.0, c(1.0), c(1.0), "neumann"), 9, 16)


def test_residual_report_exact_and_corrupted():
    data = AnnulusBoundaryData(0.5, 2.0, PeriodicFunction(0.2, [1.0], [0.5]), PeriodicFunction(-0.1, [0.0, 1.0]))
    u = solve_dirichlet_annulus(data)
    rep = residual_report(u, data)
    assert not rep.flagged and max(rep.bc_linf.values()) < 1e-12
    # the FD Laplacian of the exact solution is pure truncation error, O(h²)
    assert rep.laplace_const < 10
    bad = residual_report(lambda r, t: u(r, t) + 1e-3, data)
    assert bad.flagged and bad.notes
    zero = AnnulusBoundaryData(0.5, 2.0, c(0.0), c(0.0))
    assert residual_report(lambda r, t: 0 * r, zero).to_dict()["laplace_linf"] == 0.0


def test_residual_report_neumann(cos_fixture):
    sol = neumann_from_dirichlet_annulus(cos_fixture)
    rep = residual_report(sol.field, cos_fixture)
    assert not rep.flagged
    # without an analytic derivative the one-sided difference still lands well under 1e-8
    plain = residual_report(lambda r, t: sol(r, t), cos_fixture)
    assert max(plain.bc_linf.values()) < 1e-8


def test_roundtrips(cos_fixture):
    assert roundtrip_report(cos_fixture) < 1e-13
    f = PeriodicFunction(0.0, [1.0, 0.5], [0.0, -2.0])
    assert roundtrip_report_disk(f) < 1e-13


def test_quadrature_oracle():
    u = AnnulusHarmonicSeries(0.5, 2.0, 0.3, 0.0, [1.0, -0.2], [0.4], [0.7], [0.1, 0.5])
    assert quadrature_C(u) == pytest.approx(compute_C(u), abs=1e-12)
    data = AnnulusBoundaryData(0.5, 2.0, PeriodicFunction(0.6, [1.0]),
                               PeriodicFunction(0.15, [0.0, 1.0]), "neumann")
    sol = neumann_from_dirichlet_annulus(data)
    partner = sol.field.r_times_radial()
    for r, t in ((0.7, 0.4), (1.8, -2.5), (1.0, 0.0)):
        assert quadrature_potential(partner, r, t) == pytest.approx(sol(r, t), abs=1e-10)


def test_holder_calibration():
    sqrt_abs = holder_estimate(lambda x: np.sqrt(np.abs(x)), -1.0, 1.0)
    assert sqrt_abs.alpha_hat == pytest.approx(0.5, abs=0.05)
    lip = holder_estimate(np.sin, 0.0, 3.0)
    assert lip.alpha_hat == pytest.approx(1.0, abs=0.01)
    const = holder_estimate(lambda x: 0 * x, 0.0, 1.0)
    assert const.alpha_hat == 1.0 and const.const_hat == 0.0


def test_holder_is_scale_invariant_in_the_exponent():
    a = holder_estimate(lambda x: np.abs(x) ** 0.7, -1.0, 1.0)
    b = holder_estimate(lambda x: 50 * np.abs(x) ** 0.7, -1.0, 1.0)
    assert a.alpha_hat == pytest.approx(b.alpha_hat, abs=1e-12)
    assert b.const_hat == pytest.approx(50 * a.const_hat, rel=1e-9)


def test_holder_two_dimensions():
    est = holder_estimate(lambda p: p[:, 0] ** 2 + p[:, 1], [0, 0], [1, 1], seed=3)
    assert est.alpha_hat == pytest.approx(1.0, abs=0.05)


def test_holder_degenerate_range():
    with pytest.raises(DegenerateRangeError):
        holder_estimate(np.sin, 0.0, 1.0, h_range=(0.01, 0.5))
    with pytest.raises(DegenerateRangeError):
        holder_estimate(np.sin, 0.0, 1.0, h_range=(1e-3, 2.0))


def test_grid_csv_and_json():
    g = PolarGrid.sample(lambda r, t: r * np.cos(t), np.array([1.0, 1.5, 2.0]), 8)
    lines = g.to_csv().splitlines()
    assert lines[0] == "r,theta,value" and len(lines) == 1 + 3 * 8
    assert lines[1] == "1,0,1"
    assert report_json({"b": 1, "a": 2}) == '{\n  "a": 2,\n  "b": 1\n}\n'
    with pytest.raises(PreconditionError):
        PolarGrid(np.ones(3), np.arange(8.0), np.full((3, 8), np.nan))
