import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonic_duality.boundary import (
    TWO_PI,
    AnnulusBoundaryData,
    PeriodicFunction,
    check_dirichlet_mean_compatibility,
    check_neumann_compatibility,
    check_punctured_neumann_data,
    fourier_analyze,
    origin_datum,
)
from harmonic_duality.errors import (
    DataMismatchError,
    NonZeroMeanError,
    PreconditionError,
    SchemaError,
    TooFewSamplesError,
)


def nodes(n):
    return TWO_PI * np.arange(n) / n


# -- Fourier analysis ---------------------------------------------------------


def test_pure_cosine_mode():
    c = fourier_analyze(np.cos(nodes(16)), K=3)
    assert c.a == pytest.approx([1, 0, 0], abs=1e-12)
    assert c.b == pytest.approx([0, 0, 0], abs=1e-12)
    assert c.a0 == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("K", [0, 1, 5])
def test_constant_samples(K):
    c = fourier_analyze(np.full(32, -2.5), K)
    assert c.a0 == pytest.approx(-2.5)
    assert np.all(np.abs(c.a) < 1e-14) and np.all(np.abs(c.b) < 1e-14)


def test_abs_sine_half_matches_simpson():
    # oracle: composite Simpson on 10^5 + 1 points of (1/π)∫|sin(θ/2)| cos kθ dθ
    from scipy.integrate import simpson

    c = fourier_analyze(np.abs(np.sin(nodes(1024) / 2)), K=8)
    t = np.linspace(0, TWO_PI, 100_001)
    for k in range(1, 9):
        ref = simpson(np.abs(np.sin(t / 2)) * np.cos(k * t), x=t) / math.pi
        # the 1024-node trapezoid rule aliases the slowly decaying tail (~k^-2)
        assert c.a[k - 1] == pytest.approx(ref, abs=2e-6)
    # closed form: -4 / (π (4k² - 1))
    assert c.a[0] == pytest.approx(-4 / (3 * math.pi), abs=2e-6)


def test_too_few_samples():
    with pytest.raises(TooFewSamplesError):
        fourier_analyze(np.ones(8), K=4)
    with pytest.raises(TooFewSamplesError):
        PeriodicFunction(samples=[1.0, 2.0, 3.0])


def test_tail_bounds_truncation():
    theta = nodes(64)
    x = np.cos(theta) + 0.01 * np.cos(9 * theta)
    c = fourier_analyze(x, K=4)
    assert c.tail == pytest.approx(0.01, rel=1e-10)
    assert np.abs(c(theta) - x).max() <= c.tail + 1e-14


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=9), st.integers(0, 3))
def test_sample_coefficient_roundtrip(coeffs, extra):
    K = len(coeffs) // 2
    f = PeriodicFunction(coeffs[0], coeffs[1 : K + 1], coeffs[K + 1 : 2 * K + 1])
    n = 2 * (K + extra) + 4
    back = fourier_analyze(f.sample(n), f.K)
    assert back.a0 == pytest.approx(f.a0, abs=1e-12)
    assert np.allclose(back.a, f.a, atol=1e-12) and np.allclose(back.b, f.b, atol=1e-12)


# -- PeriodicFunction ---------------------------------------------------------


def test_evaluation_is_periodic():
    f = PeriodicFunction(0.5, [1.0, -2.0], [0.25])
    t = np.linspace(-3, 3, 13)
    assert f(t + TWO_PI) == pytest.approx(f(t), abs=1e-12)
    assert f(0.0) == pytest.approx(0.5 + 1.0 - 2.0)


def test_arithmetic_and_padding():
    f = PeriodicFunction.mode(2, cos=1.0)
    g = PeriodicFunction.mode(1, sin=3.0)
    h = 2 * (f + g) - f
    t = np.linspace(0, 6, 7)
    assert h(t) == pytest.approx(np.cos(2 * t) + 6 * np.sin(t))
    assert f.padded(5).K == 5
    assert (-f)(1.0) == pytest.approx(-math.cos(2.0))


def test_mode_rejects_negative_index():
    with pytest.raises(PreconditionError):
        PeriodicFunction.mode(-1)


def test_rotation_shifts_argument():
    f = PeriodicFunction(0.1, [0.3, 0.0, 1.2], [0.0, -0.7])
    t = np.linspace(0, TWO_PI, 9)
    assert f.rotated(0.4)(t) == pytest.approx(f(t + 0.4), abs=1e-12)


def test_json_roundtrip_both_forms():
    for f in (PeriodicFunction(1.0, [2.0], [3.0]), PeriodicFunction(samples=np.arange(6.0))):
        g = PeriodicFunction.from_dict(json.loads(json.dumps(f.to_dict())))
        assert g.to_dict() == f.to_dict()


def test_from_dict_rejects_mixed_forms():
    with pytest.raises(SchemaError):
        PeriodicFunction.from_dict({"samples": [0, 1, 2, 3], "a0": 1})
    with pytest.raises(SchemaError):
        PeriodicFunction.from_dict([1, 2])


# -- annulus data and compatibility -------------------------------------------


def test_boundary_data_file_roundtrip(tmp_path):
    d = AnnulusBoundaryData(0.5, 2.0, PeriodicFunction.mode(1, cos=4.0),
                            PeriodicFunction(samples=np.cos(nodes(8))), "neumann")
    path = tmp_path / "bd.json"
    d.dump(path)
    back = AnnulusBoundaryData.load(path)
    assert back.to_dict() == d.to_dict()


def test_bad_radii_and_kind():
    one = PeriodicFunction.constant(1.0)
    with pytest.raises(PreconditionError):
        AnnulusBoundaryData(2.0, 1.0, one, one)
    with pytest.raises(SchemaError):
        AnnulusBoundaryData(1.0, 2.0, one, one, "robin")
    with pytest.raises(SchemaError):
        AnnulusBoundaryData.from_dict({"r1": 1, "r2": 2})


def test_neumann_compatibility_examples():
    c = PeriodicFunction.constant
    ok = check_neumann_compatibility(AnnulusBoundaryData(0.5, 1.0, c(2.0), c(1.0), "neumann"))
    assert ok and ok.defect == 0.0
    cos = AnnulusBoundaryData(0.5, 2.0, PeriodicFunction.mode(1, 4.0), PeriodicFunction.mode(1, 1.0),
                              "neumann")
    assert check_neumann_compatibility(cos).passed
    bad = check_neumann_compatibility(AnnulusBoundaryData(1.0, 2.0, c(1.0), c(1.0), "neumann"))
    assert not bad
    assert bad.defect == pytest.approx(-TWO_PI)


def test_dirichlet_mean_compatibility_examples():
    c = PeriodicFunction.constant
    assert check_dirichlet_mean_compatibility(AnnulusBoundaryData(1, 2, c(3.0), c(3.0)))
    assert check_dirichlet_mean_compatibility(
        AnnulusBoundaryData(1, 2, PeriodicFunction.mode(1, sin=1.0), PeriodicFunction.mode(2, 1.0))
    )
    bad = check_dirichlet_mean_compatibility(AnnulusBoundaryData(1, 2, c(0.0), c(1.0)))
    assert not bad.passed and bad.defect == pytest.approx(-TWO_PI)


def test_from_normal_derivative_flips_inner_sign():
    f = PeriodicFunction.mode(1, cos=1.0)
    d = AnnulusBoundaryData.from_normal_derivative(1.0, 2.0, f, f)
    assert d.kind == "neumann"
    assert d.inner.a[0] == -1.0 and d.outer.a[0] == 1.0


# -- punctured disk data ----------------------------------------------------------


def test_origin_datum_examples():
    t = np.linspace(0, TWO_PI, 11)
    assert origin_datum(PeriodicFunction.mode(1, cos=1.0))(t) == pytest.approx(np.cos(t))
    assert origin_datum(PeriodicFunction.mode(3, cos=1.0))(t) == pytest.approx(0 * t, abs=0)
    zero = PeriodicFunction()
    assert check_punctured_neumann_data(zero, zero)


def test_origin_datum_matches_projection_integral():
    # (1/π)∫ cos(t − θ) φ(t) dt by the trapezoid rule, which is exact here
    phi = PeriodicFunction(0.0, [0.3, -1.0, 2.0], [1.5, 0.0, 0.4])
    t = nodes(64)
    for theta in (0.0, 0.7, 2.9):
        integral = np.sum(np.cos(t - theta) * phi(t)) * TWO_PI / 64 / math.pi
        assert origin_datum(phi)(theta) == pytest.approx(integral, abs=1e-13)


def test_punctured_data_errors():
    with pytest.raises(NonZeroMeanError):
        check_punctured_neumann_data(PeriodicFunction(), PeriodicFunction.constant(1.0))
    with pytest.raises(DataMismatchError) as info:
        check_punctured_neumann_data(PeriodicFunction.mode(1, cos=2.0), PeriodicFunction.mode(1, cos=1.0))
    assert 1 in info.value.modes
