import numpy as np
import pytest

from harmonic_duality.boundary import AnnulusBoundaryData, PeriodicFunction


def random_neumann_data(rng, K_max=16, r1=None, r2=None, product_one=False):
    """Band-limited Neumann data satisfying r1·mean(inner) = r2·mean(outer)."""
    if r1 is None:
        r1 = rng.uniform(0.2, 1.0)
    if r2 is None:
        r2 = r1 * rng.uniform(1.5, 5.0)
    if product_one:
        r1, r2 = r1 / np.sqrt(r1 * r2), r2 / np.sqrt(r1 * r2)
    K = int(rng.integers(1, K_max + 1))
    inner = PeriodicFunction(rng.normal(), rng.normal(size=K), rng.normal(size=K))
    outer = PeriodicFunction(r1 * inner.a0 / r2, rng.normal(size=K), rng.normal(size=K))
    return AnnulusBoundaryData(r1, r2, inner, outer, "neumann")


def weighted_dirichlet(data):
    """Dirichlet data r·ϕ whose solution is the partner u = r·U_r."""
    return AnnulusBoundaryData(data.r1, data.r2, data.r1 * data.inner, data.r2 * data.outer)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def cos_fixture():
    """ϕ(2, θ) = cos θ and ϕ(1/2, θ) = 4 cos θ, with U = (4/5)(r − 1/r) cos θ."""
    return AnnulusBoundaryData(
        0.5, 2.0, PeriodicFunction.mode(1, cos=4.0), PeriodicFunction.mode(1, cos=1.0), "neumann"
    )
