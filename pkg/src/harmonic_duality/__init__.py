"""Dirichlet–Neumann duality for harmonic functions on annuli, disks and mapped regions.

The central fact: if u solves the Dirichlet problem on an annulus with data
r·ϕ, then the potential U obtained by integrating u/r radially (plus an
angular correction) solves the Neumann problem with data ϕ, and u = r·U_r.
Everything is carried out on closed-form Laurent–Fourier series.

Modules
-------
boundary    periodic boundary functions, annulus data, compatibility checks
geometry    polar/Cartesian conversion and the two chord inequalities
dirichlet   series solutions of the Dirichlet problem
duality     the Neumann potential and its inverse, disk and punctured variants
conformal   Joukowsky maps, the ellipse problem, transfer through map pairs
verify      independent oracles: finite differences, quadrature, Hölder slopes
cli         ``harmonic-duality`` command line front end
"""

from .boundary import (
    DEFAULT_ORDER,
    DEFAULT_TOL,
    AnnulusBoundaryData,
    CompatibilityReport,
    PeriodicFunction,
    check_dirichlet_mean_compatibility,
    check_neumann_compatibility,
    check_punctured_neumann_data,
    fourier_analyze,
    origin_datum,
)
from .conformal import (
    ConformalMapPair,
    EllipseNeumannSolution,
    EllipseRegion,
    RiemannMapPair,
    doubly_connected_dirichlet_from_neumann,
    doubly_connected_neumann,
    ellipse_boundary_transform,
    expression_map,
    joukowsky,
    named_map,
    named_riemann_map,
    neumann_on_ellipse,
    simply_connected_dirichlet,
    simply_connected_transfer,
    t_minus,
    t_plus,
    validate_map,
    validate_riemann_map,
)
from .dirichlet import (
    AnnulusHarmonicSeries,
    circle_mean,
    harmonic_conjugate_on_cut,
    solve_dirichlet_annulus,
    solve_dirichlet_disk,
    solve_dirichlet_punctured,
)
from .duality import (
    NeumannSolution,
    compute_C,
    compute_C_via_conjugate,
    dirichlet_from_neumann,
    dirichlet_from_neumann_disk,
    neumann_from_dirichlet_annulus,
    neumann_from_dirichlet_disk,
    neumann_from_dirichlet_symmetric,
    solve_punctured_neumann,
)
from .errors import (
    CompatibilityError,
    ConvergenceError,
    HarmonicDualityError,
    MapValidationError,
    NumericalError,
    PreconditionError,
    SchemaError,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
