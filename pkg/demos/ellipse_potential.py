#!/usr/bin/env python3
"""Neumann problem on the ellipse with foci ±1, through the Joukowsky map.

We prescribe the normal derivative f = n_x (the x-component of the outward
normal).  The field x has exactly that normal derivative, so with the
normalization U(1) = 0 the answer must be U = x − 1.  The solver knows
nothing of this: it pulls f back to the annulus 1/ρ < |w| < ρ, solves a
Dirichlet problem there and integrates.
"""
import numpy as np

from harmonic_duality import EllipseRegion, neumann_on_ellipse, t_plus

RHO = 2.0


def normal_x(region):
    a, b = region.semi_axes

    def f(z):
        nx, ny = z.real / a**2, z.imag / b**2
        return nx / np.hypot(nx, ny)

    return f


def main():
    region = EllipseRegion(RHO)
    print("semi-axes:", region.semi_axes)
    sol = neumann_on_ellipse(normal_x(region), RHO, n=512)

    rng = np.random.default_rng(0)
    z = rng.uniform(-1.2, 1.2, 400) + 1j * rng.uniform(-0.7, 0.7, 400)
    z = z[region.contains(z)]
    print(f"{z.size} interior points, max |U - (x - 1)| = {np.abs(sol(z) - (z.real - 1)).max():.2e}")

    # The focal segment [-1, 1] is where T₊ has its cut.  U is nonetheless
    # continuous across it: approach from above and below.
    for x in (-0.5, 0.25, 0.9):
        above, below = sol(complex(x, 1e-9)), sol(complex(x, -1e-9))
        print(f"x = {x:+.2f}: above {above:+.10f}, below {below:+.10f}")

    # Where does a point's hyperbola meet the segment?  z0* = cos Θ(z).
    p = 0.6 + 0.4j
    print("T+(p) =", t_plus(p), " z0*(p) =", sol.z0_star(p))


if __name__ == "__main__":
    main()
