"""Poisson extension of boundary data, with the Hopf and Harnack checks.

Run with ``python3 demos/harmonic_extension.py``.
"""

import numpy as np

from complexkit.dirichlet import (
    BoundaryData,
    harmonic_extension,
    harnack_lower_bound_check,
    hopf_normal_derivative,
    poisson_solve,
)

f = BoundaryData.from_function(lambda p: 1 - np.cos(p), 256)
u = harmonic_extension(f)

# The extension of 1 - cos(psi) is 1 - r cos(theta).
for r in (0.0, 0.5, 0.9):
    print(f"u({r}, 0) = {poisson_solve(f, np.array([r]), np.array([0.0]))[0]:.12f}")

# Nonnegative data with a zero at psi = 0: the outward derivative there is negative.
print("radial derivative at the zero:", hopf_normal_derivative(u, 1.0))

# Interior values are bounded below in terms of u(0).
for r in (0.3, 0.6, 0.9):
    c = harnack_lower_bound_check(f, r)
    print(f"Harnack at r={r}: min u = {c.lhs:.4f} >= {c.rhs:.4f} ({c.ok})")
