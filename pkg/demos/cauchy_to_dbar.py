"""From the Cauchy formula to a solution of the dbar equation.

Run with ``python3 demos/cauchy_to_dbar.py``.
"""

import numpy as np

from complexkit.cauchy import cauchy_eval, pompeiu_eval
from complexkit.dbar import CauchyTransform, DbarProblem, dbar_residual
from complexkit.geometry import GridField, QuadratureSpec, disc

z = 0.3 + 0.4j

# A holomorphic function is recovered from its boundary values alone.
print("Cauchy, exp:", cauchy_eval(np.exp, disc(), z), "exact:", np.exp(z))

# For conj(z) the boundary term is not enough; the area term restores it.
# Cells cut by the circle make the decay uneven from one resolution to the next.
rng = np.random.default_rng(0)
pts = 0.7 * np.sqrt(rng.random(20)) * np.exp(2j * np.pi * rng.random(20))
for res in (64, 256, 768):
    v = pompeiu_eval(np.conj, disc(), pts, QuadratureSpec(area_resolution=res))
    print(f"Pompeiu, conj, {res}^2 cells: max error {np.max(np.abs(v - np.conj(pts))):.2e}")

# Solve df/dzbar = alpha for a smooth bump and check the residual on a window.
def bump(w):
    r2 = np.abs(w) ** 2 / 0.64
    return np.where(r2 < 1, (1 - r2) ** 3, 0) * (1 + 0.5j * np.real(w))


T = CauchyTransform(DbarProblem(bump, 1.0), QuadratureSpec(area_resolution=256))
lo, hi, h = 0.7 - 0.1j, 0.9 + 0.1j, 2 / 256
f = GridField.window(lambda w: T(w.ravel()).reshape(w.shape), lo, hi, h)
print("dbar residual near the edge of the support:", dbar_residual(f, GridField.window(bump, lo, hi, h)))
