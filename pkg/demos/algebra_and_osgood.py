"""Homomorphisms of the polynomial algebra, and a discrete Osgood argument.

Run with ``python3 demos/algebra_and_osgood.py``.
"""

import numpy as np

from complexkit.bers import Poly, hom_from_map, morphism_audit
from complexkit.geometry import GridField
from complexkit.osgood import (
    boundedness_masks,
    cover_check,
    dense_ball_search,
    exp_partial_sums,
    limit_holomorphy_residual,
)

# Every homomorphism is a pullback f -> f o h, and h is read off from the image of z.
h = Poly([1, 0, -2j, 1])
a = morphism_audit(hom_from_map(h), trials=50, seed=0)
print("pullback audit:", a.is_homomorphism, "recovered h:", a.recovered_h.coeffs)
print("f -> conj(f) scalar defect:", morphism_audit(lambda f: f.conj(), 20, 0).scalar_defect)

# Partial sums of exp are pointwise bounded on |z| <= 2, so some level set holds a ball,
# on which the limit is holomorphic.
R, m = 2.0, 33
grid = GridField.sample(lambda z: np.zeros(z.shape, complex), complex(-R, -R), 2 * R / (m - 1),
                        m, m, lambda z: np.abs(z) <= R + 1e-12)
seq = exp_partial_sums(30)
masks = boundedness_masks(seq, grid, 8)
print("covered:", cover_check(masks)[0])
ball = dense_ball_search(masks)
print("ball:", ball, "residual:", limit_holomorphy_residual(seq, ball))
