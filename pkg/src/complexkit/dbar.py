"""Solution operator for ``df/dzbar = alpha`` and the boundary blow-up extension.

The solution is the area Cauchy transform

    f(zeta) = -(1/pi) * integral alpha(xi) / (xi - zeta) dA(xi),

evaluated lazily, one query point at a time.  ``alpha`` may be a callable
(vectorized over complex arrays) or a :class:`GridField`; grid data is
bilinearly interpolated and taken to vanish off its support mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.ndimage import binary_erosion

from .errors import LatticeMismatch, SingularityInsideCutoffTransition
from .geometry import (
    GridField,
    Lattice,
    PlanarDomain,
    QuadratureSpec,
    SingularAreaQuadrature,
    _as_values,
    disc,
)


def grid_interpolant(g: GridField) -> Callable:
    """Bilinear interpolant of a grid field, zero off the support mask."""
    vals = np.where(g.mask, g.values, 0)

    def interp(z):
        z = np.asarray(z, dtype=complex)
        u = (z - g.origin) / g.spacing
        x, y = u.real, u.imag
        inside = (x >= 0) & (y >= 0) & (x <= g.width - 1) & (y <= g.height - 1)
        c0 = np.clip(np.floor(x).astype(int), 0, max(g.width - 2, 0))
        r0 = np.clip(np.floor(y).astype(int), 0, max(g.height - 2, 0))
        c1 = np.minimum(c0 + 1, g.width - 1)
        r1 = np.minimum(r0 + 1, g.height - 1)
        tx, ty = x - c0, y - r0
        out = ((1 - tx) * (1 - ty) * vals[r0, c0] + tx * (1 - ty) * vals[r0, c1]
               + (1 - tx) * ty * vals[r1, c0] + tx * ty * vals[r1, c1])
        return np.where(inside, out, 0)

    return interp


@dataclass
class DbarProblem:
    """Right-hand side ``alpha`` supported in the disc ``|xi| <= support_radius``.

    ``domain`` is the integration region; it defaults to that disc.
    """

    alpha: Callable | GridField
    support_radius: float
    domain: PlanarDomain | None = None

    def __post_init__(self):
        if not self.support_radius > 0:
            raise ValueError("support_radius must be positive")
        if isinstance(self.alpha, GridField):
            pts = self.alpha.points()[self.alpha.mask]
            if np.any(np.abs(pts) > self.support_radius * (1 + 1e-12)):
                raise ValueError("alpha support leaves the disc of support_radius")
        if self.domain is None:
            self.domain = disc(0j, self.support_radius)

    @property
    def alpha_fn(self) -> Callable:
        if isinstance(self.alpha, GridField):
            return grid_interpolant(self.alpha)
        return self.alpha


class CauchyTransform:
    """Callable solution of a :class:`DbarProblem` at a fixed resolution."""

    def __init__(self, p: DbarProblem, q: QuadratureSpec | None = None):
        self.problem = p
        self.q = q or QuadratureSpec()
        self._quad = SingularAreaQuadrature(p.alpha_fn, p.domain, self.q)

    def __call__(self, zeta):
        z = np.asarray(zeta, dtype=complex)
        out = (-self._quad(z.ravel()) / np.pi).reshape(z.shape)
        return complex(out) if z.ndim == 0 else out


def cauchy_transform(p: DbarProblem, eval_points, q: QuadratureSpec | None = None):
    """Solve ``df/dzbar = alpha`` at each evaluation point."""
    pts = np.atleast_1d(np.asarray(eval_points, dtype=complex))
    return CauchyTransform(p, q)(pts)


def _alpha_on_f_lattice(f: GridField, alpha: GridField):
    """Alpha values and support mask on the nodes of ``f``'s lattice."""
    ratio = alpha.spacing / f.spacing
    m = int(round(ratio))
    if m < 1 or abs(ratio - m) > 1e-9 * ratio:
        raise LatticeMismatch("f spacing must divide alpha spacing")
    off = (f.origin - alpha.origin) / f.spacing
    if (abs(off.real - round(off.real)) > 1e-6
            or abs(off.imag - round(off.imag)) > 1e-6):
        raise LatticeMismatch("lattices are not aligned")
    pts = f.points()
    vals = grid_interpolant(alpha)(pts)
    sup = GridField(alpha.origin, alpha.spacing,
                    alpha.mask.astype(complex), np.ones(alpha.mask.shape, bool))
    inside = grid_interpolant(sup)(pts).real
    return vals, inside


def dbar_residual(f_samples: GridField, alpha: GridField) -> float:
    """Max of ``|df/dzbar - alpha|`` over the safely interior lattice points.

    The derivative uses the central-difference Wirtinger stencil with the
    lattice spacing as step.  Points within two cells of the lattice edge,
    of ``f``'s mask edge, or of the boundary of ``alpha``'s support are
    skipped.
    """
    a_vals, a_support = _alpha_on_f_lattice(f_samples, alpha)
    F, h = f_samples.values, f_samples.spacing
    valid = f_samples.interior(2)
    # support boundary: any fractional support value, or a mixed 5x5 block
    solid = a_support > 1 - 1e-12
    empty = a_support < 1e-12
    st = np.ones((5, 5), bool)
    clean = (binary_erosion(solid, st, border_value=1)
             | binary_erosion(empty, st, border_value=1))
    valid &= clean
    if not valid.any():
        return 0.0
    fx = np.zeros(F.shape, complex)
    fy = np.zeros(F.shape, complex)
    fx[:, 1:-1] = (F[:, 2:] - F[:, :-2]) / (2 * h)
    fy[1:-1, :] = (F[2:, :] - F[:-2, :]) / (2 * h)
    dzbar = 0.5 * (fx + 1j * fy)
    return float(np.max(np.abs(dzbar - a_vals)[valid]))


def boundedness_bound(p: DbarProblem, q: QuadratureSpec | None = None) -> float:
    """Explicit ``B`` with ``|f| <= B`` everywhere.

    ``sup|alpha| * (1/pi) * integral_{|xi| <= 2R} dA/|xi| = 4 R sup|alpha|``.
    The sup is taken over the lattice samples (exact for grid data).
    """
    q = q or QuadratureSpec()
    if isinstance(p.alpha, GridField):
        vals = p.alpha.values[p.alpha.mask]
        sup = float(np.max(np.abs(vals))) if vals.size else 0.0
    else:
        lat = Lattice.for_domain(p.domain, q.area_resolution)
        sup = float(np.max(np.abs(_as_values(p.alpha, lat.nodes))))
    return sup * 4.0 * p.support_radius


def _smoothstep(t, smoothness: str):
    t = np.clip(t, 0.0, 1.0)
    if smoothness == "C1":
        return t * t * (3 - 2 * t), 6 * t * (1 - t)
    return t ** 3 * (10 - 15 * t + 6 * t * t), 30 * t * t * (1 - t) ** 2


@dataclass(frozen=True)
class CutoffSpec:
    """Radial cutoff: 1 on ``|z-P| <= inner``, 0 on ``|z-P| >= outer``."""

    center: complex
    inner_radius: float
    outer_radius: float
    smoothness: str = "C2"

    def __post_init__(self):
        if not 0 < self.inner_radius < self.outer_radius:
            raise ValueError("need 0 < inner_radius < outer_radius")
        if self.smoothness not in ("C1", "C2"):
            raise ValueError("smoothness must be 'C1' or 'C2'")

    def _t(self, z):
        rho = np.abs(np.asarray(z, dtype=complex) - self.center)
        return rho, (rho - self.inner_radius) / (self.outer_radius - self.inner_radius)

    def phi(self, z):
        _, t = self._t(z)
        return 1.0 - _smoothstep(t, self.smoothness)[0]

    def dphi_dzbar(self, z):
        # d rho / d zbar = (z - P) / (2 rho)
        z = np.asarray(z, dtype=complex)
        rho, t = self._t(z)
        ds = _smoothstep(t, self.smoothness)[1] / (self.outer_radius - self.inner_radius)
        safe = np.where(rho > 0, rho, 1.0)
        return np.where(rho > 0, -ds * (z - self.center) / (2 * safe), 0)

    def transition(self, z):
        rho, _ = self._t(z)
        return (rho > self.inner_radius) & (rho < self.outer_radius)


class BlowUpExtension:
    """``hhat = phi * h - f`` with ``df/dzbar = (dphi/dzbar) * h`` on ``d``.

    ``hhat`` is holomorphic on ``d`` and differs from ``h`` near ``P`` by the
    bounded solution ``f``.
    """

    def __init__(self, h: Callable, cutoff: CutoffSpec, d: PlanarDomain,
                 q: QuadratureSpec | None = None):
        self.h, self.cutoff, self.domain = h, cutoff, d
        self.q = q or QuadratureSpec()
        x0, x1, y0, y1 = d.bbox()
        P = cutoff.center
        R = max(abs(complex(x, y)) for x in (x0, x1) for y in (y0, y1))
        R = max(R, abs(P) + cutoff.outer_radius)
        self.problem = DbarProblem(self.alpha, R, d)
        self.f = CauchyTransform(self.problem, self.q)

    def alpha(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, complex)
        sel = self.cutoff.transition(z) & np.asarray(self.domain.contains(z), bool)
        if sel.any():
            hz = _as_values(self.h, z[sel])
            if not np.all(np.isfinite(hz)):
                raise SingularityInsideCutoffTransition(
                    "h is not finite where dphi/dzbar is nonzero")
            out[sel] = self.cutoff.dphi_dzbar(z[sel]) * hz
        return out

    def phi_h(self, z):
        z = np.asarray(z, dtype=complex)
        phi = self.cutoff.phi(z)
        out = np.zeros(z.shape, complex)
        sel = phi != 0
        if np.any(sel):
            out[sel] = phi[sel] * _as_values(self.h, z[sel])
        return out

    def bound(self) -> float:
        return boundedness_bound(self.problem, self.q)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.phi_h(z) - self.f(z)
        return complex(out) if z.ndim == 0 else out


def blow_up_extension(h: Callable, cutoff: CutoffSpec, d: PlanarDomain,
                      q: QuadratureSpec | None = None) -> BlowUpExtension:
    return BlowUpExtension(h, cutoff, d, q)


def extension_residual(ext: BlowUpExtension, spacing: float | None = None,
                       boundary_margin: float = 0.1, pole_margin: float = 0.25,
                       box: tuple[complex, complex] | None = None) -> float:
    """:func:`dbar_residual` of ``hhat`` against zero on a window of ``d``.

    ``hhat`` is sampled on the lattice of the quadrature (or ``spacing``)
    over points of ``d`` at least ``boundary_margin`` inside the boundary
    and ``pole_margin`` away from ``P``.  The margins keep the
    finite-difference checker away from the cut of alpha at the boundary
    and from the blow-up of ``h``, where the stencil itself is inaccurate.
    """
    d, P = ext.domain, ext.cutoff.center
    if spacing is None:
        spacing = Lattice.for_domain(d, ext.q.area_resolution).spacing
    if box is None:
        reach = ext.cutoff.outer_radius + 2 * spacing
        box = (P - reach * (1 + 1j), P + reach * (1 + 1j))
    lo, hi = box
    inner = boundary_margin

    def region(z):
        far = np.ones(z.shape, bool)
        for c in d.boundary:
            far &= c.distance_to(z.ravel()).reshape(z.shape) > inner
        return np.asarray(d.contains(z), bool) & far & (np.abs(z - P) > pole_margin)

    F = GridField.window(ext, lo, hi, spacing, region)
    zero = GridField(F.origin, spacing, np.zeros(F.values.shape), np.ones(F.values.shape, bool))
    return dbar_residual(F, zero)
