"""Contours, planar domains, lattices and the quadrature engines.

Integrands are plain Python callables that accept a numpy array of complex
points and return an array of the same shape (or a scalar, which is
broadcast).  All quadratures are deterministic and allocation-bounded by the
resolutions in :class:`QuadratureSpec`.

Conventions
-----------
* A contour is parametrized over ``t in [0, 1]``; its ``orientation`` label
  records which way it runs around the region it bounds.  Outer boundaries
  run counterclockwise, holes clockwise.
* The wedge ``dzbar ^ dz`` is always folded into area measure as ``2i dA``.
* Lattice quadrature is the midpoint rule on square cells whose centres lie
  inside the domain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.ndimage import binary_erosion

from .errors import (
    DegenerateContour,
    EmptyDomain,
    NonFiniteIntegrand,
    NonFiniteStencil,
)

CCW = "counterclockwise"
CW = "clockwise"

CLOSURE_TOL = 1e-12


def _as_values(g, z):
    """Evaluate ``g`` on ``z`` and broadcast scalar results."""
    out = np.asarray(g(z), dtype=complex)
    if out.shape != np.shape(z):
        out = np.broadcast_to(out, np.shape(z)).copy()
    return out


@dataclass(frozen=True)
class QuadratureSpec:
    contour_nodes: int = 256
    area_resolution: int = 256
    singular_radial_nodes: int = 24
    singular_angular_nodes: int = 32
    # radius of the polar patch around a pole, in lattice cells
    patch_cells: float = 8.0

    def __post_init__(self):
        for name in ("contour_nodes", "area_resolution",
                     "singular_radial_nodes", "singular_angular_nodes"):
            v = getattr(self, name)
            if int(v) != v or v < 4:
                raise ValueError(f"{name} must be an integer >= 4, got {v!r}")
        if self.patch_cells <= 0:
            raise ValueError("patch_cells must be positive")

    def with_(self, **kw) -> "QuadratureSpec":
        d = dict(self.__dict__)
        d.update(kw)
        return QuadratureSpec(**d)


@dataclass(frozen=True)
class Contour:
    """Closed parametrized C^1 curve ``t -> position(t)``, ``t in [0, 1]``."""

    position: Callable
    velocity: Callable
    orientation: str = CCW
    node_count: int = 256

    def __post_init__(self):
        if self.orientation not in (CCW, CW):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if self.node_count < 1:
            raise ValueError("node_count must be positive")
        ends = _as_values(self.position, np.array([0.0, 1.0]))
        if abs(ends[0] - ends[1]) > CLOSURE_TOL * (1 + abs(ends[0])):
            raise DegenerateContour("contour is not closed")

    def nodes(self, n: int | None = None):
        """Return ``(t, position, velocity)`` at ``n`` equispaced parameters."""
        n = self.node_count if n is None else n
        t = np.arange(n) / n
        return t, _as_values(self.position, t), _as_values(self.velocity, t)

    def reversed(self) -> "Contour":
        pos, vel = self.position, self.velocity
        return Contour(
            position=lambda t: pos(1.0 - np.asarray(t)),
            velocity=lambda t: -_as_values(vel, 1.0 - np.asarray(t)),
            orientation=CW if self.orientation == CCW else CCW,
            node_count=self.node_count,
        )

    def max_node_gap(self, n: int | None = None) -> float:
        _, z, _ = self.nodes(n)
        return float(np.max(np.abs(np.diff(np.append(z, z[0])))))

    def distance_to(self, z, n: int | None = None) -> np.ndarray:
        """Euclidean distance from ``z`` to the closed node polyline."""
        _, a, _ = self.nodes(n)
        b = np.roll(a, -1)
        z = np.asarray(z, dtype=complex)[..., None]
        ab = b - a
        denom = np.where(np.abs(ab) > 0, np.abs(ab) ** 2, 1.0)
        s = np.clip(((z - a) * np.conj(ab)).real / denom, 0.0, 1.0)
        return np.min(np.abs(z - (a + s * ab)), axis=-1)

    def to_json(self, n: int | None = None) -> dict:
        _, z, _ = self.nodes(n)
        return {"orientation": self.orientation,
                "nodes": [[float(w.real), float(w.imag)] for w in z]}


def circle(center: complex = 0j, radius: float = 1.0, orientation: str = CCW,
           node_count: int = 256) -> Contour:
    if radius <= 0:
        raise DegenerateContour("circle radius must be positive")
    sign = 1.0 if orientation == CCW else -1.0
    w = 2 * np.pi * sign

    def position(t):
        return center + radius * np.exp(1j * w * np.asarray(t, dtype=float))

    def velocity(t):
        return 1j * w * radius * np.exp(1j * w * np.asarray(t, dtype=float))

    return Contour(position, velocity, orientation, node_count)


def _polygon_contains(poly: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Even-odd ray test of points ``z`` against closed polygon ``poly``."""
    x, y = z.real[..., None], z.imag[..., None]
    xa, ya = poly.real, poly.imag
    xb, yb = np.roll(xa, -1), np.roll(ya, -1)
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = ((ya > y) != (yb > y)) & (
            x < (xb - xa) * (y - ya) / (yb - ya) + xa)
    return np.count_nonzero(cross, axis=-1) % 2 == 1


@dataclass(frozen=True)
class PlanarDomain:
    """Bounded domain: an outer contour minus finitely many holes."""

    outer: Contour
    holes: tuple = ()
    contains: Callable | None = None

    def __post_init__(self):
        if self.outer.orientation != CCW:
            raise ValueError("outer contour must be counterclockwise")
        for h in self.holes:
            if h.orientation != CW:
                raise ValueError("hole contours must be clockwise")
        if self.contains is None:
            object.__setattr__(self, "contains", self._polygon_membership)

    @property
    def boundary(self) -> tuple:
        return (self.outer, *self.holes)

    def _polygon_membership(self, z):
        z = np.asarray(z, dtype=complex)
        _, outer, _ = self.outer.nodes(max(self.outer.node_count, 512))
        inside = _polygon_contains(outer, z)
        for h in self.holes:
            _, hz, _ = h.nodes(max(h.node_count, 512))
            inside &= ~_polygon_contains(hz, z)
        return inside

    def bbox(self) -> tuple[float, float, float, float]:
        _, z, _ = self.outer.nodes(max(4 * self.outer.node_count, 1024))
        return (float(z.real.min()), float(z.real.max()),
                float(z.imag.min()), float(z.imag.max()))


def disc(center: complex = 0j, radius: float = 1.0,
         node_count: int = 256) -> PlanarDomain:
    c = complex(center)

    def contains(z):
        return np.abs(np.asarray(z) - c) < radius

    return PlanarDomain(circle(c, radius, CCW, node_count), (), contains)


def annulus(center: complex = 0j, inner: float = 0.5, outer: float = 2.0,
            node_count: int = 256) -> PlanarDomain:
    if not 0 < inner < outer:
        raise ValueError("need 0 < inner < outer")
    c = complex(center)

    def contains(z):
        r = np.abs(np.asarray(z) - c)
        return (r > inner) & (r < outer)

    return PlanarDomain(circle(c, outer, CCW, node_count),
                        (circle(c, inner, CW, node_count),), contains)


@dataclass
class GridField:
    """Complex samples on a square lattice.

    ``values[row, col]`` sits at ``origin + spacing * (col + 1j * row)``.
    """

    origin: complex
    spacing: float
    values: np.ndarray
    mask: np.ndarray = field(default=None)

    def __post_init__(self):
        self.origin = complex(self.origin)
        self.spacing = float(self.spacing)
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-d lattice")
        if self.mask is None:
            self.mask = np.ones(self.values.shape, dtype=bool)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.mask.shape != self.values.shape:
            raise ValueError("mask and values shapes differ")
        if not np.all(np.isfinite(self.values[self.mask])):
            raise NonFiniteIntegrand("non-finite value inside the support mask")

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    def points(self) -> np.ndarray:
        rows, cols = np.mgrid[0:self.height, 0:self.width]
        return self.origin + self.spacing * (cols + 1j * rows)

    @classmethod
    def sample(cls, f: Callable, origin: complex, spacing: float,
               width: int, height: int, region: Callable | None = None
               ) -> "GridField":
        """Sample ``f`` on a lattice; ``region`` decides the support mask."""
        rows, cols = np.mgrid[0:height, 0:width]
        z = complex(origin) + spacing * (cols + 1j * rows)
        mask = np.ones(z.shape, bool) if region is None else np.asarray(region(z), bool)
        vals = np.zeros(z.shape, complex)
        if mask.any():
            vals[mask] = _as_values(f, z[mask])
        return cls(origin, spacing, vals, mask)

    @classmethod
    def window(cls, f: Callable, lo: complex, hi: complex, spacing: float,
               region: Callable | None = None) -> "GridField":
        """Sample on the lattice covering the box ``[lo, hi]``."""
        width = int(math.floor((hi.real - lo.real) / spacing + 1e-9)) + 1
        height = int(math.floor((hi.imag - lo.imag) / spacing + 1e-9)) + 1
        return cls.sample(f, lo, spacing, width, height, region)

    def interior(self, margin: int = 1) -> np.ndarray:
        """Mask points whose ``margin``-neighbourhood lies in the mask and lattice."""
        if margin <= 0:
            return self.mask.copy()
        st = np.ones((2 * margin + 1, 2 * margin + 1), bool)
        return binary_erosion(self.mask, structure=st, border_value=0)

    def to_json(self) -> dict:
        v = self.values.ravel()
        return {
            "origin": [self.origin.real, self.origin.imag],
            "spacing": self.spacing,
            "width": self.width,
            "height": self.height,
            "values": [[float(w.real), float(w.imag)] for w in v],
            "mask": [bool(m) for m in self.mask.ravel()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "GridField":
        shape = (int(d["height"]), int(d["width"]))
        vals = np.array([complex(a, b) for a, b in d["values"]]).reshape(shape)
        mask = np.array(d["mask"], dtype=bool).reshape(shape)
        return cls(complex(*d["origin"]), d["spacing"], vals, mask)


def contour_integral(g: Callable, c: Contour, q: QuadratureSpec | None = None
                     ) -> complex:
    """Periodic trapezoid rule for the line integral of ``g(zeta) dzeta``."""
    n = c.node_count if q is None else q.contour_nodes
    _, z, dz = c.nodes(n)
    if np.any(np.abs(dz) == 0):
        raise DegenerateContour("zero velocity at a quadrature node")
    gz = _as_values(g, z)
    if not np.all(np.isfinite(gz)):
        raise NonFiniteIntegrand("integrand is not finite on the contour")
    return complex(np.sum(gz * dz) / n)


def boundary_integral(g: Callable, d: PlanarDomain, q: QuadratureSpec | None = None
                      ) -> complex:
    """Sum of :func:`contour_integral` over every boundary component."""
    return sum((contour_integral(g, c, q) for c in d.boundary), 0j)


@dataclass(frozen=True)
class Lattice:
    """Cell centres of the square lattice covering a domain's bounding box."""

    nodes: np.ndarray     # in-domain cell centres (1-d complex)
    spacing: float

    @classmethod
    def for_domain(cls, d: PlanarDomain, resolution: int) -> "Lattice":
        x0, x1, y0, y1 = d.bbox()
        h = max(x1 - x0, y1 - y0) / resolution
        nx = max(1, int(math.ceil((x1 - x0) / h - 1e-9)))
        ny = max(1, int(math.ceil((y1 - y0) / h - 1e-9)))
        xs = x0 + (np.arange(nx) + 0.5) * h
        ys = y0 + (np.arange(ny) + 0.5) * h
        z = (xs[None, :] + 1j * ys[:, None]).ravel()
        inside = np.asarray(d.contains(z), bool)
        if not inside.any():
            raise EmptyDomain("no lattice point inside the domain")
        return cls(z[inside], h)

    @property
    def cell_area(self) -> float:
        return self.spacing ** 2


def area_integral(g: Callable, d: PlanarDomain, q: QuadratureSpec | None = None
                  ) -> complex:
    """Midpoint-rule approximation of the area integral of ``g`` over ``d``."""
    q = q or QuadratureSpec()
    lat = Lattice.for_domain(d, q.area_resolution)
    vals = _as_values(g, lat.nodes)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteIntegrand("integrand is not finite on the lattice")
    return complex(np.sum(vals) * lat.cell_area)


def _blend(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


class SingularAreaQuadrature:
    """Reusable evaluator of ``integral g(xi) / (xi - pole) dA`` over a domain.

    The smooth factor is sampled once on the lattice; each pole then costs
    one pass over the nonzero lattice samples plus a polar patch.

    Around the pole a polar patch of radius ``patch_cells * h`` is integrated
    in coordinates ``xi = pole + r e^{i theta}``, where the Jacobian ``r``
    cancels the kernel's ``1/r`` exactly.  Lattice and patch are glued with a
    smooth partition of unity (patch weight 1 inside a quarter of the radius,
    0 at the rim), so the lattice part is a smooth function of the pole.
    """

    def __init__(self, g: Callable, d: PlanarDomain, q: QuadratureSpec | None = None):
        q = q or QuadratureSpec()
        self.g, self.domain, self.q = g, d, q
        lat = Lattice.for_domain(d, q.area_resolution)
        vals = _as_values(g, lat.nodes)
        if not np.all(np.isfinite(vals)):
            raise NonFiniteIntegrand("integrand is not finite on the lattice")
        keep = vals != 0
        self.nodes = lat.nodes[keep]
        self.weights = vals[keep] * lat.cell_area
        self.spacing = lat.spacing
        self.r0 = q.patch_cells * lat.spacing
        self.r_in = 0.25 * self.r0
        gl_x, gl_w = np.polynomial.legendre.leggauss(q.singular_radial_nodes)
        self._rad = 0.5 * self.r0 * (gl_x + 1.0)
        self._rad_w = 0.5 * self.r0 * gl_w
        m = q.singular_angular_nodes
        theta = 2 * np.pi * np.arange(m) / m
        self._unit = np.exp(1j * theta)
        # patch weight of the partition of unity at each radial node
        self._patch_w = 1.0 - _blend((self._rad - self.r_in) / (self.r0 - self.r_in))

    def lattice_weight(self, r):
        return _blend((r - self.r_in) / (self.r0 - self.r_in))

    def __call__(self, poles) -> np.ndarray:
        poles = np.atleast_1d(np.asarray(poles, dtype=complex))
        if not np.all(np.isfinite(poles)):
            raise NonFiniteIntegrand("pole is not finite")
        out = np.empty(poles.shape, complex)
        for i, p in enumerate(poles):
            diff = self.nodes - p
            r = np.abs(diff)
            near = r < self.r0
            far = ~near
            total = np.sum(self.weights[far] / diff[far])
            if near.any():
                rn, dn = r[near], diff[near]
                lw = self.lattice_weight(rn)
                # lattice weight vanishes at the pole itself
                total += np.sum(self.weights[near] * lw
                                / np.where(rn > 0, dn, 1.0))
            out[i] = total
        out += self._patch(poles)
        return out

    def _patch(self, poles: np.ndarray) -> np.ndarray:
        # xi = p + r e^{i theta}; g/(xi - p) r dr dtheta = g e^{-i theta} dr dtheta
        pts = (poles[:, None, None]
               + self._rad[None, :, None] * self._unit[None, None, :])
        inside = np.asarray(self.domain.contains(pts), bool)
        vals = np.zeros(pts.shape, complex)
        if inside.any():
            vals[inside] = _as_values(self.g, pts[inside])
        if not np.all(np.isfinite(vals)):
            raise NonFiniteIntegrand("integrand is not finite on the polar patch")
        dtheta = 2 * np.pi / self._unit.size
        w = (self._rad_w * self._patch_w)[None, :, None] * dtheta
        return np.sum(vals * np.conj(self._unit)[None, None, :] * w, axis=(1, 2))


def singular_area_integral(g: Callable, pole: complex, d: PlanarDomain,
                           q: QuadratureSpec | None = None) -> complex:
    """Area integral of ``g(xi) / (xi - pole)`` over ``d``."""
    return complex(SingularAreaQuadrature(g, d, q)(pole)[0])


def default_step(z) -> np.ndarray | float:
    return 1e-4 * (1 + np.abs(z))


def wirtinger(f: Callable, z, step=None):
    """Central-difference Wirtinger derivatives ``(df/dz, df/dzbar)``.

    Works elementwise on arrays of points.  Truncation error is
    ``O(step**2)`` for C^3 inputs.
    """
    z = np.asarray(z, dtype=complex)
    s = default_step(z) if step is None else np.asarray(step, dtype=float)
    fxp, fxm = _as_values(f, z + s), _as_values(f, z - s)
    fyp, fym = _as_values(f, z + 1j * s), _as_values(f, z - 1j * s)
    stencil = np.stack([fxp, fxm, fyp, fym])
    if not np.all(np.isfinite(stencil)):
        raise NonFiniteStencil("f is not finite on the difference stencil")
    fx = (fxp - fxm) / (2 * s)
    fy = (fyp - fym) / (2 * s)
    dz = 0.5 * (fx - 1j * fy)
    dzbar = 0.5 * (fx + 1j * fy)
    if dz.ndim == 0:
        return complex(dz), complex(dzbar)
    return dz, dzbar
