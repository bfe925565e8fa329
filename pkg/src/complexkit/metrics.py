"""Caratheodory and Kobayashi lengths on the disc, the bidisc and the ball.

Base points and tangent vectors are numpy arrays: shape ``(1,)`` (or a
scalar) for the disc, ``(2,)`` for the ball and bidisc.

The disc length at a general point is computed by pulling the point back
to the origin with the Mobius automorphism ``(z - P)/(1 - conj(P) z)``,
whose derivative at ``P`` is ``1/(1 - |P|^2)``, and using ``|xi|`` at the
origin.  The bidisc does the same coordinatewise and takes the maximum.
The ball is handled at the origin only.  On these models both metrics
coincide, so the ``kind`` never changes the value.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .automorphisms import BidiscAutomorphism, mobius_derivative
from .errors import (
    CandidateNotAdmissible,
    MapLeavesTarget,
    NonFiniteStencil,
    PointOutsideDomain,
    UnsupportedBasePoint,
)

EQ_TOL = 1e-8


class Model(enum.Enum):
    UNIT_DISC = "disc"
    UNIT_BALL2 = "ball"
    UNIT_BIDISC = "bidisc"

    @property
    def dim(self) -> int:
        return 1 if self is Model.UNIT_DISC else 2

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex).reshape(-1, self.dim)
        if self is Model.UNIT_BALL2:
            return np.linalg.norm(z, axis=-1) < 1
        return np.all(np.abs(z) < 1, axis=-1)

    def random_points(self, rng: np.random.Generator, n: int, scale: float = 0.95):
        """Uniform-ish samples strictly inside the model."""
        z = rng.normal(size=(n, self.dim)) + 1j * rng.normal(size=(n, self.dim))
        if self is Model.UNIT_BALL2:
            z /= np.linalg.norm(z, axis=-1, keepdims=True)
            z *= scale * rng.random((n, 1)) ** 0.25
        else:
            z = scale * np.sqrt(rng.random((n, self.dim))) * np.exp(
                2j * np.pi * rng.random((n, self.dim)))
        return z


class Kind(enum.Enum):
    CARATHEODORY = "caratheodory"
    KOBAYASHI = "kobayashi"


def _vec(x, dim: int) -> np.ndarray:
    v = np.atleast_1d(np.asarray(x, dtype=complex)).ravel()
    if v.size != dim:
        raise ValueError(f"expected a vector of dimension {dim}, got {v.size}")
    return v


@dataclass(frozen=True)
class MetricQuery:
    model: Model
    kind: Kind
    base: np.ndarray = field(compare=False)
    tangent: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "base", _vec(self.base, self.model.dim))
        object.__setattr__(self, "tangent", _vec(self.tangent, self.model.dim))
        if not self.model.contains(self.base)[0]:
            raise PointOutsideDomain(f"{self.base} is not inside the {self.model.value}")


@dataclass(frozen=True)
class ComplexJacobian:
    matrix: np.ndarray
    antiholomorphic_residual: float


def jacobian_c(f: Callable, z, step: float | None = None) -> ComplexJacobian:
    """Central-difference complex Jacobian ``d f_i / d z_j``.

    Derivatives along real and imaginary directions are combined into the
    Wirtinger ``d/dz_j``; the size of the ``d/dzbar_j`` part is returned as
    a holomorphy diagnostic.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    s = 1e-4 * (1 + float(np.max(np.abs(z)))) if step is None else float(step)
    cols, bar = [], 0.0
    for j in range(z.size):
        e = np.zeros(z.size, complex)
        e[j] = s
        vals = [np.atleast_1d(np.asarray(f(z + d), dtype=complex)).ravel()
                for d in (e, -e, 1j * e, -1j * e)]
        if not all(np.all(np.isfinite(v)) for v in vals):
            raise NonFiniteStencil("map is not finite on the stencil")
        dx = (vals[0] - vals[1]) / (2 * s)
        dy = (vals[2] - vals[3]) / (2 * s)
        cols.append(0.5 * (dx - 1j * dy))
        bar = max(bar, float(np.max(np.abs(0.5 * (dx + 1j * dy)))))
    return ComplexJacobian(np.column_stack(cols), bar)


def metric_length(qy: MetricQuery) -> float:
    P, xi = qy.base, qy.tangent
    if qy.model is Model.UNIT_BALL2:
        if np.any(P != 0):
            raise UnsupportedBasePoint("ball metric is only available at the origin")
        return float(np.linalg.norm(xi))
    # pull each coordinate back to 0 with its Mobius factor
    pulled = np.abs(mobius_derivative(P, P) * xi)
    return float(np.max(pulled))


def indicatrix_membership(model: Model, kind: Kind, xi) -> bool:
    m = Model(model)
    return metric_length(MetricQuery(m, kind, np.zeros(m.dim), xi)) < 1


@dataclass(frozen=True)
class CurvePath:
    position: Callable
    velocity: Callable
    model: Model


def curve_length(path: CurvePath, kind: Kind, n_steps: int = 1000) -> float:
    """Composite trapezoid integral of the metric length along a path."""
    m = Model(path.model)
    t = np.linspace(0.0, 1.0, n_steps + 1)
    vals = np.empty(t.size)
    for i, ti in enumerate(t):
        p = np.atleast_1d(np.asarray(path.position(ti), dtype=complex)).ravel()[:m.dim]
        v = np.atleast_1d(np.asarray(path.velocity(ti), dtype=complex)).ravel()[:m.dim]
        vals[i] = metric_length(MetricQuery(m, kind, p, v))
    return float(np.trapezoid(vals, t))


@dataclass(frozen=True)
class HolomorphicMap:
    """A holomorphic map between two model domains."""

    func: Callable
    source: Model
    target: Model
    name: str = ""
    biholomorphic: bool = False
    jacobian: Callable | None = None

    def __call__(self, z):
        return np.atleast_1d(np.asarray(self.func(np.asarray(z, dtype=complex)),
                                        dtype=complex)).ravel()

    def jac(self, z) -> np.ndarray:
        if self.jacobian is not None:
            return np.asarray(self.jacobian(z), dtype=complex).reshape(
                self.target.dim, self.source.dim)
        return jacobian_c(self.func, z).matrix

    def then(self, other: "HolomorphicMap") -> "HolomorphicMap":
        """``other o self``."""
        if other.source is not self.target:
            raise ValueError("maps do not compose")
        jac = None
        if self.jacobian is not None and other.jacobian is not None:
            def jac(z):
                return other.jac(self(z)) @ self.jac(z)
        return HolomorphicMap(lambda z: other(self(z)), self.source, other.target,
                              f"{other.name}o{self.name}",
                              self.biholomorphic and other.biholomorphic, jac)


def projection(i: int) -> HolomorphicMap:
    e = np.zeros((1, 2))
    e[0, i] = 1
    return HolomorphicMap(lambda z: z[..., i], Model.UNIT_BIDISC, Model.UNIT_DISC,
                          f"pi{i + 1}", False, lambda z: e)


def inclusion() -> HolomorphicMap:
    return HolomorphicMap(lambda z: np.array([np.ravel(z)[0], 0j]), Model.UNIT_DISC,
                          Model.UNIT_BIDISC, "iota", False, lambda z: np.array([[1], [0]]))


def contraction(c: complex, model: Model) -> HolomorphicMap:
    if not abs(c) < 1:
        raise ValueError("contraction factor must satisfy |c| < 1")
    n = Model(model).dim
    return HolomorphicMap(lambda z: c * np.asarray(z), model, model, f"x{c}", False,
                          lambda z: c * np.eye(n))


def constant(value, source: Model, target: Model) -> HolomorphicMap:
    v = np.atleast_1d(np.asarray(value, dtype=complex))
    return HolomorphicMap(lambda z: v, source, target, "const", False,
                          lambda z: np.zeros((Model(target).dim, Model(source).dim)))


def bidisc_automorphism_map(a: BidiscAutomorphism) -> HolomorphicMap:
    return HolomorphicMap(a, Model.UNIT_BIDISC, Model.UNIT_BIDISC, "psi", True, a.jacobian)


@dataclass(frozen=True)
class DistanceCheck:
    lhs: float
    rhs: float
    ok: bool
    equality: bool | None = None


def distance_decreasing_check(f: HolomorphicMap, source: MetricQuery,
                              samples: int = 64, seed: int = 0) -> DistanceCheck:
    """Compare ``F(P, xi)`` with ``F(f(P), Jac f(P) xi)``.

    ``equality`` is filled in for maps flagged biholomorphic, which must
    preserve the metric exactly.
    """
    if source.model is not f.source:
        raise ValueError("query model differs from the map's source")
    rng = np.random.default_rng(seed)
    imgs = np.array([f(z) for z in f.source.random_points(rng, samples)])
    if not np.all(f.target.contains(imgs)):
        raise MapLeavesTarget("sampled image leaves the target domain")
    image = f(source.base)
    if not f.target.contains(image)[0]:
        raise MapLeavesTarget("f(P) is outside the target domain")
    lhs = metric_length(source)
    pushed = f.jac(source.base) @ source.tangent
    rhs = metric_length(MetricQuery(f.target, source.kind, image, pushed))
    eq = abs(lhs - rhs) <= EQ_TOL if f.biholomorphic else None
    return DistanceCheck(lhs, rhs, lhs >= rhs - EQ_TOL, eq)


def caratheodory_lower_bound(model: Model, P, xi, candidates: Sequence[Callable],
                             samples: int = 256, seed: int = 0) -> float:
    """``max |grad f(P) . xi|`` over candidate maps into the disc with ``f(P) = 0``.

    Each candidate is spot-checked on random points of the model; the
    result is a lower bound for the Caratheodory length.
    """
    m = Model(model)
    P = _vec(P, m.dim)
    xi = _vec(xi, m.dim)
    if not m.contains(P)[0]:
        raise PointOutsideDomain(f"{P} is not inside the {m.value}")
    rng = np.random.default_rng(seed)
    pts = m.random_points(rng, samples, scale=0.999)
    best = 0.0
    for f in candidates:
        if abs(complex(np.ravel(f(P))[0])) > 1e-12:
            raise CandidateNotAdmissible("candidate does not send P to 0")
        vals = np.array([complex(np.ravel(f(z))[0]) for z in pts])
        if np.any(np.abs(vals) >= 1):
            raise CandidateNotAdmissible("candidate leaves the unit disc")
        row = jacobian_c(f, P).matrix.reshape(-1)
        best = max(best, float(abs(row @ xi)))
    return best


def inner_product_functional(eta) -> Callable:
    """``z -> z . eta`` (bilinear), a disc-valued map on the ball when ``|eta| = 1``."""
    eta = np.asarray(eta, dtype=complex)
    return lambda z: np.asarray(z) @ eta
