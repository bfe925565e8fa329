"""Truncated polynomial algebras: evaluation, composition, characters, pullbacks.

Coefficients are plain Python numbers, so integer (or Gaussian-integer)
inputs stay exact and floating inputs round as usual.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DegreeOverflow

MAX_DEGREE = 64
HOM_TOL = 1e-10


def _trim(coeffs) -> tuple:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (0,)


class Poly:
    """Polynomial ``sum_k coeffs[k] z^k`` of degree at most ``degree_bound``."""

    __slots__ = ("coeffs", "degree_bound")

    def __init__(self, coeffs: Sequence = (0,), degree_bound: int = MAX_DEGREE):
        if not 1 <= degree_bound <= MAX_DEGREE:
            raise ValueError(f"degree_bound must lie in 1..{MAX_DEGREE}")
        c = _trim(coeffs)
        if len(c) - 1 > degree_bound:
            raise DegreeOverflow(f"degree {len(c) - 1} exceeds bound {degree_bound}")
        self.coeffs = c
        self.degree_bound = degree_bound

    @classmethod
    def z(cls, degree_bound: int = MAX_DEGREE) -> "Poly":
        return cls((0, 1), degree_bound)

    @classmethod
    def const(cls, c, degree_bound: int = MAX_DEGREE) -> "Poly":
        return cls((c,), degree_bound)

    @property
    def degree(self) -> int:
        # the zero polynomial reports degree 0
        return len(self.coeffs) - 1

    def _cap(self, other: "Poly") -> int:
        return min(self.degree_bound, other.degree_bound)

    def _lift(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly((other,), self.degree_bound)

    def __add__(self, other) -> "Poly":
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = o.coeffs + (0,) * (n - len(o.coeffs))
        return Poly([x + y for x, y in zip(a, b)], self._cap(o))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-x for x in self.coeffs], self.degree_bound)

    def __sub__(self, other) -> "Poly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Poly":
        return self._lift(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly([other * x for x in self.coeffs], self.degree_bound)
        cap = self._cap(other)
        if self.is_zero() or other.is_zero():
            return Poly((0,), cap)
        if self.degree + other.degree > cap:
            raise DegreeOverflow(f"product degree {self.degree + other.degree} exceeds {cap}")
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out, cap)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"

    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def conj(self) -> "Poly":
        return Poly([complex(x).conjugate() if isinstance(x, complex) else x
                     for x in self.coeffs], self.degree_bound)

    def __call__(self, c):
        return evaluate(self, c)


def evaluate(p: Poly, c):
    """Horner evaluation of ``p`` at ``c``."""
    acc = 0
    for a in reversed(p.coeffs):
        acc = acc * c + a
    return acc


def compose(f: Poly, h: Poly, cap: int | None = None) -> Poly:
    """Coefficients of ``f o h``."""
    cap = min(f.degree_bound, h.degree_bound) if cap is None else cap
    if not h.is_zero() and f.degree * h.degree > cap:
        raise DegreeOverflow(f"deg f * deg h = {f.degree * h.degree} exceeds {cap}")
    out = Poly((f.coeffs[-1],), cap)
    hh = Poly(h.coeffs, cap)
    for a in reversed(f.coeffs[:-1]):
        out = out * hh + a
    return out


def divide_at_point(g: Poly, c) -> tuple:
    """Synthetic division ``g(z) = g(c) + (z - c) * gtilde(z)``."""
    if g.degree == 0:
        return g.coeffs[0], Poly((0,), g.degree_bound)
    q = []
    acc = 0
    for a in reversed(g.coeffs):
        acc = acc * c + a
        q.append(acc)
    value = q.pop()
    return value, Poly(list(reversed(q)), g.degree_bound)


def coefficient_defect(p: Poly, q: Poly) -> float:
    """Max modulus of the coefficient difference."""
    return max(abs(x) for x in (p - q).coeffs)


@dataclass(frozen=True)
class CharacterTable:
    """Images ``phi(z^k)`` of the monomials, ``k = 0..N``."""

    images: tuple

    def __post_init__(self):
        im = tuple(self.images)
        if len(im) < 2:
            raise ValueError("need images of at least 1 and z")
        if im[0] != 1:
            raise ValueError("a character sends 1 to 1")
        object.__setattr__(self, "images", im)

    @classmethod
    def of_evaluation(cls, c, n: int) -> "CharacterTable":
        return cls(tuple(c ** k for k in range(n + 1)))


def character_point(t: CharacterTable, rtol: float = HOM_TOL) -> tuple:
    """``(c, consistent, max_defect)`` with ``c = phi(z)``.

    ``consistent`` holds when every image equals ``c^k`` to relative
    tolerance; ``max_defect`` is the largest absolute gap.
    """
    c = t.images[1]
    worst, ok = 0.0, True
    for k, v in enumerate(t.images):
        ck = c ** k
        d = abs(v - ck)
        worst = max(worst, d)
        ok &= d <= rtol * max(1.0, abs(ck))
    return c, bool(ok), float(worst)


@dataclass(frozen=True)
class AlgebraHom:
    """``f -> f o h``, with compositions capped at degree ``cap``."""

    h: Poly
    cap: int = MAX_DEGREE

    def __call__(self, f: Poly) -> Poly:
        return pullback(self, f)


def hom_from_map(h: Poly, cap: int = MAX_DEGREE) -> AlgebraHom:
    return AlgebraHom(h, cap)


def pullback(hom: AlgebraHom, f: Poly) -> Poly:
    return compose(f, hom.h, hom.cap)


@dataclass
class AuditReport:
    additive_defect: float
    multiplicative_defect: float
    unital_defect: float
    scalar_defect: float
    recovered_h: Poly
    composition_defect: float | None

    @property
    def is_homomorphism(self) -> bool:
        return max(self.additive_defect, self.multiplicative_defect,
                   self.unital_defect, self.scalar_defect) < HOM_TOL

    def as_dict(self) -> dict:
        def enc(x):
            x = complex(x)
            return [x.real, x.imag]

        return {"additive_defect": self.additive_defect,
                "multiplicative_defect": self.multiplicative_defect,
                "unital_defect": self.unital_defect,
                "scalar_defect": self.scalar_defect,
                "recovered_h": [enc(c) for c in self.recovered_h.coeffs],
                "composition_defect": self.composition_defect,
                "is_homomorphism": self.is_homomorphism}


def _defect(diff: Poly) -> float:
    return float(max(abs(x) for x in diff.coeffs))


def random_poly(rng: random.Random, degree: int, bound: int = 1,
                degree_bound: int = MAX_DEGREE) -> Poly:
    """Gaussian-integer coefficients with parts in ``[-bound, bound]``."""
    return Poly([complex(rng.randint(-bound, bound), rng.randint(-bound, bound))
                 for _ in range(degree + 1)], degree_bound)


def morphism_audit(phi: Callable[[Poly], Poly], trials: int, seed: int,
                   degree: int = 4) -> AuditReport:
    """Test the homomorphism laws of a black-box map ``phi`` on random polynomials.

    Defects are maxima of absolute coefficient gaps.  Scalar linearity is probed with the
    monomials up to ``degree`` against ``i`` and random unit scalars.
    When every law holds to ``1e-10`` the map is compared with the
    pullback by ``recovered_h = phi(z)``.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    one = Poly.const(1)
    recovered = phi(Poly.z())
    unital = _defect(phi(one) - one)
    add = mul = 0.0
    pairs = []
    for _ in range(trials):
        f = random_poly(rng, rng.randint(0, degree))
        g = random_poly(rng, rng.randint(0, degree))
        pf, pg = phi(f), phi(g)
        add = max(add, _defect(phi(f + g) - pf - pg))
        mul = max(mul, _defect(phi(f * g) - pf * pg))
        pairs.append((f, pf))
    scalars = [1j] + [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(trials)]
    scalars = [1j] + [c / abs(c) for c in scalars[1:] if c != 0]
    scal = 0.0
    for k in range(degree + 1):
        mono = Poly([0] * k + [1])
        pm = phi(mono)
        for c in scalars:
            scal = max(scal, _defect(phi(mono * c) - pm * c))
    report = AuditReport(add, mul, unital, scal, recovered, None)
    if report.is_homomorphism:
        hom = hom_from_map(recovered)
        report.composition_defect = max(
            _defect(pf - pullback(hom, f)) for f, pf in pairs)
    return report
