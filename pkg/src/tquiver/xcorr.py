"""The pre-correspondence ``C_c(E^1)`` of a discrete weighted quiver.

Scalars are Gaussian rationals.  Weights ``lambda(e)`` are the atoms of the
measure on ``r^{-1}(r(e))``, so every formula is a finite exact sum.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .quiver import DiscreteQuiver, QuiverError, Unsupported, classify, compact_left_mult
from .ratspace import rat


class InfiniteFiberTouched(QuiverError):
    """A support meets an edge class of infinite multiplicity."""


@dataclass(frozen=True)
class GaussRat:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", rat(self.re))
        object.__setattr__(self, "im", rat(self.im))

    @classmethod
    def of(cls, z) -> "GaussRat":
        if isinstance(z, GaussRat):
            return z
        if isinstance(z, complex):
            return cls(Fraction(z.real), Fraction(z.imag))
        return cls(rat(z))

    def __add__(self, o):
        o = GaussRat.of(o)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussRat.of(o))

    def __mul__(self, o):
        o = GaussRat.of(o)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def __bool__(self):
        return bool(self.re or self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussRat()


def _clean(values: Mapping) -> dict:
    out = {}
    for k, z in values.items():
        z = GaussRat.of(z)
        if z:
            out[k] = z
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class EdgeFunction:
    quiver: DiscreteQuiver = field(compare=False)
    values: dict

    def __post_init__(self):
        object.__setattr__(self, "values", _clean(self.values))
        known = {e.name for e in self.quiver.edges} | {f"{a}=>{b}" for a, b in self.quiver.inf_edges}
        for k in self.values:
            if k not in known:
                raise QuiverError(f"unknown edge {k!r}")

    def __call__(self, e: str) -> GaussRat:
        return self.values.get(e, ZERO)

    def __hash__(self):
        return hash(tuple(self.values.items()))

    @classmethod
    def delta(cls, q, e: str) -> "EdgeFunction":
        return cls(q, {e: 1})


@dataclass(frozen=True)
class VertexFunction:
    quiver: DiscreteQuiver = field(compare=False)
    values: dict

    def __post_init__(self):
        object.__setattr__(self, "values", _clean(self.values))
        for k in self.values:
            if k not in self.quiver.vertices:
                raise QuiverError(f"unknown vertex {k!r}")

    def __call__(self, v: str) -> GaussRat:
        return self.values.get(v, ZERO)

    def __hash__(self):
        return hash(tuple(self.values.items()))

    @classmethod
    def delta(cls, q, v: str) -> "VertexFunction":
        return cls(q, {v: 1})

    def conj(self) -> "VertexFunction":
        return VertexFunction(self.quiver, {k: z.conj() for k, z in self.values.items()})

    def __mul__(self, o: "VertexFunction") -> "VertexFunction":
        return VertexFunction(self.quiver, {k: z * o(k) for k, z in self.values.items()})


def _require(q):
    if not isinstance(q, DiscreteQuiver):
        raise Unsupported("the correspondence is computed for discrete quivers only")


def _touch_check(*fs):
    for f in fs:
        for k in f.values:
            if "=>" in k:
                raise InfiniteFiberTouched(f"support meets infinite class {k}")


def inner_product(xi: EdgeFunction, eta: EdgeFunction) -> VertexFunction:
    q = xi.quiver
    _require(q)
    _touch_check(xi, eta)
    acc: dict = {}
    for e in q.edges:
        a, b = xi(e.name), eta(e.name)
        if a and b:
            acc[e.rng] = acc.get(e.rng, ZERO) + a.conj() * b * e.weight
    return VertexFunction(q, acc)


def left_action(f: VertexFunction, xi: EdgeFunction) -> EdgeFunction:
    q = xi.quiver
    _touch_check(xi)
    src = {e.name: e.src for e in q.edges}
    return EdgeFunction(q, {k: f(src[k]) * z for k, z in xi.values.items()})


def right_action(xi: EdgeFunction, f: VertexFunction) -> EdgeFunction:
    q = xi.quiver
    _touch_check(xi)
    rng = {e.name: e.rng for e in q.edges}
    return EdgeFunction(q, {k: z * f(rng[k]) for k, z in xi.values.items()})


# -- axiom suite --------------------------------------------------------------------------

@dataclass
class AxiomReport:
    samples: int
    checks: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def lines(self) -> list[str]:
        out = [f"{name}: {'PASS' if n == 0 else f'FAIL ({n})'}" for name, n in sorted(self.checks.items())]
        out += [f"  counterexample: {c}" for c in self.counterexamples[:10]]
        return out


def _rand_scalar(rng: random.Random) -> GaussRat:
    re = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    im = Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if rng.random() < 0.5 else Fraction(0)
    return GaussRat(re, im)


def _rand_edge_fn(q, rng) -> EdgeFunction:
    names = [e.name for e in q.edges]
    k = rng.randint(0, len(names))
    return EdgeFunction(q, {n: _rand_scalar(rng) for n in rng.sample(names, k)})


def _rand_vertex_fn(q, rng) -> VertexFunction:
    return VertexFunction(q, {v: _rand_scalar(rng) for v in q.vertices if rng.random() < 0.6})


def _fmt(f) -> str:
    return "{" + ", ".join(f"{k}: {z}" for k, z in f.values.items()) + "}"


def check_correspondence_axioms(q: DiscreteQuiver, samples: int = 1000, seed: int = 0) -> AxiomReport:
    """Check the inner-product axioms exactly on deltas and random functions."""
    _require(q)
    rng = random.Random(seed)
    rep = AxiomReport(samples)
    names = ("conjugate symmetry", "right linearity", "positivity", "definiteness", "adjointability")
    rep.checks = {n: 0 for n in names}

    def fail(name, msg):
        rep.checks[name] += 1
        if len(rep.counterexamples) < 50:
            rep.counterexamples.append(f"{name}: {msg}")

    def positivity(xi):
        ip = inner_product(xi, xi)
        for v, z in ip.values.items():
            if not z.is_real or z.re < 0:
                fail("positivity", f"<xi,xi>({v}) = {z} for xi = {_fmt(xi)}")
                return
        if xi.values and not ip.values:
            fail("definiteness", f"<xi,xi> = 0 for xi = {_fmt(xi)}")

    if not q.edges:
        return rep
    for e in q.edges:
        positivity(EdgeFunction.delta(q, e.name))
    for _ in range(samples):
        xi, eta = _rand_edge_fn(q, rng), _rand_edge_fn(q, rng)
        a = _rand_vertex_fn(q, rng)
        ab, ba = inner_product(xi, eta), inner_product(eta, xi)
        if ab != ba.conj():
            fail("conjugate symmetry", f"xi = {_fmt(xi)}, eta = {_fmt(eta)}")
        if inner_product(xi, right_action(eta, a)) != ab * a:
            fail("right linearity", f"xi = {_fmt(xi)}, eta = {_fmt(eta)}, a = {_fmt(a)}")
        positivity(xi)
        if inner_product(left_action(a, xi), eta) != inner_product(xi, left_action(a.conj(), eta)):
            fail("adjointability", f"xi = {_fmt(xi)}, eta = {_fmt(eta)}, f = {_fmt(a)}")
    return rep


def left_mult_is_compact(q: DiscreteQuiver, v: str) -> bool:
    """Compactness of left multiplication by the point mass at ``v``."""
    return compact_left_mult(q, q.vertex_set([v]))


def compact_agrees_with_fin(q: DiscreteQuiver) -> list[str]:
    """Vertices where compact left multiplication and finite emission disagree."""
    fin = set(q.names_of(classify(q).fin))
    return [v for v in q.vertices if left_mult_is_compact(q, v) != (v in fin)]


__all__ = [
    "AxiomReport",
    "EdgeFunction",
    "GaussRat",
    "InfiniteFiberTouched",
    "VertexFunction",
    "check_correspondence_axioms",
    "compact_agrees_with_fin",
    "inner_product",
    "left_action",
    "left_mult_is_compact",
    "right_action",
]
