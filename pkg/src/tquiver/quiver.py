"""Quiver data model, axiom validation and vertex classification.

Two concrete kinds are supported:

* :class:`DiscreteQuiver` -- finitely many named vertices, explicit weighted
  edges, symbolic infinite-multiplicity edge classes, and optionally tail
  families (an infinite chain ``w -> w~#1 -> w~#2 -> ...``) plus a point at
  infinity compactifying them.
* :class:`PLQuiver` -- vertex and edge spaces are compact rational
  1-complexes, ``r`` and ``s`` are PL maps.

:class:`TailedQuiver` wraps a PL quiver with tails added along its sinks;
its tail levels are handled by closed-form rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .ratspace import (
    ALL_TAIL,
    INFINITE,
    OneComplex,
    PLMap,
    SubSet,
    discrete_space,
    fmt_point,
    rat,
)


class QuiverError(ValueError):
    """Structurally malformed quiver input."""


class Unsupported(ValueError):
    """The requested analysis is outside what is decided for this input."""


# -- discrete --------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Edge:
    name: str
    src: str
    rng: str
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "weight", rat(self.weight))


def tail_name(base: str) -> str:
    return f"{base}~"


class DiscreteQuiver:
    """Directed multigraph with weights, infinite classes and tails.

    Edges run from ``src`` to ``rng``: ``s(e) = src`` and ``r(e) = rng``.
    Weights are the atoms of ``lambda_{rng}``; they are validated, not
    enforced, so that broken inputs can be reported.
    """

    kind = "discrete"

    def __init__(
        self,
        vertices: Iterable[str],
        edges: Iterable[Edge] = (),
        inf_edges: Iterable[tuple[str, str]] = (),
        tails: Iterable[str] = (),
        infinity: bool = False,
    ):
        self.vertices = tuple(vertices)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise QuiverError("duplicate vertex names")
        for v in self.vertices:
            if not v or any(ch in v for ch in " \t#{}[](),~") or v == "inf":
                raise QuiverError(f"bad vertex name {v!r}")
        self.edges = tuple(sorted(edges, key=lambda e: e.name))
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate edge names")
        for e in self.edges:
            if e.src not in vset or e.rng not in vset:
                raise QuiverError(f"edge {e.name} references an unknown vertex")
        self.inf_edges = tuple(sorted(set(tuple(p) for p in inf_edges)))
        for a, b in self.inf_edges:
            if a not in vset or b not in vset:
                raise QuiverError(f"infinite edge class {a}->{b} references an unknown vertex")
        self.tails = tuple(sorted(set(tails)))
        for w in self.tails:
            if w not in vset:
                raise QuiverError(f"tail attached at unknown vertex {w!r}")
        if infinity and not self.tails:
            raise QuiverError("a point at infinity needs tail families to compactify")
        self.infinity = bool(infinity)

    @classmethod
    def from_multiplicities(cls, vertices: Iterable[str], mult: dict) -> "DiscreteQuiver":
        """Build from ``{(v, w): k}`` with ``k`` an int or ``INFINITE``."""
        edges, inf = [], []
        for (v, w), k in sorted(mult.items()):
            if k == INFINITE:
                inf.append((v, w))
                continue
            for i in range(int(k)):
                edges.append(Edge(f"{v}_{w}_{i}", v, w))
        return cls(vertices, edges, inf)

    # -- identity --------------------------------------------------------
    def _key(self):
        return (tuple(sorted(self.vertices)), self.edges, self.inf_edges, self.tails, self.infinity)

    def __eq__(self, other):
        return isinstance(other, DiscreteQuiver) and self._key() == other._key()

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash(self._key())

    def __repr__(self):
        return (
            f"DiscreteQuiver({len(self.vertices)} vertices, {len(self.edges)} edges,"
            f" {len(self.inf_edges)} infinite classes, tails={list(self.tails)}, inf={self.infinity})"
        )

    # -- structure -------------------------------------------------------
    @cached_property
    def vertex_space(self) -> OneComplex:
        return discrete_space(self.vertices, [tail_name(w) for w in self.tails], self.infinity)

    @property
    def is_finite(self) -> bool:
        return not self.tails

    def multiplicity(self, v: str, w: str) -> int | float:
        if (v, w) in self.inf_edges:
            return INFINITE
        return sum(1 for e in self.edges if e.src == v and e.rng == w)

    @cached_property
    def out_degree(self) -> dict:
        deg = {v: 0 for v in self.vertices}
        for e in self.edges:
            deg[e.src] += 1
        for w in self.tails:
            deg[w] += 1
        for a, _ in self.inf_edges:
            deg[a] = INFINITE
        return deg

    def successors(self, v: str) -> set:
        out = {e.rng for e in self.edges if e.src == v}
        out.update(b for a, b in self.inf_edges if a == v)
        return out

    def vertex_set(self, names: Iterable[str] = (), tails: dict | None = None, inf: bool = False) -> SubSet:
        return SubSet.build(self.vertex_space, cells=list(names), tails=tails, inf=inf)

    def names_of(self, S: SubSet) -> list[str]:
        """Finite vertex names in ``S`` (tail members excluded)."""
        return sorted(S.isolated_names())

    def edges_by_range(self) -> dict:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.rng].append(e)
        return out

    def with_weights(self, weights: dict) -> "DiscreteQuiver":
        edges = [Edge(e.name, e.src, e.rng, weights.get(e.name, e.weight)) for e in self.edges]
        return DiscreteQuiver(self.vertices, edges, self.inf_edges, self.tails, self.infinity)

    def replace(self, **kw) -> "DiscreteQuiver":
        args = dict(vertices=self.vertices, edges=self.edges, inf_edges=self.inf_edges, tails=self.tails, infinity=self.infinity)
        args.update(kw)
        return DiscreteQuiver(**args)

    def as_pl(self) -> "PLQuiver":
        """The same finite graph as a PL quiver on isolated points."""
        if self.inf_edges or self.tails:
            raise Unsupported("only finite graphs without infinite classes embed as PL quivers")
        E0 = discrete_space(self.vertices)
        E1 = discrete_space([e.name for e in self.edges])
        r = PLMap.affine(E1, E0, {e.name: (0, 0, e.rng) for e in self.edges})
        s = PLMap.affine(E1, E0, {e.name: (0, 0, e.src) for e in self.edges})
        return PLQuiver(E0, E1, r, s)


# -- piecewise linear --------------------------------------------------------

class PLQuiver:
    """Quiver with compact 1-complex vertex and edge spaces.

    The measures ``lambda_v`` are not stored: every structural criterion
    depends on them only through ``supp lambda_v = r^{-1}(v)``.
    """

    kind = "pl"

    def __init__(self, vertex_space: OneComplex, edge_space: OneComplex, r: PLMap, s: PLMap):
        if vertex_space.tails or vertex_space.infinity:
            raise QuiverError("PL vertex spaces are compact complexes without tails")
        for name, m in (("r", r), ("s", s)):
            if m.domain != edge_space or m.codomain != vertex_space:
                raise QuiverError(f"{name} must map the edge space to the vertex space")
        self.vertex_space = vertex_space
        self.edge_space = edge_space
        self.r = r
        self.s = s

    def _key(self):
        return (self.vertex_space, self.edge_space, self.r, self.s)

    def __eq__(self, other):
        return isinstance(other, PLQuiver) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"PLQuiver(E0={self.vertex_space!r}, E1={self.edge_space!r})"

    @property
    def is_discrete(self) -> bool:
        return self.vertex_space.is_discrete and self.edge_space.is_discrete

    def as_discrete(self) -> DiscreteQuiver:
        """Reinterpret a PL quiver on isolated points as a finite graph."""
        if not self.is_discrete:
            raise Unsupported("PL quiver has non-degenerate cells")
        edges = []
        for c in self.edge_space.cells:
            src = self.s(("c", c.name, c.lo))[1]
            rng = self.r(("c", c.name, c.lo))[1]
            edges.append(Edge(c.name, src, rng))
        return DiscreteQuiver([c.name for c in self.vertex_space.cells], edges)

    @cached_property
    def local_homeo_region(self) -> SubSet:
        return self.r.local_homeo_region()


class TailedQuiver:
    """A PL quiver with tails ``V_1, V_2, ...`` added along its sinks ``V_0``.

    Each level ``V_i`` is a copy of the (open) sink set; level edges run
    ``V_{i-1} -> V_i`` pointwise with unit point masses.  Sets on the tails
    are described level-uniformly, which is all the classification needs.
    """

    kind = "tailed"

    def __init__(self, base: PLQuiver, infinity: bool = False):
        self.base = base
        self.infinity = bool(infinity)

    @cached_property
    def tail_base(self) -> SubSet:
        return _classify_pl(self.base).sinks

    @property
    def has_tails(self) -> bool:
        return not self.tail_base.is_empty

    @property
    def vertex_space(self) -> OneComplex:
        return self.base.vertex_space

    def _key(self):
        return (self.base, self.infinity)

    def __eq__(self, other):
        return isinstance(other, TailedQuiver) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"TailedQuiver({self.base!r}, inf={self.infinity})"


@dataclass(frozen=True)
class TailedSet:
    """Subset of a tailed vertex space: base part, uniform level part, infinity."""

    base: SubSet
    level: SubSet
    inf: bool = False

    def __str__(self):
        parts = [str(self.base), f"levels: {self.level}"]
        if self.inf:
            parts.append("inf")
        return " ; ".join(parts)

    @property
    def is_empty(self) -> bool:
        return self.base.is_empty and self.level.is_empty and not self.inf

    def issubset(self, other: "TailedSet") -> bool:
        return self.base <= other.base and self.level <= other.level and (not self.inf or other.inf)

    def without_inf(self) -> "TailedSet":
        return TailedSet(self.base, self.level, False)


# -- classification ------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    sinks: object
    fin: object
    reg: object

    def as_dict(self) -> dict:
        return {"sinks": str(self.sinks), "fin": str(self.fin), "reg": str(self.reg)}


def _check_classification(c: Classification) -> Classification:
    if isinstance(c.reg, SubSet):
        assert c.sinks.is_open() and c.fin.is_open() and c.reg.is_open(), "classes must be open"
        assert c.reg <= c.fin, "reg must lie in fin"
        assert (c.reg & c.sinks.closure()).is_empty, "reg meets the closure of the sinks"
    return c


def _classify_discrete(q: DiscreteQuiver) -> Classification:
    X = q.vertex_space
    deg = q.out_degree
    sinks = [v for v in q.vertices if deg[v] == 0]
    fin = [v for v in q.vertices if deg[v] != INFINITE]
    reg = [v for v in fin if deg[v] != 0]
    tails = {tail_name(w): ALL_TAIL for w in q.tails}
    # tail members emit exactly one edge; infinity emits nothing but is a
    # limit of emitters, so it is neither a sink nor a finite emitter
    return Classification(
        SubSet.build(X, cells=sinks),
        SubSet.build(X, cells=fin, tails=tails),
        SubSet.build(X, cells=reg, tails=tails),
    )


def _classify_pl(q: PLQuiver) -> Classification:
    full1 = SubSet.full(q.edge_space)
    sinks = q.s.image(full1).closure().complement()
    bad = q.local_homeo_region.complement()
    # the edge space is compact, so v is a finite emitter iff some
    # neighbourhood V has s^{-1}(V) inside the local homeomorphism region
    fin = q.s.image(bad).closure().complement()
    reg = fin.minus(sinks.closure())
    return Classification(sinks, fin, reg)


def _classify_tailed(q: TailedQuiver) -> Classification:
    base = _classify_pl(q.base)
    v0 = base.sinks
    empty = SubSet.empty(q.vertex_space)
    fin_base = v0 | base.fin.minus(v0.closure())
    fin = TailedSet(fin_base, v0, False)
    # no sinks remain, so reg coincides with fin
    return Classification(TailedSet(empty, empty, False), fin, fin)


_CACHE: dict = {}


def classify(q) -> Classification:
    key = (type(q).__name__, q)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    if isinstance(q, DiscreteQuiver):
        c = _classify_discrete(q)
    elif isinstance(q, PLQuiver):
        c = _classify_pl(q)
    elif isinstance(q, TailedQuiver):
        c = _classify_tailed(q)
    else:
        raise TypeError(f"not a quiver: {q!r}")
    c = _check_classification(c)
    if len(_CACHE) > 4096:
        _CACHE.clear()
    _CACHE[key] = c
    return c


def sinks(q):
    return classify(q).sinks


def finite_emitters(q):
    return classify(q).fin


def regular(q):
    return classify(q).reg


# -- validation ------------------------------------------------------------------

@dataclass
class AxiomCheck:
    name: str
    ok: bool
    witness: str | None = None
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[AxiomCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.ok]

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "pass" if c.ok else "FAIL"
            extra = f" witness {c.witness}" if c.witness else ""
            detail = f" ({c.detail})" if c.detail else ""
            out.append(f"{c.name}: {status}{extra}{detail}")
        return out


def validate(q) -> ValidationReport:
    rep = ValidationReport()
    if isinstance(q, DiscreteQuiver):
        bad = [e for e in q.edges if e.weight <= 0]
        rep.checks.append(
            AxiomCheck(
                "support of lambda_v equals r^-1(v)",
                not bad,
                bad[0].name if bad else None,
                f"weight {bad[0].weight} on edge {bad[0].name}" if bad else "all edge weights positive",
            )
        )
        rep.checks.append(AxiomCheck("r continuous and open", True, detail="discrete edge space"))
        rep.checks.append(AxiomCheck("s continuous", True, detail="discrete edge space"))
        return rep
    base = q.base if isinstance(q, TailedQuiver) else q
    if not isinstance(base, PLQuiver):
        raise TypeError(f"not a quiver: {q!r}")
    for name, m in (("r", base.r), ("s", base.s)):
        gaps = m.continuity_failures()
        rep.checks.append(
            AxiomCheck(f"{name} continuous", not gaps, fmt_point(gaps[0]) if gaps else None)
        )
    ok, w = base.r.is_open_map()
    rep.checks.append(AxiomCheck("r continuous and open", ok, fmt_point(w) if w else None))
    rep.checks.append(
        AxiomCheck("support of lambda_v equals r^-1(v)", True, detail="measures enter only through their support")
    )
    if isinstance(q, TailedQuiver):
        rep.checks.append(AxiomCheck("tail levels", True, detail="point masses along copies of the sinks"))
        if q.infinity:
            rep.checks.append(AxiomCheck("lambda at infinity", True, detail="r^-1(inf) is empty, zero measure is compliant"))
    return rep


# -- compactness of left multiplication -------------------------------------

def compact_left_mult(q, support: SubSet) -> bool:
    """Whether left multiplication by a function with open support ``support`` is compact.

    True iff ``s^{-1}(support)`` is precompact and lies in the region where
    ``r`` is a local homeomorphism.  Precompact on a presented space means a
    finite intersection with every tail family and with infinite classes.
    """
    if isinstance(q, DiscreteQuiver):
        if support.space != q.vertex_space:
            raise ValueError("support must be a subset of the vertex space")
        names = set(support.isolated_names())
        if any(a in names for a, _ in q.inf_edges):
            return False
        for w in q.tails:
            if support.tail(tail_name(w)).infinite:
                return False
        if support.inf:
            return False
        # discrete edges are open points, r is a local homeomorphism on them
        return True
    if isinstance(q, PLQuiver):
        pre = q.s.preimage(support)
        return pre <= q.local_homeo_region
    raise Unsupported("compactness test is implemented for discrete and PL quivers")


__all__ = [
    "AxiomCheck",
    "Classification",
    "DiscreteQuiver",
    "Edge",
    "PLQuiver",
    "QuiverError",
    "TailedQuiver",
    "TailedSet",
    "Unsupported",
    "ValidationReport",
    "classify",
    "compact_left_mult",
    "finite_emitters",
    "regular",
    "sinks",
    "tail_name",
    "validate",
]
