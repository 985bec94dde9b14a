"""Hereditary and saturated sets, quotient and relative quivers, admissible pairs.

Gauge-invariant ideals are named by their admissible pairs ``(U, V)``; no
operator data is ever built.  Discrete quivers are decided exactly through
the bitmask engine.  PL quivers use bounded fixpoint iteration with exact
stabilisation detection and report :class:`Bounded` results whose value is
``None`` when the bound ran out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ._graph import INF, Graph, bits
from .quiver import (
    DiscreteQuiver,
    Edge,
    PLQuiver,
    TailedQuiver,
    Unsupported,
    classify,
    regular,
    tail_name,
)
from .ratspace import (
    ALL_TAIL,
    OneComplex,
    PLMap,
    SubSet,
    disjoint_union,
    fmt_point,
    tail_from,
)
from .ratspace.carve import Carving, carve_pieces, glue_extra

DEFAULT_BOUND = 32
MAX_BREAKS = 128  # beyond this many breakpoints an iteration is reported Unknown


class NotHereditary(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Bounded:
    """A fixpoint computed within ``bound`` iterations, or ``None``."""

    value: SubSet | None
    iterations: int
    bound: int

    @property
    def known(self) -> bool:
        return self.value is not None


def _check_space(q, U: SubSet):
    if U.space != q.vertex_space:
        raise ValueError("set does not live in the vertex space")


def _reject_tailed(q):
    """Unwrap a trivially tailed quiver; refuse real symbolic tails."""
    if isinstance(q, TailedQuiver):
        if q.has_tails or q.infinity:
            raise Unsupported("ideal analysis of PL quivers with symbolic tails is not implemented")
        return q.base
    return q


# -- discrete model --------------------------------------------------------------

class DiscreteModel:
    """Index a discrete quiver for the bitmask engine.

    Each tail family becomes a ghost vertex and the point at infinity its
    own vertex.
    """

    def __init__(self, q: DiscreteQuiver):
        self.q = q
        names = list(q.vertices)
        self.ghost_of = {}
        for w in q.tails:
            self.ghost_of[w] = len(names)
            names.append(tail_name(w))
        self.infpt = len(names) if q.infinity else -1
        if q.infinity:
            names.append("inf")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        n = len(names)
        mult = [[0] * n for _ in range(n)]
        for e in q.edges:
            mult[self.index[e.src]][self.index[e.rng]] += 1
        for a, b in q.inf_edges:
            mult[self.index[a]][self.index[b]] = INF
        for w, g in self.ghost_of.items():
            mult[self.index[w]][g] += 1
        ghosts = 0
        for g in self.ghost_of.values():
            ghosts |= 1 << g
        self.graph = Graph(mult, ghosts, self.infpt)

    def mask(self, S: SubSet, whole_tails: bool = False) -> int:
        """Collapse a vertex subset.

        A tail part sets its ghost when non-empty, or only when it is the
        whole tail if ``whole_tails`` is given.
        """
        m = 0
        for v in S.isolated_names():
            m |= 1 << self.index[v]
        for w, g in self.ghost_of.items():
            part = S.tail(tail_name(w))
            if part.full or (not whole_tails and not part.empty):
                m |= 1 << g
        if S.inf:
            m |= 1 << self.infpt
        return m

    def subset(self, m: int) -> SubSet:
        names, tails, inf = [], {}, False
        for i in bits(m):
            n = self.names[i]
            if i == self.infpt:
                inf = True
            elif i >= len(self.q.vertices):
                tails[n] = ALL_TAIL
            else:
                names.append(n)
        return SubSet.build(self.q.vertex_space, cells=names, tails=tails, inf=inf)

    def finite_names(self, m: int) -> list[str]:
        return sorted(self.names[i] for i in bits(m) if i < len(self.q.vertices))


_MODELS: dict = {}


def model(q: DiscreteQuiver) -> DiscreteModel:
    m = _MODELS.get(q)
    if m is None:
        if len(_MODELS) > 2048:
            _MODELS.clear()
        m = _MODELS[q] = DiscreteModel(q)
    return m


# -- hereditary --------------------------------------------------------------------

def _tail_upward(part) -> bool:
    if part.empty:
        return True
    if not part.cofinite:
        return False
    return part.exceptions == frozenset(range(1, part.min()))


def is_hereditary(q, U: SubSet) -> Verdict:
    """Whether ``s(a) in U`` forces ``r(a) in U``; the witness is the offending edge (region)."""
    _check_space(q, U)
    q = _reject_tailed(q)
    if isinstance(q, DiscreteQuiver):
        names = set(U.isolated_names())
        for e in q.edges:
            if e.src in names and e.rng not in names:
                return Verdict(False, e.name, f"{e.src} -> {e.rng}")
        for a, b in q.inf_edges:
            if a in names and b not in names:
                return Verdict(False, f"{a}=>{b}", "infinite class")
        for w in q.tails:
            part = U.tail(tail_name(w))
            if w in names and not part.full:
                return Verdict(False, f"{tail_name(w)}#1", f"tail edge leaves {w}")
            if not _tail_upward(part):
                if part.cofinite:
                    i = max(e - 1 for e in part.exceptions if e > 1 and part.contains(e - 1))
                else:
                    i = max(part.exceptions)
                return Verdict(False, f"{tail_name(w)}#{i + 1}", "tail edge leaves the set")
        return Verdict(True)
    bad = q.s.preimage(U).minus(q.r.preimage(U))
    if bad.is_empty:
        return Verdict(True)
    return Verdict(False, bad, "edges with source in U and range outside")


def _complexity(S: SubSet) -> int:
    return sum(len(S.breakpoints(c.name)) for c in S.space.cells)


def _her_step(q: PLQuiver, U: SubSet) -> SubSet:
    return U | q.r.image(q.s.preimage(U))


def hereditary_closure(q, U: SubSet, bound: int = DEFAULT_BOUND) -> Bounded:
    _check_space(q, U)
    q = _reject_tailed(q)
    if isinstance(q, DiscreteQuiver):
        M = model(q)
        names = set(U.isolated_names())
        m = 0
        for v in names:
            m |= 1 << M.index[v]
        m = M.graph.forward(m)
        out_names = M.finite_names(m)
        tails = {}
        for w in q.tails:
            part = U.tail(tail_name(w))
            if m >> M.ghost_of[w] & 1:
                tails[tail_name(w)] = ALL_TAIL
            elif not part.empty:
                tails[tail_name(w)] = tail_from(part.min())
        return Bounded(q.vertex_set(out_names, tails, U.inf), 1, bound)
    cur = U
    for k in range(bound + 1):
        nxt = _her_step(q, cur)
        if nxt == cur:
            return Bounded(cur, k, bound)
        if _complexity(nxt) > MAX_BREAKS:
            return Bounded(None, k, bound)
        cur = nxt
    return Bounded(None, bound, bound)


# -- saturated ---------------------------------------------------------------------

def _pl_sat_region(q: PLQuiver, U: SubSet) -> SubSet:
    """Largest open V inside reg with r(s^{-1}(V)) in U."""
    reg = regular(q)
    outside = q.s.image(q.r.preimage(U.complement()))
    return (reg - outside).interior()


def is_saturated(q, U: SubSet) -> Verdict:
    _check_space(q, U)
    q = _reject_tailed(q)
    if isinstance(q, DiscreteQuiver):
        M = model(q)
        cand = M.graph.sat_candidates(M.mask(U, whole_tails=True))
        names = M.finite_names(cand)
        if names:
            return Verdict(False, names[0], "regular vertex whose edges all land in U")
        for w in q.tails:
            part = U.tail(tail_name(w))
            if part.empty:
                continue
            # a tail member outside U whose successor lies in U
            if part.cofinite:
                if part.exceptions:
                    i = max(part.exceptions)
                    return Verdict(False, f"{tail_name(w)}#{i}", "tail member feeding into U")
            else:
                for i in sorted(part.exceptions):
                    if i > 1 and not part.contains(i - 1):
                        return Verdict(False, f"{tail_name(w)}#{i - 1}", "tail member feeding into U")
        return Verdict(True)
    bad = _pl_sat_region(q, U) - U
    if bad.is_empty:
        return Verdict(True)
    return Verdict(False, bad, "open regular region feeding only into U")


def saturation(q, U: SubSet, bound: int = DEFAULT_BOUND) -> Bounded:
    """Smallest saturated hereditary open superset of ``U``."""
    _check_space(q, U)
    q = _reject_tailed(q)
    if isinstance(q, DiscreteQuiver):
        M = model(q)
        return Bounded(M.subset(M.graph.closure(M.mask(U))), 1, bound)
    cur = U
    for k in range(bound + 1):
        nxt = _her_step(q, cur) | _pl_sat_region(q, cur)
        if nxt == cur:
            return Bounded(cur, k, bound)
        if _complexity(nxt) > MAX_BREAKS:
            return Bounded(None, k, bound)
        cur = nxt
    return Bounded(None, bound, bound)


# -- quotient quiver -----------------------------------------------------------------

@dataclass
class PLQuotient:
    quiver: PLQuiver
    vertices: Carving
    edges: Carving

    def push(self, S: SubSet) -> SubSet:
        return self.vertices.push(S)

    def pull(self, S: SubSet) -> SubSet:
        return self.vertices.pull(S)


def _require_open_hereditary(q, U):
    if not U.is_open():
        raise NotHereditary("U must be open")
    v = is_hereditary(q, U)
    if not v:
        raise NotHereditary(f"U is not hereditary (witness {v.witness})")


def pl_quotient(q: PLQuiver, U: SubSet) -> PLQuotient:
    _require_open_hereditary(q, U)
    vc = Carving(q.vertex_space, U.complement())
    ec = Carving(q.edge_space, q.r.preimage(U).complement())
    r = PLMap(ec.space, vc.space, carve_pieces(q.r, ec, vc))
    s = PLMap(ec.space, vc.space, carve_pieces(q.s, ec, vc))
    return PLQuotient(PLQuiver(vc.space, ec.space, r, s), vc, ec)


def quotient_quiver(q, U: SubSet):
    """The quiver ``Q_U`` on ``E^0 \\ U`` and ``E^1 \\ r^{-1}(U)``."""
    _check_space(q, U)
    q = _reject_tailed(q)
    if isinstance(q, PLQuiver):
        if U.is_empty:
            return q
        return pl_quotient(q, U).quiver
    _require_open_hereditary(q, U)
    names = set(U.isolated_names())
    verts = [v for v in q.vertices if v not in names]
    edges = [e for e in q.edges if e.rng not in names]
    inf_edges = [(a, b) for a, b in q.inf_edges if b not in names]
    tails, extra_edges = [], []
    for w in q.tails:
        part = U.tail(tail_name(w))
        if part.empty:
            tails.append(w)
            continue
        if part.full:
            continue
        # U meets the tail in {m, m+1, ...}; the rest is a finite chain
        prev = w
        for i in range(1, part.min()):
            v = f"{w}_t{i}"
            verts.append(v)
            extra_edges.append(Edge(f"{tail_name(w)}{i}", prev, v))
            prev = v
    infinity = q.infinity and not U.inf and bool(tails)
    if q.infinity and not U.inf and not tails:
        verts.append("oo")
    return DiscreteQuiver(verts, edges + extra_edges, inf_edges, tails, infinity)


def quotient_regular(q, U: SubSet) -> SubSet:
    """``(E^0_U)_reg`` expressed as a subset of ``E^0``."""
    _check_space(q, U)
    q = _reject_tailed(q)
    if isinstance(q, DiscreteQuiver):
        _require_open_hereditary(q, U)
        M = model(q)
        return M.subset(M.graph.quotient_reg(M.mask(U)))
    if U.is_empty:
        return regular(q)
    pq = pl_quotient(q, U)
    return pq.pull(regular(pq.quiver))


# -- relative quiver ---------------------------------------------------------------------

def copy_name(name: str) -> str:
    return f"{name}'"


def relative_quiver(q, V: SubSet):
    """The doubled quiver ``Q(V)`` along ``W = Int(E^0_reg \\ V)``."""
    _check_space(q, V)
    q = _reject_tailed(q)
    reg = regular(q)
    if not V <= reg:
        raise ValueError("V must be contained in the regular vertices")
    if not V.is_open():
        raise ValueError("V must be open")
    W = (reg - V).interior()
    if isinstance(q, DiscreteQuiver):
        if any(not W.tail(tail_name(w)).empty for w in q.tails):
            raise Unsupported("doubling along tail vertices is not implemented")
        wn = set(W.isolated_names())
        verts = list(q.vertices) + [copy_name(v) for v in q.vertices if v in wn]
        edges = list(q.edges) + [
            Edge(copy_name(e.name), e.src, copy_name(e.rng), e.weight) for e in q.edges if e.rng in wn
        ]
        inf_edges = list(q.inf_edges) + [(a, copy_name(b)) for a, b in q.inf_edges if b in wn]
        return DiscreteQuiver(verts, edges, inf_edges, q.tails, q.infinity)
    if W.is_empty:
        return q
    return _pl_relative(q, W)


def _pl_relative(q: PLQuiver, W: SubSet) -> PLQuiver:
    bdW = W.closure() - W
    rW = q.r.preimage(W)
    bdR = rW.closure() - rW
    cuts_v = _cut_table(bdW)
    cuts_e = _cut_table(bdR)
    v0 = Carving(q.vertex_space, None, cuts_v)
    v1 = Carving(q.vertex_space, W.closure(), cuts_v, tag="'")
    e0 = Carving(q.edge_space, None, cuts_e)
    e1 = Carving(q.edge_space, rW.closure(), cuts_e, tag="'")
    F0 = glue_extra(disjoint_union(v0.space, v1.space), _attach(v0, v1, bdW))
    F1 = glue_extra(disjoint_union(e0.space, e1.space), _attach(e0, e1, bdR))
    r = {**carve_pieces(q.r, e0, v0), **carve_pieces(q.r, e1, v1)}
    s = {**carve_pieces(q.s, e0, v0), **carve_pieces(q.s, e1, v0)}
    return PLQuiver(F0, F1, PLMap(F1, F0, r), PLMap(F1, F0, s))


def _cut_table(S: SubSet) -> dict:
    out: dict = {}
    for p in S.finite_points():
        for _, name, x in S.space.representations(p):
            out.setdefault(name, set()).add(x)
    return out


def _attach(c0: Carving, c1: Carving, points: SubSet) -> list:
    groups = []
    for p in points.finite_points():
        refs = c0.refs_at(p) + c1.refs_at(p)
        if len(refs) > 1:
            groups.append(refs)
    return groups


# -- admissible pairs ------------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissiblePair:
    U: SubSet
    V: SubSet

    def __str__(self):
        return f"(U = {self.U}, V = {self.V})"

    def key(self):
        return (str(self.U), str(self.V))


@dataclass
class IdealLattice:
    """Admissible pairs ordered by ``(U,V) <= (U',V')`` iff ``U <= U'`` and ``V <= U' u V'``.

    The order is the usual graph-algebra convention; it is reported as a
    conjectural order for topological quivers.
    """

    pairs: list[AdmissiblePair]
    order_status: str = "conjectural order"
    _leq: dict = field(default_factory=dict, repr=False)

    def leq(self, a: AdmissiblePair, b: AdmissiblePair) -> bool:
        return a.U <= b.U and a.V <= (b.U | b.V)

    def relation(self) -> list[tuple[int, int]]:
        out = []
        for i, a in enumerate(self.pairs):
            for j, b in enumerate(self.pairs):
                if self.leq(a, b):
                    out.append((i, j))
        return out

    def covers(self) -> list[tuple[int, int]]:
        rel = set(self.relation())
        n = len(self.pairs)
        out = []
        for i, j in sorted(rel):
            if i == j:
                continue
            if not any(k not in (i, j) and (i, k) in rel and (k, j) in rel for k in range(n)):
                out.append((i, j))
        return out


def admissible_pairs(q: DiscreteQuiver, limit_vertices: int = 20) -> list[AdmissiblePair]:
    """All admissible pairs of a discrete quiver, sorted canonically."""
    if not isinstance(q, DiscreteQuiver):
        raise Unsupported("enumeration is implemented for discrete quivers; use check_admissible")
    M = model(q)
    if M.graph.n > limit_vertices:
        raise ValueError(f"{M.graph.n} vertices exceed the enumeration limit {limit_vertices}")
    out = [AdmissiblePair(M.subset(U), M.subset(V)) for U, V in M.graph.admissible_pairs()]
    return sorted(out, key=lambda p: (bin(M.mask(p.U)).count("1"), p.key()))


def ideal_lattice(q: DiscreteQuiver, limit_vertices: int = 20) -> IdealLattice:
    return IdealLattice(admissible_pairs(q, limit_vertices))


def check_admissible(q, U: SubSet, V: SubSet) -> Verdict:
    """Check both defining conditions of an admissible pair."""
    _check_space(q, U)
    _check_space(q, V)
    if not U.is_open():
        return Verdict(False, U, "U is not open")
    h = is_hereditary(q, U)
    if not h:
        return Verdict(False, h.witness, "U is not hereditary")
    s = is_saturated(q, U)
    if not s:
        return Verdict(False, s.witness, "U is not saturated")
    if not (V & U).is_empty:
        return Verdict(False, V & U, "V meets U")
    rest = U.complement()
    # V is open in E^0_U iff it avoids the closure of its complement there
    leak = V & (rest - V).closure()
    if not leak.is_empty:
        return Verdict(False, leak, "V is not open in the quotient vertex space")
    lo = regular(q) - U
    if not lo <= V:
        return Verdict(False, lo - V, "V misses regular vertices outside U")
    hi = quotient_regular(q, U)
    if not V <= hi:
        return Verdict(False, V - hi, "V leaves the quotient's regular vertices")
    return Verdict(True)


# -- minimality ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class Minimality:
    status: str  # "yes" | "no" | "unknown"
    witness: SubSet | None = None
    depth: int = 0
    bound: int = DEFAULT_BOUND
    detail: str = ""


def dyadic_basis(space: OneComplex, depth: int) -> list[SubSet]:
    out = []
    for c in space.cells:
        if c.degenerate:
            out.append(SubSet.build(space, cells=[c.name]))
            continue
        k = 2 ** depth
        step = (c.hi - c.lo) / k
        for i in range(k):
            a, b = c.lo + i * step, c.lo + (i + 1) * step
            out.append(SubSet.build(space, [(c.name, a, b, False, False)]))
    return out


def is_minimal(q, depth: int = 3, bound: int = DEFAULT_BOUND) -> Minimality:
    """Decide minimality; PL inputs search a finite candidate family."""
    q = _reject_tailed(q)
    if isinstance(q, DiscreteQuiver):
        M = model(q)
        for S in M.graph.sat_her_sets():
            if S not in (0, M.graph.full):
                return Minimality("no", M.subset(S), detail="proper saturated hereditary set")
        return Minimality("yes", detail="exhaustive enumeration")
    full = SubSet.full(q.vertex_space)
    if full.is_empty:
        return Minimality("yes", detail="empty quiver")
    ok = True
    for B in _pl_candidates(q, depth, bound):
        if B.is_empty:
            continue
        res = saturation(q, B, bound)
        if res.value is None:
            ok = False
            continue
        if res.value != full:
            return Minimality("no", res.value, depth, bound, "proper saturated hereditary set")
    if ok:
        return Minimality("yes", None, depth, bound, f"every basis set up to depth {depth} saturates to E^0")
    return Minimality("unknown", None, depth, bound, "some candidate saturation did not stabilise")


def _pl_candidates(q: PLQuiver, depth: int, bound: int):
    from .loops import exitless_map, periodic_points, v_geq

    seen = set()
    h = exitless_map(q)
    for p in periodic_points(h, min(bound, 8)).points[:16]:
        vg = v_geq(q, p, bound)
        if vg.value is not None:
            B = vg.value.closure().complement()
            if B not in seen:
                seen.add(B)
                yield B
    comps = classify(q).sinks.components()
    comps.sort(key=lambda S: (-_measure(S), str(S)))
    for S in comps:
        if S not in seen:
            seen.add(S)
            yield S
    for B in dyadic_basis(q.vertex_space, depth):
        if B not in seen:
            seen.add(B)
            yield B


def _measure(S: SubSet) -> Fraction:
    total = Fraction(0)
    for c in S.space.cells:
        cs = S.cellset(c.name)
        for a in cs.atoms():
            if a[0] == "g" and a[-1]:
                total += a[2] - a[1]
    return total


def describe_witness(w) -> str:
    if w is None:
        return "-"
    if isinstance(w, SubSet):
        return str(w)
    if isinstance(w, tuple):
        return fmt_point(w)
    return str(w)


__all__ = [
    "AdmissiblePair",
    "Bounded",
    "DEFAULT_BOUND",
    "DiscreteModel",
    "IdealLattice",
    "Minimality",
    "NotHereditary",
    "PLQuotient",
    "Verdict",
    "admissible_pairs",
    "check_admissible",
    "describe_witness",
    "dyadic_basis",
    "hereditary_closure",
    "ideal_lattice",
    "is_hereditary",
    "is_minimal",
    "is_saturated",
    "model",
    "pl_quotient",
    "quotient_quiver",
    "quotient_regular",
    "relative_quiver",
    "saturation",
]
