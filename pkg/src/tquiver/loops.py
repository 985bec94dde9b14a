"""Paths and loops, Conditions (L) and (K), and simplicity.

For a PL quiver the loops without exits live where ``s`` has singleton
fibres.  There the map ``h(v) = r(s^{-1}(v))`` is piecewise affine, and the
base points of exitless loops of length ``n`` are exactly the fixed points
of ``h^n``.  Composites of ``h`` are computed branch by branch with exact
rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ideals import DEFAULT_BOUND, Bounded, is_minimal, model, saturation
from .quiver import DiscreteQuiver, Edge, PLQuiver, TailedQuiver, Unsupported, tail_name
from .ratspace import INFINITE, SubSet, fmt_point

HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"
MAX_BRANCHES = 512
MAX_POINTS = 256
MAX_CANDIDATES = 64


@dataclass(frozen=True)
class Path:
    edges: tuple[str, ...]
    source: str
    range: str
    count: int | float = 1
    has_exit: bool = False

    def __len__(self):
        return len(self.edges)

    def __str__(self):
        mark = "" if self.count == 1 else " [infinitely many]"
        ex = " (exit)" if self.has_exit else " (no exit)"
        return " ".join(self.edges) + mark + ex


@dataclass(frozen=True)
class LoopVerdict:
    status: str
    witness: object = None
    bound: int = 0
    detail: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS


def _reject_tailed(q):
    """Unwrap a trivially tailed quiver; refuse real symbolic tails."""
    if isinstance(q, TailedQuiver):
        if q.has_tails or q.infinity:
            raise Unsupported("loop analysis of PL quivers with symbolic tails is not implemented")
        return q.base
    return q


# -- v^>= ------------------------------------------------------------------------------

def v_geq(q, v: tuple, bound: int = DEFAULT_BOUND) -> Bounded:
    """Vertices admitting a path into ``v`` (``v`` itself included)."""
    q = _reject_tailed(q)
    X = q.vertex_space
    v = X.canon(v)
    if isinstance(q, DiscreteQuiver):
        M = model(q)
        g = M.graph
        if v[0] == "t":
            # a tail member is reached from its base and the members below it
            w = v[1][:-1]
            m = g.backward(1 << M.index[w])
            names = M.finite_names(m)
            tails = {v[1]: _tail_upto(v[2])}
            return Bounded(q.vertex_set(names, tails), 1, bound)
        if v[0] == "inf":
            return Bounded(SubSet.points(X, [v]), 1, bound)
        m = g.backward(1 << M.index[v[1]])
        return Bounded(q.vertex_set(M.finite_names(m)), 1, bound)
    key = (q, v, bound)
    hit = _VGEQ.get(key)
    if hit is not None:
        return hit
    out = _pl_v_geq(q, v, bound)
    if len(_VGEQ) > 4096:
        _VGEQ.clear()
    _VGEQ[key] = out
    return out


_VGEQ: dict = {}


def _pl_v_geq(q: PLQuiver, v: tuple, bound: int) -> Bounded:
    X = q.vertex_space
    # pointwise search while every fibre of r stays finite
    seen, frontier = {v}, [v]
    for k in range(bound + 1):
        nxt = []
        for p in frontier:
            fib = q.r.fiber(p)
            if fib == INFINITE:
                return _pl_v_geq_sets(q, v, bound)
            for a in fib:
                w = X.canon(q.s(a))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            return Bounded(SubSet.points(X, seen), k, bound)
        if len(seen) > MAX_POINTS:
            return Bounded(None, k, bound)
        frontier = nxt
    return Bounded(None, bound, bound)


def _pl_v_geq_sets(q: PLQuiver, v: tuple, bound: int) -> Bounded:
    cur = SubSet.points(q.vertex_space, [v])
    for k in range(bound + 1):
        nxt = cur | q.s.image(q.r.preimage(cur))
        if nxt == cur:
            return Bounded(cur, k, bound)
        if nxt.is_finite() and len(nxt.finite_points()) > MAX_POINTS:
            return Bounded(None, k, bound)
        cur = nxt
    return Bounded(None, bound, bound)


def _tail_upto(i: int):
    from .ratspace import tail_finite

    return tail_finite(range(1, i + 1))


def is_isolated_in(S: SubSet, v: tuple) -> bool:
    return S.isolated_in_self(v)


# -- simple loops (discrete) -------------------------------------------------------------

def simple_loops_at(q: DiscreteQuiver, v: str, maxlen: int) -> list[Path]:
    """Simple loops based at ``v`` of length at most ``maxlen``.

    Infinite edge classes appear once, named ``a=>b``, with ``count`` set to
    infinity.
    """
    if not isinstance(q, DiscreteQuiver):
        raise Unsupported("explicit loop listing is for discrete quivers")
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1")
    out_edges: dict[str, list] = {u: [] for u in q.vertices}
    for e in q.edges:
        out_edges[e.src].append((e.name, e.rng, 1))
    for a, b in q.inf_edges:
        out_edges[a].append((f"{a}=>{b}", b, INFINITE))
    for w in q.tails:
        out_edges[w].append((f"{tail_name(w)}#1", None, 1))
    deg = q.out_degree
    found: list[Path] = []

    def walk(u, trail, count, verts):
        for name, w, k in out_edges[u]:
            if w is None:
                continue
            if w == v:
                exit_ = any(deg[x] != 1 for x in verts)
                found.append(Path(tuple(trail + [name]), v, v, count * k if k != 1 else count, exit_))
            elif len(trail) + 1 < maxlen:
                walk(w, trail + [name], count * k if k != 1 else count, verts + [w])

    walk(v, [], 1, [v])
    return sorted(found, key=lambda p: (len(p), p.edges))


# -- exitless map ------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_in: bool
    hi_in: bool

    @property
    def empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_in and self.hi_in))

    @property
    def point(self) -> bool:
        return self.lo == self.hi and not self.empty

    def contains(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_in:
            return False
        if x == self.hi and not self.hi_in:
            return False
        return True

    def meet(self, o: "Interval") -> "Interval":
        if self.lo > o.lo:
            lo, li = self.lo, self.lo_in
        elif o.lo > self.lo:
            lo, li = o.lo, o.lo_in
        else:
            lo, li = self.lo, self.lo_in and o.lo_in
        if self.hi < o.hi:
            hi, hi_in = self.hi, self.hi_in
        elif o.hi < self.hi:
            hi, hi_in = o.hi, o.hi_in
        else:
            hi, hi_in = self.hi, self.hi_in and o.hi_in
        return Interval(lo, hi, li, hi_in)

    def pull(self, m: Fraction, c: Fraction) -> "Interval":
        """Preimage under ``x -> m*x + c`` with ``m != 0``."""
        a, b = (self.lo - c) / m, (self.hi - c) / m
        if m > 0:
            return Interval(a, b, self.lo_in, self.hi_in)
        return Interval(b, a, self.hi_in, self.lo_in)


@dataclass(frozen=True)
class Branch:
    """``h(x) = m*x + c`` for ``x`` in ``dom`` on ``cell``, landing in ``target``."""

    cell: str
    dom: Interval
    m: Fraction
    c: Fraction
    target: str

    def __call__(self, x):
        return self.m * x + self.c


@dataclass
class ExitlessMap:
    """``h`` on ``W1``, the vertices with exactly one outgoing edge."""

    quiver: object
    W1: SubSet
    branches: list[Branch]
    graph_h: dict | None = None  # discrete case: vertex -> vertex

    def __call__(self, p: tuple) -> tuple | None:
        if self.graph_h is not None:
            return self.graph_h.get(p)
        X = self.quiver.vertex_space
        for _, cell, x in X.representations(p):
            for b in self.branches:
                if b.cell == cell and b.dom.contains(x):
                    return X.canon(("c", b.target, b(x)))
        return None

    def slopes(self) -> set:
        return {b.m for b in self.branches if not b.dom.point}


def exitless_map(q) -> ExitlessMap:
    q = _reject_tailed(q)
    X = q.vertex_space
    if isinstance(q, DiscreteQuiver):
        M = model(q)
        h = {}
        for v, w in M.graph.unique_succ(0).items():
            if v < len(q.vertices) and w < len(q.vertices):
                h[("c", q.vertices[v], Fraction(0))] = ("c", q.vertices[w], Fraction(0))
        W1 = q.vertex_set([w for w in q.vertices if q.out_degree[w] == 1],
                          {tail_name(w): _all_tail() for w in q.tails})
        return ExitlessMap(q, W1, [], h)
    W1 = q.s.fiber_level_set(lambda n: n == 1)
    branches: list[Branch] = []
    for ecell in q.edge_space.cells:
        for ps in q.s.pieces[ecell.name]:
            for pr in q.r.pieces[ecell.name]:
                u, w = max(ps.lo, pr.lo), min(ps.hi, pr.hi)
                if u > w or (u == w and not ecell.degenerate):
                    continue
                if ps.slope == 0:
                    if not ecell.degenerate:
                        continue
                    v = X.canon(("c", ps.target, ps(u)))
                    if W1.contains(v):
                        t = X.canon(("c", pr.target, pr(u)))
                        branches.append(Branch(v[1], Interval(v[2], v[2], True, True), Fraction(0), t[2], t[1]))
                    continue
                m = pr.slope / ps.slope
                c = pr.intercept - m * ps.intercept
                a, b = sorted((ps(u), ps(w)))
                dom = Interval(a, b, True, True)
                for run in _runs(W1, ps.target):
                    d = dom.meet(run)
                    if not d.empty:
                        branches.append(Branch(ps.target, d, m, c, pr.target) if not d.point else _point_branch(X, ps.target, d.lo, m, c, pr.target))
    return ExitlessMap(q, W1, _dedupe(branches))


def _all_tail():
    from .ratspace import ALL_TAIL

    return ALL_TAIL


def _point_branch(X, cell, x, m, c, target) -> Branch:
    v = X.canon(("c", cell, x))
    t = X.canon(("c", target, m * x + c))
    return Branch(v[1], Interval(v[2], v[2], True, True), Fraction(0), t[2], t[1])


def _dedupe(bs: list[Branch]) -> list[Branch]:
    seen, out = set(), []
    for b in bs:
        if b not in seen:
            seen.add(b)
            out.append(b)
    return out


def _runs(S: SubSet, cell: str) -> list[Interval]:
    """Maximal intervals (with end flags) of ``S`` on one cell."""
    out = []
    atoms = list(S.cellset(cell).atoms())
    i = 0
    while i < len(atoms):
        if not atoms[i][-1]:
            i += 1
            continue
        j = i
        while j + 1 < len(atoms) and atoms[j + 1][-1]:
            j += 1
        first, last = atoms[i], atoms[j]
        lo, lo_in = (first[1], True) if first[0] == "p" else (first[1], False)
        hi, hi_in = (last[1], True) if last[0] == "p" else (last[2], False)
        out.append(Interval(lo, hi, lo_in, hi_in))
        i = j + 1
    return out


def compose(X, outer: list[Branch], inner: list[Branch]) -> list[Branch]:
    """Branches of ``outer o inner`` (apply ``inner`` first)."""
    out = []
    for b in inner:
        for g in outer:
            if b.dom.point or b.m == 0:
                y = b(b.dom.lo)
                for _, cell, yy in X.representations(("c", b.target, y)):
                    if g.cell == cell and g.dom.contains(yy):
                        if b.dom.point:
                            out.append(_point_branch(X, b.cell, b.dom.lo, Fraction(0), g(yy), g.target))
                        else:
                            out.append(Branch(b.cell, b.dom, Fraction(0), g(yy), g.target))
                continue
            if g.cell == b.target:
                d = b.dom.meet(g.dom.pull(b.m, b.c))
                if not d.empty:
                    m, c = g.m * b.m, g.m * b.c + g.c
                    out.append(_point_branch(X, b.cell, d.lo, m, c, g.target) if d.point else Branch(b.cell, d, m, c, g.target))
            else:
                # images hitting a glued endpoint of b.target may continue elsewhere
                t = X.cell(b.target)
                for y in (t.lo, t.hi):
                    reps = X.representations(("c", b.target, y))
                    if len(reps) < 2:
                        continue
                    x = (y - b.c) / b.m
                    if not b.dom.contains(x):
                        continue
                    for _, cell, yy in reps:
                        if g.cell == cell and g.dom.contains(yy):
                            out.append(_point_branch(X, b.cell, x, Fraction(0), g(yy), g.target))
    return _dedupe(out)


@dataclass
class PeriodicResult:
    by_n: dict            # n -> SubSet of fixed points of h^n
    identity: dict        # n -> SubSet where h^n is the identity on an interval
    bound: int
    truncated: bool
    empty_at: int | None  # first n with dom(h^n) empty
    points: list = field(default_factory=list)


def periodic_points(h: ExitlessMap, bound: int) -> PeriodicResult:
    q = h.quiver
    X = q.vertex_space
    if h.graph_h is not None:
        M = model(q)
        per = M.graph.periods(0)
        by_n = {}
        for n in range(1, bound + 1):
            names = [q.vertices[v] for v, p in per.items() if n % p == 0 and v < len(q.vertices)]
            by_n[n] = q.vertex_set(names)
        pts = sorted(("c", q.vertices[v], Fraction(0)) for v in per if v < len(q.vertices))
        empty = None if per or h.graph_h else 1
        return PeriodicResult(by_n, {n: SubSet.empty(X) for n in by_n}, bound, False, empty, pts)
    by_n, ident = {}, {}
    cur = list(h.branches)
    truncated = False
    empty_at = None
    found: set = set()
    for n in range(1, bound + 1):
        if n > 1:
            if len(cur) * max(1, len(h.branches)) > MAX_BRANCHES * 4:
                truncated = True
                break
            cur = compose(X, h.branches, cur)
            if len(cur) > MAX_BRANCHES:
                truncated = True
                break
        if not cur:
            empty_at = n
            for k in range(n, bound + 1):
                by_n[k] = SubSet.empty(X)
                ident[k] = SubSet.empty(X)
            break
        pts, ivs = set(), []
        for b in cur:
            if b.dom.point:
                x = b.dom.lo
                if X.canon(("c", b.target, b(x))) == X.canon(("c", b.cell, x)):
                    pts.add(X.canon(("c", b.cell, x)))
                continue
            if b.target == b.cell:
                if b.m == 1:
                    if b.c == 0:
                        ivs.append((b.cell, b.dom.lo, b.dom.hi, b.dom.lo_in, b.dom.hi_in))
                    continue
                x = b.c / (1 - b.m)
                if b.dom.contains(x):
                    pts.add(X.canon(("c", b.cell, x)))
            for x in (b.dom.lo, b.dom.hi):
                if b.dom.contains(x) and X.canon(("c", b.target, b(x))) == X.canon(("c", b.cell, x)):
                    pts.add(X.canon(("c", b.cell, x)))
        I = SubSet.build(X, ivs)
        by_n[n] = SubSet.build(X, ivs, sorted(pts))
        ident[n] = I
        found.update(pts)
    return PeriodicResult(by_n, ident, bound, truncated, empty_at, sorted(found))


# -- L_n and Condition (L) ---------------------------------------------------------------

@dataclass
class ExitlessBasePoints:
    L: dict
    Ls: dict
    complete: bool
    certificate: str
    L_inf: SubSet | None
    bound: int

    def union(self) -> SubSet:
        sets = list(self.L.values())
        out = sets[0]
        for S in sets[1:]:
            out = out | S
        return out


def _certificate(h: ExitlessMap, res: PeriodicResult) -> tuple[bool, str, SubSet | None]:
    X = h.quiver.vertex_space
    if res.truncated:
        return False, "composite branch count truncated", None
    if res.empty_at is not None:
        return True, f"h^{res.empty_at} has empty domain", _union(X, res.by_n.values())
    nondeg = [b for b in h.branches if not b.dom.point]
    if not nondeg:
        # finitely many points carry h; their periods are bounded by their number
        k = len({(b.cell, b.dom.lo) for b in h.branches})
        if res.bound >= k:
            return True, "h lives on finitely many points", _union(X, res.by_n.values())
        return False, "bound below the number of points", None
    affine = {(b.cell, b.m, b.c, b.target) for b in nondeg}
    if len(affine) == 1 and not [b for b in h.branches if b.dom.point]:
        cell, m, c, target = next(iter(affine))
        if cell == target and abs(m) != 1:
            # a single affine law: every h^n is its iterate, fixed only at c/(1-m)
            x = c / (1 - m)
            pts = [X.canon(("c", cell, x))] if h(X.canon(("c", cell, x))) is not None and any(b.dom.contains(x) for b in nondeg) else []
            return True, "single affine branch law", SubSet.points(X, pts)
    slopes = [abs(b.m) for b in nondeg if b.m != 0]
    if slopes and (all(s > 1 for s in slopes) or all(s < 1 for s in slopes)):
        return True, "no composite of h can be the identity on an interval", None
    if not slopes:
        return True, "h is locally constant", None
    return False, "mixed slopes admit identity composites beyond the bound", None


def _union(X, sets) -> SubSet:
    out = SubSet.empty(X)
    for S in sets:
        out = out | S
    return out


def exitless_base_points(q, maxlen: int) -> ExitlessBasePoints:
    """``L_n`` and ``L_n^s`` for ``n <= maxlen`` with a completeness flag."""
    q = _reject_tailed(q)
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1")
    h = exitless_map(q)
    res = periodic_points(h, maxlen)
    X = q.vertex_space
    L, Ls = {}, {}
    seen = SubSet.empty(X)
    for n in range(1, maxlen + 1):
        Ln = res.by_n.get(n)
        if Ln is None:
            break
        L[n] = Ln
        Ls[n] = Ln - seen
        seen = seen | Ln
    if isinstance(q, DiscreteQuiver):
        n_all = len(q.vertices)
        complete = maxlen >= n_all or bool(res.empty_at)
        L_inf = _union(X, L.values()) if complete else None
        return ExitlessBasePoints(L, Ls, complete, "periods are bounded by the vertex count", L_inf, maxlen)
    ok, cert, L_inf = _certificate(h, res)
    if res.truncated:
        ok = False
    return ExitlessBasePoints(L, Ls, ok, cert, L_inf, maxlen)


def condition_L(q, maxlen: int = DEFAULT_BOUND) -> LoopVerdict:
    """Whether the base points of exitless loops have empty interior."""
    q = _reject_tailed(q)
    if isinstance(q, DiscreteQuiver):
        M = model(q)
        bad = M.graph.exitless_base_points(0)
        if bad:
            return LoopVerdict(FAILS, M.subset(bad), len(q.vertices), "loops without exits at isolated vertices")
        return LoopVerdict(HOLDS, None, len(q.vertices), "no loop without exits", {"L_inf": SubSet.empty(q.vertex_space)})
    eb = exitless_base_points(q, maxlen)
    for n in sorted(eb.Ls):
        inner = eb.Ls[n].interior()
        if not inner.is_empty:
            return LoopVerdict(FAILS, inner, maxlen, f"L_{n}^s has non-empty interior", {"n": n, "L": eb})
    extra = {"L": eb}
    if eb.complete:
        if eb.L_inf is not None:
            extra["L_inf"] = eb.L_inf
        return LoopVerdict(HOLDS, None, maxlen, eb.certificate, extra)
    h = exitless_map(q)
    if _no_identity_composites(h):
        # only isolated vertices can give exitless base points with interior
        status = _isolated_orbits(h, maxlen)
        if status[0] == "periodic":
            return LoopVerdict(FAILS, SubSet.points(q.vertex_space, [status[1]]), maxlen, "isolated vertex on an exitless loop", extra)
        if status[0] == "none":
            return LoopVerdict(HOLDS, None, maxlen, "no composite of h can be the identity on an interval", extra)
    return LoopVerdict(UNKNOWN, None, maxlen, eb.certificate, extra)


def _no_identity_composites(h: ExitlessMap) -> bool:
    slopes = [abs(b.m) for b in h.branches if not b.dom.point and b.m != 0]
    return all(m > 1 for m in slopes) or all(m < 1 for m in slopes)


def _isolated_orbits(h: ExitlessMap, bound: int) -> tuple:
    """('periodic', p) for an isolated periodic vertex, ('none',) if there is none, else ('unknown',)."""
    X = h.quiver.vertex_space
    undecided = False
    for c in X.cells:
        if not c.degenerate:
            continue
        p = X.canon(("c", c.name, c.lo))
        if not X.is_isolated(p):
            continue
        seen, cur = {p}, h(p)
        for _ in range(bound):
            if cur is None or (cur in seen and cur != p):
                break
            if cur == p:
                return ("periodic", p)
            seen.add(cur)
            cur = h(cur)
        else:
            undecided = True
    return ("unknown",) if undecided else ("none",)


def acyclic(q: PLQuiver, bound: int = DEFAULT_BOUND) -> bool:
    """True when a bounded search proves that no loop exists."""
    B = SubSet.full(q.vertex_space)
    for _ in range(bound):
        nxt = B & q.s.image(q.r.preimage(B)) & q.r.image(q.s.preimage(B))
        if nxt.is_empty:
            return True
        if nxt == B:
            return False
        B = nxt
    return False


# -- Condition (K) --------------------------------------------------------------------------

def _finite_graph(q: PLQuiver, S: SubSet):
    """Finite discrete quiver on the points of ``S`` and the edges ranging in it."""
    pts = S.finite_points()
    E = q.r.preimage(S)
    if not E.is_finite():
        return None
    names = {p: fmt_point(p) for p in pts}
    edges = []
    for a in E.finite_points():
        src, rng = q.s(a), q.r(a)
        if src not in names:
            return None
        edges.append(Edge(fmt_point(a), names[src], names[rng]))
    return DiscreteQuiver(list(names.values()), edges), names


def _prop97_at(q: PLQuiver, v: tuple, bound: int) -> str:
    """'one' if v is the base of exactly one simple loop and isolated in v^>=, 'no', or 'unknown'."""
    vg = v_geq(q, v, bound)
    if vg.value is None:
        return "unknown"
    S = vg.value
    if not S.is_finite():
        if not S.isolated_in_self(v):
            return "no"
        return "unknown"
    built = _finite_graph(q, S)
    if built is None:
        return "unknown"
    dq, names = built
    M = model(dq)
    k = M.graph.first_return_count(M.index[names[v]])
    return "one" if k == 1 else "no"


def condition_K(q, maxlen: int = DEFAULT_BOUND) -> LoopVerdict:
    """Condition (K) through the isolated-single-loop characterisation."""
    q = _reject_tailed(q)
    if isinstance(q, DiscreteQuiver):
        M = model(q)
        wit = M.graph.condition_K_witnesses()
        if wit:
            v = sorted(M.names[i] for i in wit)[0]
            return LoopVerdict(FAILS, v, len(q.vertices), "base of exactly one simple loop")
        return LoopVerdict(HOLDS, None, len(q.vertices), "no vertex carries exactly one simple loop")
    X = q.vertex_space
    empty = SubSet.empty(X)
    if saturation(q, empty, maxlen).value == empty:
        # the empty set is saturated hereditary, so (K) forces (L) on Q itself
        L = condition_L(q, maxlen)
        if L.fails:
            return LoopVerdict(FAILS, L.witness, maxlen, "Condition (L) fails on the quiver itself")
    if acyclic(q, maxlen):
        return LoopVerdict(HOLDS, None, maxlen, "the quiver has no loops")
    cands = [X.canon(("c", c.name, c.lo)) for c in X.cells if c.degenerate]
    h = exitless_map(q)
    res = periodic_points(h, maxlen)
    cands += [p for p in res.points if p not in cands]
    unknown = len(cands) > MAX_CANDIDATES or res.truncated
    for v in sorted(cands, key=lambda p: (p[1], p[2]))[:MAX_CANDIDATES]:
        verdict = _prop97_at(q, v, maxlen)
        if verdict == "one":
            return LoopVerdict(FAILS, v, maxlen, "base of exactly one simple loop, isolated in v^>=")
        if verdict == "unknown":
            unknown = True
    if X.is_discrete and q.edge_space.is_discrete and not unknown:
        return LoopVerdict(HOLDS, None, maxlen, "every vertex checked")
    mn = is_minimal(q, bound=maxlen)
    if mn.status == "yes" and condition_L(q, maxlen).holds:
        return LoopVerdict(HOLDS, None, maxlen, "minimal and Condition (L)")
    return LoopVerdict(UNKNOWN, None, maxlen, "no witness among the exactly representable candidates")


# -- simplicity -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Simplicity:
    status: str  # "simple" | "not simple" | "unknown"
    reasons: tuple = ()
    minimal: object = None
    condition_L: LoopVerdict | None = None


def is_simple(q, maxlen: int = DEFAULT_BOUND, depth: int = 3) -> Simplicity:
    q = _reject_tailed(q)
    mn = is_minimal(q, depth=depth, bound=maxlen)
    L = condition_L(q, maxlen)
    reasons = []
    if mn.status == "no":
        reasons.append(("minimality", mn.witness))
    if L.fails:
        reasons.append(("Condition (L)", L.witness))
    if reasons:
        return Simplicity("not simple", tuple(reasons), mn, L)
    if mn.status == "yes" and L.holds:
        return Simplicity("simple", (), mn, L)
    return Simplicity("unknown", (), mn, L)


__all__ = [
    "FAILS",
    "HOLDS",
    "UNKNOWN",
    "Branch",
    "ExitlessBasePoints",
    "ExitlessMap",
    "LoopVerdict",
    "Path",
    "PeriodicResult",
    "Simplicity",
    "acyclic",
    "compose",
    "condition_K",
    "condition_L",
    "exitless_base_points",
    "exitless_map",
    "is_simple",
    "periodic_points",
    "simple_loops_at",
    "v_geq",
]
