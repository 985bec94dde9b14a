"""Exact subsets of a :class:`OneComplex`.

On a cell ``[lo, hi]`` a subset is stored as a *partition*: sorted
breakpoints ``lo = x0 < ... < xk = hi`` with a membership bit for every
breakpoint and every open gap ``(x_i, x_{i+1})``.  Redundant interior
breakpoints are dropped, so the form is canonical and equality is
structural.  Tail families use the four-state lattice none / finite /
cofinite / all, encoded as ``(cofinite, exceptions)``.
"""

from __future__ import annotations

import re
from bisect import bisect_left
from fractions import Fraction
from typing import Iterable, NamedTuple

from .complex import HI, LO, OneComplex, fmt_rat, rat


class AmbientMismatch(ValueError):
    """Raised when combining subsets of different spaces."""


class CellSet(NamedTuple):
    breaks: tuple
    points: tuple
    gaps: tuple

    def contains(self, x: Fraction) -> bool:
        i = bisect_left(self.breaks, x)
        if i < len(self.breaks) and self.breaks[i] == x:
            return self.points[i]
        if i == 0 or i == len(self.breaks):
            return False
        return self.gaps[i - 1]

    def gap_containing(self, x1: Fraction, x2: Fraction) -> bool:
        """Membership of the open interval ``(x1, x2)``, assumed atom-free."""
        return self.contains((x1 + x2) / 2)

    def adjacent_gap(self, x: Fraction, sign: int) -> bool:
        i = bisect_left(self.breaks, x)
        if i < len(self.breaks) and self.breaks[i] == x:
            j = i if sign > 0 else i - 1
        else:
            j = i - 1
        if j < 0 or j >= len(self.gaps):
            return False
        return self.gaps[j]

    def atoms(self):
        """Yield ``("p", x, bit)`` and ``("g", x1, x2, bit)`` in order."""
        for i, x in enumerate(self.breaks):
            yield ("p", x, self.points[i])
            if i < len(self.gaps):
                yield ("g", x, self.breaks[i + 1], self.gaps[i])

    @property
    def empty(self) -> bool:
        return not any(self.points) and not any(self.gaps)

    @property
    def full(self) -> bool:
        return all(self.points) and all(self.gaps)


def _cs_const(cell, value: bool) -> CellSet:
    if cell.degenerate:
        return CellSet((cell.lo,), (value,), ())
    return CellSet((cell.lo, cell.hi), (value, value), (value,))


def _cs_canon(breaks, points, gaps) -> CellSet:
    if len(breaks) <= 2:
        return CellSet(tuple(breaks), tuple(points), tuple(gaps))
    nb, npt, ng = [breaks[0]], [points[0]], []
    for i in range(1, len(breaks)):
        g = gaps[i - 1]
        if i < len(breaks) - 1 and points[i] == g and gaps[i] == g:
            continue
        ng.append(g)
        nb.append(breaks[i])
        npt.append(points[i])
    # merged gaps keep the bit of their first sub-gap, which equals the rest
    return CellSet(tuple(nb), tuple(npt), tuple(ng))


def _cs_refine(cs: CellSet, xs) -> CellSet:
    xs = sorted(set(cs.breaks) | set(xs))
    br, n = cs.breaks, len(cs.breaks)
    pts, gaps = [], []
    j = 0  # br[j] is the first break >= the current x
    for k, x in enumerate(xs):
        while j < n and br[j] < x:
            j += 1
        if j < n and br[j] == x:
            pts.append(cs.points[j])
            inside = j < n - 1 and cs.gaps[j]
        else:
            inside = 0 < j < n and cs.gaps[j - 1]
            pts.append(inside)
        if k < len(xs) - 1:
            gaps.append(inside)
    return CellSet(tuple(xs), tuple(pts), tuple(gaps))


def _cs_combine(a: CellSet, b: CellSet, op) -> CellSet:
    if a.breaks == b.breaks:
        ra, rb = a, b
    else:
        xs = set(a.breaks) | set(b.breaks)
        ra, rb = _cs_refine(a, xs), _cs_refine(b, xs)
    pts = tuple(op(p, q) for p, q in zip(ra.points, rb.points))
    gaps = tuple(op(p, q) for p, q in zip(ra.gaps, rb.gaps))
    return _cs_canon(ra.breaks, pts, gaps)


class TailPart(NamedTuple):
    cofinite: bool
    exceptions: frozenset

    def contains(self, i: int) -> bool:
        return (i in self.exceptions) != self.cofinite

    def complement(self) -> "TailPart":
        return TailPart(not self.cofinite, self.exceptions)

    @property
    def empty(self) -> bool:
        return not self.cofinite and not self.exceptions

    @property
    def full(self) -> bool:
        return self.cofinite and not self.exceptions

    @property
    def infinite(self) -> bool:
        return self.cofinite

    def min(self) -> int | None:
        if self.cofinite:
            i = 1
            while i in self.exceptions:
                i += 1
            return i
        return min(self.exceptions) if self.exceptions else None


NO_TAIL = TailPart(False, frozenset())
ALL_TAIL = TailPart(True, frozenset())


def tail_finite(members: Iterable[int]) -> TailPart:
    return TailPart(False, frozenset(int(i) for i in members))


def tail_cofinite(excluded: Iterable[int] = ()) -> TailPart:
    return TailPart(True, frozenset(int(i) for i in excluded))


def tail_from(m: int) -> TailPart:
    """Members ``{m, m+1, ...}``."""
    return TailPart(True, frozenset(range(1, m)))


def _tail_op(a: TailPart, b: TailPart, op) -> TailPart:
    cof = op(a.cofinite, b.cofinite)
    keys = a.exceptions | b.exceptions
    # a member i outside ``keys`` has membership op(a.cof, b.cof) == cof
    exc = frozenset(i for i in keys if op(a.contains(i), b.contains(i)) != cof)
    return TailPart(cof, exc)


_OR = lambda p, q: p or q  # noqa: E731
_AND = lambda p, q: p and q  # noqa: E731
_DIFF = lambda p, q: p and not q  # noqa: E731


class SubSet:
    """An immutable subset of a OneComplex in canonical form."""

    __slots__ = ("space", "_cells", "_tails", "inf")

    def __init__(self, space: OneComplex, cells, tails, inf: bool):
        self.space = space
        self._cells = tuple(cells)
        self._tails = tuple(tails)
        self.inf = bool(inf) and space.infinity

    # -- constructors ----------------------------------------------------
    @classmethod
    def empty(cls, space: OneComplex) -> "SubSet":
        return cls(space, [_cs_const(c, False) for c in space.cells], [NO_TAIL] * len(space.tails), False)

    @classmethod
    def full(cls, space: OneComplex) -> "SubSet":
        return cls(space, [_cs_const(c, True) for c in space.cells], [ALL_TAIL] * len(space.tails), True)

    @classmethod
    def build(
        cls,
        space: OneComplex,
        intervals: Iterable = (),
        points: Iterable = (),
        tails: dict | None = None,
        inf: bool = False,
        cells: Iterable[str] = (),
    ) -> "SubSet":
        """Union of the given pieces.

        ``intervals`` holds ``(cell, a, b, a_closed, b_closed)`` tuples,
        ``points`` holds point tuples, ``tails`` maps a tail name to a
        :class:`TailPart` and ``cells`` names whole cells.
        """
        per_cell: dict[str, list] = {}
        per_pts: dict[str, set] = {}
        for name in cells:
            c = space.cell(name)
            per_cell.setdefault(name, []).append((c.lo, c.hi, True, True))
        for name, a, b, ac, bc in intervals:
            c = space.cell(name)
            a, b = rat(a), rat(b)
            if a > b:
                raise ValueError(f"empty interval {a}>{b} on {name}")
            if a < c.lo or b > c.hi:
                raise ValueError(f"interval [{a},{b}] leaves cell {name}")
            if a == b:
                if ac and bc:
                    per_pts.setdefault(name, set()).add(a)
                continue
            per_cell.setdefault(name, []).append((a, b, bool(ac), bool(bc)))
        tail_parts = [NO_TAIL] * len(space.tails)
        for p in points:
            p = space.check_point(p)
            if p[0] == "c":
                per_pts.setdefault(p[1], set()).add(p[2])
            elif p[0] == "t":
                k = space.tails.index(p[1])
                tail_parts[k] = _tail_op(tail_parts[k], tail_finite([p[2]]), _OR)
            else:
                inf = True
        for name, part in (tails or {}).items():
            k = space.tails.index(name)
            tail_parts[k] = _tail_op(tail_parts[k], part, _OR)
        out = []
        for c in space.cells:
            ivs = per_cell.get(c.name, [])
            pts = per_pts.get(c.name, set())
            if not ivs and not pts:
                out.append(_cs_const(c, False))
                continue
            xs = {c.lo, c.hi} | pts
            for a, b, _, _ in ivs:
                xs.add(a)
                xs.add(b)
            xs = sorted(xs)
            at = {x: i for i, x in enumerate(xs)}
            n = len(xs)
            hit = [x in pts for x in xs]
            inner = [0] * (n + 1)  # difference arrays: points strictly inside, gaps covered
            gap = [0] * n
            for a, b, ac, bc in ivs:
                i, j = at[a], at[b]
                inner[i + 1] += 1
                inner[j] -= 1
                gap[i] += 1
                gap[j] -= 1
                hit[i] = hit[i] or ac
                hit[j] = hit[j] or bc
            run, pbits = 0, []
            for i in range(n):
                run += inner[i]
                pbits.append(hit[i] or run > 0)
            run, gbits = 0, []
            for i in range(n - 1):
                run += gap[i]
                gbits.append(run > 0)
            out.append(_cs_canon(xs, pbits, gbits))
        return cls(space, _sync_glue(space, out), tail_parts, inf)

    @classmethod
    def points(cls, space: OneComplex, pts: Iterable) -> "SubSet":
        return cls.build(space, points=pts)

    @classmethod
    def of_cells(cls, space: OneComplex, names: Iterable[str]) -> "SubSet":
        return cls.build(space, cells=names)

    # -- identity --------------------------------------------------------
    def _key(self):
        return (self._cells, self._tails, self.inf)

    def __eq__(self, other):
        if not isinstance(other, SubSet):
            return NotImplemented
        return self.space == other.space and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"SubSet({self})"

    def __str__(self):
        return format_subset(self)

    # -- access ----------------------------------------------------------
    def cellset(self, name: str) -> CellSet:
        return self._cells[self.space.cell_index(name)]

    def tail(self, name: str) -> TailPart:
        return self._tails[self.space.tails.index(name)]

    def contains(self, p: tuple) -> bool:
        p = self.space.check_point(p)
        if p[0] == "c":
            return self.cellset(p[1]).contains(p[2])
        if p[0] == "t":
            return self.tail(p[1]).contains(p[2])
        return self.inf

    __contains__ = contains

    def isolated_names(self) -> list[str]:
        """Names of degenerate cells contained in the set."""
        return [c.name for c, cs in zip(self.space.cells, self._cells) if c.degenerate and cs.points[0]]

    def cell_names(self) -> list[str]:
        """Names of cells the set meets."""
        return [c.name for c, cs in zip(self.space.cells, self._cells) if not cs.empty]

    @property
    def is_empty(self) -> bool:
        return all(cs.empty for cs in self._cells) and all(t.empty for t in self._tails) and not self.inf

    @property
    def is_full(self) -> bool:
        return (
            all(cs.full for cs in self._cells)
            and all(t.full for t in self._tails)
            and (self.inf or not self.space.infinity)
        )

    def is_finite(self) -> bool:
        if any(t.cofinite for t in self._tails):
            return False
        return all(not any(cs.gaps) for cs in self._cells)

    def finite_points(self) -> list[tuple]:
        """All points of a finite set, canonical and sorted."""
        if not self.is_finite():
            raise ValueError("set is infinite")
        out = set()
        for c, cs in zip(self.space.cells, self._cells):
            for x, bit in zip(cs.breaks, cs.points):
                if bit:
                    out.add(self.space.canon(("c", c.name, x)))
        for name, t in zip(self.space.tails, self._tails):
            out.update(("t", name, i) for i in t.exceptions)
        if self.inf:
            out.add(("inf",))
        return sorted(out, key=_point_sort_key)

    def breakpoints(self, name: str) -> tuple:
        return self.cellset(name).breaks

    # -- boolean algebra -------------------------------------------------
    def _check(self, other: "SubSet"):
        if not isinstance(other, SubSet):
            raise TypeError("expected a SubSet")
        if self.space != other.space:
            raise AmbientMismatch("subsets live in different spaces")

    def _binary(self, other: "SubSet", op) -> "SubSet":
        self._check(other)
        cells = [_cs_combine(a, b, op) for a, b in zip(self._cells, other._cells)]
        tails = [_tail_op(a, b, op) for a, b in zip(self._tails, other._tails)]
        return SubSet(self.space, cells, tails, op(self.inf, other.inf))

    def union(self, other):
        return self._binary(other, _OR)

    def intersect(self, other):
        return self._binary(other, _AND)

    def minus(self, other):
        return self._binary(other, _DIFF)

    def complement(self) -> "SubSet":
        cells = [CellSet(cs.breaks, tuple(not b for b in cs.points), tuple(not b for b in cs.gaps)) for cs in self._cells]
        return SubSet(self.space, cells, [t.complement() for t in self._tails], not self.inf)

    __or__ = union
    __and__ = intersect
    __sub__ = minus
    __invert__ = complement

    def issubset(self, other: "SubSet") -> bool:
        return self.minus(other).is_empty

    def __le__(self, other):
        return self.issubset(other)

    def __ge__(self, other):
        return other.issubset(self)

    def __lt__(self, other):
        return self.issubset(other) and self != other

    # -- topology --------------------------------------------------------
    def _endpoint_vals(self, fn) -> dict:
        vals = {}
        for cls in self.space.glue:
            vals[cls] = fn(cls)
        return vals

    def closure(self) -> "SubSet":
        sp = self.space

        def near(name, end):
            cs = self.cellset(name)
            if end == LO:
                return cs.points[0] or cs.gaps[0]
            return cs.points[-1] or cs.gaps[-1]

        cells = []
        for c, cs in zip(sp.cells, self._cells):
            if c.degenerate:
                cells.append(cs)
                continue
            pts = list(cs.points)
            k = len(pts) - 1
            for i in range(k + 1):
                left = cs.gaps[i - 1] if i > 0 else False
                right = cs.gaps[i] if i < k else False
                pts[i] = pts[i] or left or right
            for end, i in ((LO, 0), (HI, k)):
                cls = sp.glue_class(c.name, end)
                if len(cls) > 1:
                    pts[i] = any(near(n, e) for n, e in cls)
            cells.append(_cs_canon(cs.breaks, pts, cs.gaps))
        inf = self.inf or (sp.infinity and any(t.infinite for t in self._tails))
        return SubSet(sp, cells, self._tails, inf)

    def interior(self) -> "SubSet":
        sp = self.space

        def inside(name, end):
            cs = self.cellset(name)
            if end == LO:
                return cs.points[0] and cs.gaps[0]
            return cs.points[-1] and cs.gaps[-1]

        cells = []
        for c, cs in zip(sp.cells, self._cells):
            if c.degenerate:
                cells.append(cs)
                continue
            pts = list(cs.points)
            k = len(pts) - 1
            for i in range(k + 1):
                left = cs.gaps[i - 1] if i > 0 else True
                right = cs.gaps[i] if i < k else True
                pts[i] = pts[i] and left and right
            for end, i in ((LO, 0), (HI, k)):
                cls = sp.glue_class(c.name, end)
                if len(cls) > 1:
                    pts[i] = all(inside(n, e) for n, e in cls)
            cells.append(_cs_canon(cs.breaks, pts, cs.gaps))
        inf = self.inf and all(t.cofinite for t in self._tails)
        return SubSet(sp, cells, self._tails, inf)

    def boundary(self) -> "SubSet":
        return self.closure().intersect(self.complement().closure())

    def is_open(self) -> bool:
        return self.interior() == self

    def is_closed(self) -> bool:
        return self.closure() == self

    def isolated_in_self(self, p: tuple) -> bool:
        """True iff ``p`` lies in the set and is not a limit of its other points."""
        p = self.space.canon(p)
        if not self.contains(p):
            return False
        rest = self.minus(SubSet.points(self.space, [p]))
        return not rest.closure().contains(p)

    def components(self) -> list["SubSet"]:
        """Connected components, each as a SubSet (tails split per member).

        Only implemented for sets whose tail parts are finite.
        """
        sp = self.space
        atoms = []  # (cell, kind, data) for included atoms
        for c, cs in zip(sp.cells, self._cells):
            for a in cs.atoms():
                if a[-1]:
                    atoms.append((c.name, a))
        # union-find over atoms: consecutive included atoms in one cell touch,
        # glued endpoints touch across cells
        parent = list(range(len(atoms)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def join(i, j):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

        by_point: dict = {}
        for idx, (name, a) in enumerate(atoms):
            if a[0] == "p":
                by_point.setdefault(sp.canon(("c", name, a[1])), []).append(idx)
        for idx, (name, a) in enumerate(atoms):
            if a[0] == "g":
                for x in (a[1], a[2]):
                    for j in by_point.get(sp.canon(("c", name, x)), []):
                        join(idx, j)
        groups: dict = {}
        for idx in range(len(atoms)):
            groups.setdefault(find(idx), []).append(idx)
        out = []
        for members in groups.values():
            ivs, pts = [], []
            for idx in members:
                name, a = atoms[idx]
                if a[0] == "p":
                    pts.append(("c", name, a[1]))
                else:
                    ivs.append((name, a[1], a[2], False, False))
            out.append(SubSet.build(sp, ivs, pts))
        for name, t in zip(sp.tails, self._tails):
            if t.cofinite:
                raise ValueError("components of infinite tail parts are not enumerated")
            for i in sorted(t.exceptions):
                out.append(SubSet.points(sp, [("t", name, i)]))
        if self.inf:
            out.append(SubSet.points(sp, [("inf",)]))
        return out

    # -- sampling --------------------------------------------------------
    def sample_points(self, extra: int = 1) -> list[tuple]:
        """Every breakpoint plus ``extra`` interior points per gap."""
        return self.space_sample(self.space, self._cells, extra)

    @staticmethod
    def space_sample(space, cellsets=None, extra: int = 1) -> list[tuple]:
        out = []
        for k, c in enumerate(space.cells):
            xs = list(cellsets[k].breaks) if cellsets else [c.lo, c.hi]
            xs = sorted(set(xs) | {c.lo, c.hi})
            for x in xs:
                out.append(("c", c.name, x))
            for a, b in zip(xs, xs[1:]):
                for j in range(1, extra + 1):
                    out.append(("c", c.name, a + (b - a) * j / (extra + 1)))
        return out


def _sync_glue(space: OneComplex, cells: list) -> list:
    if not space.glue:
        return cells
    cells = list(cells)
    for cls in space.glue:
        bit = False
        for name, end in cls:
            cs = cells[space.cell_index(name)]
            bit = bit or (cs.points[0] if end == LO else cs.points[-1])
        for name, end in cls:
            k = space.cell_index(name)
            cs = cells[k]
            pts = list(cs.points)
            pts[0 if end == LO else -1] = bit
            cells[k] = _cs_canon(cs.breaks, pts, cs.gaps)
    return cells


def _point_sort_key(p):
    if p[0] == "c":
        return (0, p[1], p[2])
    if p[0] == "t":
        return (1, p[1], p[2])
    return (2, "", 0)


# -- text syntax ---------------------------------------------------------

def format_subset(S: SubSet) -> str:
    terms = []
    for c, cs in zip(S.space.cells, S._cells):
        if c.degenerate:
            if cs.points[0]:
                terms.append(c.name)
            continue
        if cs.full:
            terms.append(f"{c.name}[{fmt_rat(c.lo)},{fmt_rat(c.hi)}]")
            continue
        atoms = list(cs.atoms())
        i = 0
        while i < len(atoms):
            if not atoms[i][-1]:
                i += 1
                continue
            j = i
            while j + 1 < len(atoms) and atoms[j + 1][-1]:
                j += 1
            first, last = atoms[i], atoms[j]
            if i == j and first[0] == "p":
                terms.append(f"{c.name}{{{fmt_rat(first[1])}}}")
            else:
                lb = "[" if first[0] == "p" else "("
                a = first[1]
                rb = "]" if last[0] == "p" else ")"
                b = last[1] if last[0] == "p" else last[2]
                terms.append(f"{c.name}{lb}{fmt_rat(a)},{fmt_rat(b)}{rb}")
            i = j + 1
    for name, t in zip(S.space.tails, S._tails):
        if t.empty:
            continue
        exc = ",".join(str(i) for i in sorted(t.exceptions))
        if not t.cofinite:
            terms.append(f"{name}#{{{exc}}}")
        elif t.exceptions:
            terms.append(f"{name}#*-{{{exc}}}")
        else:
            terms.append(f"{name}#*")
    if S.inf:
        terms.append("inf")
    return " u ".join(terms) if terms else "{}"


_INTERVAL = re.compile(r"^(?P<name>[^\[\(\{#\s]+)(?P<l>[\[\(])\s*(?P<a>[^,\s]+)\s*,\s*(?P<b>[^\]\)\s]+)\s*(?P<r>[\]\)])$")
_POINTS = re.compile(r"^(?P<name>[^\[\(\{#\s]+)\{(?P<xs>[^}]*)\}$")
_TAIL = re.compile(r"^(?P<name>[^\[\(\{#\s]+)#(?P<spec>.*)$")


def parse_subset(space: OneComplex, text: str) -> SubSet:
    """Parse the canonical text syntax produced by :func:`format_subset`.

    Also accepts ``{a, b, c}`` as a list of whole cells or tails and a bare
    ``empty``.
    """
    text = text.strip()
    if text in ("", "{}", "empty", "∅"):
        return SubSet.empty(space)
    terms = [t.strip() for t in re.split(r"\s+(?:u|∪|\|)\s+", text)]
    ivs, pts, tails, names = [], [], {}, []
    inf = False
    for term in terms:
        if term == "inf":
            inf = True
            continue
        if term.startswith("{") and term.endswith("}"):
            names.extend(n.strip() for n in term[1:-1].split(",") if n.strip())
            continue
        m = _INTERVAL.match(term)
        if m:
            ivs.append((m["name"], rat(m["a"]), rat(m["b"]), m["l"] == "[", m["r"] == "]"))
            if not space.has_cell(m["name"]):
                raise ValueError(f"unknown cell {m['name']!r} in {term!r}")
            continue
        m = _POINTS.match(term)
        if m:
            if not space.has_cell(m["name"]):
                raise ValueError(f"unknown cell {m['name']!r} in {term!r}")
            for x in m["xs"].split(","):
                if x.strip():
                    pts.append(("c", m["name"], rat(x)))
            continue
        m = _TAIL.match(term)
        if m:
            name, spec = m["name"], m["spec"].strip()
            if name not in space.tails:
                raise ValueError(f"unknown tail {name!r}")
            tails[name] = _parse_tail_spec(spec)
            continue
        names.append(term)
    cells = []
    for n in names:
        if n == "inf":
            inf = True
        elif space.has_cell(n):
            cells.append(n)
        elif n in space.tails:
            tails[n] = ALL_TAIL
        else:
            raise ValueError(f"unknown cell or tail {n!r}")
    if inf and not space.infinity:
        raise ValueError("space has no point at infinity")
    return SubSet.build(space, ivs, pts, tails, inf, cells)


def _parse_tail_spec(spec: str) -> TailPart:
    def members(s):
        s = s.strip()
        if not (s.startswith("{") and s.endswith("}")):
            raise ValueError(f"bad tail member list {s!r}")
        return [int(x) for x in s[1:-1].split(",") if x.strip()]

    if spec == "*":
        return ALL_TAIL
    if spec.startswith("*-"):
        return tail_cofinite(members(spec[2:]))
    if spec.startswith(">="):
        return tail_from(int(spec[2:]))
    return tail_finite(members(spec))
