"""Compact rational 1-complexes with presented discrete tails.

A space is a finite list of closed cells ``[lo, hi]`` with rational endpoints
(``lo == hi`` is an isolated point), an equivalence relation gluing cell
endpoints, a finite list of tail families (each a copy of the natural numbers
with the discrete topology) and optionally a point at infinity that
compactifies the tails.

Points are plain tuples so they hash and sort cheaply:

* ``("c", cell, x)``  a point of a cell, coordinate ``x`` in ``[lo, hi]``
* ``("t", tail, i)``  member ``i >= 1`` of a tail family
* ``("inf",)``        the point at infinity
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

LO, HI = "lo", "hi"
INF_POINT = ("inf",)


def rat(value) -> Fraction:
    """Parse ``value`` as an exact rational.

    Accepts ints, Fractions and strings of the form ``p``, ``p/q`` or a
    finite decimal.  Floats are rejected: every coordinate in this package
    is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                n, d = int(num), int(den)
            except ValueError:
                raise ValueError(f"malformed rational {value!r}") from None
            if d == 0:
                raise ValueError(f"zero denominator in {value!r}")
            return Fraction(n, d)
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"malformed rational {value!r}") from None
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def fmt_rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cell_point(cell: str, x) -> tuple:
    return ("c", cell, rat(x))


def tail_point(tail: str, i: int) -> tuple:
    if i < 1:
        raise ValueError("tail members are indexed from 1")
    return ("t", tail, int(i))


def fmt_point(p: tuple) -> str:
    if p[0] == "c":
        return f"{p[1]}@{fmt_rat(p[2])}"
    if p[0] == "t":
        return f"{p[1]}#{p[2]}"
    return "inf"


@dataclass(frozen=True, order=True)
class Cell:
    name: str
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", rat(self.lo))
        object.__setattr__(self, "hi", rat(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"cell {self.name}: lo > hi")

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    def end(self, which: str) -> Fraction:
        return self.lo if which == LO else self.hi


class OneComplex:
    """An immutable compact 1-complex plus discrete tail families.

    ``glue`` is an iterable of endpoint pairs or classes, each endpoint a
    ``(cell, "lo" | "hi")`` reference on a non-degenerate cell.  Classes that
    share a reference are merged.
    """

    def __init__(
        self,
        cells: Iterable[Cell],
        glue: Iterable[Iterable[tuple[str, str]]] = (),
        tails: Iterable[str] = (),
        infinity: bool = False,
    ):
        cells = tuple(cells)
        names = [c.name for c in cells]
        if len(set(names)) != len(names):
            raise ValueError("duplicate cell names")
        tails = tuple(tails)
        if len(set(tails)) != len(tails):
            raise ValueError("duplicate tail names")
        if set(tails) & set(names):
            raise ValueError("tail names clash with cell names")
        self._index = {c.name: k for k, c in enumerate(cells)}
        self.cells = cells
        self.tails = tails
        self.infinity = bool(infinity)
        self.glue = self._merge_glue(glue)

    def _merge_glue(self, glue) -> tuple[frozenset, ...]:
        parent: dict = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for group in glue:
            refs = [tuple(r) for r in group]
            for ref in refs:
                name, end = ref
                if name not in self._index:
                    raise ValueError(f"glue references unknown cell {name!r}")
                if end not in (LO, HI):
                    raise ValueError(f"glue end must be lo or hi, got {end!r}")
                if self.cell(name).degenerate:
                    raise ValueError(f"cannot glue degenerate cell {name!r}")
                parent.setdefault(ref, ref)
            for a, b in zip(refs, refs[1:]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        classes: dict = {}
        for ref in parent:
            classes.setdefault(find(ref), set()).add(ref)
        return tuple(sorted((frozenset(c) for c in classes.values() if len(c) > 1), key=sorted))

    # -- identity --------------------------------------------------------
    def _key(self):
        return (self.cells, self.glue, self.tails, self.infinity)

    def __eq__(self, other):
        return isinstance(other, OneComplex) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        parts = [f"{c.name}[{fmt_rat(c.lo)},{fmt_rat(c.hi)}]" for c in self.cells]
        return f"OneComplex({', '.join(parts)}, glue={len(self.glue)}, tails={list(self.tails)}, inf={self.infinity})"

    # -- lookup ----------------------------------------------------------
    def cell(self, name: str) -> Cell:
        try:
            return self.cells[self._index[name]]
        except KeyError:
            raise KeyError(f"no cell named {name!r}") from None

    def has_cell(self, name: str) -> bool:
        return name in self._index

    def cell_index(self, name: str) -> int:
        return self._index[name]

    @cached_property
    def _glue_of(self) -> dict:
        out = {}
        for cls in self.glue:
            for ref in cls:
                out[ref] = cls
        return out

    def glue_class(self, cell: str, end: str) -> frozenset:
        return self._glue_of.get((cell, end), frozenset({(cell, end)}))

    @property
    def is_compact(self) -> bool:
        return not self.tails or self.infinity

    @property
    def is_discrete(self) -> bool:
        return all(c.degenerate for c in self.cells)

    @property
    def is_empty(self) -> bool:
        return not self.cells and not self.tails and not self.infinity

    # -- points ----------------------------------------------------------
    def check_point(self, p: tuple) -> tuple:
        kind = p[0]
        if kind == "c":
            c = self.cell(p[1])
            x = rat(p[2])
            if not c.lo <= x <= c.hi:
                raise ValueError(f"{fmt_point(p)} lies outside cell {c.name}")
            return ("c", c.name, x)
        if kind == "t":
            if p[1] not in self.tails or p[2] < 1:
                raise ValueError(f"no tail point {fmt_point(p)}")
            return p
        if kind == "inf":
            if not self.infinity:
                raise ValueError("space has no point at infinity")
            return INF_POINT
        raise ValueError(f"bad point {p!r}")

    def refs_at(self, p: tuple) -> list[tuple[str, str]]:
        """Endpoint references representing ``p`` (empty for cell interiors)."""
        if p[0] != "c":
            return []
        c = self.cell(p[1])
        if c.degenerate:
            return []
        if p[2] == c.lo:
            return sorted(self.glue_class(c.name, LO))
        if p[2] == c.hi:
            return sorted(self.glue_class(c.name, HI))
        return []

    def canon(self, p: tuple) -> tuple:
        """Canonical representative of a point (glued endpoints coincide)."""
        p = self.check_point(p)
        refs = self.refs_at(p)
        if len(refs) > 1:
            name, end = refs[0]
            return ("c", name, self.cell(name).end(end))
        return p

    def representations(self, p: tuple) -> list[tuple]:
        p = self.check_point(p)
        refs = self.refs_at(p)
        if len(refs) > 1:
            return [("c", n, self.cell(n).end(e)) for n, e in refs]
        return [p]

    def directions(self, p: tuple) -> list[tuple[str, Fraction, int]]:
        """Germs of one-sided arcs leaving ``p`` as ``(cell, x, sign)``."""
        if p[0] != "c":
            return []
        c = self.cell(p[1])
        if c.degenerate:
            return []
        x = p[2]
        if c.lo < x < c.hi:
            return [(c.name, x, 1), (c.name, x, -1)]
        out = []
        for name, end in self.refs_at(p):
            cc = self.cell(name)
            out.append((name, cc.lo, 1) if end == LO else (name, cc.hi, -1))
        return sorted(out)

    def is_isolated(self, p: tuple) -> bool:
        p = self.check_point(p)
        if p[0] == "t":
            return True
        if p[0] == "inf":
            return not self.tails
        return not self.directions(p)

    def vertex_points(self) -> Iterator[tuple]:
        """Canonical endpoints of all cells (isolated points included)."""
        seen = set()
        for c in self.cells:
            for x in {c.lo, c.hi}:
                q = self.canon(("c", c.name, x))
                if q not in seen:
                    seen.add(q)
                    yield q

    # -- derived complexes -------------------------------------------------
    def renamed(self, prefix: str = "", suffix: str = "") -> "OneComplex":
        f = lambda n: f"{prefix}{n}{suffix}"  # noqa: E731
        return OneComplex(
            [Cell(f(c.name), c.lo, c.hi) for c in self.cells],
            [[(f(n), e) for n, e in cls] for cls in self.glue],
            [f(t) for t in self.tails],
            self.infinity,
        )

    def with_infinity(self) -> "OneComplex":
        return OneComplex(self.cells, self.glue, self.tails, True)


def disjoint_union(*spaces: OneComplex) -> OneComplex:
    cells, glue, tails = [], [], []
    inf = False
    for sp in spaces:
        cells.extend(sp.cells)
        glue.extend(sp.glue)
        tails.extend(sp.tails)
        inf = inf or sp.infinity
    return OneComplex(cells, glue, tails, inf)


def discrete_space(names: Iterable[str], tails: Iterable[str] = (), infinity: bool = False) -> OneComplex:
    """Finite discrete space: one isolated cell at coordinate 0 per name."""
    return OneComplex([Cell(n, 0, 0) for n in names], (), tails, infinity)
