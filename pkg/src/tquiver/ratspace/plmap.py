"""Piecewise-linear rational maps between OneComplexes.

A map is given per domain cell by affine pieces ``x -> slope*x + intercept``
on closed subintervals, each landing in one named codomain cell.  Domains are
compact (no tails, no point at infinity); codomains may carry tails, which
are simply never hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .complex import OneComplex, fmt_rat, rat
from .subset import ALL_TAIL, NO_TAIL, SubSet, _cs_canon, _sync_glue

INFINITE = math.inf


class PLMapError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Piece:
    lo: Fraction
    hi: Fraction
    slope: Fraction
    intercept: Fraction
    target: str

    def __call__(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def __str__(self):
        return (
            f"[{fmt_rat(self.lo)},{fmt_rat(self.hi)}] slope {fmt_rat(self.slope)}"
            f" intercept {fmt_rat(self.intercept)} -> {self.target}"
        )


def _merge(pieces: list[Piece]) -> tuple[Piece, ...]:
    out: list[Piece] = []
    for p in pieces:
        if out:
            q = out[-1]
            if (q.slope, q.intercept, q.target) == (p.slope, p.intercept, p.target):
                out[-1] = Piece(q.lo, p.hi, q.slope, q.intercept, q.target)
                continue
        out.append(p)
    return tuple(out)


class PLMap:
    """Immutable PL map; pieces are checked for coverage and range."""

    def __init__(self, domain: OneComplex, codomain: OneComplex, pieces: dict):
        if domain.tails or domain.infinity:
            raise PLMapError("PL maps need a compact domain without tails")
        self.domain = domain
        self.codomain = codomain
        table = {}
        for c in domain.cells:
            raw = pieces.get(c.name)
            if not raw:
                raise PLMapError(f"no pieces for domain cell {c.name!r}")
            ps = sorted(
                Piece(rat(p.lo), rat(p.hi), rat(p.slope), rat(p.intercept), p.target) if isinstance(p, Piece) else Piece(*(rat(v) for v in p[:4]), p[4])
                for p in raw
            )
            self._check_cover(c, ps)
            for p in ps:
                if not codomain.has_cell(p.target):
                    raise PLMapError(f"piece on {c.name} targets unknown cell {p.target!r}")
                t = codomain.cell(p.target)
                for y in (p(p.lo), p(p.hi)):
                    if not t.lo <= y <= t.hi:
                        raise PLMapError(f"piece {p} on {c.name} leaves cell {t.name} (value {fmt_rat(y)})")
            table[c.name] = _merge(ps)
        extra = set(pieces) - {c.name for c in domain.cells}
        if extra:
            raise PLMapError(f"pieces for unknown cells {sorted(extra)}")
        self.pieces = table

    @staticmethod
    def _check_cover(c, ps):
        if c.degenerate:
            if len(ps) != 1 or ps[0].lo != c.lo or ps[0].hi != c.hi:
                raise PLMapError(f"isolated cell {c.name} needs exactly one piece at {fmt_rat(c.lo)}")
            return
        at = c.lo
        for p in ps:
            if p.lo != at or p.hi <= p.lo:
                raise PLMapError(f"pieces on {c.name} do not tile [{fmt_rat(c.lo)},{fmt_rat(c.hi)}] near {fmt_rat(at)}")
            at = p.hi
        if at != c.hi:
            raise PLMapError(f"pieces on {c.name} stop at {fmt_rat(at)}")

    # -- constructors ----------------------------------------------------
    @classmethod
    def affine(cls, domain, codomain, spec: dict) -> "PLMap":
        """One affine piece per cell: ``{cell: (slope, intercept, target)}``."""
        pieces = {}
        for c in domain.cells:
            m, b, t = spec[c.name]
            pieces[c.name] = [Piece(c.lo, c.hi, rat(m), rat(b), t)]
        return cls(domain, codomain, pieces)

    @classmethod
    def from_nodes(cls, domain, codomain, nodes: dict) -> "PLMap":
        """Interpolate ``{cell: [(x, target, y), ...]}``.

        Consecutive nodes with equal ``x`` switch the codomain representation
        at a glued point without creating a piece.
        """
        pieces = {}
        for c in domain.cells:
            ns = [(rat(x), t, rat(y)) for x, t, y in nodes[c.name]]
            if c.degenerate:
                x, t, y = ns[0]
                pieces[c.name] = [Piece(c.lo, c.hi, Fraction(0), y, t)]
                continue
            out = []
            for (x0, t0, y0), (x1, t1, y1) in zip(ns, ns[1:]):
                if x0 == x1:
                    continue
                if t0 != t1:
                    raise PLMapError(f"nodes {fmt_rat(x0)},{fmt_rat(x1)} on {c.name} land in different cells")
                m = (y1 - y0) / (x1 - x0)
                out.append(Piece(x0, x1, m, y0 - m * x0, t0))
            pieces[c.name] = out
        return cls(domain, codomain, pieces)

    @classmethod
    def identity(cls, space: OneComplex) -> "PLMap":
        return cls.affine(space, space, {c.name: (1, 0, c.name) for c in space.cells})

    # -- identity --------------------------------------------------------
    def _key(self):
        return (self.domain, self.codomain, tuple(sorted(self.pieces.items())))

    def __eq__(self, other):
        return isinstance(other, PLMap) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"PLMap({sum(len(v) for v in self.pieces.values())} pieces)"

    # -- evaluation ------------------------------------------------------
    def pieces_at(self, cell: str, x: Fraction) -> list[Piece]:
        return [p for p in self.pieces[cell] if p.lo <= x <= p.hi]

    def value_at(self, cell: str, x: Fraction) -> tuple:
        p = next(p for p in self.pieces[cell] if p.lo <= x <= p.hi)
        return self.codomain.canon(("c", p.target, p(x)))

    def __call__(self, point: tuple) -> tuple:
        point = self.domain.check_point(point)
        if point[0] != "c":
            raise PLMapError("domain points are cell points")
        return self.value_at(point[1], point[2])

    def breakpoints(self, cell: str) -> list[Fraction]:
        ps = self.pieces[cell]
        return sorted({p.lo for p in ps} | {p.hi for p in ps})

    def continuity_failures(self) -> list[tuple]:
        """Domain points where adjacent pieces or glued ends disagree."""
        bad = []
        for name, ps in self.pieces.items():
            for a, b in zip(ps, ps[1:]):
                ya = self.codomain.canon(("c", a.target, a(a.hi)))
                yb = self.codomain.canon(("c", b.target, b(b.lo)))
                if ya != yb:
                    bad.append(("c", name, a.hi))
        for cls in self.domain.glue:
            vals = set()
            for name, end in cls:
                c = self.domain.cell(name)
                vals.add(self.value_at(name, c.end(end)))
            if len(vals) > 1:
                name, end = min(cls)
                bad.append(self.domain.canon(("c", name, self.domain.cell(name).end(end))))
        return bad

    # -- set maps --------------------------------------------------------
    def image(self, S: SubSet) -> SubSet:
        if S.space != self.domain:
            raise ValueError("subset is not in the map's domain")
        ivs, pts = [], []
        for c in self.domain.cells:
            cs = S.cellset(c.name)
            if cs.empty:
                continue
            for p in self.pieces[c.name]:
                for atom in cs.atoms():
                    if not atom[-1]:
                        continue
                    if atom[0] == "p":
                        x = atom[1]
                        if p.lo <= x <= p.hi:
                            pts.append(("c", p.target, p(x)))
                        continue
                    a, b = max(atom[1], p.lo), min(atom[2], p.hi)
                    if a >= b:
                        continue
                    # a piece end strictly inside the gap is itself covered
                    ac, bc = a > atom[1], b < atom[2]
                    ya, yb = p(a), p(b)
                    if ya == yb:
                        pts.append(("c", p.target, ya))
                    elif ya < yb:
                        ivs.append((p.target, ya, yb, ac, bc))
                    else:
                        ivs.append((p.target, yb, ya, bc, ac))
        return SubSet.build(self.codomain, ivs, pts)

    def _pointwise(self, xs_of: Callable, test: Callable) -> SubSet:
        """Domain subset from exact tests on refined atoms of each cell."""
        cells = []
        for c in self.domain.cells:
            xs = sorted(set(xs_of(c)) | {c.lo, c.hi})
            pbits = tuple(test(c.name, x) for x in xs)
            gbits = tuple(test(c.name, (a + b) / 2) for a, b in zip(xs, xs[1:]))
            cells.append(_cs_canon(xs, pbits, gbits))
        return SubSet(self.domain, _sync_glue(self.domain, cells), [], False)

    def preimage(self, T: SubSet) -> SubSet:
        if T.space != self.codomain:
            raise ValueError("subset is not in the map's codomain")

        def xs_of(c):
            xs = set(self.breakpoints(c.name))
            for p in self.pieces[c.name]:
                if p.slope == 0:
                    continue
                for y in T.cellset(p.target).breaks:
                    x = (y - p.intercept) / p.slope
                    if p.lo < x < p.hi:
                        xs.add(x)
            return xs

        return self._pointwise(xs_of, lambda name, x: T.contains(self.value_at(name, x)))

    def fiber(self, q: tuple) -> set | float:
        """Canonical preimage points of ``q``, or ``INFINITE``."""
        q = self.codomain.check_point(q)
        if q[0] != "c":
            return set()
        out = set()
        for _, tname, y in self.codomain.representations(q):
            for name, ps in self.pieces.items():
                for p in ps:
                    if p.target != tname:
                        continue
                    if p.slope == 0:
                        if p.intercept == y:
                            if p.lo < p.hi:
                                return INFINITE
                            out.add(self.domain.canon(("c", name, p.lo)))
                        continue
                    x = (y - p.intercept) / p.slope
                    if p.lo <= x <= p.hi:
                        out.add(self.domain.canon(("c", name, x)))
        return out

    def fiber_cardinality(self, q: tuple) -> int | float:
        f = self.fiber(q)
        return INFINITE if f is INFINITE else len(f)

    def fiber_level_set(self, pred: Callable[[int | float], bool]) -> SubSet:
        """Codomain points whose fiber cardinality satisfies ``pred``."""
        marks: dict[str, set] = {c.name: {c.lo, c.hi} for c in self.codomain.cells}
        for ps in self.pieces.values():
            for p in ps:
                marks[p.target].update((p(p.lo), p(p.hi)))
        cells = []
        for c in self.codomain.cells:
            xs = sorted(marks[c.name])
            pbits = tuple(pred(self.fiber_cardinality(("c", c.name, x))) for x in xs)
            gbits = tuple(pred(self.fiber_cardinality(("c", c.name, (a + b) / 2))) for a, b in zip(xs, xs[1:]))
            cells.append(_cs_canon(xs, pbits, gbits))
        zero = pred(0)
        tails = [ALL_TAIL if zero else NO_TAIL] * len(self.codomain.tails)
        return SubSet(self.codomain, _sync_glue(self.codomain, cells), tails, zero)

    # -- local structure -------------------------------------------------
    def _germ(self, cell: str, x: Fraction, sign: int):
        """Codomain direction hit by the domain germ, or None if constant."""
        if sign > 0:
            p = next(p for p in self.pieces[cell] if p.lo <= x < p.hi)
        else:
            p = next(p for p in self.pieces[cell] if p.lo < x <= p.hi)
        if p.slope == 0:
            return None
        d = sign if p.slope > 0 else -sign
        return (p.target, p(x), d)

    def _local(self, point: tuple):
        """(domain germs' images, codomain directions at the image point)."""
        q = self.value_at(point[1], point[2])
        hit = [self._germ(n, x, s) for n, x, s in self.domain.directions(point)]
        return hit, self.codomain.directions(q)

    def check_points(self) -> list[tuple]:
        """Finite set of domain points on which openness/local homeo are decided."""
        seen, out = set(), []
        for c in self.domain.cells:
            xs = set(self.breakpoints(c.name))
            for p in self.pieces[c.name]:
                xs.add((p.lo + p.hi) / 2)
            for x in sorted(xs):
                q = self.domain.canon(("c", c.name, x))
                if q not in seen:
                    seen.add(q)
                    out.append(q)
        return out

    def is_open_at(self, point: tuple) -> bool:
        hit, dirs = self._local(point)
        got = {h for h in hit if h is not None}
        return all(d in got for d in dirs)

    def is_local_homeo_at(self, point: tuple) -> bool:
        hit, dirs = self._local(point)
        if any(h is None for h in hit):
            return not dirs and not hit
        return len(hit) == len(dirs) and set(hit) == set(dirs)

    def open_map_witness(self) -> tuple | None:
        for p in self.check_points():
            if not self.is_open_at(p):
                return p
        return None

    def is_open_map(self) -> tuple[bool, tuple | None]:
        w = self.open_map_witness()
        return w is None, w

    def local_homeo_region(self) -> SubSet:
        return self._pointwise(
            lambda c: self.breakpoints(c.name),
            lambda name, x: self.is_local_homeo_at(self.domain.canon(("c", name, x))),
        )

    def describe(self) -> str:
        lines = []
        for name in sorted(self.pieces):
            for p in self.pieces[name]:
                lines.append(f"{name} {p}")
        return "\n".join(lines)
