"""Cutting compact complexes down to closed subsets.

A :class:`Carving` turns a closed subset ``C`` of a compact complex ``X``
into a complex of its own.  Every new cell is a sub-interval of an old cell
with the *same coordinates*, so PL pieces carry over unchanged and only
their target names move.  New names record provenance: an old cell kept
whole keeps its name (plus ``tag``), a sub-interval becomes
``cell<tag>@a..b`` and an isolated point ``cell<tag>@x``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .complex import HI, LO, Cell, OneComplex, fmt_rat
from .plmap import Piece, PLMap
from .subset import SubSet, _cs_canon, _sync_glue


@dataclass(frozen=True)
class Part:
    name: str
    old: str
    lo: Fraction
    hi: Fraction

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi


class Carving:
    def __init__(self, old: OneComplex, keep: SubSet | None = None, cuts: dict | None = None, tag: str = ""):
        if old.tails or old.infinity:
            raise ValueError("only compact complexes without tails can be carved")
        keep = SubSet.full(old) if keep is None else keep
        if not keep.is_closed():
            raise ValueError("carving needs a closed subset")
        self.old = old
        self.tag = tag
        cuts = cuts or {}
        parts: list[Part] = []
        for c in old.cells:
            cs = keep.cellset(c.name)
            comps = _components(cs)
            whole = len(comps) == 1 and comps[0] == (c.lo, c.hi)
            for a, b in comps:
                if a == b:
                    parts.append(Part(f"{c.name}{tag}@{fmt_rat(a)}" if not c.degenerate else f"{c.name}{tag}", c.name, a, b))
                    continue
                xs = [a] + sorted(x for x in set(cuts.get(c.name, ())) if a < x < b) + [b]
                for u, v in zip(xs, xs[1:]):
                    if whole and len(xs) == 2:
                        name = f"{c.name}{tag}"
                    else:
                        name = f"{c.name}{tag}@{fmt_rat(u)}..{fmt_rat(v)}"
                    parts.append(Part(name, c.name, u, v))
        # drop degenerate parts sitting on an old glued endpoint that is
        # already represented elsewhere
        kept: list[Part] = []
        taken = set()
        for p in parts:
            if p.degenerate and not old.cell(p.old).degenerate:
                q = old.canon(("c", p.old, p.lo))
                if q in taken or self._has_nondeg_rep(parts, q):
                    continue
                taken.add(q)
            kept.append(p)
        self.parts = tuple(kept)
        self._by_old: dict[str, list[Part]] = {}
        for p in self.parts:
            self._by_old.setdefault(p.old, []).append(p)
        glue = []
        for cls in old.glue:
            refs = []
            for name, end in cls:
                x = old.cell(name).end(end)
                for p in self._by_old.get(name, []):
                    if p.degenerate:
                        continue
                    if p.lo == x:
                        refs.append((p.name, LO))
                    if p.hi == x:
                        refs.append((p.name, HI))
            if len(refs) > 1:
                glue.append(refs)
        for ps in self._by_old.values():
            for p, q in zip(ps, ps[1:]):
                if not p.degenerate and not q.degenerate and p.hi == q.lo:
                    glue.append([(p.name, HI), (q.name, LO)])
        self.base_glue = glue
        self.space = OneComplex([Cell(p.name, p.lo, p.hi) for p in self.parts], glue)

    def _has_nondeg_rep(self, parts, q) -> bool:
        reps = set(self.old.representations(q))
        for p in parts:
            if p.degenerate:
                continue
            for x in (p.lo, p.hi):
                if ("c", p.old, x) in reps:
                    return True
        return False

    # -- points --------------------------------------------------------------
    def refs_at(self, point: tuple) -> list[tuple[str, str]]:
        """New endpoint references representing an old point."""
        out = []
        for _, name, x in self.old.representations(point):
            for p in self._by_old.get(name, []):
                if p.degenerate:
                    continue
                if p.lo == x:
                    out.append((p.name, LO))
                if p.hi == x:
                    out.append((p.name, HI))
        return sorted(set(out))

    def locate(self, old_cell: str, x: Fraction) -> tuple | None:
        """The new canonical point for an old point, or None if carved away."""
        for _, name, y in self.old.representations(("c", old_cell, x)):
            for p in self._by_old.get(name, []):
                if p.lo <= y <= p.hi:
                    return self.space.canon(("c", p.name, y))
        return None

    def locate_interval(self, old_cell: str, a: Fraction, b: Fraction) -> str | None:
        for p in self._by_old.get(old_cell, []):
            if p.lo <= a and b <= p.hi and not p.degenerate:
                return p.name
        return None

    def part(self, name: str) -> Part:
        return next(p for p in self.parts if p.name == name)

    def boundaries(self, old_cell: str) -> set:
        out = set()
        for p in self._by_old.get(old_cell, []):
            out.update((p.lo, p.hi))
        return out

    # -- sets ----------------------------------------------------------------
    def push(self, S: SubSet, space: OneComplex | None = None) -> SubSet:
        """Restrict an old subset to the carved complex (or a glued extension)."""
        space = space or self.space
        ivs, pts = [], []
        for p in self.parts:
            cs = S.cellset(p.old)
            for atom in cs.atoms():
                if not atom[-1]:
                    continue
                if atom[0] == "p":
                    if p.lo <= atom[1] <= p.hi:
                        pts.append(("c", p.name, atom[1]))
                    continue
                a, b = max(atom[1], p.lo), min(atom[2], p.hi)
                if a < b:
                    ivs.append((p.name, a, b, a > atom[1], b < atom[2]))
        return SubSet.build(space, ivs, pts)

    def pull(self, S: SubSet) -> SubSet:
        """An old subset equal to a carved subset (restricted to this carving's cells)."""
        ivs, pts = [], []
        for p in self.parts:
            cs = S.cellset(p.name)
            for atom in cs.atoms():
                if not atom[-1]:
                    continue
                if atom[0] == "p":
                    pts.append(("c", p.old, atom[1]))
                else:
                    ivs.append((p.old, atom[1], atom[2], False, False))
        return SubSet.build(self.old, ivs, pts)


def _components(cs) -> list[tuple[Fraction, Fraction]]:
    """Maximal closed runs of a closed cell set."""
    out = []
    atoms = list(cs.atoms())
    i = 0
    while i < len(atoms):
        if not atoms[i][-1]:
            i += 1
            continue
        j = i
        while j + 1 < len(atoms) and atoms[j + 1][-1]:
            j += 1
        a = atoms[i][1]
        b = atoms[j][1] if atoms[j][0] == "p" else atoms[j][2]
        out.append((a, b))
        i = j + 1
    return out


def carve_pieces(m: PLMap, dom: Carving, cod: Carving) -> dict:
    """Pieces of ``m`` restricted to ``dom`` and re-targeted into ``cod``.

    The caller guarantees that ``m`` maps the kept part of the domain into
    the kept part of the codomain.
    """
    out: dict[str, list[Piece]] = {}
    for part in dom.parts:
        ps = []
        for pc in m.pieces[part.old]:
            a, b = max(pc.lo, part.lo), min(pc.hi, part.hi)
            if a > b or (a == b and not part.degenerate):
                continue
            if part.degenerate:
                y = pc(a)
                q = cod.locate(pc.target, y)
                if q is None:
                    raise ValueError(f"image of {part.name} leaves the carved codomain")
                ps = [Piece(part.lo, part.hi, Fraction(0), q[2], q[1])]
                break
            xs = {a, b}
            if pc.slope != 0:
                for y in cod.boundaries(pc.target):
                    x = (y - pc.intercept) / pc.slope
                    if a < x < b:
                        xs.add(x)
            xs = sorted(xs)
            for u, v in zip(xs, xs[1:]):
                yu, yv = pc(u), pc(v)
                if yu == yv:
                    q = cod.locate(pc.target, yu)
                    if q is None:
                        raise ValueError(f"image of {part.name} leaves the carved codomain")
                    ps.append(Piece(u, v, Fraction(0), q[2], q[1]))
                    continue
                tgt = cod.locate_interval(pc.target, min(yu, yv), max(yu, yv))
                if tgt is None:
                    raise ValueError(f"image of {part.name} leaves the carved codomain")
                ps.append(Piece(u, v, pc.slope, pc.intercept, tgt))
        out[part.name] = ps
    return out


def glue_extra(space: OneComplex, extra: Iterable[Iterable[tuple[str, str]]]) -> OneComplex:
    return OneComplex(space.cells, list(space.glue) + [list(g) for g in extra], space.tails, space.infinity)


def transport(S: SubSet, space: OneComplex) -> SubSet:
    """Re-home a subset onto a complex with the same cells (e.g. extra glue)."""
    cells = [S.cellset(c.name) for c in space.cells]
    cells = [_cs_canon(cs.breaks, cs.points, cs.gaps) for cs in cells]
    return SubSet(space, _sync_glue(space, cells), [S.tail(t) for t in space.tails] if space.tails else [], S.inf)
