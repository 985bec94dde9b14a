"""The line-oriented quiver file format.

Discrete files::

    quiver v1 discrete
    vertex v
    vertex w
    edge e v w weight 1/2
    edges-inf w v
    tail w
    infinity

PL files declare a vertex block and an edge block, then the two maps::

    quiver v1 pl
    vertices
    cell v [0, 2]
    edges
    cell e [0, 1]
    map s piece e [0, 1] slope 1 intercept 0 -> v
    map r piece e [0, 1] slope 2 intercept 0 -> v

Isolated cells may be written ``cell p {0}``; ``glue a.hi b.lo`` joins
endpoints of the current block; ``tails sinks`` adds tails along the sinks
and ``infinity`` unitizes.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..quiver import DiscreteQuiver, Edge, PLQuiver, TailedQuiver
from ..ratspace import HI, LO, Cell, OneComplex, Piece, PLMap, fmt_rat

_TOKEN = re.compile(r"\s*(->|[\[\]{},]|[^\s\[\]{},]+)")
_RAT = re.compile(r"-?\d+(?:/\d+)?$")


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.msg, self.line, self.col, self.source = msg, line, col, source


@dataclass
class Tok:
    text: str
    col: int


class _Line:
    def __init__(self, text: str, no: int, source: str):
        self.no, self.source = no, source
        self.toks: list[Tok] = []
        pos = 0
        body = text.split("#", 1)[0].rstrip()
        while pos < len(body):
            m = _TOKEN.match(body, pos)
            if not m or not m.group(1):
                break
            self.toks.append(Tok(m.group(1), m.start(1) + 1))
            pos = m.end()
        self.i = 0

    def error(self, msg: str, tok: Tok | None = None) -> ParseError:
        col = tok.col if tok else (self.toks[-1].col + len(self.toks[-1].text) if self.toks else 1)
        return ParseError(msg, self.no, col, self.source)

    def more(self) -> bool:
        return self.i < len(self.toks)

    def peek(self) -> Tok | None:
        return self.toks[self.i] if self.more() else None

    def take(self, what: str = "token") -> Tok:
        if not self.more():
            raise self.error(f"expected {what}")
        t = self.toks[self.i]
        self.i += 1
        return t

    def word(self, what: str = "name") -> str:
        t = self.take(what)
        if t.text in "[]{},->" and len(t.text) <= 2:
            raise self.error(f"expected {what}, got {t.text!r}", t)
        return t.text

    def expect(self, text: str):
        t = self.take(repr(text))
        if t.text != text:
            raise self.error(f"expected {text!r}, got {t.text!r}", t)

    def rational(self) -> Fraction:
        t = self.take("rational")
        if not _RAT.match(t.text):
            raise self.error(f"malformed rational {t.text!r}", t)
        num, _, den = t.text.partition("/")
        if den and int(den) == 0:
            raise self.error(f"malformed rational {t.text!r}: zero denominator", t)
        return Fraction(int(num), int(den) if den else 1)

    def done(self):
        if self.more():
            t = self.peek()
            raise self.error(f"unexpected {t.text!r}", t)

    def interval(self) -> tuple[Fraction, Fraction]:
        t = self.take("interval")
        if t.text == "{":
            x = self.rational()
            self.expect("}")
            return x, x
        if t.text != "[":
            raise self.error(f"expected '[' or '{{', got {t.text!r}", t)
        a = self.rational()
        self.expect(",")
        b = self.rational()
        self.expect("]")
        return a, b

    def endref(self) -> tuple[str, str]:
        t = self.take("cell.end")
        name, dot, end = t.text.rpartition(".")
        if not dot or end not in (LO, HI) or not name:
            raise self.error(f"expected <cell>.lo or <cell>.hi, got {t.text!r}", t)
        return name, end


def _lines(text: str, source: str):
    for no, raw in enumerate(text.splitlines(), 1):
        ln = _Line(raw, no, source)
        if ln.toks:
            yield ln


def parse(text: str, source: str = "<input>"):
    """Parse a quiver document into a Discrete, PL or Tailed quiver."""
    lines = list(_lines(text, source))
    if not lines:
        raise ParseError("empty document", 1, 1, source)
    head = lines[0]
    head.expect("quiver")
    t = head.take("version")
    if t.text != "v1":
        raise head.error(f"unsupported format version {t.text!r}", t)
    kind_tok = head.take("kind")
    head.done()
    if kind_tok.text == "discrete":
        return _parse_discrete(lines[1:])
    if kind_tok.text == "pl":
        return _parse_pl(lines[1:])
    raise head.error(f"unknown kind {kind_tok.text!r}", kind_tok)


def _parse_discrete(lines) -> DiscreteQuiver:
    vertices, edges, inf_edges, tails = [], [], [], []
    infinity = False
    for ln in lines:
        key = ln.take()
        if key.text == "vertex":
            vertices.append(ln.word("vertex name"))
        elif key.text == "edge":
            name, src, rng = ln.word("edge name"), ln.word("source"), ln.word("range")
            weight = Fraction(1)
            if ln.more():
                ln.expect("weight")
                weight = ln.rational()
            edges.append((ln, Edge(name, src, rng, weight)))
        elif key.text == "edges-inf":
            inf_edges.append((ln, (ln.word("source"), ln.word("range"))))
        elif key.text == "tail":
            tails.append((ln, ln.word("vertex")))
        elif key.text == "infinity":
            infinity = True
        else:
            raise ln.error(f"unknown directive {key.text!r}", key)
        ln.done()
    vset = set(vertices)
    for ln, e in edges:
        for v in (e.src, e.rng):
            if v not in vset:
                raise ln.error(f"unknown vertex {v!r}")
    for ln, (a, b) in inf_edges:
        for v in (a, b):
            if v not in vset:
                raise ln.error(f"unknown vertex {v!r}")
    for ln, w in tails:
        if w not in vset:
            raise ln.error(f"unknown vertex {w!r}")
    try:
        return DiscreteQuiver(vertices, [e for _, e in edges], [p for _, p in inf_edges], [w for _, w in tails], infinity)
    except ValueError as exc:
        raise ParseError(str(exc), lines[-1].no if lines else 1, 1, lines[0].source if lines else "<input>") from exc


def _parse_pl(lines):
    blocks = {"vertices": ([], []), "edges": ([], [])}
    pieces = {"r": {}, "s": {}}
    cur = None
    tails = infinity = False
    last = None
    for ln in lines:
        last = ln
        key = ln.take()
        if key.text in blocks:
            cur = key.text
        elif key.text == "cell":
            if cur is None:
                raise ln.error("cell outside a 'vertices' or 'edges' block", key)
            name = ln.word("cell name")
            a, b = ln.interval()
            if a > b:
                raise ln.error(f"cell {name}: lower end exceeds upper end")
            blocks[cur][0].append(Cell(name, a, b))
        elif key.text == "glue":
            if cur is None:
                raise ln.error("glue outside a block", key)
            refs = [ln.endref()]
            while ln.more():
                refs.append(ln.endref())
            if len(refs) < 2:
                raise ln.error("glue needs at least two endpoints")
            blocks[cur][1].append(refs)
        elif key.text == "map":
            which = ln.take("r or s")
            if which.text not in pieces:
                raise ln.error(f"expected r or s, got {which.text!r}", which)
            ln.expect("piece")
            cell = ln.word("edge cell")
            a, b = ln.interval()
            ln.expect("slope")
            m = ln.rational()
            ln.expect("intercept")
            c = ln.rational()
            ln.expect("->")
            tgt = ln.word("vertex cell")
            pieces[which.text].setdefault(cell, []).append(Piece(a, b, m, c, tgt))
        elif key.text == "tails":
            ln.expect("sinks")
            tails = True
        elif key.text == "infinity":
            infinity = True
        else:
            raise ln.error(f"unknown directive {key.text!r}", key)
        ln.done()
    src = last.source if last else "<input>"
    no = last.no if last else 1
    try:
        V = OneComplex(*blocks["vertices"])
        E = OneComplex(*blocks["edges"])
        maps = {}
        for k in ("r", "s"):
            table = {c.name: sorted(pieces[k].get(c.name, []), key=lambda p: p.lo) for c in E.cells}
            unknown = set(pieces[k]) - {c.name for c in E.cells}
            if unknown:
                raise ValueError(f"map {k} has pieces on unknown edge cells {sorted(unknown)}")
            maps[k] = PLMap(E, V, table)
        q = PLQuiver(V, E, maps["r"], maps["s"])
    except ValueError as exc:
        raise ParseError(str(exc), no, 1, src) from exc
    if infinity and not tails:
        raise ParseError("infinity needs 'tails sinks'", no, 1, src)
    if tails:
        return TailedQuiver(q, infinity)
    return q


def load(path) -> object:
    p = Path(path)
    return parse(p.read_text(encoding="utf-8"), str(p))


# -- printing ------------------------------------------------------------------------------

def _interval(c: Cell) -> str:
    if c.degenerate:
        return "{" + fmt_rat(c.lo) + "}"
    return f"[{fmt_rat(c.lo)}, {fmt_rat(c.hi)}]"


def _space_lines(X: OneComplex) -> list[str]:
    out = [f"cell {c.name} {_interval(c)}" for c in X.cells]
    for cls in X.glue:
        out.append("glue " + " ".join(f"{n}.{e}" for n, e in sorted(cls)))
    return out


def dump(q) -> str:
    """Canonical text of a quiver; ``parse(dump(q)) == q``."""
    if isinstance(q, DiscreteQuiver):
        out = ["quiver v1 discrete"]
        out += [f"vertex {v}" for v in q.vertices]
        for e in q.edges:
            w = "" if e.weight == 1 else f" weight {fmt_rat(e.weight)}"
            out.append(f"edge {e.name} {e.src} {e.rng}{w}")
        out += [f"edges-inf {a} {b}" for a, b in q.inf_edges]
        out += [f"tail {w}" for w in q.tails]
        if q.infinity:
            out.append("infinity")
        return "\n".join(out) + "\n"
    tail_lines = []
    if isinstance(q, TailedQuiver):
        tail_lines = ["tails sinks"] + (["infinity"] if q.infinity else [])
        q = q.base
    if not isinstance(q, PLQuiver):
        raise TypeError(f"not a quiver: {q!r}")
    out = ["quiver v1 pl", "vertices"] + _space_lines(q.vertex_space)
    out += ["edges"] + _space_lines(q.edge_space)
    for k, m in (("s", q.s), ("r", q.r)):
        for c in q.edge_space.cells:
            for p in m.pieces[c.name]:
                iv = _interval(Cell(c.name, p.lo, p.hi))
                out.append(f"map {k} piece {c.name} {iv} slope {fmt_rat(p.slope)} intercept {fmt_rat(p.intercept)} -> {p.target}")
    return "\n".join(out + tail_lines) + "\n"


def parse_complex(text: str) -> OneComplex:
    """A complex literal such as ``"x [0,1]; glue x.lo x.hi"`` or ``"pt {0}"``."""
    cells, glue = [], []
    for no, chunk in enumerate(text.split(";"), 1):
        ln = _Line(chunk, no, "<complex>")
        if not ln.toks:
            continue
        if ln.peek().text == "glue":
            ln.take()
            refs = [ln.endref()]
            while ln.more():
                refs.append(ln.endref())
            glue.append(refs)
            continue
        if ln.peek().text == "cell":
            ln.take()
        name = ln.word("cell name")
        a, b = ln.interval()
        ln.done()
        cells.append(Cell(name, a, b))
    try:
        return OneComplex(cells, glue)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1, "<complex>") from exc


__all__ = ["ParseError", "dump", "load", "parse", "parse_complex"]
