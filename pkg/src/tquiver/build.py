"""Constructions: tails at sinks, one-point unitization, products with a space."""

from __future__ import annotations

from .quiver import DiscreteQuiver, PLQuiver, QuiverError, TailedQuiver, Unsupported, classify
from .ratspace import OneComplex, Piece, PLMap, disjoint_union


class CompactVertexSpace(QuiverError):
    """The vertex space is already compact, so there is nothing to adjoin."""


def add_tails(q):
    """Attach a tail at every sink.

    Discrete quivers get explicit tail families ``w -> w~#1 -> w~#2 -> ...``;
    PL quivers get symbolic level copies of their sink set.
    """
    if isinstance(q, DiscreteQuiver):
        sinks = [v for v in q.vertices if q.out_degree[v] == 0]
        if not sinks:
            return q
        if q.infinity:
            raise Unsupported("adding tails after unitization would break the compactification")
        return q.replace(tails=tuple(q.tails) + tuple(sinks))
    if isinstance(q, PLQuiver):
        return TailedQuiver(q)
    if isinstance(q, TailedQuiver):
        return q
    raise TypeError(f"not a quiver: {q!r}")


def unitize(q):
    """Adjoin a point at infinity compactifying the tail families."""
    if isinstance(q, DiscreteQuiver):
        if q.infinity or not q.tails:
            raise CompactVertexSpace("vertex space is compact")
        return q.replace(infinity=True)
    if isinstance(q, TailedQuiver):
        if q.infinity or not q.has_tails:
            raise CompactVertexSpace("vertex space is compact")
        return TailedQuiver(q.base, infinity=True)
    if isinstance(q, PLQuiver):
        raise CompactVertexSpace("vertex space is compact")
    raise TypeError(f"not a quiver: {q!r}")


def product_name(v: str, cell: str) -> str:
    return f"{v}:{cell}"


def product_with_space(E: DiscreteQuiver, X: OneComplex) -> PLQuiver:
    """``E x X``: a copy of ``X`` per vertex and per edge, maps identity on ``X``."""
    if not isinstance(E, DiscreteQuiver):
        raise TypeError("product needs a discrete quiver")
    if E.inf_edges:
        raise Unsupported("products need explicit edges; infinite multiplicities are rejected")
    if E.tails or E.infinity:
        raise Unsupported("products need a finite graph")
    if X.tails or X.infinity:
        raise Unsupported("products need a compact complex")
    V = disjoint_union(*(X.renamed(prefix=f"{v}:") for v in E.vertices)) if E.vertices else OneComplex([])
    F = disjoint_union(*(X.renamed(prefix=f"{e.name}:") for e in E.edges)) if E.edges else OneComplex([])

    def fibre(end: str):
        pieces = {}
        for e in E.edges:
            v = e.rng if end == "r" else e.src
            for c in X.cells:
                pieces[product_name(e.name, c.name)] = [Piece(c.lo, c.hi, 0 if c.degenerate else 1, c.lo if c.degenerate else 0, product_name(v, c.name))]
        return PLMap(F, V, pieces)

    return PLQuiver(V, F, fibre("r"), fibre("s"))


def product_regular(E: DiscreteQuiver, X: OneComplex):
    """``reg(E) x X`` as a subset of the product vertex space, built directly."""
    from .ratspace import SubSet

    P = product_with_space(E, X)
    reg = classify(E).reg
    cells = [product_name(v, c.name) for v in E.names_of(reg) for c in X.cells]
    return SubSet.build(P.vertex_space, cells=cells)


__all__ = ["CompactVertexSpace", "add_tails", "product_name", "product_regular", "product_with_space", "unitize"]
