"""Exact rational 1-complexes, their subsets and PL maps."""

from .complex import (
    HI,
    INF_POINT,
    LO,
    Cell,
    OneComplex,
    cell_point,
    discrete_space,
    disjoint_union,
    fmt_point,
    fmt_rat,
    rat,
    tail_point,
)
from .plmap import INFINITE, Piece, PLMap, PLMapError
from .subset import (
    ALL_TAIL,
    NO_TAIL,
    AmbientMismatch,
    SubSet,
    TailPart,
    format_subset,
    parse_subset,
    tail_cofinite,
    tail_finite,
    tail_from,
)

__all__ = [
    "ALL_TAIL", "HI", "INFINITE", "INF_POINT", "LO", "NO_TAIL",
    "AmbientMismatch", "Cell", "OneComplex", "PLMap", "PLMapError", "Piece", "SubSet", "TailPart",
    "cell_point", "discrete_space", "disjoint_union", "fmt_point", "fmt_rat", "format_subset",
    "parse_subset", "rat", "tail_cofinite", "tail_finite", "tail_from", "tail_point",
]
