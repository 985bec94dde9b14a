from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from gen import random_complex, random_pl, random_subset
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import dyadic_points

from tquiver.ratspace import (
    Cell,
    OneComplex,
    PLMap,
    Piece,
    PLMapError,
    SubSet,
    discrete_space,
    format_subset,
    parse_subset,
)

seeds = st.integers(0, 2**32 - 1)


def grid(X: OneComplex, depth: int = 4):
    for c in X.cells:
        for x in dyadic_points(c.lo, c.hi, depth):
            yield ("c", c.name, x)


def space_and_set(seed):
    rng = random.Random(seed)
    X = random_complex(rng, "x", rng.randint(1, 2), rng.randint(0, 1), circle=rng.random() < 0.3)
    return X, random_subset(rng, X, 3)


def test_tent_is_open(fixture):
    q = fixture("tent")
    assert q.r.is_open_map() == (True, None)


def test_fold_is_not_open_at_half(fixture):
    q = fixture("fold")
    ok, witness = q.r.is_open_map()
    assert not ok
    assert witness == ("c", "e", F(1, 2))


def test_tent_local_homeo_region(fixture):
    q = fixture("tent")
    assert str(q.r.local_homeo_region()) == "e[0,1/2) u e(1/2,1]"


def test_tent_fibers(fixture):
    r = fixture("tent").r
    assert r.fiber(("c", "v", F(1))) == {("c", "e", F(1, 2))}
    assert r.fiber_cardinality(("c", "v", F(1, 2))) == 2
    assert r.fiber_cardinality(("c", "v", F(0))) == 2


def test_boundary_of_half_open_interval():
    X = OneComplex([Cell("v", 0, 1)])
    S = parse_subset(X, "v[0,1)")
    assert str(S.boundary()) == "v{1}"
    assert S.is_open() and not S.is_closed()


def test_glued_endpoint_is_one_point():
    X = OneComplex([Cell("x", 0, 1)], [[("x", "lo"), ("x", "hi")]])
    S = parse_subset(X, "x(0,1/2)")
    assert S.closure().contains(("c", "x", F(1)))
    assert not S.complement().is_open()
    # an arc through the glued point is open in the circle
    assert parse_subset(X, "x[0,1/4) u x(3/4,1]").is_open()


def test_tails_and_infinity():
    D = discrete_space(["a", "b"], ["t"], infinity=True)
    assert str(parse_subset(D, "a u t#{1,3}")) == "a u t#{1,3}"
    assert parse_subset(D, "t#* u inf").is_open()
    # cofinitely many tail points accumulate at infinity
    assert str(parse_subset(D, "t#*").closure()) == "t#* u inf"
    assert parse_subset(D, "inf").is_closed()


def test_unknown_cell_is_rejected():
    X = OneComplex([Cell("v", 0, 1)])
    with pytest.raises(ValueError):
        parse_subset(X, "w[0,1]")


def test_discontinuity_is_reported():
    E = OneComplex([Cell("e", 0, 1)])
    V = OneComplex([Cell("v", 0, 2)])
    f = PLMap(E, V, {"e": [Piece(F(0), F(1, 2), F(1), F(0), "v"), Piece(F(1, 2), F(1), F(1), F(1), "v")]})
    assert f.continuity_failures()


def test_pieces_must_cover_the_cell():
    E = OneComplex([Cell("e", 0, 1)])
    V = OneComplex([Cell("v", 0, 2)])
    with pytest.raises(PLMapError):
        PLMap(E, V, {"e": [Piece(F(0), F(1, 2), F(1), F(0), "v")]})


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_format_parse_round_trip(seed):
    X, S = space_and_set(seed)
    assert parse_subset(X, format_subset(S)) == S


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_closure_interior_duality(seed):
    X, S = space_and_set(seed)
    assert S.interior() == S.complement().closure().complement()
    assert S.interior() <= S <= S.closure()
    assert S.closure().closure() == S.closure()
    assert S.boundary() == S.closure().minus(S.interior())


@settings(max_examples=80, deadline=None)
@given(seeds, seeds)
def test_boolean_ops_pointwise(s1, s2):
    X, S = space_and_set(s1)
    T = random_subset(random.Random(s2), X, 3)
    for p in grid(X, 3):
        assert (S | T).contains(p) == (S.contains(p) or T.contains(p))
        assert (S & T).contains(p) == (S.contains(p) and T.contains(p))
        assert S.minus(T).contains(p) == (S.contains(p) and not T.contains(p))
        assert S.complement().contains(p) != S.contains(p)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_image_preimage_pointwise(seed):
    rng = random.Random(seed)
    q = random_pl(rng)
    E, V = q.edge_space, q.vertex_space
    S, T = random_subset(rng, E, 2), random_subset(rng, V, 2)
    for f in (q.r, q.s):
        pre = f.preimage(T)
        img = f.image(S)
        for p in grid(E, 4):
            assert pre.contains(p) == T.contains(f.value_at(p[1], p[2]))
            if S.contains(p):
                assert img.contains(f.value_at(p[1], p[2]))
        for y in grid(V, 3):
            fib = f.fiber(y)
            if isinstance(fib, set):
                assert img.contains(y) == any(S.contains(x) for x in fib)


def test_empty_and_full():
    X = OneComplex([Cell("v", 0, 1), Cell("p", 0, 0)])
    assert SubSet.empty(X).is_empty and SubSet.full(X).is_full
    assert SubSet.full(X).complement() == SubSet.empty(X)
    assert str(SubSet.full(X)) == "v[0,1] u p"
