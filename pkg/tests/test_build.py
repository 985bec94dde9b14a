from __future__ import annotations

import random

import pytest
from gen import discrete_quivers, pl_quivers, random_discrete
from hypothesis import given, settings

from tquiver import build, loops
from tquiver import quiver as Q
from tquiver.build import CompactVertexSpace
from tquiver.cli import parse_complex
from tquiver.quiver import TailedQuiver, Unsupported


def test_tails_then_unitize(fixture):
    t = build.add_tails(fixture("vw"))
    assert t == fixture("vw_tails")
    assert build.unitize(t) == fixture("vw_unitized")


def test_pl_tails_fixture(fixture):
    t = build.add_tails(fixture("ex8_11"))
    assert isinstance(t, TailedQuiver)
    assert t == fixture("ex8_11_tails")
    assert build.add_tails(t) is t


def test_no_sinks_is_unchanged(fixture):
    q = fixture("cycle3")
    assert build.add_tails(q) is q


def test_unitize_needs_tails(fixture):
    with pytest.raises(CompactVertexSpace):
        build.unitize(fixture("vw"))
    with pytest.raises(CompactVertexSpace):
        build.unitize(fixture("remark9"))
    with pytest.raises(CompactVertexSpace):
        build.unitize(fixture("vw_unitized"))


def test_product_fixture(fixture):
    X = parse_complex("x [0,1]")
    assert build.product_with_space(fixture("cycle3"), X) == fixture("cycle3_interval")


def test_product_with_circle_fails_L(fixture):
    P = build.product_with_space(fixture("oneloop"), parse_complex("x [0,1]; glue x.lo x.hi"))
    assert Q.validate(P).ok
    assert loops.condition_L(P).fails


def test_product_rejects_infinite_classes(fixture):
    with pytest.raises(Unsupported):
        build.product_with_space(fixture("vinfw"), parse_complex("x [0,1]"))


@settings(max_examples=100, deadline=None)
@given(discrete_quivers(n_max=5))
def test_tails_remove_sinks(q):
    t = build.add_tails(q)
    assert Q.sinks(t).is_empty
    # the old vertices keep their edges and classes away from the sinks
    old = set(q.names_of(Q.regular(q)))
    assert old <= set(t.names_of(Q.regular(t)))


@settings(max_examples=40, deadline=None)
@given(pl_quivers())
def test_pl_tails_remove_sinks(q):
    assert Q.sinks(build.add_tails(q)).is_empty


def test_unitize_preserves_regular():
    rng = random.Random(9)
    for _ in range(100):
        q = build.add_tails(random_discrete(rng, 4, inf=True))
        if not q.tails:
            continue
        assert str(Q.regular(build.unitize(q))) == str(Q.regular(q))


def test_product_regular_random():
    rng = random.Random(10)
    for _ in range(50):
        E = random_discrete(rng, 3, inf=False)
        X = parse_complex(rng.choice(["x [0,1]", "x [0,1]; glue x.lo x.hi", "x [0,1]; p {0}", "a [0,1]; b [0,2]; glue a.hi b.lo"]))
        assert Q.regular(build.product_with_space(E, X)) == build.product_regular(E, X)
