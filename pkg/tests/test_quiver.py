from __future__ import annotations

import random

import pytest
from gen import discrete_quivers, mult_matrix, discrete_from_matrix, pl_quivers
from hypothesis import given, settings
from oracles import FiniteGraph

from tquiver import quiver as Q
from tquiver.quiver import DiscreteQuiver, Edge, QuiverError


def names(q, S):
    return set(q.names_of(S))


def test_ex8_11_classes(fixture):
    c = Q.classify(fixture("ex8_11"))
    assert c.as_dict() == {"sinks": "p u I(1,2]", "fin": "p u I[1,2]", "reg": "{}"}


def test_remark9_classes(fixture):
    c = Q.classify(fixture("remark9"))
    # s is onto [0,1]; a point of (1,2] emits nothing
    assert str(c.sinks) == "v(1,2]"
    assert str(c.reg) == "v[0,1)"


def test_tent_classes(fixture):
    c = Q.classify(fixture("tent"))
    assert str(c.sinks) == "{}"
    # s is the identity, so the fold point of r is the only non-finite emitter
    assert str(c.fin) == "v[0,1/2) u v(1/2,1]"


def test_infinite_emitter(fixture):
    c = Q.classify(fixture("vinfw"))
    assert c.as_dict() == {"sinks": "w", "fin": "w", "reg": "{}"}


def test_tail_vertices_are_regular(fixture):
    c = Q.classify(fixture("naturals"))
    assert str(c.reg) == "0 u 0~#*"
    assert c.sinks.is_empty


def test_unitized_point_is_not_a_finite_emitter(fixture):
    q = fixture("vw_unitized")
    c = Q.classify(q)
    assert not c.fin.inf and not c.sinks.inf


def test_validate_fold_witness(fixture):
    rep = Q.validate(fixture("fold"))
    assert not rep.ok
    assert [f.name for f in rep.failures()] == ["r continuous and open"]
    assert "e@1/2" in "\n".join(rep.lines())


def test_validate_good_fixtures(fixture):
    for name in ("ex8_11", "remark9", "tent", "circle", "cycle3_interval", "weighted"):
        assert Q.validate(fixture(name)).ok, name


def test_unknown_vertex_is_rejected():
    with pytest.raises(QuiverError):
        DiscreteQuiver(["v"], [Edge("e", "v", "w")])


def test_infinity_needs_tails():
    with pytest.raises(QuiverError):
        DiscreteQuiver(["v"], [], infinity=True)


def test_as_discrete_round_trip(fixture):
    q = fixture("cycle3")
    assert q.as_pl().is_discrete
    assert q.as_pl().as_discrete() == q


@settings(max_examples=150, deadline=None)
@given(discrete_quivers(n_max=5))
def test_discrete_classes_match_oracle(q):
    idx = {v: i for i, v in enumerate(q.vertices)}
    m = [[0] * len(idx) for _ in idx]
    for e in q.edges:
        m[idx[e.src]][idx[e.rng]] += 1
    for a, b in q.inf_edges:
        m[idx[a]][idx[b]] = 1 << 20
    g = FiniteGraph(m)
    c = Q.classify(q)
    assert {idx[v] for v in names(q, c.reg)} == set(g.reg)
    assert {idx[v] for v in names(q, c.sinks)} == {v for v in g.V if g.deg(v) == 0}


@settings(max_examples=60, deadline=None)
@given(pl_quivers())
def test_pl_class_invariants(q):
    c = Q.classify(q)
    assert c.sinks.is_open() and c.fin.is_open() and c.reg.is_open()
    assert c.reg <= c.fin
    assert (c.reg & c.sinks.closure()).is_empty
    assert Q.validate(q).ok


def test_discrete_and_embedded_agree():
    rng = random.Random(11)
    for _ in range(100):
        m = [[min(k, 2) for k in row] for row in mult_matrix(rng, rng.randint(1, 4))]
        q = discrete_from_matrix(m)
        a, b = Q.classify(q), Q.classify(q.as_pl())
        for key in ("sinks", "fin", "reg"):
            assert names(q, getattr(a, key)) == {c for c in (x.name for x in q.as_pl().vertex_space.cells) if getattr(b, key).contains(("c", c, 0))}, key
