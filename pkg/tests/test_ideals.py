from __future__ import annotations

import random

import pytest
from gen import discrete_from_matrix, discrete_quivers, pl_with_sets
from hypothesis import given, settings
from oracles import FiniteGraph, subsets

from tquiver import ideals as I
from tquiver import quiver as Q
from tquiver.ideals import NotHereditary
from tquiver.ratspace import SubSet, parse_subset


def matrix_of(q):
    idx = {v: i for i, v in enumerate(q.vertices)}
    m = [[0] * len(idx) for _ in idx]
    for e in q.edges:
        m[idx[e.src]][idx[e.rng]] += 1
    for a, b in q.inf_edges:
        m[idx[a]][idx[b]] = 1 << 20
    return m, idx


def test_remark9_hereditary_closure_iterations(fixture):
    q = fixture("remark9")
    r = I.hereditary_closure(q, parse_subset(q.vertex_space, "v(0,1/4)"))
    assert str(r.value) == "v(0,2]"
    assert r.iterations == 4


def test_remark9_not_hereditary_witness(fixture):
    q = fixture("remark9")
    v = I.is_hereditary(q, parse_subset(q.vertex_space, "v(0,1)"))
    assert not v.ok
    assert str(v.witness) == "e[1/2,1)"


def test_remark9_quotient_is_one_loop(fixture):
    q = fixture("remark9")
    D = I.quotient_quiver(q, parse_subset(q.vertex_space, "v(0,2]")).as_discrete()
    assert len(D.vertices) == 1 and len(D.edges) == 1


def test_empty_quotient_is_identity(fixture):
    q = fixture("remark9")
    assert I.quotient_quiver(q, SubSet.empty(q.vertex_space)) == q


def test_quotient_needs_hereditary(fixture):
    q = fixture("vw")
    assert I.quotient_quiver(q, q.vertex_set(["w"])).vertices == ("v",)
    with pytest.raises(NotHereditary):
        I.quotient_quiver(q, q.vertex_set(["v"]))


def test_ex8_11_quotient_regular_strict(fixture):
    q = fixture("ex8_11")
    U = parse_subset(q.vertex_space, "I(1,2]")
    lo = Q.regular(q).minus(U)
    hi = I.quotient_regular(q, U)
    assert lo.is_empty and str(hi) == "I{1}"


def test_vinfw_pairs(fixture):
    q = fixture("vinfw")
    lat = I.ideal_lattice(q)
    assert [(str(p.U), str(p.V)) for p in lat.pairs] == [("{}", "{}"), ("w", "{}"), ("v u w", "{}")]
    assert lat.covers() == [(0, 1), (1, 2)]


def test_vinfw_quotient_by_w(fixture):
    q = fixture("vinfw")
    U = q.vertex_set(["w"])
    assert I.quotient_quiver(q, U).vertices == ("v",)
    assert I.quotient_regular(q, U).is_empty


def test_check_admissible(fixture):
    q = fixture("vinfw")
    assert I.check_admissible(q, q.vertex_set(["w"]), q.vertex_set([])).ok
    bad = I.check_admissible(q, q.vertex_set([]), q.vertex_set(["w"]))
    assert not bad.ok and str(bad.witness) == "w"


def test_ex8_11_pl_pairs(fixture):
    q = fixture("ex8_11")
    X = q.vertex_space
    U = parse_subset(X, "I(1,2]")
    assert I.check_admissible(q, U, SubSet.empty(X)).ok
    assert I.check_admissible(q, U, parse_subset(X, "I{1}")).ok


def test_relative_single_loop(fixture):
    q = fixture("oneloop")
    r = I.relative_quiver(q, q.vertex_set([]))
    assert r.vertices == ("v", "v'")
    assert sorted((e.src, e.rng) for e in r.edges) == [("v", "v"), ("v", "v'")]
    assert str(Q.sinks(r)) == "v'"
    assert I.relative_quiver(q, q.vertex_set(["v"])) == q


def test_relative_rejects_nonregular(fixture):
    q = fixture("vinfw")
    with pytest.raises(ValueError):
        I.relative_quiver(q, q.vertex_set(["w"]))


def test_relative_pl_adds_sink_copies(fixture):
    q = fixture("remark9")
    r = I.relative_quiver(q, SubSet.empty(q.vertex_space))
    assert Q.validate(r).ok
    # W is the interior of the regular set [0,1); its copy is all sinks
    added = [c for c in r.vertex_space.cells if "'" in c.name]
    assert [(c.lo, c.hi) for c in added] == [(0, 1)]
    assert str(Q.sinks(r)) == "v@1..2(1,2] u v'@0..1[0,1)"


def test_relative_discrete_counts():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 5)
        m = [[rng.choice((0, 0, 1, 2)) for _ in range(n)] for _ in range(n)]
        q = discrete_from_matrix(m)
        reg = q.names_of(Q.regular(q))
        V = [v for v in reg if rng.random() < 0.5]
        W = set(reg) - set(V)
        r = I.relative_quiver(q, q.vertex_set(V))
        assert len(r.vertices) == len(q.vertices) + len(W)
        assert len(r.edges) == len(q.edges) + sum(e.rng in W for e in q.edges)
        new = set(r.vertices) - set(q.vertices)
        assert new <= set(r.names_of(Q.sinks(r)))


def test_minimality(fixture):
    assert I.is_minimal(fixture("cycle3")).status == "yes"
    m = I.is_minimal(fixture("ex8_11"))
    assert m.status == "no" and str(m.witness) == "I(1,2]"
    assert str(I.is_minimal(fixture("remark9")).witness) == "v(0,2]"


@settings(max_examples=150, deadline=None)
@given(discrete_quivers(n_max=5))
def test_discrete_ops_match_oracle(q):
    m, idx = matrix_of(q)
    g = FiniteGraph(m)
    for U in subsets(range(len(idx))):
        S = q.vertex_set([q.vertices[i] for i in U])
        assert I.is_hereditary(q, S).ok == g.hereditary(U)
        assert I.is_saturated(q, S).ok == g.saturated(U)
    got = {(frozenset(idx[v] for v in q.names_of(p.U)), frozenset(idx[v] for v in q.names_of(p.V))) for p in I.admissible_pairs(q)}
    assert got == set(g.admissible_pairs())


@settings(max_examples=150, deadline=None)
@given(discrete_quivers(n_max=5))
def test_discrete_closures_are_least(q):
    m, idx = matrix_of(q)
    g = FiniteGraph(m)
    rng = random.Random(len(q.edges))
    U = frozenset(i for i in range(len(idx)) if rng.random() < 0.4)
    sat = I.saturation(q, q.vertex_set([q.vertices[i] for i in U])).value
    her = I.hereditary_closure(q, q.vertex_set([q.vertices[i] for i in U])).value
    got_sat = frozenset(idx[v] for v in q.names_of(sat))
    got_her = frozenset(idx[v] for v in q.names_of(her))
    closed = [T for T in subsets(range(len(idx))) if U <= T and g.hereditary(T) and g.saturated(T)]
    assert got_sat == min(closed, key=len) and all(got_sat <= T for T in closed)
    assert got_her == frozenset().union(U, *(g.succ(v) for v in got_her))
    assert all(got_her <= T for T in subsets(range(len(idx))) if U <= T and g.hereditary(T))


@settings(max_examples=40, deadline=None)
@given(pl_with_sets())
def test_pl_closure_laws(case):
    q, U, W = case
    for op in (I.saturation, I.hereditary_closure):
        cU = op(q, U).value
        cV = op(q, U | W).value
        if cU is None or cV is None:
            continue
        assert U <= cU <= cV
        again = op(q, cU)
        assert again.value == cU and again.iterations == 0
        assert I.is_hereditary(q, cU).ok
