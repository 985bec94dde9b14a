from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from gen import discrete_from_matrix, discrete_quivers, mult_matrix
from hypothesis import given, settings
from oracles import FiniteGraph

from tquiver import loops as L
from tquiver.quiver import DiscreteQuiver, Edge, Unsupported


def matrix_of(q):
    idx = {v: i for i, v in enumerate(q.vertices)}
    m = [[0] * len(idx) for _ in idx]
    for e in q.edges:
        m[idx[e.src]][idx[e.rng]] += 1
    for a, b in q.inf_edges:
        m[idx[a]][idx[b]] = 1 << 20
    return m, idx


def tent(x):
    return 2 * x if x <= F(1, 2) else 2 - 2 * x


def tent_periodic(n_max):
    """Points of period <= n_max by direct iteration of the tent map."""
    out = set()
    for n in range(1, n_max + 1):
        for d in (2**n - 1, 2**n + 1):
            for k in range(d + 1):
                x = y = F(k, d)
                for _ in range(n):
                    y = tent(y)
                if y == x:
                    out.add(x)
    return out


def test_remark9_verdicts(fixture):
    q = fixture("remark9")
    Lv = L.condition_L(q)
    assert Lv.holds and str(Lv.extra["L_inf"]) == "v{0}"
    K = L.condition_K(q)
    assert K.fails and K.witness == ("c", "v", F(0))
    assert str(L.v_geq(q, ("c", "v", F(0))).value) == "v{0}"


def test_remark9_exitless_map(fixture):
    h = L.exitless_map(fixture("remark9"))
    assert str(h.W1) == "v[0,1]"
    assert [(b.m, b.c) for b in h.branches] == [(2, 0)]
    assert L.periodic_points(h, 4).points == [("c", "v", F(0))]


def test_tent_periodic_points(fixture):
    h = L.exitless_map(fixture("tent"))
    got = L.periodic_points(h, 3)
    assert not got.truncated
    assert {p[2] for p in got.points} == tent_periodic(3)


def test_tent_conditions(fixture):
    q = fixture("tent")
    assert L.condition_L(q).holds
    assert L.condition_K(q).holds


def test_circle_identity_fails_L(fixture):
    q = fixture("circle")
    Lv = L.condition_L(q)
    assert Lv.fails and str(Lv.witness) == "v[0,1]"
    assert L.condition_K(q).fails


def test_ex8_11_is_acyclic(fixture):
    q = fixture("ex8_11")
    assert L.acyclic(q)
    assert L.condition_L(q).holds and L.condition_K(q).holds
    assert not L.acyclic(fixture("remark9"))


def test_simple_loops(fixture):
    assert [str(p) for p in L.simple_loops_at(fixture("twoloops"), "v", 3)] == ["e (exit)", "f (exit)"]
    assert [str(p) for p in L.simple_loops_at(fixture("cycle3"), "a", 5)] == ["e1 e2 e3 (no exit)"]
    assert L.simple_loops_at(fixture("vinfw"), "v", 3) == []


def test_cycle_fails_both(fixture):
    q = fixture("cycle3")
    assert L.condition_L(q).fails
    assert L.condition_K(q).fails
    assert str(L.v_geq(q, ("c", "a", F(0))).value) == "a u b u c"


def test_cuntz_krieger_k(fixture):
    q = fixture("cuntz_krieger_k")
    assert L.condition_L(q).holds and L.condition_K(q).holds


def test_v_geq_infinite_orbit_is_unknown(fixture):
    # every 2^-k reaches 1, so no finite prefix of the search stabilises
    r = L.v_geq(fixture("remark9"), ("c", "v", F(1)))
    assert r.value is None and r.iterations == r.bound


def test_tailed_input_is_unsupported(fixture):
    with pytest.raises(Unsupported):
        L.condition_L(fixture("ex8_11_tails"))


@settings(max_examples=120, deadline=None)
@given(discrete_quivers(n_max=4))
def test_discrete_loops_match_oracle(q):
    m, idx = matrix_of(q)
    g = FiniteGraph(m)
    assert L.condition_L(q).holds == g.condition_L()
    assert L.condition_K(q).holds == g.condition_K_definitional()
    # a second simple loop, if any, has length at most twice the vertex count
    for v, i in idx.items():
        found = L.simple_loops_at(q, v, 2 * len(idx))
        n = 2 if any("=>" in str(p) for p in found) else len(found)
        assert min(n, 2) == g.simple_loop_count(i)


def test_embedded_graph_agrees():
    rng = random.Random(12)
    for _ in range(60):
        m = [[min(k, 2) for k in row] for row in mult_matrix(rng, rng.randint(1, 4))]
        q = discrete_from_matrix(m)
        p = q.as_pl()
        assert L.condition_L(p).status == L.condition_L(q).status
        assert L.condition_K(p).status == L.condition_K(q).status


def test_bouquets():
    for n in range(2, 6):
        q = DiscreteQuiver(["v"], [Edge(f"e{i}", "v", "v") for i in range(n)])
        s = L.is_simple(q)
        assert s.status == "simple" and s.reasons == ()
