import pytest
from hypothesis import given, settings, strategies as st

from monopath.colourings import build
from monopath.graph import (
    FiniteColouredGraph,
    GraphError,
    HTypeGraph,
    LazyColouredGraph,
    OmegaPathStream,
    PathSeq,
    common_neighbours,
    neighbours,
    pair_index,
    pairs,
)


def test_pair_index_matches_pairs_order():
    for n in range(1, 8):
        assert [pair_index(u, v, n) for u, v in pairs(n)] == list(range(n * (n - 1) // 2))
        assert all(pair_index(v, u, n) == pair_index(u, v, n) for u, v in pairs(n))


def test_neighbours_constant():
    g = build("constant:0")
    assert neighbours(g, 3, 0, 6) == {0, 1, 2, 4, 5}


def test_neighbours_constant_unused_colour():
    g = build("constant:c=0,r=2")
    assert neighbours(g, 3, 1, 6) == frozenset()


def test_neighbours_parity():
    assert neighbours(build("parity"), 4, 0, 8) == {0, 2, 6}


def test_common_neighbours_examples():
    assert common_neighbours(build("parity"), [], 0, 4) == {0, 1, 2, 3}
    assert common_neighbours(build("parity"), {0, 2}, 0, 8) == {4, 6}
    assert common_neighbours(build("star"), {1, 2}, 0, 6) == {3, 4, 5}


def test_neighbour_errors():
    g = FiniteColouredGraph.constant(4)
    with pytest.raises(GraphError):
        neighbours(g, 0, 1, 4)
    with pytest.raises(GraphError):
        neighbours(g, 7, 0, 4)
    with pytest.raises(GraphError):
        neighbours(build("parity"), 0, 0)


def test_finite_graph_validation():
    with pytest.raises(GraphError):
        FiniteColouredGraph(3, 2, (0, 2, 1))
    with pytest.raises(GraphError):
        FiniteColouredGraph(3, 2, (0, 1))
    g = FiniteColouredGraph.from_function(4, 2, lambda u, v: 0, missing=[(0, 1)])
    assert not g.is_edge(0, 1) and g.colour(1, 0) is None
    assert g.missing(0) == {1}


def test_lazy_restrict_and_pattern():
    g = build("parity")
    f = g.restrict(5)
    assert all(f.colour(u, v) == (u + v) % 2 for u, v in pairs(5))
    pat = g.neighbourhood_pattern(4, 0)
    assert all((x in pat) == (x != 4 and x % 2 == 0) for x in range(40))
    assert g.neighbourhood_tail(4, 0) == pat.tail()


def test_lazy_colour_range_enforced():
    g = LazyColouredGraph(2, lambda u, v: 5)
    with pytest.raises(GraphError):
        g.colour(0, 1)


def test_htype_enumerations():
    d = HTypeGraph("disjoint")
    assert [d.a(i) for i in range(3)] == [0, 2, 4] and [d.b(i) for i in range(3)] == [1, 3, 5]
    assert d.is_edge(d.a(1), d.b(1)) and not d.is_edge(d.a(2), d.b(1))
    assert not d.is_edge(d.a(0), d.a(1))
    ident = HTypeGraph("identified")
    assert not ident.is_edge(3, 3)
    assert ident.is_edge(1, 2) and ident.is_edge(2, 1)


@given(st.integers(0, 60), st.integers(0, 60))
def test_htype_edge_rule(u, v):
    d = HTypeGraph("disjoint")
    au, bv = d.a_index(u), d.b_index(v)
    expected = au is not None and bv is not None and au <= bv
    au2, bu2 = d.a_index(v), d.b_index(u)
    expected = expected or (au2 is not None and bu2 is not None and au2 <= bu2)
    assert d.is_edge(u, v) == expected


def test_pathseq_roundtrip():
    p = PathSeq([0, 2, 4], 0)
    assert PathSeq.from_json(p.to_json()) == p
    assert PathSeq([3]).colour is None


def test_omega_stream_prefix():
    s = OmegaPathStream(iter(range(100)), 0, "count")
    assert s.prefix(3).vertices == (0, 1, 2)
    assert s[10] == 10
    assert s.prefix(2).vertices == (0, 1)


@settings(max_examples=40)
@given(st.sampled_from(["constant:0", "parity", "mod:3", "star", "layer:0;1;1", "random:seed=7,r=3"]),
       st.integers(0, 50), st.integers(0, 50))
def test_lazy_symmetry_and_purity(name, u, v):
    g = build(name)
    if u == v:
        assert g.colour(u, v) is None
        return
    c = g.colour(u, v)
    assert c == g.colour(v, u) == build(name).colour(u, v)
    assert sum(g.colour(u, v) == i for i in range(g.r)) == 1


@settings(max_examples=30)
@given(st.sampled_from(["parity", "mod:3", "star"]), st.integers(0, 20), st.integers(0, 30), st.integers(0, 30))
def test_neighbours_monotone_in_horizon(name, v, h1, h2):
    g = build(name)
    lo, hi = sorted((h1, h2))
    for i in range(g.r):
        assert neighbours(g, v, i, lo) <= neighbours(g, v, i, hi)


@settings(max_examples=30)
@given(st.sampled_from(["parity", "mod:3", "star", "constant:0"]),
       st.sets(st.integers(0, 15), max_size=4), st.integers(0, 40))
def test_cofinite_common_neighbourhood(name, F, h):
    g = build(name)
    anyc = {w for w in range(h) if all(g.is_edge(v, w) for v in F)}
    assert len(anyc) >= h - len(F)
