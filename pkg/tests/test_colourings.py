import random

import pytest
from hypothesis import given, settings, strategies as st

from monopath.colourings import (
    BUILTINS,
    ColouringError,
    FormatError,
    build,
    build_htype,
    dumps,
    load,
    loads,
    parse_spec,
    registry_text,
    save,
)
from monopath.graph import FiniteColouredGraph, pairs


def test_constant_finite():
    g = build("constant:0", 4)
    assert isinstance(g, FiniteColouredGraph) and g.colours == (0,) * 6


def test_parity_pair():
    assert build("parity").colour(2, 5) == 1


def test_random_is_pure():
    a, b = build("random:seed=42,r=3"), build("random:seed=42,r=3")
    assert a.colour(3, 9) == a.colour(3, 9) == b.colour(9, 3)
    assert [a.colour(0, v) for v in range(1, 40)] != [build("random:seed=43,r=3").colour(0, v) for v in range(1, 40)]


def test_parse_spec_forms():
    assert parse_spec("mod:4,2").params == {"m": 4, "r": 2}
    assert parse_spec("star:center=3").params == {"center": 3}
    assert parse_spec("layer:table=0;1;2").params == {"table": (0, 1, 2)}
    for bad in ("nope", "mod:m=x", "parity:1", "star:size=2"):
        with pytest.raises(ColouringError):
            build(bad)


def test_builtin_formulas():
    m = build("mod:m=5,r=2")
    assert all(m.colour(u, v) == ((u + v) % 5) % 2 for u, v in pairs(12))
    s = build("star:center=2,c=1")
    assert s.colour(2, 7) == 1 and s.colour(3, 7) == 0
    lay = build("layer:table=0;1;1")
    assert all(lay.colour(u, v) == (0, 1, 1)[v % 3] for u, v in pairs(12))


def test_registry_lists_everything():
    text = registry_text()
    assert all(name in text for name in BUILTINS)


def test_load_example(tmp_path):
    g = loads("3 2\n0 1 0\n0 2 1\n1 2 1\n")
    assert g.colours == (0, 1, 1)


@pytest.mark.parametrize(
    "text,line",
    [
        ("3 2\n0 1 0\n0 2 1\n", 3),
        ("3 2\n0 1 0\n0 2 1\n1 2 5\n", 4),
        ("3 2\n0 1 0\n0 1 0\n0 2 1\n1 2 1\n", 3),
        ("3 2\n0 1\n", 2),
        ("3\n", 1),
        ("3 2\n2 1 0\n", 2),
    ],
)
def test_load_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as err:
        loads(text)
    assert err.value.line == line


def test_missing_directive():
    g = loads("3 1\n0 1 0\n0 2 0\n! missing 1 2\n")
    assert not g.is_edge(1, 2)
    assert loads(dumps(g)) == g


def test_round_trip_random_k6(tmp_path):
    rng = random.Random(6)
    g = FiniteColouredGraph(6, 3, tuple(rng.randrange(3) for _ in range(15)))
    path = tmp_path / "g.txt"
    save(g, path)
    assert load(path) == g


@settings(max_examples=40)
@given(st.integers(1, 7), st.integers(1, 4), st.data())
def test_round_trip_property(n, r, data):
    cs = data.draw(st.lists(st.integers(-1, r - 1), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    g = FiniteColouredGraph(n, r, tuple(cs))
    assert loads(dumps(g)) == g


def test_periodic_builtins_have_patterns():
    for name in ("constant:0", "parity", "mod:3", "star", "layer:0;1"):
        g = build(name)
        for v in range(6):
            for i in range(g.r):
                pat = g.neighbourhood_pattern(v, i)
                assert all((x in pat) == (g.colour(v, x) == i) for x in range(80))
    assert build("random").neighbourhood_pattern(0, 0) is None


def test_htype_builtins():
    H = build_htype("disjoint", "bmod:2")
    assert H.cross_colour(0, 3) == 1 and H.cross_colour(2, 1) is None
    with pytest.raises(ColouringError):
        build_htype("disjoint", "zzz")
