from hypothesis import given, strategies as st

from monopath.periodic import EventuallyPeriodic as EP

LIMIT = 120


@st.composite
def sets(draw):
    start = draw(st.integers(0, 12))
    period = draw(st.integers(1, 6))
    head = draw(st.sets(st.integers(0, max(0, start - 1)), max_size=start)) if start else set()
    residues = draw(st.sets(st.integers(0, period - 1)))
    return EP.make(start, head, period, residues)


def members(s):
    return {x for x in range(LIMIT) if x in s}


@given(sets(), sets())
def test_boolean_ops_pointwise(a, b):
    assert members(a & b) == members(a) & members(b)
    assert members(a | b) == members(a) | members(b)
    assert members(a - b) == members(a) - members(b)
    assert members(~a) == set(range(LIMIT)) - members(a)


@given(sets())
def test_normal_form_is_canonical(a):
    # same set built from a longer, non-minimal description
    again = EP.make(a.start + 2 * a.period, members(a) & set(range(a.start + 2 * a.period)), 2 * a.period,
                    {x % (2 * a.period) for x in range(a.start + 2 * a.period, a.start + 4 * a.period) if x in a})
    assert again == a and hash(again) == hash(a)


@given(sets(), sets())
def test_subset_matches_pointwise(a, b):
    assert (a <= b) == (members(a) <= members(b))


@given(sets(), st.integers(0, LIMIT))
def test_count_below(a, h):
    assert a.count_below(h) == len([x for x in range(h) if x in a])


@given(sets())
def test_finite_and_cofinite(a):
    assert a.is_finite() == (not a.residues)
    assert a.is_cofinite() == (~a).is_finite()
    assert EP.from_json(a.to_json()) == a


def test_constructors():
    assert members(EP.congruence(1, 3)) == {x for x in range(LIMIT) if x % 3 == 1}
    assert members(EP.interval(4, 9)) == set(range(4, 9))
    assert EP.interval(5).is_cofinite()
    assert EP.finite([1, 2, 3]).is_finite()
    assert EP.empty().is_empty() and not EP.full().is_empty()
