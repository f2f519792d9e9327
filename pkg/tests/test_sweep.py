import json

import pytest

from monopath.graph import FiniteColouredGraph
from monopath.solver import min_partition
from monopath.sweep import BudgetExceeded, decode, encode, sweep_colourings

from oracles import brute_optimum


def test_n3_any():
    s = sweep_colourings(3, 2, "any")
    assert s.max_optimum == 1 and s.histogram == {"1": 8} and s.total == 8


def test_histogram_matches_brute_force_n4():
    s = sweep_colourings(4, 2, "distinct")
    hist = {}
    for idx in range(64):
        opt = brute_optimum(4, 2, decode(idx, 4, 2), "distinct")
        hist[str(opt)] = hist.get(str(opt), 0) + 1
    assert s.histogram == hist
    assert s.max_optimum == 2


def test_argmax_is_least_index_and_decodes():
    s = sweep_colourings(4, 2, "distinct")
    worst = [i for i in range(64) if min_partition(FiniteColouredGraph(4, 2, decode(i, 4, 2)), "distinct").optimum == 2]
    assert s.argmax == worst[0]
    assert encode(decode(12345, 6, 2), 2) == 12345


def test_canonical_matches_plain():
    plain = sweep_colourings(5, 2, "distinct")
    canon = sweep_colourings(5, 2, "distinct", canonical=True)
    assert canon.histogram == plain.histogram
    assert canon.max_optimum == plain.max_optimum
    assert canon.classes == 34  # graphs on five vertices


def test_predicate_counts_violations():
    s = sweep_colourings(4, 2, "any", k=1)
    assert s.violations == s.histogram.get("2", 0) > 0
    assert s.first_violation is not None


def test_budget():
    with pytest.raises(BudgetExceeded) as err:
        sweep_colourings(7, 2, "any", budget=1000)
    assert err.value.required == 2 ** 21
    assert "2097152" in str(err.value)


def test_jobs_do_not_change_result():
    a = sweep_colourings(5, 2, "distinct", jobs=1, chunk=100)
    b = sweep_colourings(5, 2, "distinct", jobs=2, chunk=100)
    assert a == b


def test_checkpoint_resume(tmp_path):
    state = tmp_path / "state.json"
    first = sweep_colourings(4, 3, "any", chunk=50, checkpoint=state)
    saved = json.loads(state.read_text())
    assert len(saved["ranges"]) == -(-(3 ** 6) // 50)
    # drop one range; the rerun recomputes only that one
    key = sorted(saved["ranges"])[0]
    del saved["ranges"][key]
    state.write_text(json.dumps(saved))
    assert sweep_colourings(4, 3, "any", chunk=50, checkpoint=state) == first
