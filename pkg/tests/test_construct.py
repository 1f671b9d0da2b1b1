import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matroidnet.construct import (BuildParams, ConstructionFailed, ReplayError, TraceRow,
                                  apply_extension, coefficient_tuples, construct,
                                  find_extension_vector, init_state, minimize_sink_inputs,
                                  new_circuits, pick_ec, read_trace, replay, write_trace)
from matroidnet.field import Matrix, field
from matroidnet.fileio import data_text
from matroidnet.matroid import VectorMatroid
from matroidnet.matroidal import check_definition5
from matroidnet.reproduce import EXAMPLES, build_params, rebuild, stage_matrix
from matroidnet.verifier import check_correcting


def initial(key):
    return init_state(build_params(EXAMPLES[key], 0))


@pytest.mark.parametrize("key", ["fig3", "fig5", "fig10"])
def test_initial_representation(key):
    ex = EXAMPLES[key]
    st_ = initial(key)
    assert st_.representation().to_text() == stage_matrix(ex, 0).to_text()
    net, code, f, B = st_.realize()
    assert check_definition5(net, st_.matroid(), f, B, 2 * ex.params["alpha"]).ok


def test_trivial_star():
    st_ = init_state(BuildParams(mode="multicast", sources=(1,), alpha=0, nc=0))
    assert st_.representation().a.tolist() == [[1, 0, 1], [0, 1, 1]]


def test_pick_ec_is_seeded_and_exhaustive():
    a, b = initial("fig3"), initial("fig3")
    a.rng.seed(7)
    b.rng.seed(7)
    assert [pick_ec(a, 2, set()) for _ in range(10)] == [pick_ec(b, 2, set()) for _ in range(10)]
    tried = set()
    while (ec := pick_ec(a, 2, tried)) is not None:
        assert len(ec) == 2 and ec not in tried
        tried.add(ec)
    assert len(tried) == 21


def test_coefficient_tuples():
    F = field("gf4")
    got = list(coefficient_tuples(F, 3, 100, random.Random(0)))
    assert got == [(1,) + r for r in itertools.product(range(1, 4), repeat=2)]
    draws = list(coefficient_tuples(F, 3, 4, random.Random(0)))
    assert len(draws) == 4 and all(t[0] == 1 and 0 not in t for t in draws)


def test_first_extension_column():
    st_ = initial("fig3")
    new = apply_extension(st_, (2, 4), (1, 6))
    assert new.X[:, -1].tolist() == [1, 4, 6, 0, 0, 1, 0, 6, 0, 0, 1]
    assert new.representation().to_text() == stage_matrix(EXAMPLES["fig3"], 1).to_text()
    assert new.matroid().full_rank == st_.matroid().full_rank + 1


def test_new_circuits_match_enumeration():
    st_ = initial("fig5")
    for ec in [(0, 3), (1, 4, 7), (2, 5)]:
        new = apply_extension(st_, ec, (1,) * len(ec))
        k, rows = new.k, new.X.shape[0]
        y = np.zeros(rows, dtype=np.int64)
        y[-1] = 1
        cols = np.column_stack([new.X[:, e] for e in ec] + [new.X[:, k - 1], y])
        m = VectorMatroid(Matrix(new.F, cols), list(ec) + ["x", "y"])
        want = {c for c in m.circuits() if "x" in c}
        assert set(new_circuits(new, ec)) == want


def test_sink_wiring_after_steps():
    ex = EXAMPLES["fig10"]
    rows = read_trace(data_text(ex.trace))
    first = rebuild(ex, rows[:1]).state
    assert [s.inputs for s in first.sinks] == [[0], [2, 3], [1, 3]]
    sizes = [len(rebuild(ex, rows[:s]).state.sinks[1].inputs) for s in (2, 3)]
    assert sizes == [3, 2]


def test_minimized_inputs_are_minimal():
    """Sinks holding the newest edge cannot drop any other input."""
    ex = EXAMPLES["fig10"]
    rows = read_trace(data_text(ex.trace))
    for s in range(1, len(rows) + 1):
        st_ = rebuild(ex, rows[:s]).state
        new_e = st_.k - 1
        for t in st_.sinks:
            assert st_.sink_ok(t)
            if new_e not in t.inputs:
                continue
            for e in t.inputs:
                if e != new_e:
                    assert not st_.sink_ok(t, [x for x in t.inputs if x != e])
        assert minimize_sink_inputs(st_.copy()) == []


def test_find_extension_vector_valid():
    st_ = initial("fig3")
    coeffs, new = find_extension_vector(st_, (2, 4))
    assert coeffs[0] == 1
    assert new.condition_c()


def test_trace_round_trip():
    text = data_text("multicast_large.trace")
    rows = read_trace(text)
    assert len(rows) == 10
    assert read_trace(write_trace(rows)) == rows
    assert TraceRow.from_text("(4,8) | 10 | (1,2)") == TraceRow((3, 7), 9, (1, 2))
    with pytest.raises(ValueError):
        TraceRow.from_text("1 2 | 3")


def test_replay_rejects_bad_rows():
    p = build_params(EXAMPLES["fig5"], 1)
    with pytest.raises(ReplayError):
        replay(p, [TraceRow((0, 1), 5, (1, 1))])
    with pytest.raises(ReplayError):
        replay(p, [TraceRow((0, 40), 9, (1, 1))])


def test_small_field_failure_is_reported():
    p = BuildParams(mode="multicast", sources=(1,), alpha=1, sinks=2, nc=3, field="gf2")
    with pytest.raises(ConstructionFailed, match="no extension found"):
        construct(p)


def test_same_seed_same_build():
    p = BuildParams(mode="multicast", sources=(2, 1), alpha=1, sinks=2, nc=4, seed=11)
    a, b = construct(p), construct(p)
    assert a.state.trace == b.state.trace
    assert a.matroid.rep.to_text() == b.matroid.rep.to_text()


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10 ** 4), st.sampled_from(["multicast", "unicast"]), st.integers(0, 1),
       st.booleans())
def test_constructions_correct_errors(seed, mode, alpha, minimize):
    if mode == "multicast":
        p = BuildParams(mode=mode, sources=(2, 1), alpha=alpha, sinks=2, nc=3, seed=seed, minimize=minimize)
    else:
        p = BuildParams.unicast(3, alpha=alpha, nc=3, seed=seed, minimize=minimize)
    res = construct(p)
    assert check_correcting(res.net, res.code, alpha).ok
    assert check_definition5(res.net, res.matroid, res.f, res.B, 2 * alpha).ok
    assert res.matroid.full_rank == res.net.n + len(res.net.eligible)
    again = replay(p, res.state.trace)
    assert again.matroid.rep.to_text() == res.matroid.rep.to_text()
