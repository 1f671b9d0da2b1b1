import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matroidnet.field import Matrix, field, mat_inverse, matmul
from matroidnet.network import transfer_compute
from matroidnet.reproduce import EXAMPLES, rebuild
from matroidnet.verifier import (BudgetExceeded, _sink_failures, _sink_failures_direct,
                                 check_correcting, check_detecting, decoding_matrix,
                                 oracle_cost, semantic_oracle, unicast_fullrank_check)

from conftest import random_code, repetition


def outputs(net, code, sink, x, z):
    """Received symbols at a sink for message x and error values z {edge: value}."""
    F = net.F
    b = transfer_compute(net, code)
    st_ = next(s for s in b.sinks if s.sink == sink)
    y = matmul(F, np.array([x]), st_.FS)[0]
    for e, v in z.items():
        y = F.vadd(y, F.vmul(st_.Ft[e], v))
    return y


def test_multicast_final_network_corrects_one_error():
    r = rebuild(EXAMPLES["fig3"])
    res = check_detecting(r.net, r.code, 2)
    assert res.ok and res.verdict() == "PASS β=2"


def test_repetition_examples():
    net, code = repetition(3)
    assert check_detecting(net, code, 2).ok
    net, code = repetition(2)
    res = check_detecting(net, code, 2)
    assert not res.ok and res.pattern == (0, 1) and res.sink == "t"
    assert res.verdict() == "FAIL sink=t pattern={1,2}"


def test_alpha_zero_is_decodability():
    net, code = repetition(1)
    assert check_correcting(net, code, 0).ok
    r = rebuild(EXAMPLES["fig3"], [])
    assert check_correcting(r.net, r.code, 0).ok
    # the initial star already detects two errors per sink
    assert check_correcting(r.net, r.code, 1).ok


def test_oracle_examples():
    net, code = repetition(3)
    assert semantic_oracle(net, code, 2).ok
    assert semantic_oracle(net, code, 0).ok
    net, code = repetition(2)
    res = semantic_oracle(net, code, 2)
    assert not res.ok
    (x, z), (x2, z2) = res.collision
    assert x != x2
    assert np.array_equal(outputs(net, code, res.sink, x, z), outputs(net, code, res.sink, x2, z2))


def test_oracle_budget():
    r = rebuild(EXAMPLES["fig3"])
    assert oracle_cost(r.net, 2) > 10
    with pytest.raises(BudgetExceeded):
        semantic_oracle(r.net, r.code, 2, budget=10)


def test_decoding_matrix_examples():
    net, code = repetition(1, "gf8")
    assert decoding_matrix(net, code, "t", []).a.tolist() == [[1]]
    net, code = repetition(3)
    X = decoding_matrix(net, code, "t", [0, 1])
    assert X.a[:3, 0].tolist() == [0, 0, 1]


def test_decoding_matrix_square_is_inverse():
    r = rebuild(EXAMPLES["fig10"], [])
    b = transfer_compute(r.net, r.code)
    for st_ in b.sinks:
        if st_.FS.shape[0] == st_.FS.shape[1]:
            X = decoding_matrix(r.net, r.code, st_.sink, [])
            assert np.array_equal(X.a, mat_inverse(Matrix(r.net.F, st_.FS)).a[:, st_.demands])


def test_decoding_matrix_hand_wired_sink():
    r = rebuild(EXAMPLES["fig10"])
    st_ = r.state.copy()
    next(s for s in st_.sinks if s.id == "t2").inputs = [6, 7]
    net, code, _, _ = st_.realize()
    assert decoding_matrix(net, code, "t2", []).a.tolist() == [[1], [5]]


def test_fullrank_criterion():
    ex = EXAMPLES["fig5"]
    r = rebuild(ex, [])
    ab = r.state.abar_for_network(r.net)
    assert unicast_fullrank_check(r.net, r.code, 1, ab).ok
    r = rebuild(ex)
    ab = r.state.abar_for_network(r.net)
    assert unicast_fullrank_check(r.net, r.code, 1, ab).ok == check_correcting(r.net, r.code, 1).ok


def test_jobs_do_not_change_witness():
    rng = np.random.default_rng(5)
    r = rebuild(EXAMPLES["fig3"])
    for _ in range(5):
        net, code = random_code(r.net, field("gf3"), rng, 0.3)
        a = check_detecting(net, code, 2)
        b = check_detecting(net, code, 2, jobs=3)
        assert (a.ok, a.sink, a.pattern) == (b.ok, b.sink, b.pattern)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["gf2", "gf3", "gf4"]), st.integers(0, 3),
       st.sampled_from(["fig3", "fig5"]))
def test_reduced_and_direct_failure_lists_agree(seed, fname, beta, key):
    rng = np.random.default_rng(seed)
    r = rebuild(EXAMPLES[key])
    net, code = random_code(r.net, field(fname), rng, 0.25)
    b = transfer_compute(net, code)
    for st_ in b.sinks:
        fast = list(_sink_failures(net.F, st_, net.eligible, beta, stop_first=False))
        ref = list(_sink_failures_direct(net.F, st_, net.eligible, beta, stop_first=False))
        assert fast == ref


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["gf2", "gf3"]), st.integers(0, 2))
def test_oracle_agrees_with_algebraic_check(seed, fname, beta):
    rng = np.random.default_rng(seed)
    r = rebuild(EXAMPLES["fig5"], [])
    net, code = random_code(r.net, field(fname), rng, 0.3)
    assert semantic_oracle(net, code, beta).ok == check_detecting(net, code, beta).ok
