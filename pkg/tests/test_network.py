import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matroidnet.construct import read_trace
from matroidnet.field import Matrix, field
from matroidnet.fileio import data_text
from matroidnet.network import (Network, NetworkCode, NetworkError, Node, export_dot,
                                global_vectors, network_equal, read_code, read_network,
                                transfer_compute, write_code, write_network)
from matroidnet.reproduce import EXAMPLES, rebuild, stage_matrix

from conftest import repetition


def star():
    return rebuild(EXAMPLES["fig3"], [])


def test_initial_star_validates():
    r = star()
    ok, errs = r.net.validate()
    assert ok, errs
    assert r.code.validate(r.net)[0]
    assert len(r.net.sources) == 2 and len(r.net.sinks) == 2
    assert sum(v.role == "forward" for v in r.net.nodes) == 7


def test_order_violation_detected():
    F = field("gf2")
    nodes = [Node("s", "source", messages=1), Node("a", "forward"), Node("t", "sink", demands=(0,))]
    net = Network(F, nodes, [("a", "t"), ("s", "a")])
    ok, errs = net.validate()
    assert not ok and any("ancestral order" in e for e in errs)


def test_bad_demand_detected():
    F = field("gf2")
    nodes = [Node("s", "source", messages=1), Node("t", "sink", demands=(4,))]
    ok, errs = Network(F, nodes, [("s", "t")]).validate()
    assert not ok and "outside" in errs[0]


def test_unknown_node_rejected():
    with pytest.raises(NetworkError):
        Network(field("gf2"), [Node("s", "source", messages=1)], [("s", "x")])


def test_code_validation():
    net, code = repetition(2)
    K = code.K.copy_array()
    K[0, 1] = 1      # edge 1 does not feed edge 2
    ok, errs = NetworkCode(code.A, Matrix(net.F, K)).validate(net)
    assert not ok and "does not feed" in errs[0]


def test_transfer_with_zero_k():
    net, code = repetition(3)
    b = transfer_compute(net, code)
    assert np.array_equal(b.F.a, np.eye(3, dtype=np.int64))
    st_ = b.sinks[0]
    assert np.array_equal(st_.FS, b.AF.a[:, [0, 1, 2]])


def test_single_edge_global_vector():
    net, code = repetition(1)
    assert global_vectors(net, code).a.tolist() == [[1]]


def test_forwarding_copies_input():
    r = star()
    AF = global_vectors(r.net, r.code)
    for v in r.net.nodes:
        if v.role == "forward":
            (i,) = r.net.in_edges[v.id]
            for j in r.net.out_edges[v.id]:
                assert np.array_equal(AF.a[:, j], AF.a[:, i])


def test_repetition_init_blocks():
    r = rebuild(EXAMPLES["fig5"], [])
    AF = global_vectors(r.net, r.code).a
    for s, msgs in r.net.source_messages.items():
        cols = r.net.out_edges[s]
        assert len(cols) == 3
        for j in cols:
            assert AF[:, j].tolist() == [int(i in msgs) for i in range(3)]


def test_final_multicast_vectors_match_stored_matrix():
    ex = EXAMPLES["fig3"]
    r = rebuild(ex)
    M = stage_matrix(ex, 4).a
    n, k = r.net.n, len(r.net.eligible)
    AF = global_vectors(r.net, r.code).a
    assert np.array_equal(M[:n, n + k:], AF[:, r.net.eligible])


def test_hand_wired_sink_transfer():
    r = rebuild(EXAMPLES["fig10"])
    st_ = r.state.copy()
    t2 = next(s for s in st_.sinks if s.id == "t2")
    t2.inputs = [6, 7]
    net, code, _, _ = st_.realize()
    b = transfer_compute(net, code)
    FS = next(s for s in b.sinks if s.sink == "t2").FS
    assert FS.tolist() == [[1, 2], [4, 1], [3, 6]]


def test_text_round_trip():
    r = rebuild(EXAMPLES["fig5"])
    text = write_network(r.net, r.code)
    net, code = read_network(text)
    assert network_equal(net, r.net)
    assert np.array_equal(code.A.a, r.code.A.a) and np.array_equal(code.K.a, r.code.K.a)
    assert write_network(net, code) == text
    assert np.array_equal(read_code(net, write_code(code)).K.a, code.K.a)


def test_parse_errors():
    with pytest.raises(NetworkError):
        read_network("")
    with pytest.raises(NetworkError):
        read_network("1 1 2 1 gf2\ns source 1\nt sink 1\n2 s t\n")
    with pytest.raises(NetworkError):
        read_network("1 1 2 1 gf2\ns source 1\nt sink 1\n1 s t\nA 1 5 1\n")


def test_export_dot():
    assert export_dot(None) == "digraph network {\n  rankdir=LR;\n}\n"
    r = star()
    text = export_dot(r.net, r.code)
    assert text == export_dot(r.net, r.code)
    assert text.count("lightblue") == 2 and text.count("palegreen") == 7 and text.count("salmon") == 2
    assert text.count("->") == 21


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["gf3", "gf8"]))
def test_random_code_round_trip(seed, fname):
    r = rebuild(EXAMPLES["fig3"], [])
    F = field(fname)
    rng = np.random.default_rng(seed)
    net = Network(F, r.net.nodes, r.net.edges, r.net.eligible)
    A = np.where(r.code.A.a > 0, rng.integers(1, F.order, r.code.A.a.shape), 0)
    K = np.where(r.code.K.a > 0, rng.integers(1, F.order, r.code.K.a.shape), 0)
    code = NetworkCode(Matrix(F, A), Matrix(F, K))
    net2, code2 = read_network(write_network(net, code))
    assert network_equal(net, net2)
    assert np.array_equal(global_vectors(net, code).a, global_vectors(net2, code2).a)
