import pytest

from matroidnet.field import Matrix, field
from matroidnet.matroid import VectorMatroid
from matroidnet.network import read_network


def repetition(copies: int, fname: str = "gf2"):
    """One source, one sink, ``copies`` parallel edges carrying the message."""
    lines = [f"1 1 2 {copies} {fname}", "s source 1", "t sink 1"]
    lines += [f"{j} s t" for j in range(1, copies + 1)]
    lines += [f"A 1 {j} 1" for j in range(1, copies + 1)]
    return read_network("\n".join(lines) + "\n")


def mat(rows, fname="gf2"):
    return Matrix(field(fname), rows)


@pytest.fixture
def ex1():
    """Four columns over GF(2): two unit vectors, a zero column, their sum."""
    return VectorMatroid(mat([[1, 0, 0, 1], [0, 1, 0, 1]]))


def random_code(net, F, rng, p_zero=0.2):
    """Random code on the topology of ``net`` over F: every admissible A/K entry
    is nonzero with probability 1 - p_zero."""
    import numpy as np
    from matroidnet.network import Network, NetworkCode

    net = Network(F, net.nodes, net.edges, net.eligible)
    E = net.n_edges
    A = np.zeros((net.n, E), dtype=np.int64)
    K = np.zeros((E, E), dtype=np.int64)
    for j in range(E):
        t = net.tail(j)
        for i in net.source_messages.get(t, []):
            A[i, j] = rng.integers(1, F.order) if rng.random() > p_zero else 0
        for i in net.in_edges[t]:
            K[i, j] = rng.integers(1, F.order) if rng.random() > p_zero else 0
    return net, NetworkCode(Matrix(F, A), Matrix(F, K))


# acceptance lines collected during the run and printed in the summary
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        for line in ACCEPTANCE[n]:
            terminalreporter.write_line(line)
