"""Acyclic networks, linear network codes and their transfer matrices.

Edges are stored in a fixed ancestral order e_1..e_|E| (0-based internally):
any edge feeding e_j has a smaller index.  Messages are numbered in the order
of the source nodes.  A subset of edges is marked error-eligible; error
patterns are drawn only from it.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import GF, Matrix, field as make_field

ROLES = ("source", "sink", "coding", "forward", "relay")


class NetworkError(ValueError):
    pass


@dataclass
class Node:
    id: str
    role: str
    messages: int = 0          # sources only
    demands: tuple = ()        # sinks only, 0-based message indices


@dataclass
class Network:
    """Directed acyclic multigraph with sources, sinks and an edge order."""

    F: GF
    nodes: list[Node]
    edges: list[tuple[str, str]]
    eligible: list[int] | None = None
    _node: dict = dc_field(default=None, repr=False)

    def __post_init__(self):
        self._node = {}
        for v in self.nodes:
            if v.id in self._node:
                raise NetworkError(f"duplicate node id {v.id!r}")
            if v.role not in ROLES:
                raise NetworkError(f"unknown role {v.role!r} for node {v.id!r}")
            self._node[v.id] = v
        for j, (a, b) in enumerate(self.edges):
            if a not in self._node or b not in self._node:
                raise NetworkError(f"edge {j + 1} uses an unknown node")
        if self.eligible is None:
            self.eligible = list(range(len(self.edges)))
        self.eligible = sorted(set(self.eligible))
        self.in_edges = {v.id: [] for v in self.nodes}
        self.out_edges = {v.id: [] for v in self.nodes}
        for j, (a, b) in enumerate(self.edges):
            self.out_edges[a].append(j)
            self.in_edges[b].append(j)
        self.source_messages = {}
        k = 0
        for v in self.nodes:
            if v.role == "source":
                self.source_messages[v.id] = list(range(k, k + v.messages))
                k += v.messages
        self.n = k
        self.message_source = [None] * k
        for s, ms in self.source_messages.items():
            for i in ms:
                self.message_source[i] = s

    # -- basic queries ---------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def node(self, vid) -> Node:
        return self._node[vid]

    @property
    def sources(self) -> list[Node]:
        return [v for v in self.nodes if v.role == "source"]

    @property
    def sinks(self) -> list[Node]:
        return [v for v in self.nodes if v.role == "sink"]

    def tail(self, j) -> str:
        return self.edges[j][0]

    def head(self, j) -> str:
        return self.edges[j][1]

    def edge_inputs(self, j) -> list[int]:
        """In(e_j): edges entering the tail of e_j."""
        return self.in_edges[self.edges[j][0]]

    def sink_inputs(self, t) -> list[int]:
        return self.in_edges[t]

    # -- validation --------------------------------------------------------

    def validate(self) -> tuple[bool, list[str]]:
        """Check the model constraints; returns (ok, diagnostics)."""
        errs = []
        for j, (a, b) in enumerate(self.edges):
            if a == b:
                errs.append(f"edge {j + 1} is a self-loop")
            for i in self.in_edges[a]:
                if i >= j:
                    errs.append(f"ancestral order: edge {i + 1} feeds edge {j + 1}")
        for v in self.nodes:
            if v.role == "source" and self.in_edges[v.id]:
                errs.append(f"source {v.id} has incoming edges")
            if v.role == "sink":
                if self.out_edges[v.id]:
                    errs.append(f"sink {v.id} has outgoing edges")
                bad = [d + 1 for d in v.demands if not 0 <= d < self.n]
                if bad:
                    errs.append(f"sink {v.id} demands messages {bad} outside 1..{self.n}")
        bad = [j + 1 for j in self.eligible if not 0 <= j < len(self.edges)]
        if bad:
            errs.append(f"error-eligible edges {bad} do not exist")
        return not errs, errs


@dataclass
class NetworkCode:
    """Source matrix A (n x |E|) and local coding matrix K (|E| x |E|)."""

    A: Matrix
    K: Matrix

    @classmethod
    def zeros(cls, net: Network) -> "NetworkCode":
        return cls(Matrix.zeros(net.F, net.n, net.n_edges),
                   Matrix.zeros(net.F, net.n_edges, net.n_edges))

    def validate(self, net: Network) -> tuple[bool, list[str]]:
        errs = []
        E = net.n_edges
        if self.A.shape != (net.n, E) or self.K.shape != (E, E):
            return False, ["code dimensions do not match the network"]
        for i, j in zip(*np.nonzero(self.A.a)):
            if net.tail(j) != net.message_source[i]:
                errs.append(f"A[{i + 1},{j + 1}] nonzero but edge {j + 1} does not leave the source of message {i + 1}")
        for i, j in zip(*np.nonzero(self.K.a)):
            if i >= j:
                errs.append(f"K[{i + 1},{j + 1}] nonzero on or below the diagonal")
            elif net.head(i) != net.tail(j):
                errs.append(f"K[{i + 1},{j + 1}] nonzero but edge {i + 1} does not feed edge {j + 1}")
        return not errs, errs


def transfer_matrix(K: Matrix) -> Matrix:
    """F = (I - K)^-1 = sum_k K^k for strictly upper triangular K."""
    F_ = K.F
    k = K.a
    E = k.shape[0]
    if np.any(np.tril(k)):
        raise NetworkError("K is not strictly upper triangular")
    out = np.zeros((E, E), dtype=np.int64)
    for j in range(E):
        col = np.zeros(E, dtype=np.int64)
        col[j] = 1
        for i in np.flatnonzero(k[:j, j]):
            col = F_.vadd(col, F_.vmul(out[:, i], int(k[i, j])))
        out[:, j] = col
    return Matrix._wrap(F_, out)


@dataclass
class SinkTransfer:
    sink: str
    inputs: list[int]
    demands: list[int]
    FS: np.ndarray      # n x n_t
    Ft: np.ndarray      # |E| x n_t


@dataclass
class TransferBundle:
    F: Matrix
    AF: Matrix
    sinks: list[SinkTransfer]


def global_vectors(net: Network, code: NetworkCode, check: bool = True) -> Matrix:
    """AF, with a local-consistency check on every column."""
    F = transfer_matrix(code.K)
    AF = code.A @ F
    if check:
        _check_local(net, code, AF)
    return AF


def _check_local(net: Network, code: NetworkCode, AF: Matrix):
    Fd = net.F
    a, k, A = AF.a, code.K.a, code.A.a
    for j in range(net.n_edges):
        want = A[:, j].copy()
        for i in net.edge_inputs(j):
            if k[i, j]:
                want = Fd.vadd(want, Fd.vmul(a[:, i], int(k[i, j])))
        if not np.array_equal(want, a[:, j]):  # pragma: no cover - algebraic identity
            raise NetworkError(f"edge {j + 1} violates local consistency")


def zero_vector_edges(AF: Matrix) -> list[int]:
    return [j for j in range(AF.cols) if not AF.a[:, j].any()]


def transfer_compute(net: Network, code: NetworkCode) -> TransferBundle:
    ok, errs = code.validate(net)
    if not ok:
        raise NetworkError(errs[0])
    F = transfer_matrix(code.K)
    AF = code.A @ F
    _check_local(net, code, AF)
    sinks = []
    for t in net.sinks:
        ins = net.sink_inputs(t.id)
        sinks.append(SinkTransfer(t.id, ins, list(t.demands), AF.a[:, ins], F.a[:, ins]))
    return TransferBundle(F, AF, sinks)


# ----------------------------------------------------------------------
# text format


def _parse_field(tok: str) -> GF:
    return make_field(tok)


def _field_token(F: GF) -> str:
    from .field import DEFAULT_MODULI
    if F.m == 1:
        return f"gf{F.p}"
    if F.p == 2 and (2, F.m) in DEFAULT_MODULI and F.modulus == DEFAULT_MODULI[(2, F.m)]:
        return f"gf{F.order}"
    return f"custom:{F.p},{F.m},{F.modulus_code}"


def _clean_lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def read_network(text: str) -> tuple[Network, NetworkCode | None]:
    """Parse the network text format; returns the network and its code if any
    A/K lines were present."""
    lines = list(_clean_lines(text))
    if not lines:
        raise NetworkError("empty network file")
    head = lines[0].split()
    if len(head) != 5:
        raise NetworkError("header must be 'n_sources n_sinks n_nodes n_edges field'")
    n_src, n_snk, n_nodes, n_edges = (int(t) for t in head[:4])
    F = _parse_field(head[4])
    body = lines[1:]
    if len(body) < n_nodes + n_edges:
        raise NetworkError("file ends before all nodes and edges are listed")
    nodes = []
    for line in body[:n_nodes]:
        tok = line.split()
        if len(tok) < 2:
            raise NetworkError(f"bad node line {line!r}")
        vid, role = tok[0], tok[1]
        payload = tok[2] if len(tok) > 2 else ""
        if role == "source":
            nodes.append(Node(vid, role, messages=int(payload)))
        elif role == "sink":
            dem = tuple(int(d) - 1 for d in payload.split(",") if d)
            nodes.append(Node(vid, role, demands=dem))
        else:
            nodes.append(Node(vid, role))
    edges, marked = [], []
    for k, line in enumerate(body[n_nodes:n_nodes + n_edges]):
        tok = line.split()
        if len(tok) not in (3, 4) or int(tok[0]) != k + 1:
            raise NetworkError(f"bad edge line {line!r} (ids must run 1..n_edges)")
        edges.append((tok[1], tok[2]))
        if len(tok) == 4:
            if tok[3] != "e":
                raise NetworkError(f"bad edge flag in {line!r}")
            marked.append(k)
    net = Network(F, nodes, edges, marked or None)
    if len(net.sources) != n_src or len(net.sinks) != n_snk:
        raise NetworkError("header source/sink counts do not match the node lines")
    code = read_code_lines(net, body[n_nodes + n_edges:])
    return net, code


def read_code_lines(net: Network, lines) -> NetworkCode | None:
    lines = list(lines)
    if not lines:
        return None
    A = np.zeros((net.n, net.n_edges), dtype=np.int64)
    K = np.zeros((net.n_edges, net.n_edges), dtype=np.int64)
    for line in lines:
        tok = line.split()
        if len(tok) != 4 or tok[0] not in ("A", "K"):
            raise NetworkError(f"bad code line {line!r}")
        i, j, v = int(tok[1]) - 1, int(tok[2]) - 1, int(tok[3])
        net.F.check(v)
        tgt = A if tok[0] == "A" else K
        if not (0 <= i < tgt.shape[0] and 0 <= j < tgt.shape[1]):
            raise NetworkError(f"code entry out of range: {line!r}")
        tgt[i, j] = v
    return NetworkCode(Matrix(net.F, A), Matrix(net.F, K))


def read_code(net: Network, text: str) -> NetworkCode:
    code = read_code_lines(net, _clean_lines(text))
    return code if code is not None else NetworkCode.zeros(net)


def write_code(code: NetworkCode) -> str:
    out = []
    for name, M in (("A", code.A), ("K", code.K)):
        for i, j in zip(*np.nonzero(M.a)):
            out.append(f"{name} {i + 1} {j + 1} {int(M.a[i, j])}")
    return "\n".join(out) + ("\n" if out else "")


def write_network(net: Network, code: NetworkCode | None = None) -> str:
    out = [f"{len(net.sources)} {len(net.sinks)} {len(net.nodes)} {net.n_edges} {_field_token(net.F)}"]
    for v in net.nodes:
        if v.role == "source":
            out.append(f"{v.id} source {v.messages}")
        elif v.role == "sink":
            out.append(f"{v.id} sink {','.join(str(d + 1) for d in v.demands)}")
        else:
            out.append(f"{v.id} {v.role}")
    all_elig = len(net.eligible) == net.n_edges
    elig = set(net.eligible)
    for j, (a, b) in enumerate(net.edges):
        flag = " e" if (j in elig and not all_elig) else ""
        out.append(f"{j + 1} {a} {b}{flag}")
    text = "\n".join(out) + "\n"
    if code is not None:
        text += write_code(code)
    return text


def network_equal(a: Network, b: Network) -> bool:
    return (a.F == b.F and a.nodes == b.nodes and a.edges == b.edges
            and a.eligible == b.eligible)


# ----------------------------------------------------------------------
# DOT export

_COLORS = {"source": "lightblue", "sink": "salmon", "coding": "khaki",
           "forward": "palegreen", "relay": "white"}


def export_dot(net: Network | None, code: NetworkCode | None = None) -> str:
    """Graphviz text; edges are labelled with global vectors when a code is given."""
    out = ["digraph network {", "  rankdir=LR;"]
    if net is None:
        out.append("}")
        return "\n".join(out) + "\n"
    AF = global_vectors(net, code) if code is not None else None
    for v in net.nodes:
        out.append(f'  "{v.id}" [style=filled, fillcolor={_COLORS[v.role]}];')
    for j, (a, b) in enumerate(net.edges):
        lab = f"e{j + 1}"
        if AF is not None:
            lab += " (" + ",".join(str(int(x)) for x in AF.a[:, j]) + ")"
        out.append(f'  "{a}" -> "{b}" [label="{lab}"];')
    out.append("}")
    return "\n".join(out) + "\n"
