"""Grow an error-correcting network one coding node at a time.

The working state is the matrix X of the representation (I | X): one column
per error-eligible edge (the incoming edge of a forwarding node), the top n
rows holding the global encoding vector and the bottom rows the error
transfer F restricted to eligible edges.  Ground labels follow the usual
convention: message i -> i, basis element of the j-th eligible edge -> n + j,
f(e_j) -> n + k + j, with k the current number of eligible edges.

``realize`` turns a state into an explicit network: a forwarding node per
eligible edge, a coding node per coded edge with copy edges from the
forwarding nodes it combines, and copy edges from forwarding nodes to sinks.
"""
from __future__ import annotations

import copy
import itertools
import random
from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from .field import GF, Matrix, array_rank, field as make_field
from .matroid import VectorMatroid, mds_generator
from .matroidal import GroundMap
from .network import Network, NetworkCode, Node, SinkTransfer
from .verifier import _sink_failures


class ConstructionFailed(RuntimeError):
    pass


class ReplayError(RuntimeError):
    pass


@dataclass
class BuildParams:
    mode: str = "multicast"            # "multicast" or "unicast"
    sources: tuple = (1,)              # messages per source; unicast uses n ones
    alpha: int = 1
    nc: int = 1
    sinks: int = 1                     # multicast only; unicast has one sink per source
    field: object = "gf8"
    seed: int = 0
    ec_size: int = 2
    trial_budget: int = 10 ** 6
    minimize: bool = False
    blocks: list | None = None         # explicit per-source generator blocks (multicast)

    @classmethod
    def unicast(cls, n, **kw):
        return cls(mode="unicast", sources=(1,) * n, sinks=n, **kw)

    def __post_init__(self):
        if self.mode not in ("multicast", "unicast"):
            raise ValueError(f"unknown mode {self.mode!r}")
        self.sources = tuple(int(s) for s in self.sources)
        if self.mode == "unicast":
            if any(s != 1 for s in self.sources):
                raise ValueError("unicast sources carry one message each")
            self.sinks = len(self.sources)
        if self.alpha < 0 or self.nc < 0 or self.ec_size < 2:
            raise ValueError("need alpha >= 0, nc >= 0 and ec_size >= 2")


@dataclass
class SinkState:
    id: str
    demands: tuple
    inputs: list                       # sorted eligible-edge indices


@dataclass
class TraceRow:
    ec: tuple                          # 0-based eligible indices
    new: int                           # 0-based index of the new eligible edge
    coeffs: tuple

    def to_text(self) -> str:
        return (" ".join(str(e + 1) for e in self.ec) + " | " + str(self.new + 1)
                + " | " + " ".join(str(c) for c in self.coeffs))

    @classmethod
    def from_text(cls, line: str) -> "TraceRow":
        parts = [p.strip() for p in line.split("|")]
        if len(parts) != 3:
            raise ValueError(f"bad trace line {line!r}")
        tok = lambda s: [int(t) for t in s.replace(",", " ").replace("(", " ").replace(")", " ").split()]
        ec, new, co = tok(parts[0]), tok(parts[1]), tok(parts[2])
        if len(new) != 1 or len(ec) != len(co) or len(ec) < 2:
            raise ValueError(f"bad trace line {line!r}")
        return cls(tuple(e - 1 for e in ec), new[0] - 1, tuple(co))


def read_trace(text: str) -> list[TraceRow]:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(TraceRow.from_text(line))
    return rows


def write_trace(rows) -> str:
    return "".join(r.to_text() + "\n" for r in rows)


@dataclass
class BuildState:
    F: GF
    mode: str
    alpha: int
    sources: tuple
    X: np.ndarray
    edge_source: list                  # source index for source edges, else None
    edge_inputs: list                  # tuple of input eligible edges (coded edges)
    edge_coeffs: list
    sinks: list
    abar: list | None = None           # unicast bookkeeping, per sink {edge: row}
    trace: list = dc_field(default_factory=list)
    rng: random.Random = dc_field(default_factory=random.Random)

    @property
    def n(self) -> int:
        return sum(self.sources)

    @property
    def k(self) -> int:
        return self.X.shape[1]

    @property
    def beta(self) -> int:
        return 2 * self.alpha

    def copy(self) -> "BuildState":
        new = copy.copy(self)
        new.X = self.X.copy()
        new.edge_source = list(self.edge_source)
        new.edge_inputs = list(self.edge_inputs)
        new.edge_coeffs = list(self.edge_coeffs)
        new.sinks = [SinkState(s.id, s.demands, list(s.inputs)) for s in self.sinks]
        if self.abar is not None:
            new.abar = [None if a is None else {e: r.copy() for e, r in a.items()} for a in self.abar]
        new.trace = list(self.trace)
        return new

    # -- matroid view ------------------------------------------------------

    def representation(self) -> Matrix:
        n, k = self.n, self.k
        return Matrix(self.F, np.hstack([np.eye(n + k, dtype=np.int64), self.X]))

    def matroid(self) -> VectorMatroid:
        return VectorMatroid(self.representation())

    def f_label(self, j) -> int:
        return self.n + self.k + j + 1

    def sink_ok(self, s: SinkState, inputs=None) -> bool:
        """Detection check of one sink over all patterns of eligible edges."""
        ins = s.inputs if inputs is None else inputs
        n = self.n
        st = SinkTransfer(s.id, list(ins), list(s.demands), self.X[:n, ins], self.X[n:, ins])
        return next(_sink_failures(self.F, st, range(self.k), self.beta), None) is None

    def condition_c(self, which=None) -> bool:
        idx = range(len(self.sinks)) if which is None else which
        return all(self.sink_ok(self.sinks[i]) for i in idx)

    # -- explicit network --------------------------------------------------

    def realize(self):
        """(Network, NetworkCode, GroundMap, B) for the current state."""
        F, n, k = self.F, self.n, self.k
        nodes = [Node(f"s{i + 1}", "source", messages=c) for i, c in enumerate(self.sources)]
        for j in range(k):
            if self.edge_source[j] is None:
                nodes.append(Node(f"c{j + 1}", "coding"))
            nodes.append(Node(f"f{j + 1}", "forward"))
        for s in self.sinks:
            nodes.append(Node(s.id, "sink", demands=tuple(s.demands)))
        edges, elig, origin = [], [], []
        where = {}                     # eligible index -> edge index
        kent = []                      # (from edge, to edge, coefficient)
        for j in range(k):
            src = self.edge_source[j]
            if src is not None:
                where[j] = len(edges)
                elig.append(len(edges))
                origin.append(j)
                edges.append((f"s{src + 1}", f"f{j + 1}"))
                continue
            copies = []
            for i in self.edge_inputs[j]:
                kent.append((where[i], len(edges), 1))
                copies.append(len(edges))
                origin.append(i)
                edges.append((f"f{i + 1}", f"c{j + 1}"))
            where[j] = len(edges)
            elig.append(len(edges))
            origin.append(j)
            for ce, c in zip(copies, self.edge_coeffs[j]):
                kent.append((ce, len(edges), c))
            edges.append((f"c{j + 1}", f"f{j + 1}"))
        for s in self.sinks:
            for i in s.inputs:
                kent.append((where[i], len(edges), 1))
                origin.append(i)
                edges.append((f"f{i + 1}", s.id))
        net = Network(F, nodes, edges, elig)
        E = len(edges)
        A = np.zeros((n, E), dtype=np.int64)
        off = np.cumsum((0,) + self.sources)
        for j in range(k):
            src = self.edge_source[j]
            if src is not None:
                A[off[src]:off[src + 1], where[j]] = self.X[off[src]:off[src + 1], j]
        K = np.zeros((E, E), dtype=np.int64)
        for a, b, c in kent:
            K[a, b] = c
        code = NetworkCode(Matrix(F, A), Matrix(F, K))
        f = GroundMap(list(range(1, n + 1)), {e: self.f_label(origin[e]) for e in range(E)})
        B = list(range(1, n + k + 1))
        return net, code, f, B

    def abar_for_network(self, net: Network):
        """Bookkeeping rows aligned with the realised sinks' incoming edges."""
        if self.abar is None or any(a is None for a in self.abar):
            return None
        out = {}
        for s, a in zip(self.sinks, self.abar):
            out[s.id] = np.stack([a[i] for i in s.inputs])
        return out


# ----------------------------------------------------------------------
# initialisation


def _field(p: BuildParams) -> GF:
    return make_field(p.field)


def init_multicast(p: BuildParams) -> BuildState:
    F = _field(p)
    if p.mode != "multicast":
        raise ValueError("init_multicast needs multicast parameters")
    blocks = []
    for i, ns in enumerate(p.sources):
        N = ns + 2 * p.alpha
        if p.blocks is not None:
            blk = p.blocks[i]
            blk = blk.a if isinstance(blk, Matrix) else np.asarray(blk, dtype=np.int64)
            if blk.shape != (ns, N):
                raise ValueError(f"source block {i + 1} must be {ns}x{N}")
        else:
            if N > F.order + 1:
                raise ConstructionFailed(f"no MDS block of length {N} over {F.name}")
            blk = mds_generator(ns, N, F).a
        blocks.append(blk)
    n = sum(p.sources)
    N = sum(b.shape[1] for b in blocks)
    top = np.zeros((n, N), dtype=np.int64)
    edge_source = []
    r = c = 0
    for i, b in enumerate(blocks):
        top[r:r + b.shape[0], c:c + b.shape[1]] = b
        edge_source += [i] * b.shape[1]
        r += b.shape[0]
        c += b.shape[1]
    X = np.vstack([top, np.eye(N, dtype=np.int64)])
    sinks = [SinkState(f"t{i + 1}", tuple(range(n)), list(range(N))) for i in range(p.sinks)]
    return BuildState(F, "multicast", p.alpha, p.sources, X, edge_source,
                      [()] * N, [()] * N, sinks, None, [], random.Random(p.seed))


def init_unicast(p: BuildParams) -> BuildState:
    F = _field(p)
    if p.mode != "unicast":
        raise ValueError("init_unicast needs unicast parameters")
    n = len(p.sources)
    w = 2 * p.alpha + 1
    N = n * w
    top = np.zeros((n, N), dtype=np.int64)
    for i in range(n):
        top[i, i * w:(i + 1) * w] = 1
    X = np.vstack([top, np.eye(N, dtype=np.int64)])
    edge_source = [i // w for i in range(N)]
    sinks = [SinkState(f"t{i + 1}", (i,), list(range(i * w, (i + 1) * w))) for i in range(n)]
    abar = []
    for i in range(n):
        a = {}
        for c, e in enumerate(range(i * w, (i + 1) * w)):
            row = np.zeros(w, dtype=np.int64)
            row[c] = 1
            a[e] = row
        abar.append(a)
    return BuildState(F, "unicast", p.alpha, p.sources, X, edge_source,
                      [()] * N, [()] * N, sinks, abar, [], random.Random(p.seed))


def init_state(p: BuildParams) -> BuildState:
    return init_multicast(p) if p.mode == "multicast" else init_unicast(p)


# ----------------------------------------------------------------------
# one extension step


def pick_ec(state: BuildState, size: int, tried: set) -> tuple | None:
    """Uniformly random unused subset of eligible edges, or None when all
    C(k, size) subsets have been tried."""
    k = state.k
    if size > k:
        return None
    total = comb(k, size)
    if len(tried) >= total:
        return None
    if total <= 4096:
        rest = [c for c in itertools.combinations(range(k), size) if c not in tried]
        return state.rng.choice(rest)
    while True:
        c = tuple(sorted(state.rng.sample(range(k), size)))
        if c not in tried:
            return c


def coefficient_tuples(F: GF, m: int, budget: int, rng: random.Random):
    """Nonzero coefficient tuples with the first entry fixed to 1.

    Scaling the new column does not change the matroid, so c_1 = 1 loses
    nothing.  Exhaustive lexicographic when (q-1)^(m-1) <= budget, otherwise
    ``budget`` seeded random draws.
    """
    q = F.order
    if (q - 1) ** (m - 1) <= budget:
        for rest in itertools.product(range(1, q), repeat=m - 1):
            yield (1,) + rest
    else:
        for _ in range(budget):
            yield (1,) + tuple(rng.randrange(1, q) for _ in range(m - 1))


def extension_column(state: BuildState, ec, coeffs) -> np.ndarray | None:
    F = state.F
    x = np.zeros(state.X.shape[0], dtype=np.int64)
    for e, c in zip(ec, coeffs):
        x = F.vadd(x, F.vmul(state.X[:, e], c))
    if not x[:state.n].any():
        return None
    return x


def apply_extension(state: BuildState, ec, coeffs, x=None) -> BuildState:
    """Bordered update X -> [[X, x], [0, 1]] and bookkeeping for the new edge.

    Sink inputs are left alone; see ``update_sinks``.
    """
    if x is None:
        x = extension_column(state, ec, coeffs)
        if x is None:
            raise ValueError("extension column has an all-zero message part")
    new = state.copy()
    rows, k = state.X.shape
    X = np.zeros((rows + 1, k + 1), dtype=np.int64)
    X[:rows, :k] = state.X
    X[:rows, k] = x
    X[rows, k] = 1
    new.X = X
    new.edge_source.append(None)
    new.edge_inputs.append(tuple(ec))
    new.edge_coeffs.append(tuple(int(c) for c in coeffs))
    new.trace.append(TraceRow(tuple(ec), k, tuple(int(c) for c in coeffs)))
    return new


def new_circuits(state: BuildState, ec) -> list[frozenset]:
    """Circuits of the restriction to f(ec) + {x, y} that contain x.

    Labels are the eligible indices of ec plus "x" and "y".  Requires the
    state right after ``apply_extension``.
    """
    k = state.k
    rows = state.X.shape[0]
    cols = [state.X[:, e] for e in ec]
    y = np.zeros(rows, dtype=np.int64)
    y[rows - 1] = 1
    cols += [state.X[:, k - 1], y]
    m = VectorMatroid(Matrix(state.F, np.stack(cols, axis=1)), list(ec) + ["x", "y"])
    circ = [c for c in m.circuits() if "x" in c]
    return sorted(circ, key=lambda c: sorted(str(v) for v in c))


def update_sinks(state: BuildState, ec) -> list[int]:
    """Sink update after an extension; returns indices of changed sinks.

    Rule 1 (both modes): the lowest-index input e_i lying in a circuit with x
    is replaced by the new edge.  Rule 2 (unicast): every other edge of that
    circuit that is not an input and raises the rank of the remaining inputs
    is added as side information.
    """
    F = state.F
    new_e = state.k - 1
    circ = new_circuits(state, ec)
    coeff = dict(zip(ec, state.edge_coeffs[new_e]))
    changed = []
    for si, s in enumerate(state.sinks):
        hit = None
        for e in s.inputs:
            c = next((c for c in circ if e in c), None)
            if c is not None:
                hit = (e, c)
                break
        if hit is None:
            continue
        ei, C = hit
        ins = [e for e in s.inputs if e != ei]
        if state.mode == "unicast":
            for ej in sorted(v for v in C if v not in ("x", "y") and v != ei):
                if ej in ins:
                    continue
                r0 = array_rank(F, state.X[:, ins]) if ins else 0
                r1 = array_rank(F, state.X[:, ins + [ej]])
                if r1 > r0:
                    ins.append(ej)
        s.inputs = sorted(ins + [new_e])
        changed.append(si)
        if state.abar is not None and state.abar[si] is not None:
            a = state.abar[si]
            ri = a.pop(ei)
            ci = F.inv(coeff[ei])
            a[new_e] = F.vmul(ri, ci)
            for ek in ec:
                if ek == ei:
                    continue
                if ek not in s.inputs:
                    state.abar[si] = None
                    break
                if ek not in a:
                    a[ek] = np.zeros_like(ri)
                a[ek] = F.vsub(a[ek], F.vmul(ri, F.mul(ci, coeff[ek])))
            else:
                for e in s.inputs:
                    a.setdefault(e, np.zeros_like(ri))
    return changed


def minimize_sink_inputs(state: BuildState, which=None) -> list[int]:
    """Smallest subset I of In(t) - e_new with I + e_new still decodable, for
    sinks holding the newest edge; lexicographic among equal sizes."""
    new_e = state.k - 1
    idx = range(len(state.sinks)) if which is None else which
    changed = []
    for si in idx:
        s = state.sinks[si]
        if new_e not in s.inputs:
            continue
        rest = [e for e in s.inputs if e != new_e]
        for size in range(len(rest) + 1):
            found = None
            for sub in itertools.combinations(rest, size):
                cand = sorted(sub + (new_e,))
                if state.sink_ok(s, cand):
                    found = cand
                    break
            if found is not None:
                break
        if found != s.inputs:
            dropped = set(s.inputs) - set(found)
            s.inputs = found
            changed.append(si)
            if state.abar is not None and state.abar[si] is not None:
                a = state.abar[si]
                if any(a[e].any() for e in dropped):
                    state.abar[si] = None
                else:
                    for e in dropped:
                        a.pop(e)
    return changed


def try_extension(state: BuildState, ec, coeffs, minimize=False) -> BuildState | None:
    """Apply, update sinks and check decodability; None when the check fails.

    Only sinks whose inputs changed are checked: for the others the new edge
    feeds nothing they see, so patterns through it reduce to smaller patterns
    that already passed.
    """
    x = extension_column(state, ec, coeffs)
    if x is None:
        return None
    new = apply_extension(state, ec, coeffs, x)
    changed = update_sinks(new, ec)
    if not new.condition_c(changed):
        return None
    if minimize:
        minimize_sink_inputs(new, changed)
    return new


def find_extension_vector(state: BuildState, ec, budget: int = 10 ** 6, minimize=False):
    """First coefficient tuple whose extension keeps every sink decodable.

    Returns (coeffs, new_state) or None.
    """
    for coeffs in coefficient_tuples(state.F, len(ec), budget, state.rng):
        new = try_extension(state, ec, coeffs, minimize)
        if new is not None:
            return coeffs, new
    return None


# ----------------------------------------------------------------------
# drivers


@dataclass
class BuildResult:
    state: BuildState
    net: Network
    code: NetworkCode
    matroid: VectorMatroid
    f: GroundMap
    B: list
    attempts: list                     # number of ec subsets tried per node


def _finish(state: BuildState, attempts) -> BuildResult:
    net, code, f, B = state.realize()
    return BuildResult(state, net, code, state.matroid(), f, B, attempts)


def construct(p: BuildParams, progress=None) -> BuildResult:
    """Run the construction; raises ConstructionFailed when some node cannot
    be added for any choice of edge subset."""
    state = init_state(p)
    if not state.condition_c():
        raise ConstructionFailed("initial network is not decodable")
    attempts = []
    for node in range(p.nc):
        tried = set()
        while True:
            ec = pick_ec(state, p.ec_size, tried)
            if ec is None:
                raise ConstructionFailed(
                    f"no extension found for coding node {node + 1} after trying "
                    f"{len(tried)} edge subsets over {state.F.name}")
            tried.add(ec)
            hit = find_extension_vector(state, ec, p.trial_budget, p.minimize)
            if hit is not None:
                state = hit[1]
                attempts.append(len(tried))
                if progress:
                    progress(state)
                break
    return _finish(state, attempts)


def replay(p: BuildParams, rows, strict: bool = True) -> BuildResult:
    """Rebuild from recorded (edge subset, new node, coefficients) rows."""
    state = init_state(p)
    for r, row in enumerate(rows):
        if row.new != state.k:
            raise ReplayError(f"row {r + 1}: new node {row.new + 1}, expected {state.k + 1}")
        if any(not 0 <= e < state.k for e in row.ec):
            raise ReplayError(f"row {r + 1}: edge subset {row.to_text()} out of range")
        x = extension_column(state, row.ec, row.coeffs)
        if x is None:
            raise ReplayError(f"row {r + 1}: extension column has zero message part")
        new = apply_extension(state, row.ec, row.coeffs, x)
        changed = update_sinks(new, row.ec)
        if strict and not new.condition_c(changed):
            raise ReplayError(f"row {r + 1}: sinks no longer decodable")
        if p.minimize:
            minimize_sink_inputs(new, changed)
        state = new
    return _finish(state, [1] * len(rows))
