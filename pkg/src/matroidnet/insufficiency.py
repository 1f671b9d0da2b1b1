"""Networks on which linear single-edge error detection is not enough.

Three fixtures ship as data files:

* ``n1``: single-edge detection is linearly achievable only in characteristic
  two (a Fano-type network with one direct edge per sink);
* ``n2``: achievable only outside characteristic two (non-Fano type);
* ``n3``: the two conjoined on shared sources a, b, c.  No field works, but a
  code over the four-symbol alphabet mixing Z4 arithmetic, bitwise xor and
  the bit swap t does.

The linear search, the exhaustive enumerator for arbitrary edge functions and
the amalgam-matroid checks live here as well.
"""
from __future__ import annotations

import ast
import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import GF, Matrix, batch_pivots, field as make_field
from .fileio import data_text
from .matroid import VectorMatroid, amalgam, amalgam_monotonicity, rank_axioms_check
from .matroidal import GroundMap, check_definition5, code_to_matroid
from .network import Network, NetworkCode, read_network
from .verifier import _all_vectors, check_detecting

# ----------------------------------------------------------------------
# the four-symbol alphabet: value = 2*hi + lo


def sum4(a, b):
    return (a + b) % 4


def diff4(a, b):
    return (a - b) % 4


def xor22(a, b):
    return a ^ b


def tswap(a):
    """Swap the two bits of a symbol."""
    return ((a & 1) << 1) | ((a >> 1) & 1)


def alphabet4_ops(a: int, b: int) -> dict:
    for v in (a, b):
        if v not in (0, 1, 2, 3):
            raise ValueError(f"{v} is not a symbol of the four-letter alphabet")
    return {"sum4": sum4(a, b), "diff4": diff4(a, b), "xor22": xor22(a, b), "t": tswap(a)}


# ----------------------------------------------------------------------
# fixtures


@dataclass
class Fixture:
    name: str
    net: Network
    base: NetworkCode                      # identity entries of unlabelled edges
    slots: list                            # (name, kind, row, col), 0-based
    exprs: dict = dc_field(default_factory=dict)   # edge -> expression (n3 only)
    reference: Matrix | None = None        # all-ones representation (n1, n2)

    @property
    def slot_names(self):
        return [s[0] for s in self.slots]


def _read_slots(text):
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, kind, i, j = line.split()
        if kind not in ("A", "K"):
            raise ValueError(f"bad slot line {raw!r}")
        out.append((name, kind, int(i) - 1, int(j) - 1))
    return out


def read_edge_functions(text: str) -> dict:
    """``edge expr`` lines into {0-based edge: expression string}."""
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        j, expr = line.split(None, 1)
        out[int(j) - 1] = expr
    return out


def fixture(name: str) -> Fixture:
    if name not in ("n1", "n2", "n3"):
        raise ValueError(f"unknown fixture {name!r}")
    net, base = read_network(data_text(f"{name}.net"))
    if base is None:
        base = NetworkCode.zeros(net)
    slots = _read_slots(data_text(f"{name}.slots"))
    exprs = read_edge_functions(data_text("n3.code")) if name == "n3" else {}
    ref = None
    if name in ("n1", "n2"):
        ref = Matrix.from_text(data_text("n1_ref.mat" if name == "n1" else "n2_ref.mat"))
    return Fixture(name, net, base, slots, exprs, ref)


def over_field(net: Network, F: GF) -> Network:
    return Network(F, net.nodes, net.edges, net.eligible)


def assign(fx: Fixture, values, F: GF | str) -> tuple[Network, NetworkCode]:
    """Network and code over F with the slots set to ``values`` (a sequence in
    slot order or a {name: value} dict; missing names are zero)."""
    F = make_field(F)
    net = over_field(fx.net, F)
    if isinstance(values, dict):
        values = [values.get(s, 0) for s in fx.slot_names]
    A = fx.base.A.a.copy()
    K = fx.base.K.a.copy()
    for (name, kind, i, j), v in zip(fx.slots, values):
        F.check(int(v))
        (A if kind == "A" else K)[i, j] = int(v)
    return net, NetworkCode(Matrix(F, A), Matrix(F, K))


def all_ones(fx: Fixture, F) -> tuple[Network, NetworkCode]:
    return assign(fx, [1] * len(fx.slots), F)


# ----------------------------------------------------------------------
# exhaustive search over scalar linear codes


@dataclass
class SearchResult:
    status: str                      # "found", "exhausted" or "inconclusive"
    assignment: dict | None = None
    local: int = 0                   # per-sink local assignments tested
    solutions: int = 0               # assignments passing every sink (constrained slots)

    def verdict(self) -> str:
        if self.status == "found":
            vals = " ".join(f"{k}={v}" for k, v in self.assignment.items())
            return f"found {vals}"
        if self.status == "exhausted":
            return "exhausted, none found"
        return "inconclusive (budget exceeded)"


def _ancestor_edges(net: Network, t) -> set:
    seen = set()
    stack = list(net.sink_inputs(t))
    while stack:
        j = stack.pop()
        if j in seen:
            continue
        seen.add(j)
        stack.extend(net.edge_inputs(j))
    return seen


def sink_slots(fx: Fixture, t) -> list:
    """Slots (0-based, sorted) that influence what sink t receives."""
    anc = _ancestor_edges(fx.net, t)
    return [k for k, (_, _, _, j) in enumerate(fx.slots) if j in anc]


def search_plan(fx: Fixture) -> list:
    """Sink order for joining: greedily the sink adding the fewest new slots."""
    deps = {t.id: set(sink_slots(fx, t.id)) for t in fx.net.sinks}
    pending = [t.id for t in fx.net.sinks]
    order, placed = [], set()
    while pending:
        t = min(pending, key=lambda s: (len(deps[s] - placed), pending.index(s)))
        pending.remove(t)
        order.append(t)
        placed |= deps[t]
    return order


def _digits(g, L, q):
    """Mixed-radix digits of the indices g, most significant first: (len(g), L)."""
    w = q ** np.arange(L - 1, -1, -1, dtype=np.int64)
    return (g[:, None] // w[None, :]) % q


def sink_table(fx: Fixture, F, t, beta: int = 1, chunk: int = 1 << 14, deadline=None):
    """Accepted local assignments of one sink.

    Every assignment of the slots feeding sink t is tested with the span
    criterion, vectorised over assignments.  Returns (slots, ok) where ok is
    a boolean array indexed by the mixed-radix value of the slot digits
    (first slot most significant).
    """
    F = make_field(F)
    net = over_field(fx.net, F)
    q, n = F.order, net.n
    deps = sink_slots(fx, t)
    L = len(deps)
    where = {(fx.slots[k][1], fx.slots[k][2], fx.slots[k][3]): d for d, k in enumerate(deps)}
    A0, K0 = fx.base.A.a, fx.base.K.a
    edges = sorted(_ancestor_edges(net, t))
    elig = list(net.eligible)
    epos = {j: k for k, j in enumerate(elig)}
    width = n + len(elig)
    ins = net.sink_inputs(t)
    dem = list(net.node(t).demands)
    nt, nd = len(ins), len(dem)
    b = min(beta, len(elig))
    pats = np.array(list(itertools.combinations(range(len(elig)), b)), dtype=np.int64).reshape(-1, b)
    P = len(pats)
    total = q ** L
    ok = np.zeros(total, dtype=bool)
    for start in range(0, total, chunk):
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError
        g = np.arange(start, min(total, start + chunk), dtype=np.int64)
        dg = _digits(g, L, q)
        N = len(g)

        def coef(kind, i, j):
            d = where.get((kind, i, j))
            if d is not None:
                return dg[:, d]
            c = int((A0 if kind == "A" else K0)[i, j])
            return np.full(N, c, dtype=np.int64) if c else None

        vec = {}
        for j in edges:
            v = np.zeros((N, width), dtype=np.int64)
            for i in net.source_messages.get(net.tail(j), []):
                c = coef("A", i, j)
                if c is not None:
                    v[:, i] = c
            for i in net.edge_inputs(j):
                c = coef("K", i, j)
                if c is not None:
                    v = F.vadd(v, F.vmul(vec[i], c[:, None]))
            if j in epos:
                v[:, n + epos[j]] = 1
            vec[j] = v
        cols = np.stack([vec[j] for j in ins], axis=2)          # N x width x nt
        arr = np.zeros((N, P, n + b, nt + nd), dtype=np.int64)
        arr[:, :, :n, :nt] = cols[:, None, :n, :]
        for k, d in enumerate(dem):
            arr[:, :, d, nt + k] = 1
        if b:
            arr[:, :, n:, :nt] = cols[:, n:, :][:, pats, :]
        piv = batch_pivots(F, arr.reshape(N * P, n + b, nt + nd))
        bad = piv[:, nt:].any(axis=1).reshape(N, P).any(axis=1)
        ok[start:start + N] = ~bad
    return deps, ok


def _join(rows, cols, deps, table, q):
    """Extend partial assignments by one sink's accepted local assignments.

    rows: (M, len(cols)) digits over the slot list cols.  Returns the joined
    rows and the new column list.
    """
    acc = np.flatnonzero(table)
    T = _digits(acc, len(deps), q)
    shared = [d for d in deps if d in cols]
    new = [d for d in deps if d not in cols]
    tpos = {d: i for i, d in enumerate(deps)}
    cpos = {d: i for i, d in enumerate(cols)}
    w = q ** np.arange(len(shared), dtype=np.int64)
    tkey = T[:, [tpos[d] for d in shared]] @ w if shared else np.zeros(len(T), dtype=np.int64)
    rkey = rows[:, [cpos[d] for d in shared]] @ w if shared else np.zeros(len(rows), dtype=np.int64)
    srt = np.argsort(tkey, kind="stable")
    tkey, T = tkey[srt], T[srt]
    lo = np.searchsorted(tkey, rkey, "left")
    cnt = np.searchsorted(tkey, rkey, "right") - lo
    tot = int(cnt.sum())
    rep = np.repeat(np.arange(len(rows)), cnt)
    off = np.arange(tot) - np.repeat(np.cumsum(cnt) - cnt, cnt)
    pick = np.repeat(lo, cnt) + off
    out = np.hstack([rows[rep], T[pick][:, [tpos[d] for d in new]]])
    return out, cols + new


def _table_worker(args):
    name, fspec, t, beta, deadline_s = args
    deadline = None if deadline_s is None else time.monotonic() + deadline_s
    try:
        return sink_table(fixture(name), fspec, t, beta, deadline=deadline)
    except TimeoutError:
        return None


def linear_detecting_search(fx: Fixture, F, budget_s: float | None = 1800,
                            jobs: int = 1) -> SearchResult:
    """Exhaustive search for a slot assignment over F giving a single-edge
    detecting code (errors on the marked edges).

    Each sink only sees the slots upstream of it, so its accepted local
    assignments are tabulated independently and the tables are joined.  The
    answer is the first full assignment in lexicographic slot order, with
    slots that reach no sink set to zero.
    """
    F = make_field(F)
    q = F.order
    order = search_plan(fx)
    fspec = f"custom:{F.p},{F.m},{F.modulus_code}"
    if jobs > 1:
        tasks = [(fx.name, fspec, t, 1, budget_s) for t in order]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            tables = list(ex.map(_table_worker, tasks))
    else:
        deadline = None if budget_s is None else time.monotonic() + budget_s
        tables = []
        for t in order:
            try:
                tables.append(sink_table(fx, F, t, deadline=deadline))
            except TimeoutError:
                tables.append(None)
                break
    local = sum(len(tb[1]) for tb in tables if tb is not None)
    if any(tb is None for tb in tables):
        return SearchResult("inconclusive", None, local, 0)
    rows, cols = np.zeros((1, 0), dtype=np.int64), []
    for deps, ok in tables:
        rows, cols = _join(rows, cols, deps, ok, q)
        if not len(rows):
            return SearchResult("exhausted", None, local, 0)
    first = rows[np.lexsort(rows[:, np.argsort(cols)].T[::-1])[0]]
    vals = [0] * len(fx.slots)
    for c, v in zip(cols, first):
        vals[c] = int(v)
    return SearchResult("found", dict(zip(fx.slot_names, vals)), local, len(rows))


def n1_char_identities(values, F) -> tuple[int, int]:
    """For an accepted assignment on n1, the product M2 M5 M11' where M11' is
    M11 times the decoding weight of v29->v38 when e2 is in error.

    Returns (product, -1).  The decoding equations force the product to equal
    both 1 and -1, so an accepted assignment must make these agree with 1.
    """
    from .verifier import decoding_matrix
    fx = fixture("n1")
    F = make_field(F)
    net, code = assign(fx, values, F)
    vals = dict(zip(fx.slot_names, values)) if not isinstance(values, dict) else values
    # e2 is edge index 1; In(v38) = [e2, v29->v38, v30->v38]
    X = decoding_matrix(net, code, "v38", [1])
    ins = net.sink_inputs("v38")
    y1 = int(X.a[ins.index(17), 0])
    m11p = F.mul(vals["M11"], y1)
    prod = F.mul(F.mul(vals["M2"], vals["M5"]), m11p)
    return prod, F.neg(1)


# ----------------------------------------------------------------------
# enumeration of arbitrary edge functions under single-edge substitution


_BIN = {ast.Add: sum4, ast.Sub: diff4, ast.BitXor: xor22}


def compile_expr(expr: str, unary=None):
    """Expression over names with +, -, ^ and t() into a function of a
    {name: array} environment."""
    unary = {"t": tswap} if unary is None else unary
    tree = ast.parse(expr, mode="eval").body

    def build(node):
        if isinstance(node, ast.BinOp) and type(node.op) in _BIN:
            op, l, r = _BIN[type(node.op)], build(node.left), build(node.right)
            return lambda env: op(l(env), r(env))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) \
                and node.func.id in unary and len(node.args) == 1:
            fn, a = unary[node.func.id], build(node.args[0])
            return lambda env: fn(a(env))
        if isinstance(node, ast.Name):
            name = node.id
            return lambda env: env[name]
        raise ValueError(f"unsupported expression {expr!r}")
    return build(tree)


class EdgeFunctions:
    """Per-edge functions over the four-symbol alphabet.

    Names in an expression refer to the symbol arriving from that node (for a
    source tail, its message).  Edges without an expression forward their
    single input.
    """

    q = 4

    def __init__(self, net: Network, exprs: dict, unary=None):
        self.net = net
        self.fns = {}
        for j in range(net.n_edges):
            tail = net.tail(j)
            names = self._input_names(j)
            if j in exprs:
                self.fns[j] = compile_expr(exprs[j], unary)
            elif len(names) == 1:
                self.fns[j] = (lambda nm: lambda env: env[nm])(names[0])
            else:
                raise ValueError(f"edge e{j + 1} leaves {tail} with {len(names)} inputs and no function")

    def _input_names(self, j):
        net = self.net
        tail = net.tail(j)
        if net.node(tail).role == "source":
            return [tail]
        return [net.tail(i) for i in net.in_edges[tail]]

    def evaluate(self, X, sub_edge=None, sub_vals=None):
        net = self.net
        Y = np.zeros((X.shape[0], net.n_edges), dtype=np.int64)
        for j in range(net.n_edges):
            if j == sub_edge:
                Y[:, j] = sub_vals
                continue
            tail = net.tail(j)
            if net.node(tail).role == "source":
                env = {tail: X[:, net.source_messages[tail][0]]}
            else:
                env = {net.tail(i): Y[:, i] for i in net.in_edges[tail]}
            Y[:, j] = self.fns[j](env)
        return Y


class LinearFunctions:
    """The same interface for a linear code over a field."""

    def __init__(self, net: Network, code: NetworkCode):
        self.net, self.code = net, code
        self.q = net.F.order

    def evaluate(self, X, sub_edge=None, sub_vals=None):
        net, F = self.net, self.net.F
        A, K = self.code.A.a, self.code.K.a
        Y = np.zeros((X.shape[0], net.n_edges), dtype=np.int64)
        for j in range(net.n_edges):
            if j == sub_edge:
                Y[:, j] = sub_vals
                continue
            acc = np.zeros(X.shape[0], dtype=np.int64)
            for i in np.flatnonzero(A[:, j]):
                acc = F.vadd(acc, F.vmul(X[:, i], int(A[i, j])))
            for i in net.edge_inputs(j):
                if K[i, j]:
                    acc = F.vadd(acc, F.vmul(Y[:, i], int(K[i, j])))
            Y[:, j] = acc
        return Y


@dataclass
class EnumResult:
    ok: bool
    sink: str | None = None
    edge: int | None = None                  # 0-based
    collision: tuple | None = None           # ((x, v), (x', v'))
    cases: int = 0

    def __bool__(self):
        return self.ok

    def verdict(self) -> str:
        if self.ok:
            return f"PASS ({self.cases} sink/edge cases)"
        (x, v), (x2, v2) = self.collision
        return (f"FAIL sink={self.sink} edge=e{self.edge + 1} "
                f"x={x} sub={v} vs x={x2} sub={v2}")


def enumerate_detection(net: Network, fns, edges=None) -> EnumResult:
    """Single-edge detection with known location by brute force.

    For each edge e, every message tuple and every symbol substituted on e is
    pushed through the network; at each sink, identical observations must
    come with identical demanded values.
    """
    q = fns.q
    edges = range(net.n_edges) if edges is None else edges
    X0 = _all_vectors(q, net.n)
    X = np.repeat(X0, q, axis=0)
    vals = np.tile(np.arange(q, dtype=np.int64), len(X0))
    sinks = [(t.id, net.sink_inputs(t.id), list(t.demands)) for t in net.sinks if t.demands]
    cases = 0
    for e in edges:
        Y = fns.evaluate(X, e, vals)
        for sid, ins, dem in sinks:
            cases += 1
            obs = np.unique(Y[:, ins], axis=0, return_inverse=True)[1].reshape(-1)
            dv = X[:, dem] @ (q ** np.arange(len(dem)))
            order = np.lexsort((dv, obs))
            ko, do = obs[order], dv[order]
            clash = np.flatnonzero((ko[1:] == ko[:-1]) & (do[1:] != do[:-1]))
            if clash.size:
                a, b = order[clash[0]], order[clash[0] + 1]
                pair = (([int(v) for v in X[a]], int(vals[a])), ([int(v) for v in X[b]], int(vals[b])))
                return EnumResult(False, sid, e, pair, cases)
    return EnumResult(True, cases=cases)


def nonlinear_verify(fx: Fixture | None = None, unary=None, edges=None) -> EnumResult:
    """Run the enumerator on the four-symbol code of n3 (``unary`` replaces
    the bit swap, e.g. by the identity for the mutant)."""
    fx = fixture("n3") if fx is None else fx
    return enumerate_detection(fx.net, EdgeFunctions(fx.net, fx.exprs, unary), edges)


IDENTITY_T = {"t": lambda a: a}


# ----------------------------------------------------------------------
# amalgam of the two representable matroids


N1_LABELS = [f"x{i}" for i in range(1, 4)] + [f"y{i}" for i in range(1, 8)] + [f"y{i}'" for i in range(1, 8)]
N2_LABELS = [f"x{i}" for i in range(1, 6)] + [f"z{i}" for i in range(1, 16)] + [f"z{i}'" for i in range(1, 16)]


def reference_matroids():
    m1 = VectorMatroid(Matrix.from_text(data_text("n1_ref.mat")), N1_LABELS)
    m2 = VectorMatroid(Matrix.from_text(data_text("n2_ref.mat")), N2_LABELS)
    return m1, m2


def _relabel_map(f: GroundMap, labels) -> GroundMap:
    return GroundMap([labels[x - 1] for x in f.msg], {j: labels[x - 1] for j, x in f.edge.items()})


@dataclass
class AmalgamReport:
    ground: int
    rank: int
    expected_rank: int
    restriction: tuple                 # (violations on side 1, on side 2)
    axioms: tuple                      # rank_axioms_check result
    definition5: object
    samples: int
    monotone: list = dc_field(default_factory=list)   # targeted R2 violations

    @property
    def ok(self) -> bool:
        return (self.rank == self.expected_rank and self.restriction == (0, 0)
                and self.axioms[0] and bool(self.definition5))

    def lines(self) -> list[str]:
        ax = "0 violations" if self.axioms[0] else f"violation {self.axioms[1][0]}"
        d5 = "holds" if self.definition5 else f"fails ({self.definition5.condition}: {self.definition5.detail})"
        return [
            f"ground set: {self.ground} elements",
            f"rank: {self.rank} (expected {self.expected_rank})",
            f"restriction agreement: {self.restriction[0]} + {self.restriction[1]} mismatches "
            f"on {self.samples} subsets per side",
            f"rank axioms on {self.samples} sampled pairs: {ax}",
            f"matroidal conditions for n3, beta=1: {d5}",
        ]

    def monotone_lines(self) -> list[str]:
        if not self.monotone:
            return ["targeted monotonicity probes: 0 violations"]
        return [f"r(X) = {rx} > r(E) = {rf} for X = E minus {self.ground - len(X)} shared element(s)"
                for X, rx, rf in self.monotone]


def n3_amalgam_checks(samples: int = 1000, seed: int = 0) -> AmalgamReport:
    m1, m2 = reference_matroids()
    M = amalgam(m1, m2)
    shared = [e for e in m1.ground if e in m2._index]
    expected = m1.full_rank + m2.full_rank - len(shared)
    rng = random.Random(seed)
    bad = []
    for m in (m1, m2):
        k = 0
        for _ in range(samples):
            X = [e for e in m.ground if rng.random() < 0.5]
            if M.rank(X) != m.rank(X):
                k += 1
        bad.append(k)
    axioms = rank_axioms_check(M, "sampled", samples=samples, seed=seed)
    # f3: f1 on the first part's edges, f2 on the second's and on messages
    fx1, fx2, fx3 = fixture("n1"), fixture("n2"), fixture("n3")
    net1, c1 = all_ones(fx1, "gf2")
    net2, c2 = all_ones(fx2, "gf3")
    _, f1, _ = code_to_matroid(net1, c1, 1)
    _, f2, _ = code_to_matroid(net2, c2, 1)
    f1 = _relabel_map(f1, N1_LABELS)
    f2 = _relabel_map(f2, N2_LABELS)
    off = net1.n_edges
    edge = dict(f1.edge)
    edge.update({j + off: lab for j, lab in f2.edge.items()})
    f3 = GroundMap(list(f2.msg), edge)
    B = list(f3.msg) + [f"y{i}" for i in range(1, 8)] + [f"z{i}" for i in range(1, 16)]
    d5 = check_definition5(fx3.net, M, f3, B, 1)
    mono = amalgam_monotonicity(m1, m2)
    return AmalgamReport(len(M.ground), M.full_rank, expected, tuple(bad), axioms, d5, samples, mono)


# ----------------------------------------------------------------------
# benchmark report


@dataclass
class Claim:
    key: str
    text: str
    ok: bool
    detail: str


def bench(full: bool = False, budget_min: float = 30, jobs: int = 1, log=None) -> list[Claim]:
    """Run every insufficiency claim; ``full`` adds the GF(2) search on n2."""
    def note(msg):
        if log:
            log(msg)

    out = []
    fx1, fx2, fx3 = fixture("n1"), fixture("n2"), fixture("n3")

    net, code = all_ones(fx1, "gf2")
    r = check_detecting(net, code, 1)
    out.append(Claim("a", "n1 all-ones over GF(2) detects single errors", r.ok, r.verdict()))
    m, _, _ = code_to_matroid(net, code, 1, check=False)
    same = np.array_equal(m.rep.a, fx1.reference.a)
    out.append(Claim("a2", "n1 all-ones matroid equals the reference representation", same,
                     "equal" if same else "differs"))

    note("searching GF(3) assignments for n1")
    t0 = time.monotonic()
    s = linear_detecting_search(fx1, "gf3", budget_s=budget_min * 60, jobs=jobs)
    note(f"search finished in {time.monotonic() - t0:.1f} s")
    out.append(Claim("b", "no single-edge detecting code for n1 over GF(3)", s.status == "exhausted",
                     f"{s.verdict()}; {s.local} local assignments tested"))

    net, code = all_ones(fx2, "gf3")
    r3 = check_detecting(net, code, 1)
    m, _, _ = code_to_matroid(net, code, 1, check=False)
    same = np.array_equal(m.rep.a, fx2.reference.a)
    net, code = all_ones(fx2, "gf2")
    r2 = check_detecting(net, code, 1)
    out.append(Claim("c", "n2 all-ones passes over GF(3) and fails over GF(2)", r3.ok and not r2.ok,
                     f"GF(3): {r3.verdict()}; GF(2): {r2.verdict()}"))
    out.append(Claim("c2", "n2 all-ones matroid equals the reference representation", same,
                     "equal" if same else "differs"))
    if full:
        note("searching GF(2) assignments for n2")
        s2 = linear_detecting_search(fx2, "gf2", budget_s=budget_min * 60, jobs=jobs)
        out.append(Claim("c3", "no single-edge detecting code for n2 over GF(2)", s2.status == "exhausted",
                         f"{s2.verdict()}; {s2.local} local assignments tested"))

    r = nonlinear_verify(fx3)
    out.append(Claim("d", "n3 four-symbol code detects every single substitution", r.ok, r.verdict()))
    rm = nonlinear_verify(fx3, IDENTITY_T)
    out.append(Claim("d2", "n3 code with t replaced by the identity fails", not rm.ok, rm.verdict()))
    net, code = all_ones(fx3, "gf4")
    rl = enumerate_detection(net, LinearFunctions(net, code))
    out.append(Claim("d3", "n3 linear all-ones over GF(4) fails", not rl.ok, rl.verdict()))

    rep = n3_amalgam_checks()
    out.append(Claim("e", "amalgam matroid for n3", rep.ok, "; ".join(rep.lines())))
    out.append(Claim("e2", "amalgam rank function is monotone on targeted sets", not rep.monotone,
                     "; ".join(rep.monotone_lines())))
    return out
