"""Error detection and correction checks for linear network codes.

``check_detecting`` uses the span criterion: a sink t decodes its demands
under errors on a pattern P (known location) iff every demanded unit vector,
padded with |P| zeros, lies in the column span of [F_{S,t}; F_{P,t}].  All
patterns of a chunk are stacked into one 3-d array and eliminated at once.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from .field import Matrix, batch_pivots, matmul, nullspace, solve_columns
from .network import Network, NetworkCode, SinkTransfer, transfer_compute

CHUNK = 8192


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class CheckResult:
    ok: bool
    beta: int
    sink: str | None = None
    pattern: tuple | None = None       # 0-based edge indices
    checked: int = 0                   # (sink, pattern) pairs examined

    def __bool__(self):
        return self.ok

    def verdict(self) -> str:
        if self.ok:
            return f"PASS β={self.beta}"
        pat = ",".join(str(e + 1) for e in self.pattern)
        return f"FAIL sink={self.sink} pattern={{{pat}}}"


def patterns(eligible, beta):
    """Lexicographic patterns of size min(beta, |eligible|)."""
    eligible = list(eligible)
    return itertools.combinations(eligible, min(beta, len(eligible)))


def _demand_block(n, demands, beta):
    U = np.zeros((n + beta, len(demands)), dtype=np.int64)
    for k, d in enumerate(demands):
        U[d, k] = 1
    return U


def _growing_chunks(it):
    """Chunks of 256, 1024, ... up to CHUNK items, so early failures are cheap."""
    size = 256
    while True:
        c = list(itertools.islice(it, size))
        if not c:
            return
        yield c
        size = min(CHUNK, size * 4)


def _sink_failures(F, st: SinkTransfer, eligible, beta, stop_first=True):
    """Yield failing patterns for one sink in lexicographic order.

    With X0 a solution of F_S X0 = U (the demanded unit columns) and N a
    kernel basis of F_S, the demands survive errors on P exactly when the
    columns of F_P X0 lie in the span of F_P N.  Every pattern then needs
    only a |P| x (dim N + |D|) elimination.
    """
    if not st.demands:
        return
    n = st.FS.shape[0]
    b = min(beta, len(eligible))
    el = np.asarray(eligible, dtype=np.int64)
    combos = itertools.combinations(range(len(el)), b)
    X0 = solve_columns(Matrix(F, st.FS), Matrix(F, _demand_block(n, st.demands, 0)))
    if X0 is None:
        for c in combos:
            yield tuple(int(e) for e in el[list(c)])
            if stop_first:
                return
        return
    if b == 0:
        return
    N = nullspace(Matrix(F, st.FS)).a
    d = N.shape[1]
    G = matmul(F, st.Ft[el], np.hstack([N, X0.a]))             # |elig| x (d + |D|)
    for chunk in _growing_chunks(combos):
        idx = np.array(chunk, dtype=np.int64).reshape(len(chunk), b)
        piv = batch_pivots(F, G[idx])
        bad = piv[:, d:].any(axis=1)
        for k in np.flatnonzero(bad):
            yield tuple(int(e) for e in el[idx[k]])
            if stop_first:
                return


def _sink_failures_direct(F, st: SinkTransfer, eligible, beta, stop_first=True):
    """Reference form of ``_sink_failures``: eliminate [F_S U; F_P 0] per pattern."""
    n = st.FS.shape[0]
    nt = st.FS.shape[1]
    if not st.demands:
        return
    b = min(beta, len(eligible))
    top = np.hstack([st.FS, _demand_block(n, st.demands, 0)])     # n x (nt + |D|)
    el = np.asarray(eligible, dtype=np.int64)
    rows = st.Ft[el]                                              # |elig| x nt
    combos = itertools.combinations(range(len(el)), b)
    while True:
        chunk = list(itertools.islice(combos, CHUNK))
        if not chunk:
            return
        idx = np.array(chunk, dtype=np.int64).reshape(len(chunk), b)
        P = idx.shape[0]
        arr = np.zeros((P, n + b, nt + len(st.demands)), dtype=np.int64)
        arr[:, :n, :] = top
        if b:
            arr[:, n:, :nt] = rows[idx]
        piv = batch_pivots(F, arr)
        bad = piv[:, nt:].any(axis=1)
        for k in np.flatnonzero(bad):
            yield tuple(int(e) for e in el[idx[k]])
            if stop_first:
                return


def check_detecting(net: Network, code: NetworkCode, beta: int, eligible=None,
                    jobs: int = 1, bundle=None) -> CheckResult:
    """Every sink decodes under any beta errors at known eligible locations.

    The witness is the first failing (sink, pattern) in sink order then
    lexicographic pattern order, independent of ``jobs``.
    """
    if bundle is None:
        bundle = transfer_compute(net, code)
    if eligible is None:
        eligible = net.eligible
    F = net.F

    def first_fail(st):
        return next(_sink_failures(F, st, eligible, beta), None)

    if jobs > 1 and len(bundle.sinks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            fails = list(ex.map(first_fail, bundle.sinks))
    else:
        fails = []
        for st in bundle.sinks:
            f = first_fail(st)
            fails.append(f)
            if f is not None:
                break
    n_pat = comb(len(eligible), min(beta, len(eligible)))
    for st, f in zip(bundle.sinks, fails):
        if f is not None:
            return CheckResult(False, beta, st.sink, f, n_pat * len(bundle.sinks))
    return CheckResult(True, beta, checked=n_pat * len(bundle.sinks))


def check_correcting(net: Network, code: NetworkCode, alpha: int, **kw) -> CheckResult:
    return check_detecting(net, code, 2 * alpha, **kw)


def decoding_matrix(net: Network, code: NetworkCode, sink, pattern) -> Matrix:
    """X with [F_{S,t}; F_{P,t}] X = [I_D; 0]."""
    bundle = transfer_compute(net, code)
    st = next(s for s in bundle.sinks if s.sink == sink)
    pattern = list(pattern)
    S = np.vstack([st.FS, st.Ft[pattern]]) if pattern else st.FS
    U = _demand_block(net.n, st.demands, len(pattern))
    X = solve_columns(Matrix(net.F, S), Matrix(net.F, U))
    if X is None:
        raise ValueError(f"sink {sink} cannot decode under pattern {[e + 1 for e in pattern]}")
    return X


# ----------------------------------------------------------------------
# exhaustive semantic oracle


def _all_vectors(q, k):
    """All q^k vectors of length k, lexicographic (last coordinate fastest)."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    g = np.indices((q,) * k).reshape(k, -1).T
    return g.astype(np.int64)


def oracle_cost(net: Network, beta: int, eligible=None) -> int:
    eligible = net.eligible if eligible is None else eligible
    b = min(beta, len(eligible))
    q = net.F.order
    return len(net.sinks) * comb(len(eligible), b) * q ** (net.n + b)


@dataclass
class OracleResult:
    ok: bool
    beta: int
    sink: str | None = None
    pattern: tuple | None = None
    collision: tuple | None = None   # ((x, z), (x', z')) with z as {edge: value}

    def __bool__(self):
        return self.ok


def semantic_oracle(net: Network, code: NetworkCode, beta: int, eligible=None,
                    budget: int = 10 ** 7) -> OracleResult:
    """Enumerate messages and error values on each pattern; outputs for
    different demanded values must never coincide."""
    eligible = net.eligible if eligible is None else eligible
    cost = oracle_cost(net, beta, eligible)
    if cost > budget:
        raise BudgetExceeded(f"oracle needs {cost} evaluations, budget {budget}")
    F = net.F
    q = F.order
    bundle = transfer_compute(net, code)
    X = _all_vectors(q, net.n)
    for st in bundle.sinks:
        if not st.demands:
            continue
        XY = matmul(F, X, st.FS)                        # q^n x nt
        xd = X[:, st.demands] @ (q ** np.arange(len(st.demands)))
        for pat in patterns(eligible, beta):
            Z = _all_vectors(q, len(pat))
            ZY = matmul(F, Z, st.Ft[list(pat)]) if pat else np.zeros((1, XY.shape[1]), dtype=np.int64)
            Y = F.vadd(XY[:, None, :], ZY[None, :, :]).reshape(-1, XY.shape[1])
            ykey = np.unique(Y, axis=0, return_inverse=True)[1].reshape(-1)
            dval = np.repeat(xd, len(Z))
            order = np.lexsort((dval, ykey))
            ks, ds = ykey[order], dval[order]
            clash = np.flatnonzero((ks[1:] == ks[:-1]) & (ds[1:] != ds[:-1]))
            if clash.size:
                a, b = order[clash[0]], order[clash[0] + 1]
                nz = len(Z)

                def unpack(i):
                    x = [int(v) for v in X[i // nz]]
                    z = {e: int(v) for e, v in zip(pat, Z[i % nz])}
                    return x, z
                return OracleResult(False, beta, st.sink, tuple(pat), (unpack(a), unpack(b)))
    return OracleResult(True, beta)


# ----------------------------------------------------------------------
# unicast full-rank criterion


def unicast_fullrank_check(net: Network, code: NetworkCode, alpha: int, abar) -> CheckResult:
    """Sufficient condition for unicast decoding from the construction's
    bookkeeping matrices.

    ``abar`` maps each sink to an n_t x (2 alpha + 1) matrix, rows aligned with
    the sink's incoming edges, such that F_{S,t} abar = (e_j ... e_j).  For
    every pattern P of 2 alpha eligible edges the all-ones row must be
    independent of the rows of F_{P,t} abar.  When those rows are independent
    this is exactly invertibility of the square matrix [1 ... 1; F_{P,t} abar];
    the weaker form also covers patterns that do not reach the sink, whose
    rows vanish.
    """
    if abar is None:
        raise ValueError("bookkeeping unavailable for this network")
    F = net.F
    bundle = transfer_compute(net, code)
    beta = 2 * alpha
    w = beta + 1
    el = list(net.eligible)
    b = min(beta, len(el))
    n_pat = comb(len(el), b)
    for st in bundle.sinks:
        Ab = abar.get(st.sink)
        if Ab is None:
            raise ValueError(f"no bookkeeping for sink {st.sink}")
        Ab = Ab.a if isinstance(Ab, Matrix) else np.asarray(Ab, dtype=np.int64)
        if Ab.shape != (len(st.inputs), w):
            raise ValueError(f"bookkeeping for sink {st.sink} has shape {Ab.shape}")
        want = np.zeros((net.n, w), dtype=np.int64)
        want[st.demands[0], :] = 1
        if not np.array_equal(matmul(F, st.FS, Ab), want):
            raise ValueError(f"bookkeeping for sink {st.sink} is inconsistent")
        G = matmul(F, st.Ft[el], Ab)                     # |elig| x w
        for chunk in _chunks(itertools.combinations(range(len(el)), b)):
            idx = np.array(chunk, dtype=np.int64).reshape(len(chunk), b)
            arr = np.ones((len(chunk), b + 1, w), dtype=np.int64)
            if b:
                arr[:, 1:, :] = G[idx]
            # error rows first, then the all-ones row: it must add a pivot
            arr = np.concatenate([arr[:, 1:, :], arr[:, :1, :]], axis=1)
            full = _row_adds_rank(F, arr)
            if not full.all():
                k = int(np.flatnonzero(~full)[0])
                return CheckResult(False, beta, st.sink, tuple(el[i] for i in idx[k]), n_pat)
    return CheckResult(True, beta, checked=n_pat * len(bundle.sinks))


def _row_adds_rank(F, arr):
    """For each stacked matrix, does the last row raise the rank of the others?"""
    full = batch_pivots(F, np.swapaxes(arr, 1, 2)).sum(axis=1)
    part = batch_pivots(F, np.swapaxes(arr[:, :-1, :], 1, 2)).sum(axis=1) if arr.shape[1] > 1 else 0
    return full > part


def _chunks(it, size=CHUNK):
    while True:
        c = list(itertools.islice(it, size))
        if not c:
            return
        yield c
