"""Matroidal error-detecting networks.

A network is matroidal beta-error detecting for a matroid M when there is a
ground map f (messages and edges into E(M)) and a basis B extending f(messages)
with one basis element b_{n+i} per error-eligible edge such that

(A)  f(messages) is independent;
(B1) f(e) is outside cl(B - f(messages)) for each eligible edge e;
(B2) r(f(In(e)) + f(e) + b) = r(f(In(e)) + b) = r(f(In(e))) + 1 with b the
     basis element of e;
(C)  for every pattern P of beta eligible edges, contracting the basis
     elements of the other eligible edges leaves every sink's demands in the
     closure of its inputs.

The ground set has n + 2|E_elig| elements and rank n + |E_elig|.  Edges that
are not error-eligible map onto an element parallel to their signal.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .field import Matrix, batch_pivots, mat_inverse, mat_rref, span_member
from .matroid import RankOracleMatroid, VectorMatroid
from .network import Network, NetworkCode, transfer_matrix
from .verifier import check_detecting


class MatroidalError(ValueError):
    pass


@dataclass
class GroundMap:
    """f: messages -> labels (list by message index), edges -> labels."""

    msg: list
    edge: dict

    def of_edges(self, edges):
        return [self.edge[e] for e in edges]


@dataclass
class Def5Result:
    ok: bool
    condition: str | None = None     # "A", "B1", "B2" or "C"
    detail: str = ""

    def __bool__(self):
        return self.ok


def _in_labels(net: Network, f: GroundMap, j: int) -> list:
    """f(In(e_j)); an edge leaving a source takes that source's messages."""
    tail = net.tail(j)
    if net.node(tail).role == "source":
        return [f.msg[i] for i in net.source_messages[tail]]
    return f.of_edges(net.in_edges[tail])


def check_definition5(net: Network, m, f: GroundMap, B: list, beta: int,
                      method: str = "batch") -> Def5Result:
    """Check conditions (A), (B1), (B2) and (C).

    ``method`` selects how (C) is evaluated for vector matroids: "batch" ranks
    every pattern's matrix in one stacked elimination; "contract" forms each
    contraction M/B_{not P} explicitly.  Rank-oracle matroids always use
    r_{M/T}(X) = r(X + T) - r(T).
    """
    n = net.n
    elig = list(net.eligible)
    k = len(elig)
    if len(m.ground) != n + 2 * k:
        raise MatroidalError(f"ground set has {len(m.ground)} elements, expected {n + 2 * k}")
    if m.full_rank != n + k:
        raise MatroidalError(f"matroid rank {m.full_rank}, expected {n + k}")
    if len(B) != n + k or list(B[:n]) != list(f.msg) or m.rank(B) != n + k:
        raise MatroidalError("B must be a basis listing f(messages) first")
    # (A)
    if m.rank(f.msg) != n:
        return Def5Result(False, "A", "f(messages) is dependent")
    rest = list(B[n:])
    r_rest = m.rank(rest)
    for pos, j in enumerate(elig):
        fe = f.edge[j]
        if m.rank(rest + [fe]) == r_rest:
            return Def5Result(False, "B1", f"f(e{j + 1}) lies in cl(B - f(messages))")
        fin = _in_labels(net, f, j)
        b = B[n + pos]
        r0 = m.rank(fin)
        r1 = m.rank(fin + [b])
        r2 = m.rank(fin + [fe, b])
        if not (r2 == r1 == r0 + 1):
            return Def5Result(False, "B2", f"edge e{j + 1}: ranks {r2}, {r1}, {r0}+1")
    # (C)
    sinks = [(t.id, f.of_edges(net.sink_inputs(t.id)), [f.msg[d] for d in t.demands])
             for t in net.sinks if t.demands]
    bidx = list(range(k))
    pats = itertools.combinations(bidx, min(beta, k))
    if isinstance(m, VectorMatroid) and method == "batch":
        bad = _condition_c_batch(m, rest, sinks, list(pats))
    elif isinstance(m, VectorMatroid) and method == "contract":
        bad = None
        for P in pats:
            T = [rest[i] for i in bidx if i not in P]
            mc = m.contract(T)
            for sid, ins, dem in sinks:
                if mc.rank(ins + dem) != mc.rank(ins):
                    bad = (sid, P)
                    break
            if bad:
                break
    else:
        bad = None
        for P in pats:
            T = [rest[i] for i in bidx if i not in P]
            rT = m.rank(T)
            for sid, ins, dem in sinks:
                if m.rank(ins + dem + T) - rT != m.rank(ins + T) - rT:
                    bad = (sid, P)
                    break
            if bad:
                break
    if bad:
        sid, P = bad
        pat = ",".join(f"e{elig[i] + 1}" for i in P)
        return Def5Result(False, "C", f"sink {sid} fails for pattern {{{pat}}}")
    return Def5Result(True)


def _condition_c_batch(m: VectorMatroid, rest, sinks, pats):
    """Stacked elimination: a pivot among the demand columns, after the
    contracted basis columns and the sink's input columns, means a demand
    is outside the closure."""
    F = m.F
    A = m.rep.a
    if not pats:
        return None
    col = {lab: A[:, i] for lab, i in m._index.items()}
    restc = np.stack([col[b] for b in rest], axis=1) if rest else np.zeros((A.shape[0], 0), dtype=np.int64)
    k = len(rest)
    for sid, ins, dem in sinks:
        tail = np.stack([col[x] for x in ins + dem], axis=1) if ins + dem else np.zeros((A.shape[0], 0), dtype=np.int64)
        width = k + tail.shape[1]
        for start in range(0, len(pats), 4096):
            chunk = pats[start:start + 4096]
            arr = np.zeros((len(chunk), A.shape[0], width), dtype=np.int64)
            for r, P in enumerate(chunk):
                keep = [i for i in range(k) if i not in P]
                arr[r, :, :len(keep)] = restc[:, keep]
            # columns of the pattern's basis elements stay zero (they are not contracted)
            arr[:, :, k:] = tail
            piv = batch_pivots(F, arr)
            hit = piv[:, k + len(ins):].any(axis=1)
            if hit.any():
                return sid, chunk[int(np.flatnonzero(hit)[0])]
    return None


# ----------------------------------------------------------------------
# conversions between network codes and matroids


def code_matrix(net: Network, code: NetworkCode) -> np.ndarray:
    """X = [AF restricted to eligible columns; F on eligible rows and columns]."""
    Fm = transfer_matrix(code.K)
    AF = code.A @ Fm
    el = list(net.eligible)
    return np.vstack([AF.a[:, el], Fm.a[np.ix_(el, el)]])


def code_to_matroid(net: Network, code: NetworkCode, beta: int, check: bool = True):
    """Vector matroid of (I | X) with f(m_i) = i, f(e_j) = n + k + j (eligible
    edges, 1-based labels) and B = 1..n+k.

    Returns (VectorMatroid, GroundMap, B).
    """
    if check:
        res = check_detecting(net, code, beta)
        if not res:
            raise MatroidalError(f"code is not {beta}-error detecting: {res.verdict()}")
    F = net.F
    n = net.n
    el = list(net.eligible)
    k = len(el)
    X = code_matrix(net, code)
    rep = Matrix(F, np.hstack([np.eye(n + k, dtype=np.int64), X]))
    m = VectorMatroid(rep)
    edge = {j: n + k + pos + 1 for pos, j in enumerate(el)}
    # non-eligible edges: map onto a parallel element
    Fm = transfer_matrix(code.K)
    AF = code.A @ Fm
    cols = {lab: rep.a[:, lab - 1] for lab in m.ground}
    elig_set = set(el)
    for j in range(net.n_edges):
        if j in elig_set:
            continue
        v = np.concatenate([AF.a[:, j], Fm.a[el, j]])
        lab = _parallel_label(F, v, [edge[e] for e in el] + list(range(1, n + 1)), cols)
        if lab is None:
            raise MatroidalError(f"edge e{j + 1} is not parallel to any element of the matroid")
        edge[j] = lab
    f = GroundMap(list(range(1, n + 1)), edge)
    B = list(range(1, n + k + 1))
    return m, f, B


def _parallel_label(F, v, order, cols):
    nz = np.flatnonzero(v)
    if nz.size == 0:
        return None
    for lab in order:
        c = cols[lab]
        cz = np.flatnonzero(c)
        if not np.array_equal(nz, cz):
            continue
        s = F.div(int(v[nz[0]]), int(c[nz[0]]))
        if np.array_equal(F.vmul(c, s), v):
            return lab
    return None


def standard_form(m: VectorMatroid, B: list) -> np.ndarray:
    """Rows of R_B^{-1} R so that the columns of B become the identity."""
    R, r, piv = mat_rref(m.rep)
    R = R.take_rows(range(r))
    idx = [m._index[b] for b in B]
    if len(idx) != r:
        raise MatroidalError("B does not have rank-many elements")
    try:
        inv = mat_inverse(R.take_cols(idx))
    except np.linalg.LinAlgError:
        raise MatroidalError("B is not a basis") from None
    return (inv @ R).a


def matroid_to_code(m: VectorMatroid, f: GroundMap, B: list, net: Network) -> NetworkCode:
    """Extract A and K from a representation, edge by edge in order.

    For eligible e with basis element b, the column of f(e) is written as a
    combination of the (already normalised) vectors of In(e) plus lambda * b;
    dividing by lambda makes the own-error coefficient 1 and the remaining
    coefficients are the local coding coefficients.
    """
    if isinstance(m, RankOracleMatroid):
        raise MatroidalError("code extraction needs a representation")
    F = m.F
    n = net.n
    el = list(net.eligible)
    pos = {j: p for p, j in enumerate(el)}
    Y = standard_form(m, B)
    rows = Y.shape[0]
    unit = np.eye(rows, dtype=np.int64)
    vec = {}                                # edge -> normalised column
    A = np.zeros((n, net.n_edges), dtype=np.int64)
    K = np.zeros((net.n_edges, net.n_edges), dtype=np.int64)
    for j in range(net.n_edges):
        col = Y[:, m._index[f.edge[j]]]
        tail = net.tail(j)
        from_source = net.node(tail).role == "source"
        if from_source:
            ins = net.source_messages[tail]
            basis = [unit[:, i] for i in ins]
        else:
            ins = net.in_edges[tail]
            basis = [vec[i] for i in ins]
        own = j in pos
        if own:
            basis = basis + [unit[:, n + pos[j]]]
        G = np.stack(basis, axis=1) if basis else np.zeros((rows, 0), dtype=np.int64)
        c = span_member(Matrix(F, G), col)
        if c is None:
            raise MatroidalError(f"f(e{j + 1}) is not spanned by its inputs")
        lam = 1
        if own:
            lam = c[-1]
            if lam == 0:
                raise MatroidalError(f"edge e{j + 1} does not carry its own error")
            c = c[:-1]
        li = F.inv(lam)
        coeffs = [F.mul(x, li) for x in c]
        vec[j] = F.vmul(col, li)
        for i, x in zip(ins, coeffs):
            if from_source:
                A[i, j] = x
            else:
                K[i, j] = x
    return NetworkCode(Matrix(F, A), Matrix(F, K))


def scaled_equal(F, U: np.ndarray, V: np.ndarray) -> bool:
    """Columns of U and V agree up to one nonzero scalar per column."""
    if U.shape != V.shape:
        return False
    for j in range(U.shape[1]):
        u, v = U[:, j], V[:, j]
        nu, nv = np.flatnonzero(u), np.flatnonzero(v)
        if not np.array_equal(nu, nv):
            return False
        if nu.size == 0:
            continue
        s = F.div(int(v[nu[0]]), int(u[nu[0]]))
        if not np.array_equal(F.vmul(u, s), v):
            return False
    return True
