"""Matroids given by a matrix (vector matroids) or by a rank function.

Labels are opaque hashable tokens; the default labels of a matrix with N
columns are the integers 1..N.
"""
from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable

import numpy as np

from .field import GF, Matrix, array_rank, is_irreducible, mat_inverse, mat_rref


class MatroidError(ValueError):
    pass


# ----------------------------------------------------------------------
# shared behaviour


class _MatroidBase:
    ground: list

    def rank(self, X) -> int:  # pragma: no cover - overridden
        raise NotImplementedError

    def _check(self, X):
        X = list(X)
        bad = [x for x in X if x not in self._index]
        if bad:
            raise MatroidError(f"unknown label(s) {bad}")
        return X

    @property
    def full_rank(self) -> int:
        return self.rank(self.ground)

    def is_independent(self, X) -> bool:
        X = list(X)
        return self.rank(X) == len(set(X))

    def closure(self, X) -> list:
        X = self._check(X)
        r = self.rank(X)
        Xs = set(X)
        return [e for e in self.ground if e in Xs or self.rank(X + [e]) == r]

    def is_flat(self, X) -> bool:
        return set(self.closure(X)) == set(X)

    def flats(self, limit: int = 16) -> list[frozenset]:
        """All flats, by closing every subset (small ground sets only)."""
        if len(self.ground) > limit:
            raise MatroidError("too many elements to enumerate flats")
        seen = set()
        out = []
        for k in range(len(self.ground) + 1):
            for S in itertools.combinations(self.ground, k):
                c = frozenset(self.closure(S))
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        return out

    def independent_sets(self, limit: int = 16) -> set[frozenset]:
        if len(self.ground) > limit:
            raise MatroidError("too many elements to enumerate independent sets")
        out = {frozenset()}
        frontier = [()]
        order = {e: i for i, e in enumerate(self.ground)}
        while frontier:
            nxt = []
            for S in frontier:
                start = order[S[-1]] + 1 if S else 0
                for e in self.ground[start:]:
                    T = S + (e,)
                    if self.rank(T) == len(T):
                        out.add(frozenset(T))
                        nxt.append(T)
            frontier = nxt
        return out

    def bases(self, limit: int = 16) -> set[frozenset]:
        r = self.full_rank
        return {S for S in self.independent_sets(limit) if len(S) == r}

    def circuits(self, limit: int = 20) -> set[frozenset]:
        """All minimal dependent sets.

        Every circuit is I + e with I independent and e after max(I) in
        ground order, so we walk independent sets and test each extension.
        """
        if len(self.ground) > limit:
            raise MatroidError(f"circuit enumeration limited to {limit} elements")
        ground = self.ground
        out = set()
        stack = [()]
        while stack:
            S = stack.pop()
            start = ground.index(S[-1]) + 1 if S else 0
            for e in ground[start:]:
                T = S + (e,)
                if self.rank(T) == len(T):
                    stack.append(T)
                elif all(self.rank(T[:i] + T[i + 1:]) == len(T) - 1 for i in range(len(T))):
                    out.add(frozenset(T))
        return out


# ----------------------------------------------------------------------
# vector matroids


class VectorMatroid(_MatroidBase):
    """Matroid of linear dependence among the columns of ``rep``."""

    def __init__(self, rep: Matrix, labels: Iterable | None = None):
        if labels is None:
            labels = list(range(1, rep.cols + 1))
        labels = list(labels)
        if len(labels) != rep.cols:
            raise MatroidError("one label per column required")
        if len(set(labels)) != len(labels):
            raise MatroidError("labels must be distinct")
        self.rep = rep
        self.F = rep.F
        self.ground = labels
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._cache: dict[int, int] = {}

    def __repr__(self):
        return f"VectorMatroid({self.rep.rows}x{self.rep.cols} over {self.F!r})"

    def column(self, label) -> np.ndarray:
        return self.rep.a[:, self._index[label]].copy()

    def columns(self, X) -> np.ndarray:
        idx = [self._index[x] for x in X]
        return self.rep.a[:, idx]

    def rank(self, X) -> int:
        mask = 0
        idx = self._index
        try:
            for x in X:
                mask |= 1 << idx[x]
        except KeyError as exc:
            raise MatroidError(f"unknown label {exc.args[0]!r}") from None
        hit = self._cache.get(mask)
        if hit is not None:
            return hit
        cols = [i for i in range(self.rep.cols) if mask >> i & 1]
        r = array_rank(self.F, self.rep.a[:, cols]) if cols else 0
        self._cache[mask] = r
        return r

    def same_independent_sets(self, other, limit: int = 16) -> bool:
        return self.independent_sets(limit) == other.independent_sets(limit)

    # -- minors ---------------------------------------------------------

    def delete(self, T) -> "VectorMatroid":
        T = set(self._check(T))
        keep = [e for e in self.ground if e not in T]
        return self.restrict(keep)

    def restrict(self, keep) -> "VectorMatroid":
        keep = self._check(keep)
        return VectorMatroid(self.rep.take_cols([self._index[e] for e in keep]), keep)

    def contract(self, T) -> "VectorMatroid":
        """Contract T one element at a time.

        A non-loop column is reduced to a single nonzero entry by row
        operations, then its row and column are removed.  Loops are deleted.
        """
        T = self._check(T)
        F = self.F
        A = self.rep.a.copy()
        labels = list(self.ground)
        for t in T:
            j = labels.index(t)
            nz = np.flatnonzero(A[:, j])
            if nz.size:
                p = int(nz[0])
                piv_inv = F.inv(int(A[p, j]))
                for i in nz[1:]:
                    f = F.mul(int(A[i, j]), piv_inv)
                    A[i] = F.vsub(A[i], F.vmul(A[p], f))
                A = np.delete(A, p, axis=0)
            A = np.delete(A, j, axis=1)
            labels.pop(j)
        return VectorMatroid(Matrix(F, A.reshape(A.shape[0], len(labels))), labels)

    def dual(self) -> "VectorMatroid":
        F = self.F
        R, r, piv = mat_rref(self.rep)
        n = self.rep.cols
        nonpiv = [j for j in range(n) if j not in piv]
        D = R.a[:r][:, nonpiv]
        out = np.zeros((n - r, n), dtype=np.int64)
        if r:
            out[:, piv] = F.vneg(D.T)
        for i, j in enumerate(nonpiv):
            out[i, j] = 1
        return VectorMatroid(Matrix(F, out), self.ground)

    # -- extensions -----------------------------------------------------

    def add_column(self, vec, new_label) -> "VectorMatroid":
        if new_label in self._index:
            raise MatroidError(f"label {new_label!r} already present")
        col = Matrix(self.F, np.asarray(vec, dtype=np.int64).reshape(-1, 1))
        return VectorMatroid(self.rep.hstack(col), self.ground + [new_label])

    def parallel_extend(self, i, new_label) -> "VectorMatroid":
        col = self.column(self._check([i])[0])
        if not col.any():
            raise MatroidError(f"{i!r} is a loop")
        return self.add_column(col, new_label)

    def series_extend(self, i, new_label) -> "VectorMatroid":
        """Bordered matrix: a new row that is 1 at column i and at the new column."""
        i = self._check([i])[0]
        if new_label in self._index:
            raise MatroidError(f"label {new_label!r} already present")
        col = self.column(i)
        if not col.any():
            raise MatroidError(f"{i!r} is a loop")
        others = [e for e in self.ground if e != i]
        if self.rank(others) != self.full_rank:
            raise MatroidError(f"{i!r} is a coloop")
        A = self.rep.a
        top = np.hstack([A, np.zeros((A.shape[0], 1), dtype=np.int64)])
        row = np.zeros((1, A.shape[1] + 1), dtype=np.int64)
        row[0, self._index[i]] = 1
        row[0, -1] = 1
        return VectorMatroid(Matrix(self.F, np.vstack([top, row])), self.ground + [new_label])

    def principal_extension(self, flat, new_label) -> "VectorMatroid":
        return principal_extension(self, flat, new_label)


def _reed_solomon(k: int, length: int, F: GF) -> np.ndarray:
    if length > F.order + 1:
        raise MatroidError(f"no MDS code of length {length} over {F!r} from this construction")
    pts = []
    g = F.primitive
    x = 1
    for _ in range(min(length, F.order - 1)):
        pts.append(x)
        x = F.mul(x, g)
    G = np.zeros((k, length), dtype=np.int64)
    for j, a in enumerate(pts):
        for i in range(k):
            G[i, j] = F.pow(a, i)
    if length >= F.order:
        G[0, F.order - 1] = 1  # evaluation at 0
    if length == F.order + 1:
        G[k - 1, F.order] = 1  # the point at infinity
    return G


def mds_generator(k: int, length: int, F: GF) -> Matrix:
    """Systematic generator (I_k | P) of a Reed-Solomon code."""
    if k > length or k < 0:
        raise MatroidError("need 0 <= k <= length")
    if k == 0:
        return Matrix.zeros(F, 0, length)
    if k == length:
        return Matrix.identity(F, k)
    G = Matrix(F, _reed_solomon(k, length, F))
    lead = mat_inverse(G.take_cols(range(k)))
    return lead @ G


def mds_matroid(k: int, length: int, F: GF, labels=None) -> VectorMatroid:
    return VectorMatroid(mds_generator(k, length, F), labels)


def direct_sum(ms: list[VectorMatroid]) -> VectorMatroid:
    ms = [m for m in ms]
    if not ms:
        raise MatroidError("direct sum of nothing")
    F = ms[0].F
    labels = []
    for m in ms:
        if m.F != F:
            raise MatroidError("direct sum over different fields")
        labels.extend(m.ground)
    if len(set(labels)) != len(labels):
        raise MatroidError("label collision in direct sum")
    rows = sum(m.rep.rows for m in ms)
    cols = sum(m.rep.cols for m in ms)
    A = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in ms:
        A[r:r + m.rep.rows, c:c + m.rep.cols] = m.rep.a
        r += m.rep.rows
        c += m.rep.cols
    return VectorMatroid(Matrix(F, A), labels)


def first_irreducible(p: int, degree: int) -> list[int]:
    """Lexicographically first monic irreducible of the given degree over GF(p)."""
    for low in itertools.product(range(p), repeat=degree):
        poly = list(reversed(low)) + [1]
        if degree == 1 or (poly[0] and is_irreducible(poly, p)):
            return poly
    raise MatroidError("no irreducible polynomial found")


def principal_extension(m: VectorMatroid, flat, new_label) -> VectorMatroid:
    """Principal extension generated by ``flat``, over GF(p^M).

    M is the number of flats not containing ``flat``.  For each such flat F_i a
    vector v_i in span(flat) outside span(F_i) is chosen (the first column of
    ``flat`` that works, which always exists because flat is not inside F_i),
    and the new column is sum_i v_i x^i where x is a root of the chosen
    irreducible modulus.  Only prime base fields are supported.
    """
    F = m.F
    if F.m != 1:
        raise MatroidError("principal extension implemented over prime fields only")
    flat = m._check(flat)
    if not m.is_flat(flat):
        raise MatroidError("generator is not a flat")
    fs = set(flat)
    excluded = [G for G in m.flats() if not fs <= G]
    M = len(excluded)
    vec = np.zeros(m.rep.rows, dtype=np.int64)
    big = F
    if M:
        # v_i: first column of the generator that leaves span(F_i)
        for i, G in enumerate(excluded):
            G = list(G)
            rG = m.rank(G)
            e = next(e for e in flat if m.rank(G + [e]) > rG)
            vec = vec + m.column(e) * F.p ** i
        if M > 1:
            big = GF(F.p, M, first_irreducible(F.p, M))
    rep = Matrix(big, m.rep.a)
    return VectorMatroid(rep, m.ground).add_column(vec, new_label)


# ----------------------------------------------------------------------
# rank-oracle matroids


class RankOracleMatroid(_MatroidBase):
    """Matroid known only through its rank function."""

    def __init__(self, ground, rank_fn: Callable[[frozenset], int]):
        self.ground = list(ground)
        if len(set(self.ground)) != len(self.ground):
            raise MatroidError("labels must be distinct")
        self._index = {e: i for i, e in enumerate(self.ground)}
        self._fn = rank_fn
        self._cache: dict[frozenset, int] = {}

    def rank(self, X) -> int:
        key = frozenset(X)
        hit = self._cache.get(key)
        if hit is None:
            bad = [x for x in key if x not in self._index]
            if bad:
                raise MatroidError(f"unknown label(s) {bad}")
            hit = int(self._fn(key))
            self._cache[key] = hit
        return hit

    @classmethod
    def of(cls, m) -> "RankOracleMatroid":
        return cls(m.ground, m.rank)

    def contract(self, T) -> "RankOracleMatroid":
        T = frozenset(self._check(T))
        rT = self.rank(T)
        base = self
        return RankOracleMatroid([e for e in self.ground if e not in T],
                                 lambda X: base.rank(X | T) - rT)

    def delete(self, T) -> "RankOracleMatroid":
        T = set(self._check(T))
        return RankOracleMatroid([e for e in self.ground if e not in T], self.rank)

    def restrict(self, keep) -> "RankOracleMatroid":
        return RankOracleMatroid(self._check(keep), self.rank)


def amalgam_rank(m1, m2, shared, X) -> int:
    """r1(X & E1) + r2(X & E2) - |X & shared|."""
    E1 = m1._index
    E2 = m2._index
    X = set(X)
    bad = [x for x in X if x not in E1 and x not in E2]
    if bad:
        raise MatroidError(f"labels outside both ground sets: {bad}")
    X1 = [x for x in X if x in E1]
    X2 = [x for x in X if x in E2]
    return m1.rank(X1) + m2.rank(X2) - len(X & set(shared))


def amalgam(m1, m2) -> RankOracleMatroid:
    """Rank-oracle object on E1 | E2 from the amalgam rank function.

    The shared elements must form an independent set in both matroids.  The
    result is a matroid rank function when the shared elements are coloops
    of both sides; otherwise monotonicity can fail (see amalgam_monotonicity).
    """
    shared = [e for e in m1.ground if e in m2._index]
    if m1.rank(shared) != len(shared) or m2.rank(shared) != len(shared):
        raise MatroidError("shared elements must be independent in both matroids")
    ground = list(m1.ground) + [e for e in m2.ground if e not in m1._index]
    sh = frozenset(shared)
    return RankOracleMatroid(ground, lambda X: amalgam_rank(m1, m2, sh, X))


def amalgam_monotonicity(m1, m2) -> list:
    """Targeted R2 probe: the union minus the shared set, and minus each
    shared element, must not outrank the whole union.

    Returns (X, r(X), r(E1 | E2)) for every probe set whose amalgam rank
    exceeds the rank of the whole union.  Empty when the probes pass.
    """
    shared = frozenset(e for e in m1.ground if e in m2._index)
    full = list(m1.ground) + [e for e in m2.ground if e not in m1._index]
    r_full = amalgam_rank(m1, m2, shared, full)
    out = []
    probes = [[e for e in full if e not in shared]]
    probes += [[e for e in full if e != x] for x in sorted(shared, key=str)]
    for X in probes:
        rX = amalgam_rank(m1, m2, shared, X)
        if rX > r_full:
            out.append((frozenset(X), rX, r_full))
    return out


# ----------------------------------------------------------------------
# rank axioms


def rank_axioms_check(m, mode: str = "exhaustive", samples: int = 1000, seed: int = 0):
    """Check R1-R3 for the rank function of ``m``.

    Returns ``(True, None)`` or ``(False, (axiom, X, Y))`` with a violating
    pair (Y is None for R1).  Exhaustive mode tests R1 on every subset, R2 on
    every single-element growth and R3 in its local form
    r(X+e) + r(X+f) >= r(X+e+f) + r(X), which is equivalent to submodularity.
    """
    ground = list(m.ground)
    n = len(ground)
    if mode == "exhaustive":
        if n > 12:
            raise MatroidError("exhaustive axiom check limited to 12 elements")
        subsets = [frozenset(X) for k in range(n + 1) for X in itertools.combinations(ground, k)]
        for X in subsets:
            if not 0 <= m.rank(X) <= len(X):
                return False, ("R1", X, None)
        for X in subsets:
            r = m.rank(X)
            rest = [e for e in ground if e not in X]
            for e in rest:
                if m.rank(X | {e}) < r:
                    return False, ("R2", X, X | {e})
            for e, f in itertools.combinations(rest, 2):
                A, B = X | {e}, X | {f}
                if m.rank(A) + m.rank(B) < m.rank(A | B) + r:
                    return False, ("R3", A, B)
        return True, None
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    for _ in range(samples):
        X = frozenset(e for e in ground if rng.random() < 0.5)
        Y = frozenset(e for e in ground if rng.random() < 0.5)
        for S in (X, Y):
            if not 0 <= m.rank(S) <= len(S):
                return False, ("R1", S, None)
        if m.rank(X & Y) > m.rank(X):
            return False, ("R2", X & Y, X)
        if m.rank(X) + m.rank(Y) < m.rank(X | Y) + m.rank(X & Y):
            return False, ("R3", X, Y)
    return True, None


# ----------------------------------------------------------------------
# functional aliases


def vm_rank(m, X) -> int:
    return m.rank(X)


def vm_circuits(m, limit: int = 20):
    return m.circuits(limit)


def vm_closure(m, X):
    return m.closure(X)


def vm_dual(m: VectorMatroid) -> VectorMatroid:
    return m.dual()


def vm_delete(m, T):
    return m.delete(T)


def vm_contract(m, T):
    return m.contract(T)


def vm_parallel_extend(m: VectorMatroid, i, new_label) -> VectorMatroid:
    return m.parallel_extend(i, new_label)


def vm_series_extend(m: VectorMatroid, i, new_label) -> VectorMatroid:
    return m.series_extend(i, new_label)
