"""Finite fields GF(p^m) and dense matrices over them.

Elements are plain integers.  The base-p digits of an element give the
coefficients of its polynomial, least significant digit first, so in GF(8)
with modulus x^3+x+1 the element 6 is x^2+x.  This is the "decimal code"
used by every matrix file in the package.

Scalar operations work on Python ints; the ``v*`` methods work elementwise on
numpy integer arrays and are what the matrix routines use.
"""
from __future__ import annotations

import itertools

import numpy as np

_TABLE_LIMIT = 1 << 16


class FieldError(ValueError):
    pass


def _digits(code: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(code % p)
        code //= p
    return out


def _undigits(ds, p: int) -> int:
    code = 0
    for d in reversed(ds):
        code = code * p + d
    return code


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    """Remainder of a modulo a monic polynomial (coefficient lists, low first)."""
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return [x % p for x in a[:dm]] + [0] * max(0, dm - len(a))


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    return _poly_mod(prod, mod, p)


def is_irreducible(mod: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(mod) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            div = list(low) + [1]
            if not any(_poly_mod(mod, div, p)):
                return False
    return True


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, int(p ** 0.5) + 1))


DEFAULT_MODULI = {
    (2, 2): [1, 1, 1],        # x^2+x+1
    (2, 3): [1, 1, 0, 1],     # x^3+x+1
    (2, 4): [1, 1, 0, 0, 1],  # x^4+x+1
}


class GF:
    """The field GF(p^m).

    Parameters
    ----------
    p : prime characteristic
    m : extension degree
    modulus : monic irreducible polynomial of degree m as a coefficient list
        (constant term first).  Defaults exist for GF(4), GF(8) and GF(16);
        it is ignored when m = 1.
    """

    def __init__(self, p: int, m: int = 1, modulus: list[int] | None = None):
        if not _is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError("degree must be positive")
        self.p = p
        self.m = m
        self.order = p ** m
        if m == 1:
            modulus = [0, 1]
        elif modulus is None:
            if (p, m) not in DEFAULT_MODULI:
                raise FieldError(f"GF({p}^{m}) needs an explicit modulus")
            modulus = DEFAULT_MODULI[(p, m)]
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree m")
        if m > 1 and not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.modulus = modulus
        self._tables = self.order <= _TABLE_LIMIT
        if self._tables:
            self._build_tables()

    # ------------------------------------------------------------------
    # construction helpers

    @property
    def modulus_code(self) -> int:
        return 0 if self.m == 1 else _undigits(self.modulus, self.p)

    @classmethod
    def from_code(cls, p: int, m: int, modulus_code: int) -> "GF":
        if m == 1:
            return cls(p, 1)
        return cls(p, m, _digits(modulus_code, p, m + 1))

    def _slow_mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        da = _digits(a, self.p, self.m)
        db = _digits(b, self.p, self.m)
        return _undigits(_poly_mulmod(da, db, self.modulus, self.p), self.p)

    def _build_tables(self):
        q = self.order
        # find a primitive element by brute force; small fields only
        for g in range(2 if q > 2 else 1, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._slow_mul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                break
        else:
            exp = [1]
            g = 1
        self.primitive = g
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp_list = exp + exp
        self._log_list = log
        # log(0) is mapped past the doubled table into a zero-filled tail
        self._exp = np.array(exp + exp + [0] * (2 * q), dtype=np.int64)
        self._log = np.array(log, dtype=np.int64)
        self._zero_log = 2 * (q - 1)
        logz = self._log.copy()
        logz[0] = self._zero_log
        self._logz = logz
        self._inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            self._inv[a] = exp[(-log[a]) % (q - 1)]

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={self.modulus_code})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self):
        return hash((self.p, self.m, tuple(self.modulus)))

    @property
    def name(self) -> str:
        q = self.order
        if self.m == 1 or (self.p, self.m) in DEFAULT_MODULI and \
                self.modulus == DEFAULT_MODULI[(self.p, self.m)]:
            return f"gf{q}"
        return f"custom:{self.p},{self.m},{self.modulus_code}"

    def elements(self):
        return range(self.order)

    def check(self, a: int):
        if not (0 <= a < self.order):
            raise FieldError(f"{a} is not an element of {self}")

    # ------------------------------------------------------------------
    # scalar arithmetic

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        out, k = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * k
            a //= p
            b //= p
            k *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.m == 1:
            return -a % self.p
        p = self.p
        out, k = 0, 1
        while a:
            out += (-(a % p) % p) * k
            a //= p
            k *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._tables:
            return self._exp_list[self._log_list[a] + self._log_list[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._tables:
            return int(self._inv[a])
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime subfield."""
        return k % self.p

    # ------------------------------------------------------------------
    # elementwise arithmetic on numpy arrays

    def vadd(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        a = np.asarray(a)
        b = np.asarray(b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        k = 1
        for _ in range(self.m):
            out += (((a // k) % p + (b // k) % p) % p) * k
            k *= p
        return out

    def vneg(self, a):
        if self.p == 2:
            return a
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        a = np.asarray(a)
        out = np.zeros(a.shape, dtype=np.int64)
        k = 1
        for _ in range(self.m):
            out += ((-((a // k) % p)) % p) * k
            k *= p
        return out

    def vsub(self, a, b):
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.m == 1:
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.m == 1 and self.p < 3037000499:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        if self._tables:
            return self._exp[self._logz[a] + self._logz[b]]
        f = np.vectorize(self.mul, otypes=[np.int64])
        return f(a, b)

    def vinv(self, a):
        if self._tables:
            return self._inv[a]
        return np.vectorize(self.inv, otypes=[np.int64])(a)


_NAMED = {}


def field(spec) -> GF:
    """Field from a name such as ``gf8`` or ``custom:3,2,10`` (cached)."""
    if isinstance(spec, GF):
        return spec
    if isinstance(spec, int):
        spec = f"gf{spec}"
    key = spec.strip().lower()
    if key in _NAMED:
        return _NAMED[key]
    if key.startswith("custom:"):
        parts = [int(t) for t in key[7:].split(",")]
        if len(parts) != 3:
            raise FieldError("custom field needs p,m,modulus-code")
        F = GF.from_code(*parts)
    elif key.startswith("gf"):
        q = int(key[2:])
        if q < 2:
            raise FieldError(f"{q} is not a prime power")
        for p in range(2, q + 1):
            if q % p == 0:
                break
        m = 0
        r = q
        while r % p == 0:
            r //= p
            m += 1
        if r != 1:
            raise FieldError(f"{q} is not a prime power")
        F = GF(p, m)
    else:
        raise FieldError(f"unknown field {spec!r}")
    _NAMED[key] = F
    return F


# ----------------------------------------------------------------------
# matrices


class Matrix:
    """Immutable dense matrix over a finite field (row-major numpy storage)."""

    __slots__ = ("F", "a")

    def __init__(self, F: GF, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= F.order):
            raise FieldError("matrix entry outside the field")
        arr.setflags(write=False)
        self.F = F
        self.a = arr

    @classmethod
    def _wrap(cls, F, arr):
        m = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        m.F = F
        m.a = arr
        return m

    @classmethod
    def zeros(cls, F, r, c):
        return cls._wrap(F, np.zeros((r, c), dtype=np.int64))

    @classmethod
    def identity(cls, F, n):
        return cls._wrap(F, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    def __getitem__(self, idx):
        out = self.a[idx]
        if isinstance(out, np.ndarray):
            return out.copy()
        return int(out)

    def tolist(self):
        return self.a.tolist()

    def copy_array(self):
        return self.a.copy()

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.F == other.F
                and self.a.shape == other.a.shape and bool(np.array_equal(self.a, other.a)))

    def __hash__(self):
        return hash((self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"Matrix({self.F!r}, {self.a.tolist()})"

    def T(self) -> "Matrix":
        return Matrix._wrap(self.F, self.a.T)

    def take_cols(self, idx) -> "Matrix":
        return Matrix._wrap(self.F, self.a[:, list(idx)].reshape(self.rows, len(idx)))

    def take_rows(self, idx) -> "Matrix":
        return Matrix._wrap(self.F, self.a[list(idx), :].reshape(len(idx), self.cols))

    def hstack(self, other: "Matrix") -> "Matrix":
        return Matrix._wrap(self.F, np.hstack([self.a, other.a]))

    def vstack(self, other: "Matrix") -> "Matrix":
        return Matrix._wrap(self.F, np.vstack([self.a, other.a]))

    def __add__(self, other):
        return Matrix._wrap(self.F, self.F.vadd(self.a, other.a))

    def __sub__(self, other):
        return Matrix._wrap(self.F, self.F.vsub(self.a, other.a))

    def __matmul__(self, other):
        return Matrix._wrap(self.F, matmul(self.F, self.a, other.a))

    def scale(self, c: int) -> "Matrix":
        return Matrix._wrap(self.F, self.F.vmul(self.a, c))

    def is_zero(self) -> bool:
        return not self.a.any()

    # text format: "rows cols p m modulus-code" then one row per line
    def to_text(self) -> str:
        F = self.F
        lines = [f"{self.rows} {self.cols} {F.p} {F.m} {F.modulus_code}"]
        for row in self.a.tolist():
            lines.append(" ".join(str(v) for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ValueError("empty matrix text")
        head = lines[0].split()
        if len(head) != 5:
            raise ValueError("matrix header must be 'rows cols p m modulus-code'")
        r, c, p, m, code = (int(t) for t in head)
        F = GF.from_code(p, m, code)
        body = lines[1:1 + r]
        if len(body) != r:
            raise ValueError(f"expected {r} matrix rows, found {len(body)}")
        data = []
        for ln in body:
            row = [int(t) for t in ln.split()]
            if len(row) != c:
                raise ValueError(f"expected {c} entries per row")
            data.append(row)
        return cls(F, np.array(data, dtype=np.int64).reshape(r, c))


def matmul(F: GF, A, B):
    """Product of two integer arrays over F."""
    A = np.asarray(A)
    B = np.asarray(B)
    r, k = A.shape
    k2, c = B.shape
    if k != k2:
        raise ValueError("dimension mismatch in matmul")
    if F.m == 1 and F.p < 2 ** 15:
        # exact in int64 as long as the accumulated sum stays small
        if k * (F.p - 1) ** 2 < 2 ** 62:
            return (A @ B) % F.p
    out = np.zeros((r, c), dtype=np.int64)
    for t in range(k):
        col = A[:, t]
        if not col.any():
            continue
        out = F.vadd(out, F.vmul(col[:, None], B[t][None, :]))
    return out


# ----------------------------------------------------------------------
# elimination


def _rref_array(F: GF, R: np.ndarray, max_col: int | None = None):
    """In-place reduced row echelon form of R; returns the pivot columns."""
    rows, cols = R.shape
    if max_col is None:
        max_col = cols
    pivots = []
    r = 0
    for c in range(max_col):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        piv = int(R[r, c])
        if piv != 1:
            R[r] = F.vmul(R[r], F.inv(piv))
        fac = R[:, c].copy()
        fac[r] = 0
        hit = np.flatnonzero(fac)
        if hit.size:
            R[hit] = F.vsub(R[hit], F.vmul(fac[hit][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return pivots


def mat_rref(M: Matrix):
    """Reduced row echelon form.

    Returns
    -------
    (R, rank, pivot_cols)
    """
    R = M.a.copy()
    piv = _rref_array(M.F, R)
    return Matrix._wrap(M.F, R), len(piv), piv


def rank(M: Matrix) -> int:
    if M.a.size == 0:
        return 0
    R = M.a.copy()
    return len(_rref_array(M.F, R))


def array_rank(F: GF, arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    R = np.array(arr, dtype=np.int64)
    return len(_rref_array(F, R))


def span_member(M: Matrix, v) -> list[int] | None:
    """Coefficients c with M c = v, or None when v is outside the column span."""
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if v.shape[0] != M.rows:
        raise ValueError("vector length does not match matrix rows")
    F = M.F
    aug = np.hstack([M.a, v[:, None]]) if M.cols else v[:, None].copy()
    piv = _rref_array(F, aug)
    if piv and piv[-1] == M.cols:
        return None
    c = [0] * M.cols
    for i, pc in enumerate(piv):
        c[pc] = int(aug[i, M.cols])
    return c


def solve_columns(M: Matrix, V: Matrix) -> Matrix | None:
    """X with M X = V (each column solved independently), or None."""
    cols = []
    for j in range(V.cols):
        c = span_member(M, V.a[:, j])
        if c is None:
            return None
        cols.append(c)
    arr = np.array(cols, dtype=np.int64).T.reshape(M.cols, V.cols)
    return Matrix._wrap(M.F, arr)


def mat_inverse(M: Matrix) -> Matrix:
    n = M.rows
    if M.cols != n:
        raise ValueError("inverse of a non-square matrix")
    F = M.F
    aug = np.hstack([M.a, np.eye(n, dtype=np.int64)])
    piv = _rref_array(F, aug, max_col=n)
    if len(piv) < n:
        raise np.linalg.LinAlgError("matrix is singular")
    return Matrix._wrap(F, aug[:, n:])


def nullspace(M: Matrix) -> Matrix:
    """Basis of the right kernel, as columns."""
    F = M.F
    R, r, piv = mat_rref(M)
    free = [j for j in range(M.cols) if j not in piv]
    basis = []
    for fj in free:
        v = [0] * M.cols
        v[fj] = 1
        for i, pc in enumerate(piv):
            v[pc] = F.neg(int(R.a[i, fj]))
        basis.append(v)
    if not basis:
        return Matrix.zeros(F, M.cols, 0)
    return Matrix(F, np.array(basis, dtype=np.int64).T)


# ----------------------------------------------------------------------
# batched elimination: many small matrices at once


def batch_pivots(F: GF, arrs: np.ndarray) -> np.ndarray:
    """Forward elimination on a stack of matrices.

    Parameters
    ----------
    arrs : (P, R, C) integer array; not modified.

    Returns
    -------
    (P, C) boolean array marking the pivot columns of every matrix, so the
    rank of the leading k columns is ``piv[:, :k].sum(1)``.
    """
    A = np.array(arrs, dtype=np.int64, copy=True)
    P, R, C = A.shape
    used = np.zeros((P, R), dtype=bool)
    piv = np.zeros((P, C), dtype=bool)
    for c in range(C):
        cand = (A[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.flatnonzero(has)
        pr = cand[sel].argmax(axis=1)
        prow = A[sel, pr, :]
        prow = F.vmul(prow, F.vinv(prow[:, c])[:, None])
        A[sel, pr, :] = prow
        used[sel, pr] = True
        piv[sel, c] = True
        # clear column c from the rows that are still free
        sub = A[sel]
        fac = sub[:, :, c] * (~used[sel])
        fac[np.arange(sel.size), pr] = 0
        if fac.any():
            A[sel] = F.vsub(sub, F.vmul(fac[:, :, None], prow[:, None, :]))
    return piv


def batch_rank(F: GF, arrs: np.ndarray) -> np.ndarray:
    return batch_pivots(F, arrs).sum(axis=1)
