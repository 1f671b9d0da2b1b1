import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matroidnet.field import (GF, FieldError, Matrix, batch_rank, field, mat_inverse, mat_rref,
                              matmul, nullspace, rank, solve_columns, span_member)
from matroidnet.network import transfer_matrix

from conftest import mat

FIELDS = ["gf2", "gf3", "gf4", "gf8", "gf16", "custom:5,1,0", "custom:3,2,10"]


def test_addition_examples():
    F8, F3 = field("gf8"), field("gf3")
    assert F8.add(3, 5) == 6
    assert all(F8.add(a, a) == 0 for a in F8.elements())
    assert F3.add(2, 2) == 1


def test_multiplication_examples():
    assert field("gf8").mul(2, 4) == 3
    assert field("gf16").mul(2, 8) == 3
    for name in FIELDS:
        F = field(name)
        assert all(F.mul(1, a) == a for a in F.elements())


def test_inverse_examples():
    assert field("gf8").inv(2) == 5
    assert field("gf3").inv(2) == 2
    for name in FIELDS:
        assert field(name).inv(1) == 1
    with pytest.raises(ZeroDivisionError):
        field("gf8").inv(0)


def test_default_moduli_and_codes():
    assert field("gf4").modulus_code == 7
    assert field("gf8").modulus_code == 11
    assert field("gf16").modulus_code == 19
    assert field("gf3").modulus_code == 0
    assert GF.from_code(2, 3, 11) == field("gf8")


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        field("custom:2,2,5")   # x^2 + 1 = (x + 1)^2


@pytest.mark.parametrize("name", FIELDS)
def test_field_axioms_exhaustive(name):
    F = field(name)
    els = list(F.elements())
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in els:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            assert F.sub(F.add(a, b), b) == a
            for c in els[:4]:
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("name", FIELDS)
def test_vector_ops_match_scalar(name):
    F = field(name)
    els = np.array(list(F.elements()))
    A, B = np.meshgrid(els, els)
    assert np.array_equal(F.vadd(A, B), np.vectorize(F.add)(A, B))
    assert np.array_equal(F.vmul(A, B), np.vectorize(F.mul)(A, B))
    assert np.array_equal(F.vinv(els[1:]), np.array([F.inv(int(a)) for a in els[1:]]))


def test_rref_examples():
    F = field("gf8")
    R, r, piv = mat_rref(Matrix.identity(F, 4))
    assert r == 4 and list(piv) == [0, 1, 2, 3]
    assert np.array_equal(R.a, np.eye(4, dtype=np.int64))
    _, r, piv = mat_rref(mat([[1, 0, 0, 1], [0, 1, 0, 1]]))
    assert r == 2 and list(piv) == [0, 1]
    _, r, piv = mat_rref(Matrix.zeros(F, 3, 3))
    assert r == 0 and list(piv) == []


def test_span_member_examples():
    A = mat([[1, 0, 0, 1], [0, 1, 0, 1]])
    c = span_member(A.take_cols([0, 1]), [1, 1])
    assert list(c) == [1, 1]
    assert list(span_member(A, [0, 0])) == [0, 0, 0, 0]
    FS = mat([[1, 2], [4, 1], [3, 6]], "gf8")
    assert list(span_member(FS, [0, 1, 0])) == [1, 5]
    assert span_member(FS, [1, 0, 0]) is None


def test_transfer_matrix_examples():
    F = field("gf2")
    assert np.array_equal(transfer_matrix(Matrix.zeros(F, 3, 3)).a, np.eye(3, dtype=np.int64))
    assert np.array_equal(transfer_matrix(mat([[0, 1], [0, 0]])).a, [[1, 1], [0, 1]])
    F8 = field("gf8")
    rng = np.random.default_rng(1)
    K = np.triu(rng.integers(0, 8, (6, 6)), 1)
    T = transfer_matrix(Matrix(F8, K)).a
    acc, P = np.eye(6, dtype=np.int64), np.eye(6, dtype=np.int64)
    for _ in range(5):
        P = matmul(F8, P, K)
        acc = F8.vadd(acc, P)
    assert np.array_equal(T, acc)


def test_text_round_trip():
    M = mat([[1, 2, 3], [4, 5, 6]], "gf8")
    text = M.to_text()
    assert text.splitlines()[0] == "2 3 2 3 11"
    assert Matrix.from_text(text) == M
    P = mat([[1, 2]], "gf3")
    assert P.to_text().splitlines()[0] == "1 2 3 1 0"


@st.composite
def matrices(draw, name=None):
    name = name or draw(st.sampled_from(FIELDS))
    F = field(name)
    r = draw(st.integers(1, 5))
    c = draw(st.integers(1, 6))
    vals = draw(st.lists(st.integers(0, F.order - 1), min_size=r * c, max_size=r * c))
    return Matrix(F, np.array(vals, dtype=np.int64).reshape(r, c))


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(M):
    N = nullspace(M)
    assert rank(M) + N.cols == M.cols
    assert not matmul(M.F, M.a, N.a).any()
    assert rank(M) == rank(M.T())


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_solve_columns_consistent(M):
    F = M.F
    X0 = np.arange(M.cols * 2).reshape(M.cols, 2) % F.order
    V = Matrix(F, matmul(F, M.a, X0))
    X = solve_columns(M, V)
    assert X is not None
    assert np.array_equal(matmul(F, M.a, X.a), V.a)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_batch_rank_matches_rank(M):
    F = M.F
    stack = np.stack([M.a, np.zeros_like(M.a), M.a[::-1]])
    assert list(batch_rank(F, stack)) == [rank(M), 0, rank(M)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 5), st.integers(0, 10 ** 6))
def test_inverse_of_random_invertible(name, n, seed):
    F = field(name)
    rng = np.random.default_rng(seed)
    A = Matrix(F, rng.integers(0, F.order, (n, n)))
    if rank(A) < n:
        return
    Ai = mat_inverse(A)
    assert np.array_equal(matmul(F, A.a, Ai.a), np.eye(n, dtype=np.int64))
