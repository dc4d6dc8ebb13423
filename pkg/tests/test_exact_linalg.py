from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glaprolong import exact_linalg as xl
from oracles import naive_rank, naive_rref

small = st.integers(-6, 6)


def matrices(max_rows=6, max_cols=7):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_qarray_refuses_floats():
    with pytest.raises(TypeError):
        xl.qarray([0.5])


def test_fmt_parse_roundtrip():
    for x in (Fraction(3, 7), Fraction(-5), Fraction(0)):
        assert xl.parse(xl.fmt(x)) == x
    assert xl.fmt(Fraction(4, 2)) == "2"


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_textbook_elimination(rows):
    assert xl.rank(xl.as_matrix(rows)) == naive_rank(rows)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_matches_textbook_elimination(rows):
    r, piv = xl.rref(xl.as_matrix(rows))
    ref, ref_piv = naive_rref(rows)
    assert list(piv) == ref_piv
    assert [[Fraction(x) for x in row] for row in r[: len(piv)]] == ref


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_a_basis_of_the_null_space(rows):
    m = xl.as_matrix(rows)
    ker = xl.kernel(m)
    assert len(ker) == m.shape[1] - naive_rank(rows)
    for v in ker:
        assert xl.is_zero(m.dot(v))
    if ker:
        assert naive_rank([list(v) for v in ker]) == len(ker)


@settings(max_examples=40, deadline=None)
@given(matrices())
def test_kernel_vectors_agree_with_rref_null_space(rows):
    # every kernel vector is determined by its free coordinates through the reduced rows
    ref, piv = naive_rref(rows)
    for v in xl.kernel(xl.as_matrix(rows)):
        for row, p in zip(ref, piv):
            assert v[p] == -sum(row[j] * v[j] for j in range(len(v)) if j != p)


def test_integer_kernel_is_primitive():
    for v in xl.integer_kernel(xl.as_matrix([[2, 4, 6], [1, 1, 1]])):
        assert all(isinstance(x, int) for x in v)
        assert np.gcd.reduce([abs(int(x)) for x in v]) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse_and_solve(rows):
    m = xl.as_matrix(rows)
    if naive_rank(rows) < len(rows):
        with pytest.raises(ZeroDivisionError):
            xl.inverse(m)
        return
    inv = xl.inverse(m)
    assert xl.is_zero(m.dot(inv) - xl.identity(len(rows)))
    b = xl.vec(range(len(rows)))
    x = xl.solve(m, b)
    assert xl.is_zero(m.dot(x) - b)


def test_solve_reports_inconsistency():
    assert xl.solve(xl.as_matrix([[1, 1], [2, 2]]), xl.vec([1, 3])) is None


def test_left_inverse_of_tall_matrix():
    a = xl.as_matrix([[1, 0], [2, 1], [0, 3], [5, 5]])
    assert xl.is_zero(xl.left_inverse(a).dot(a) - xl.identity(2))


@settings(max_examples=40, deadline=None)
@given(matrices(5, 5), st.integers(1, 5))
def test_matmul_matches_numpy_object_product(rows, k):
    a = xl.as_matrix(rows)
    b = xl.as_matrix([[Fraction(i - j, 3) for j in range(k)] for i in range(a.shape[1])])
    assert xl.is_zero(xl.matmul(a, b) - a.dot(b))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_signature_is_congruence_invariant(rows):
    a = xl.as_matrix(rows)
    s = a + a.T
    p, q, z = xl.signature(s)
    assert p + q + z == s.shape[0]
    assert p + q == naive_rank([list(r) for r in s])
    t = xl.identity(s.shape[0])
    t[0, -1] += 2
    assert xl.signature(t.dot(s).dot(t.T)) == (p, q, z)


def test_signature_of_diagonal():
    assert xl.signature(xl.as_matrix([[1, 0, 0], [0, -2, 0], [0, 0, 0]])) == (1, 1, 1)


def test_block_diag_and_span_rank():
    b = xl.block_diag(xl.identity(2), xl.as_matrix([[3]]))
    assert b.shape == (3, 3) and xl.rank(b) == 3
    assert xl.span_rank([xl.vec([1, 2]), xl.vec([2, 4])], 2) == 1
