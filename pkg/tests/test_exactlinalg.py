from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from decomap.exactlinalg import (
    GF2,
    QQ,
    Matrix,
    NotInSpan,
    cokernel_basis,
    invert,
    kernel_basis,
    rank,
    row_reduce,
    solve_in_span,
)


def test_row_reduce_identity():
    m = Matrix.identity(2, GF2)
    red, change, piv = row_reduce(m)
    assert red == m and piv == [0, 1]
    assert change @ m == red


def test_row_reduce_rank_one_gf2():
    m = Matrix.from_rows([[1, 1], [1, 1]], GF2)
    red, change, piv = row_reduce(m)
    assert red == Matrix.from_rows([[1, 1], [0, 0]], GF2)
    assert piv == [0]
    assert change @ m == red


def test_row_reduce_proportional_rows_q():
    m = Matrix.from_rows([[2, 4], [1, 2]], QQ)
    red, change, piv = row_reduce(m)
    assert red == Matrix.from_rows([[1, 2], [0, 0]], QQ)
    assert piv == [0]
    assert change @ m == red


def test_rank_basics():
    assert rank(Matrix.zeros(3, 3, GF2)) == 0
    assert rank(Matrix.identity(4, QQ)) == 4
    assert rank(Matrix.from_rows([[1, 1], [1, 1]], GF2)) == 1


def test_kernel_basics():
    assert kernel_basis(Matrix.identity(3, GF2)).cols == 0
    z = kernel_basis(Matrix.zeros(0, 2, QQ))
    assert z.cols == 2
    k = kernel_basis(Matrix.from_rows([[1, 1]], GF2))
    assert k == Matrix.from_rows([[1], [1]], GF2)


def test_solve_identity_returns_target():
    t = Matrix.column([3, Fraction(1, 2)], QQ)
    assert solve_in_span(Matrix.identity(2, QQ), t) == t


def test_solve_not_in_span():
    with pytest.raises(NotInSpan):
        solve_in_span(
            Matrix.from_rows([[1], [1]], QQ), Matrix.column([1, 0], QQ)
        )


def test_solve_gf2_two_generators():
    # generators are the columns (1,0) and (1,1); target (0,1) needs both
    gens = Matrix.from_rows([[1, 1], [0, 1]], GF2)
    target = Matrix.column([0, 1], GF2)
    coeffs = solve_in_span(gens, target)
    assert coeffs == Matrix.column([1, 1], GF2)
    assert gens @ coeffs == target


def test_cokernel_full_subspace():
    reps, proj = cokernel_basis(Matrix.identity(3, GF2), 3)
    assert reps.cols == 0 and proj.rows == 0


def test_cokernel_zero_subspace():
    reps, proj = cokernel_basis(Matrix.zeros(3, 0, QQ), 3)
    assert reps == Matrix.identity(3, QQ)
    assert proj == Matrix.identity(3, QQ)


def test_cokernel_diagonal_line_gf2():
    sub = Matrix.from_rows([[1], [1]], GF2)
    reps, proj = cokernel_basis(sub, 2)
    assert reps.cols == 1
    assert (proj @ sub).is_zero()
    assert proj @ reps == Matrix.identity(1, GF2)


def test_invert():
    m = Matrix.from_rows([[1, 1], [0, 1]], GF2)
    assert m @ invert(m) == Matrix.identity(2, GF2)
    with pytest.raises(NotInSpan):
        invert(Matrix.zeros(2, 2, QQ))


entries = st.integers(min_value=-4, max_value=4)


@st.composite
def matrices(draw):
    field = draw(st.sampled_from([GF2, QQ]))
    m = draw(st.integers(min_value=0, max_value=7))
    n = draw(st.integers(min_value=0, max_value=7))
    rows = draw(
        st.lists(
            st.lists(entries, min_size=n, max_size=n), min_size=m, max_size=m
        )
    )
    if m == 0:
        return Matrix.zeros(0, n, field)
    return Matrix.from_rows(rows, field)


@given(matrices())
@settings(max_examples=120, deadline=None)
def test_rank_nullity(m):
    assert rank(m) + kernel_basis(m).cols == m.cols


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_row_reduce_idempotent_and_consistent(m):
    red, change, piv = row_reduce(m)
    assert change @ m == red
    assert row_reduce(red).reduced == red
    assert piv == sorted(piv)
    assert len(set(piv)) == len(piv)


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_kernel_columns_annihilated(m):
    k = kernel_basis(m)
    if m.rows and k.cols:
        assert (m @ k).is_zero()


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_cokernel_projection_rank(m):
    if m.rows == 0:
        return
    reps, proj = cokernel_basis(m, m.rows)
    assert rank(proj) == m.rows - rank(m)
    if m.cols:
        assert (proj @ m).is_zero()
    if reps.cols:
        assert proj @ reps == Matrix.identity(reps.cols, m.field)


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_solve_round_trip_on_column_space(m):
    if m.cols == 0 or m.rows == 0:
        return
    # any column of m is trivially in its span
    target = m.col(0)
    coeffs = solve_in_span(m, target)
    assert m @ coeffs == target
