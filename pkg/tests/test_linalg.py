from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import sympy_rank, to_sympy
from panache.linalg import (
    Matrix,
    bracket,
    coordinates_in,
    format_scalar,
    is_nilpotent,
    nilpotent_exp,
    nilpotent_log,
    nullspace,
    parse_scalar,
    rank,
    rref,
    solve_affine,
    span_basis,
    span_equal,
    span_intersection,
)

small = st.integers(-3, 3)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    ).map(Matrix)


def test_scalar_round_trip():
    assert parse_scalar("-3/6") == Fraction(-1, 2)
    assert format_scalar(Fraction(4, 2)) == "2"
    assert format_scalar(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(ValueError):
        parse_scalar("0.5")


def test_identity_and_inverse():
    m = Matrix([[2, 1], [1, 1]])
    assert m @ m.inverse() == Matrix.identity(2)
    assert m.det() == 1
    with pytest.raises(ZeroDivisionError):
        Matrix([[1, 2], [2, 4]]).inverse()


def test_slicing_with_lists():
    m = Matrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert m[[0, 2], :] == Matrix([[1, 2, 3], [7, 8, 9]])
    assert m[1:, 1:] == Matrix([[5, 6], [8, 9]])


@given(matrices())
def test_rank_matches_sympy(m):
    assert rank(m) == sympy_rank(m)


@given(matrices())
def test_nullspace_is_kernel_of_right_size(m):
    ker = nullspace(m)
    assert len(ker) == m.cols - sympy_rank(m)
    for v in ker:
        assert all(x == 0 for x in m.apply(v))


@given(matrices())
def test_rref_agrees_with_sympy(m):
    R, pivots = rref(m)
    sR, spiv = to_sympy(m).rref()
    assert tuple(pivots) == tuple(spiv)
    assert to_sympy(R) == sR


@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_affine_particular_and_kernel(m, raw):
    b = m.apply(raw[:m.cols] + [0] * (m.cols - len(raw[:m.cols])))
    sol = solve_affine(m, b)
    assert sol is not None
    x, ker = sol
    assert tuple(m.apply(x)) == tuple(b)
    assert len(ker) == m.cols - rank(m)


def test_solve_affine_inconsistent():
    assert solve_affine(Matrix([[1, 1], [1, 1]]), [1, 2]) is None


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=4))
def test_span_intersection_dimension(U, V):
    bu, bv = span_basis(U), span_basis(V)
    inter = span_intersection(U, V)
    joint = span_basis(U + V)
    assert len(inter) == len(bu) + len(bv) - len(joint)
    for v in inter:
        assert coordinates_in(v, bu) is not None and coordinates_in(v, bv) is not None


def test_span_equal_ignores_order_and_scale():
    assert span_equal([(1, 0, 0), (0, 1, 0)], [(0, 2, 0), (1, 1, 0)])
    assert not span_equal([(1, 0, 0)], [(0, 1, 0)])


@given(st.lists(small, min_size=6, max_size=6))
def test_log_exp_inverse_on_strictly_upper(vals):
    N = Matrix([[0, vals[0], vals[1], vals[2]],
                [0, 0, vals[3], vals[4]],
                [0, 0, 0, vals[5]],
                [0, 0, 0, 0]])
    assert is_nilpotent(N)
    assert nilpotent_log(nilpotent_exp(N)) == N
    U = Matrix.identity(4) + N
    assert nilpotent_exp(nilpotent_log(U)) == U


def test_bracket_of_elementary():
    E = lambda i, j: Matrix.elementary(3, 3, i, j)
    assert bracket(E(0, 1), E(1, 2)) == E(0, 2)
    assert not is_nilpotent(Matrix.identity(2))
