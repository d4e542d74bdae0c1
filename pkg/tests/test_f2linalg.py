import itertools

import pytest
from hypothesis import given, settings, strategies as st

from turyn.f2linalg import (
    DimensionError,
    F2Matrix,
    F2Vector,
    RowTable,
    Subspace,
    complement_basis,
    inverse,
    inverse_rows,
    kernel,
    kernel_rows,
    matmul_rows,
    rank,
    rank_rows,
    rref,
    solve,
    solve_rows,
    span_iter,
    subspace_intersect,
    subspace_sum,
    transpose_rows,
    vecmat,
)


def naive_rank(rows, ncols):
    """Rank by counting the span size."""
    span = {0}
    for r in rows:
        span |= {x ^ r for x in span}
    return len(span).bit_length() - 1


@st.composite
def matrices(draw, max_rows=10, max_cols=10):
    ncols = draw(st.integers(1, max_cols))
    nrows = draw(st.integers(1, max_rows))
    rows = draw(st.lists(st.integers(0, (1 << ncols) - 1), min_size=nrows, max_size=nrows))
    return rows, ncols


def test_vector_strings_and_ops():
    v = F2Vector.from_str("1100")
    w = F2Vector.from_str("0110")
    assert str(v + w) == "1010"
    assert v.dot(w) == 1
    assert v.weight == 2
    assert v[0] == 1 and v[3] == 0
    assert str(v.set(3, 1)) == "1101"
    with pytest.raises(DimensionError):
        v + F2Vector.from_str("11")
    with pytest.raises(ValueError):
        F2Vector.from_str("12")


def test_matrix_ops():
    M = F2Matrix.from_strings(["110", "011"])
    assert M.rows == 2 and M.cols == 3
    assert str(M.vecmul(F2Vector.from_str("11"))) == "101"
    assert M.transpose().lines() == ["10", "11", "01"]
    I3 = F2Matrix.identity(3)
    assert (M @ I3) == M
    assert rank(M) == 2


def test_rref_pivots_lowest_first():
    M = F2Matrix.from_strings(["011", "110", "101"])
    R = rref(M)
    assert R.rank == 2
    assert R.pivots == (0, 1)
    for i in range(M.rows):
        # T . M = R
        assert vecmat(R.T.data[i], M.data) == R.R.data[i]


def test_solve_prefers_pivot_rows():
    rows = [0b001, 0b010, 0b011]
    x = solve_rows(rows, 0b011)
    assert x == 0b011
    assert solve_rows(rows, 0b100) is None
    M = F2Matrix(3, tuple(rows))
    assert solve(M, F2Vector(3, 0b100)) is None


def test_inverse_and_singular():
    M = F2Matrix.from_strings(["110", "010", "001"])
    assert M @ inverse(M) == F2Matrix.identity(3)
    with pytest.raises(ValueError):
        inverse_rows([0b11, 0b11])


def test_kernel_example():
    M = F2Matrix.from_strings(["11", "11", "01"])
    K = kernel(M)
    assert K.dim == 1
    assert K.basis == (0b011,)


def test_span_iter_gray_code_covers_span():
    basis = [0b0011, 0b0101, 0b1000]
    assert sorted(span_iter(basis)) == sorted({vecmat(c, basis) for c in range(8)})


def test_subspace_membership_and_coordinates():
    U = Subspace.span(4, [0b0011, 0b0110])
    assert 0b0101 in U and 0b1000 not in U
    c = U.coordinates(0b0101)
    assert vecmat(c, U.basis) == 0b0101
    assert U.coordinates(0b1000) is None
    with pytest.raises(ValueError):
        Subspace(4, (0b0011, 0b0001))


def test_row_table_matches_vecmat():
    rows = [0x1234, 0xFF00, 0x0F0F, 0x8001] * 4
    t = RowTable(rows)
    for v in (0, 1, 0xFFFF, 0xA5A5, 0x1357):
        assert t.apply(v) == vecmat(v, rows)


@settings(max_examples=60)
@given(matrices())
def test_rank_matches_span_count(mat):
    rows, ncols = mat
    assert rank_rows(rows) == naive_rank(rows, ncols)


@settings(max_examples=60)
@given(matrices())
def test_rank_nullity(mat):
    rows, ncols = mat
    ker = kernel_rows(rows, ncols)
    assert len(ker) + rank_rows(rows) == len(rows)
    assert all(vecmat(x, rows) == 0 for x in ker)
    assert rank_rows(ker) == len(ker)


@settings(max_examples=60)
@given(matrices(), st.integers(0, 2**10 - 1))
def test_solve_round_trip(mat, coeffs):
    rows, ncols = mat
    coeffs &= (1 << len(rows)) - 1
    b = vecmat(coeffs, rows)
    x = solve_rows(rows, b)
    assert x is not None and vecmat(x, rows) == b


@settings(max_examples=60)
@given(st.integers(1, 10), st.data())
def test_inverse_round_trip(n, data):
    rows = data.draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    ident = tuple(1 << i for i in range(n))
    if rank_rows(rows) < n:
        with pytest.raises(ValueError):
            inverse_rows(rows)
    else:
        inv = inverse_rows(rows)
        assert matmul_rows(rows, inv) == ident
        assert matmul_rows(inv, rows) == ident


@settings(max_examples=60)
@given(matrices(max_cols=8))
def test_transpose_involution(mat):
    rows, ncols = mat
    t = transpose_rows(rows, ncols)
    assert transpose_rows(t, len(rows)) == tuple(rows)


@settings(max_examples=60)
@given(matrices(max_cols=8), matrices(max_cols=8))
def test_sum_intersection_dimensions(a, b):
    n = max(a[1], b[1])
    U = Subspace.span(n, a[0])
    V = Subspace.span(n, b[0])
    W = subspace_intersect(U, V)
    assert (subspace_sum(U, V).dim + W.dim) == U.dim + V.dim
    assert all(x in U and x in V for x in W.elements())
    brute = {x for x in U.elements()} & {x for x in V.elements()}
    assert len(brute) == len(W)


@settings(max_examples=40)
@given(matrices(max_cols=8))
def test_complement_basis_extends(mat):
    rows, n = mat
    U = Subspace.span(n, rows[: len(rows) // 2])
    units = [1 << i for i in range(n)]
    comp = complement_basis(U.basis, units)
    assert U.dim + len(comp) == n
    assert rank_rows(list(U.basis) + comp) == n


def test_matmul_associates_with_vecmat():
    a = [0b101, 0b011, 0b110]
    b = [0b100, 0b111, 0b001]
    for v in range(8):
        assert vecmat(v, matmul_rows(a, b)) == vecmat(vecmat(v, a), b)
    for rows in itertools.product(range(4), repeat=2):
        assert rank_rows(rows) == naive_rank(rows, 2)
