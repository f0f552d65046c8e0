from hypothesis import given, settings
from hypothesis import strategies as st

from torcomb.linalg import (
    GF2Matrix,
    gf2_nullspace,
    gf2_rank,
    gf2_rank_words,
    int_det,
    int_rank,
    integer_kernel,
    is_part_of_basis,
    mat_mul,
    pack_bits,
    smith_normal_form,
    sparse_rank,
    transpose,
    unpack_bits,
)
from torcomb.polynomials import exact_div, poly_divmod, poly_mul, poly_pow, poly_sub

from oracles import gf2_rank_via_rationals, leibniz_det, rational_rank


def matrices(max_rows=5, max_cols=5, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def square(max_n=5, lo=-4, hi=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def test_det_small_values():
    assert int_det([[2, 1], [1, 1]]) == 1
    assert int_det([[1, 2, 3], [4, 5, 6], [7, 8, 10]]) == -3
    assert int_det([[0, 1], [1, 0]]) == -1


@given(square())
def test_det_matches_leibniz(M):
    assert int_det(M) == leibniz_det(M)


@given(matrices())
def test_rank_matches_fraction_elimination(M):
    assert int_rank(M) == rational_rank(M)
    rows = [{j: v for j, v in enumerate(r) if v} for r in M]
    assert sparse_rank(rows) == rational_rank(M)


@given(matrices(6, 7, 0, 1))
def test_gf2_rank(M):
    expected = gf2_rank_via_rationals(M)
    assert gf2_rank(GF2Matrix.from_rows(M)) == expected
    assert gf2_rank_words([pack_bits(r) for r in M]) == expected


@given(st.lists(st.integers(0, 1), min_size=1, max_size=20))
def test_pack_roundtrip(bits):
    assert unpack_bits(pack_bits(bits), len(bits)) == bits


@given(matrices(5, 6, 0, 1))
def test_gf2_nullspace_is_kernel_of_full_dimension(M):
    width = len(M[0])
    words = [pack_bits(r) for r in M]
    null = gf2_nullspace(words, width)
    for z in null:
        for w in words:
            assert bin(z & w).count("1") % 2 == 0
    assert gf2_rank_words(null) == len(null) == width - gf2_rank_words(words)


@settings(max_examples=60)
@given(matrices(4, 4, -6, 6))
def test_smith_form_invariants(M):
    sf = smith_normal_form(M, transforms=True)
    d = sf.diagonal
    assert sf.rank == rational_rank(M)
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz) and d[: len(nz)] == nz
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    # U M V is diagonal with the invariant factors
    D = mat_mul(mat_mul(sf.U, M), sf.V)
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            assert v == (d[i] if i == j and i < len(d) else 0)
    assert abs(int_det(sf.U)) == 1 and abs(int_det(sf.V)) == 1
    n = len(M[0])
    I = mat_mul(sf.V, sf.V_inv)
    assert I == [[int(i == j) for j in range(n)] for i in range(n)]


def test_smith_known():
    assert smith_normal_form([[2, 0], [0, 3]]).diagonal == [1, 6]
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).diagonal == [2, 6, 12]


@given(matrices(3, 5, -3, 3))
def test_integer_kernel(M):
    ker = integer_kernel(M)
    n = len(M[0])
    cols = transpose(ker) if ker and ker[0] else []
    assert len(cols) == n - rational_rank(M)
    for c in cols:
        assert all(sum(a * b for a, b in zip(row, c)) == 0 for row in M)


def test_is_part_of_basis():
    # columns are the vectors
    assert is_part_of_basis(transpose([[1, 0, 0], [0, 1, 0]]))
    assert is_part_of_basis(transpose([[1, 1, 0], [0, 1, 1]]))
    assert not is_part_of_basis(transpose([[2, 0, 0], [0, 1, 0]]))
    assert not is_part_of_basis(transpose([[1, 1, 0], [1, 1, 0]]))
    assert not is_part_of_basis([[1, 0, 0], [0, 1, 0]])


def test_odd_01_dets_are_units():
    from itertools import product

    for bits in product((0, 1), repeat=9):
        M = [list(bits[0:3]), list(bits[3:6]), list(bits[6:9])]
        if leibniz_det(M) % 2:
            assert abs(int_det(M)) == 1


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=5), st.lists(st.integers(-5, 5), max_size=4))
def test_polynomial_division(q, r0):
    b = [1, 0, -1]  # 1 - t^2, leading coefficient -1
    r = r0[:2]
    a = poly_sub(poly_mul(q, b), [-x for x in r])
    qq, rr = poly_divmod(a, b)
    assert poly_sub(a, poly_mul(qq, b)) == rr or (not rr and not any(poly_sub(a, poly_mul(qq, b))))
    assert exact_div(poly_mul(q, b), b) == poly_sub(q, [])


def test_poly_pow():
    assert poly_pow([1, -1], 3) == [1, -3, 3, -1]
