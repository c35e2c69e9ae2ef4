import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from fakeplanes.exactalg import (
    F2Matrix,
    IntMatrix,
    MatrixError,
    determinant,
    f2_is_isomorphism,
    f2_rank,
    f2_solve,
    integer_kernel,
    is_negative_definite,
    is_unimodular,
    rational_inverse,
    smith_normal_form,
    solve_integer_linear,
)


def matrices(max_dim=6, lo=-9, hi=9):
    return st.integers(1, max_dim).flatmap(
        lambda n: st.integers(1, max_dim).flatmap(
            lambda m: st.lists(st.lists(st.integers(lo, hi), min_size=m, max_size=m),
                               min_size=n, max_size=n)))


def sympy_invariants(rows):
    d = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    return sorted(abs(d[i, i]) for i in range(min(d.shape)))


@settings(max_examples=250)
@given(matrices())
def test_snf_matches_sympy_oracle(rows):
    m = IntMatrix(rows)
    res = smith_normal_form(m)
    assert sorted(res.diag) == sympy_invariants(rows)


@settings(max_examples=100)
@given(matrices())
def test_snf_transforms_are_unimodular_and_diagonalise(rows):
    m = IntMatrix(rows)
    res = smith_normal_form(m)
    n, k = m.shape
    prod = res.left @ m @ res.right
    for i in range(n):
        for j in range(k):
            want = res.diag[i] if i == j and i < len(res.diag) else 0
            assert prod[i, j] == want
    assert abs(determinant(res.left)) == 1 and abs(determinant(res.right)) == 1
    nz = [d for d in res.diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_sympy(rows):
    assert determinant(rows) == sympy.Matrix(rows).det()


def test_determinant_rejects_rectangular():
    with pytest.raises(MatrixError):
        determinant([[1, 2]])


def test_unimodular_examples():
    assert is_unimodular([[4, 1], [-1, 0]])
    assert not is_unimodular([[4, 1], [-1, -1]])


def _principal_minor_sums(rows):
    # e_k = sum of principal k x k minors, each by the Leibniz formula
    n = len(rows)
    out = []
    for k in range(1, n + 1):
        total = 0
        for idx in itertools.combinations(range(n), k):
            for perm in itertools.permutations(range(k)):
                sign = (-1) ** sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
                term = sign
                for i, p in enumerate(perm):
                    term *= rows[idx[i]][idx[p]]
                total += term
        out.append(total)
    return out


def charpoly_negative_definite(rows) -> bool:
    # det(tI - A) = t^n - e1 t^(n-1) + e2 t^(n-2) - ...; a real-rooted polynomial has
    # only negative roots iff every coefficient is positive (Descartes)
    return all((-1) ** k * e > 0 for k, e in enumerate(_principal_minor_sums(rows), start=1))


def test_charpoly_oracle_agrees_with_sympy_on_samples():
    samples = [[[-2, 1], [1, -2]], [[-1, 1], [1, -1]], [[-2, 1, 0], [1, -2, 1], [0, 1, -2]],
               [[1, 0], [0, -1]], [[-3, 1, 1], [1, -3, 1], [1, 1, -3]]]
    for rows in samples:
        coeffs = sympy.Matrix(rows).charpoly().all_coeffs()
        sympy_says = all(c > 0 for c in coeffs)
        assert charpoly_negative_definite(rows) == sympy_says


def _symmetric(n, values):
    it = iter(values)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = next(it)
    return rows


@pytest.mark.parametrize("n", [1, 2, 3])
def test_negative_definite_against_charpoly_exhaustive(n):
    entries = range(-3, 2)
    count = n * (n + 1) // 2
    for values in itertools.product(entries, repeat=count):
        rows = _symmetric(n, values)
        assert is_negative_definite(rows) == charpoly_negative_definite(rows), rows


def test_negative_definite_needs_symmetry():
    with pytest.raises(MatrixError):
        is_negative_definite([[-1, 1], [0, -1]])


def _brute_f2_rank(rows):
    n = len(rows[0]) if rows else 0
    vecs = [tuple(r) for r in rows]
    span = {tuple([0] * n)}
    for v in vecs:
        span |= {tuple((a + b) % 2 for a, b in zip(v, s)) for s in span}
    return len(span).bit_length() - 1


@settings(max_examples=100)
@given(matrices(5, 0, 1))
def test_f2_rank_by_span_enumeration(rows):
    assert f2_rank(F2Matrix(rows)) == _brute_f2_rank(rows)


@settings(max_examples=80)
@given(matrices(5, 0, 1), st.lists(st.integers(0, 1), min_size=5, max_size=5))
def test_f2_solve(rows, b):
    m = F2Matrix(rows)
    b = b[:m.nrows]
    x = f2_solve(m, b)
    solvable = any(
        all(sum(r[j] * y[j] for j in range(m.ncols)) % 2 == b[i] for i, r in enumerate(rows))
        for y in itertools.product((0, 1), repeat=m.ncols))
    assert (x is not None) == solvable
    if x is not None:
        assert all(sum(r[j] * x[j] for j in range(m.ncols)) % 2 == b[i] for i, r in enumerate(rows))


def test_f2_isomorphism():
    assert f2_is_isomorphism(IntMatrix([[1, 1], [0, 1]]))
    assert not f2_is_isomorphism(IntMatrix([[2]]))
    assert not f2_is_isomorphism(F2Matrix([[1, 0]]))


@settings(max_examples=80)
@given(matrices(4, -5, 5), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_integer_solve_roundtrip(rows, x):
    m = IntMatrix(rows)
    x = x[:m.ncols]
    b = m.apply(x)
    y = solve_integer_linear(m, b)
    assert y is not None and m.apply(y) == b


def test_integer_solve_detects_divisibility():
    assert solve_integer_linear([[2, 0], [0, 3]], [1, 3]) is None
    assert solve_integer_linear([[2, 0], [0, 3]], [4, 3]) == (2, 1)


@settings(max_examples=60)
@given(matrices(4, -4, 4))
def test_integer_kernel(rows):
    m = IntMatrix(rows)
    ker = integer_kernel(m)
    assert len(ker) == m.ncols - sympy.Matrix(rows).rank()
    for v in ker:
        assert all(c == 0 for c in m.apply(v))


def test_rational_inverse():
    inv = rational_inverse([[2, 1], [1, 1]])
    assert inv == [[Fraction(1), Fraction(-1)], [Fraction(-1), Fraction(2)]]
    with pytest.raises(MatrixError):
        rational_inverse([[1, 2], [2, 4]])
