import pytest
from hypothesis import given, settings, strategies as st

from matrix_equidist import FpMatrix, Residue, det, entrywise_dot, inverse, is_prime, mat_mul
from matrix_equidist.errors import DimensionMismatch, ModulusMismatch, NotPrime, Singular
from matrix_equidist.fp import as_matrix, check_prime

import brute

PRIMES = [2, 3, 5, 7, 11, 13]


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime(2**61 - 1)
    assert not is_prime(561)
    with pytest.raises(NotPrime):
        check_prime(9)


def test_residue_arithmetic():
    a = Residue(3, 7)
    assert a * a.inverse() == 1
    assert a + 5 == 1
    assert -a == 4
    with pytest.raises(ModulusMismatch):
        a + Residue(1, 5)
    with pytest.raises(Singular):
        Residue(0, 7).inverse()


def test_known_inverses():
    m = FpMatrix(((1, 2), (3, 4)), 5)
    assert m.inverse() == FpMatrix(((3, 1), (4, 2)), 5)
    assert m.det() == 3
    assert FpMatrix(((1, 1), (0, 1)), 5).inverse() == FpMatrix(((1, 4), (0, 1)), 5)


def test_singular_and_mismatch():
    with pytest.raises(Singular):
        FpMatrix(((1, 2), (2, 4)), 5).inverse()
    with pytest.raises(DimensionMismatch):
        FpMatrix(((1, 2),), 5)
    with pytest.raises(ModulusMismatch):
        FpMatrix.identity(2, 5) @ FpMatrix.identity(2, 7)
    with pytest.raises(DimensionMismatch):
        FpMatrix.identity(2, 5) @ FpMatrix.identity(3, 5)


def test_json_roundtrip():
    m = FpMatrix(((1, 2, 0), (3, 4, 1), (0, 0, 2)), 5)
    assert FpMatrix.from_json(m.to_json()) == m
    assert as_matrix([1, 2, 3, 4], 2, 5) == FpMatrix(((1, 2), (3, 4)), 5)


def _mat(n, p):
    return st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n).map(
        lambda xs: FpMatrix.from_flat(xs, n, p))


@st.composite
def mat_pair(draw):
    p = draw(st.sampled_from(PRIMES))
    n = draw(st.integers(1, 3))
    return draw(_mat(n, p)), draw(_mat(n, p))


@settings(max_examples=200, deadline=None)
@given(mat_pair())
def test_det_multiplicative(ab):
    a, b = ab
    assert det(mat_mul(a, b)) == det(a) * det(b)
    assert int(det(a)) == brute.det([list(r) for r in a.entries], a.p)


@settings(max_examples=200, deadline=None)
@given(mat_pair())
def test_inverse_property(ab):
    a, _ = ab
    if det(a) == 0:
        with pytest.raises(Singular):
            inverse(a)
        return
    ident = FpMatrix.identity(a.n, a.p)
    assert a @ inverse(a) == ident
    assert inverse(a) @ a == ident
    assert [list(r) for r in inverse(a).entries] == brute.inverse([list(r) for r in a.entries], a.p)


@settings(max_examples=200, deadline=None)
@given(mat_pair(), st.integers(-20, 20))
def test_dot_bilinear(ab, c):
    u, x = ab
    y = FpMatrix.from_flat([(3 * v + 1) for v in x.flat], x.n, x.p)
    assert entrywise_dot(u, x + y) == entrywise_dot(u, x) + entrywise_dot(u, y)
    assert entrywise_dot(u.scale(c), x) == entrywise_dot(u, x) * c
    assert entrywise_dot(u, x) == entrywise_dot(x, u)
