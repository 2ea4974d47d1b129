import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matrix_equidist import FpMatrix
from matrix_equidist.charsum import (FreqVector, evaluate_counts, form_histograms, freq_to_complex,
                                     hyper_kloosterman, hyper_kloosterman_freq, k_gl, k_sl, kloosterman, s_freq)
from matrix_equidist.errors import DeskScaleExceeded, Singular

import brute

E11 = lambda p: FpMatrix.unit(0, 0, 2, p)  # noqa: E731


def test_k_sl_oracle():
    fv = k_sl(E11(3), E11(3))
    assert fv.counts.tolist() == [6, 9, 9]
    assert abs(fv.to_complex() - (-3)) < 1e-12


def test_classical_kloosterman_oracle():
    assert abs(kloosterman(1, 1, 5) - 0.3819660112501049) < 1e-9
    assert abs(hyper_kloosterman([1, 1], 5) - 0.3819660112501049) < 1e-9


def test_hyper_degenerate():
    assert hyper_kloosterman_freq([0, 0, 0], 7).counts[0] == 36
    assert abs(hyper_kloosterman([3], 7) - brute.e(3, 7)) < 1e-12
    with pytest.raises(DeskScaleExceeded):
        hyper_kloosterman_freq([1] * 6, 101)


def test_s_freq_small():
    fv = s_freq("gl", FpMatrix(((1,),), 5))
    assert fv.counts.tolist() == [0, 1, 1, 1, 1]
    assert abs(FreqVector([2, 1, 0, 0, 1], 5).to_complex() - (2 + 2 * math.cos(2 * math.pi / 5))) < 1e-12


def _brute_sum(kind, u, v, m, p):
    total = 0j
    for x in brute.members(kind, 2, p):
        z = brute.dot(u, x, p)
        if v is not None:
            y = brute.inverse(x, p)
            my = [[sum(m[i][k] * y[k][j] for k in range(2)) % p for j in range(2)] for i in range(2)]
            z += brute.dot(v, my, p)
        total += brute.e(z, p)
    return total


@st.composite
def uvm(draw):
    p = draw(st.sampled_from([3, 5]))
    ent = st.lists(st.integers(0, p - 1), min_size=4, max_size=4)
    u, v = draw(ent), draw(ent)
    m = draw(ent.filter(lambda xs: (xs[0] * xs[3] - xs[1] * xs[2]) % p))
    return p, u, v, m


def _rows(xs):
    return [xs[:2], xs[2:]]


@settings(max_examples=25, deadline=None)
@given(uvm())
def test_against_brute_force(args):
    p, u, v, m = args
    U, V, M = (FpMatrix.from_flat(x, 2, p) for x in (u, v, m))
    assert abs(k_gl(U, V, M).to_complex() - _brute_sum("gl", _rows(u), _rows(v), _rows(m), p)) < 1e-9
    ident = [[1, 0], [0, 1]]
    assert abs(k_sl(U, V).to_complex() - _brute_sum("sl", _rows(u), _rows(v), ident, p)) < 1e-9
    for kind in ("gl", "sl", "z", "m"):
        assert abs(s_freq(kind, U).to_complex() - _brute_sum(kind, _rows(u), None, ident, p)) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_exact_cancellation(p, u):
    u = [x % p for x in u]
    if not any(u):
        return
    U = FpMatrix.from_flat(u, 2, p)
    z, gl = s_freq("z", U), s_freq("gl", U)
    assert ((z.counts + gl.counts) == p**3).all()
    assert abs(z.to_complex() + gl.to_complex()) <= 1e-9 * p**4


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_weil(p):
    for b in range(1, p):
        assert abs(kloosterman(1, b, p)) <= 2 * math.sqrt(p) + 1e-9


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_deligne_n2(p):
    for a2 in range(1, p):
        assert abs(hyper_kloosterman([1, a2], p)) <= 2 * math.sqrt(p) + 1e-9


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 5, 7, 11]), st.data())
def test_character_change(p, data):
    counts = data.draw(st.lists(st.integers(0, 50), min_size=p, max_size=p))
    c = data.draw(st.integers(1, p - 1))
    fv = FreqVector(counts, p)
    # e_p(c .) permutes the histogram; -1 gives the complex conjugate
    assert fv.scaled(c).total == fv.total
    assert sorted(fv.scaled(c).counts.tolist()[1:]) == sorted(fv.counts.tolist()[1:])
    assert abs(fv.scaled(-1).to_complex() - fv.to_complex().conjugate()) < 1e-9


@pytest.mark.parametrize("p", [5, 7])
def test_character_change_on_group_sums(p):
    rng = np.random.default_rng(p)
    for _ in range(5):
        u = FpMatrix.from_flat(rng.integers(0, p, 4).tolist(), 2, p)
        v = FpMatrix.from_flat(rng.integers(0, p, 4).tolist(), 2, p)
        for c in range(1, p):
            # the sum taken with e_p(c .) is the sum for (cU, cV)
            assert k_gl(u, v).scaled(c) == k_gl(u.scale(c), v.scale(c))
            # X -> cX permutes GL_n, so S(GL_n, U) does not depend on the character
            assert abs(abs(s_freq("gl", u).scaled(c).to_complex()) - abs(s_freq("gl", u).to_complex())) < 1e-9


def test_evaluation_is_order_independent():
    rng = np.random.default_rng(1)
    parts = rng.integers(0, 1000, size=(8, 13))
    whole = parts.sum(axis=0)
    merged = FreqVector(np.zeros(13, dtype=np.int64), 13)
    for row in parts[::-1]:
        merged = merged + FreqVector(row, 13)
    assert freq_to_complex(merged) == complex(evaluate_counts(whole, 13))


def test_inverse_needs_group():
    with pytest.raises(Singular):
        form_histograms("z", 2, 3, [E11(3)], [E11(3)])
    with pytest.raises(Singular):
        k_gl(E11(3), E11(3), FpMatrix.zeros(2, 3))


def test_threads_do_not_change_histograms():
    us = np.arange(40).reshape(10, 4) % 7
    vs = (np.arange(40).reshape(10, 4) * 3) % 7
    a = form_histograms("gl", 2, 7, us, vs, threads=1)
    b = form_histograms("gl", 2, 7, us, vs, threads=6)
    assert np.array_equal(a, b)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([5, 7, 11]), st.lists(st.integers(1, 10), min_size=3, max_size=3), st.integers(1, 10))
def test_hyper_depends_on_product(p, a, c):
    a = [x % p or 1 for x in a]
    c = c % p or 1
    moved = [a[0] * c % p, a[1] * pow(c, -1, p) % p, a[2]]
    assert abs(hyper_kloosterman(a, p) - hyper_kloosterman(moved, p)) < 1e-9
