import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from matrix_equidist import FpMatrix
from matrix_equidist.charsum import k_gl, kloosterman
from matrix_equidist.discrepancy import (HVector, assemble_frequency, empirical_box_error, etk_bound,
                                         etk_report, exp_sum_over_image, default_H, r_of_h, split_frequency)
from matrix_equidist.errors import CombinatorialBlowup, DimensionMismatch, IndexOverflow
from matrix_equidist.region import Box


def test_r_of_h():
    assert r_of_h((0, 0, 0)) == 1
    assert r_of_h((1, -1, 1, -1)) == 1
    assert r_of_h((2, -3, 0)) == 6
    assert HVector((2, -3, 0)).r == 6
    with pytest.raises(IndexOverflow):
        r_of_h((2**40, 2**40))


def test_default_H():
    assert [default_H(2, p) for p in (11, 19, 31, 61)] == [1, 1, 1, 1]
    assert default_H(2, 2**18 - 1) == 1
    assert default_H(2, 2**18) == 2
    assert default_H(1, 3**6) == 3


def test_exp_sum_examples():
    val = exp_sum_over_image((1, 1), "gl", 1, 5, "g")
    assert abs(val - 0.0954915028125263) < 1e-9
    assert abs(val - kloosterman(1, 1, 5) / 4) < 1e-12
    assert abs(exp_sum_over_image((5, -10), "gl", 1, 5, "g") - 1) < 1e-12
    with pytest.raises(DimensionMismatch):
        exp_sum_over_image((1, 1, 1), "gl", 1, 5, "g")


def test_g_frequency_is_matrix_kloosterman():
    h = (1, 2, 0, 3, 4, 0, 1, 1)
    u, v = split_frequency(h, 2, 5, "g")
    assert u == FpMatrix(((1, 2), (4, 0)), 5)
    assert v == FpMatrix(((0, 3), (1, 1)), 5)
    assert assemble_frequency(u.flat, v.flat, 2) == h
    assert abs(exp_sum_over_image(h, "gl", 2, 5, "g") - k_gl(u, v).to_complex() / 480) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8), st.sampled_from(["g", "gt"]))
def test_symmetries(h, emb):
    c = FpMatrix(((1, 1), (1, 2)), 5)
    a = exp_sum_over_image(h, "gl", 2, 5, emb, c)
    assert abs(abs(exp_sum_over_image([-x for x in h], "gl", 2, 5, emb, c)) - abs(a)) < 1e-9
    assert abs(exp_sum_over_image([5 * x for x in h], "gl", 2, 5, emb, c) - 1) < 1e-12


def test_etk_bound_examples():
    assert etk_bound(1, 1, 1, lambda h: 1.0).bound == pytest.approx(4.5, abs=1e-12)
    rep = etk_bound(3, 2, 10, lambda h: 0.0)
    assert rep.bound == pytest.approx(1.5**2 * 2 / 4, abs=1e-15)
    assert rep.bound >= rep.floor - 1e-15
    with pytest.raises(CombinatorialBlowup):
        etk_bound(3, 8, 1, lambda h: 0.0)


@pytest.mark.parametrize("kind,emb,H,n,p", [("gl", "g", 1, 2, 3), ("gl", "h", 2, 2, 5), ("sl", "s", 2, 2, 5),
                                            ("gl", "gt", 1, 2, 3), ("sl", "g", 1, 2, 5), ("gl", "g", 3, 1, 7)])
def test_batched_matches_direct(kind, emb, H, n, p):
    c = FpMatrix.from_flat([1, 1, 0, 1][: n * n] if n == 2 else [2], n, p)
    fast = etk_report(kind, n, p, emb, H, c, keep=True)
    slow = etk_bound(H, fast.k, fast.N, lambda h: abs(exp_sum_over_image(h, kind, n, p, emb, c)), keep=True)
    assert fast.n_frequencies == slow.n_frequencies == (2 * H + 1) ** fast.k - 1
    assert set(fast.magnitudes) == set(slow.magnitudes)
    for h, m in slow.magnitudes.items():
        assert abs(fast.magnitudes[h] - m) < 1e-12
    assert math.isclose(fast.bound, slow.bound, rel_tol=1e-12)


def test_box_errors():
    full, empty = Box.cube(8), Box((0,) * 8, (0,) + (1,) * 7)
    half = Box.cube(8, Fraction(1, 2))
    errs = empirical_box_error("gl", 2, 3, "g", [full, empty, half])
    assert [e.error for e in errs] == [0, 0, Fraction(29, 768)]
    assert errs[2].count == 2 and errs[2].N == 48


def test_domination_small():
    boxes = [Box.cube(4, Fraction(1, 2)), Box((0, 0, 0, 0), (1, Fraction(1, 3), 1, Fraction(2, 3)))]
    for p in (5, 7):
        bound = etk_report("gl", 2, p, "h", 1).bound
        assert all(e.value <= bound + 1e-9 for e in empirical_box_error("gl", 2, p, "h", boxes))
