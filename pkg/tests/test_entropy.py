import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socentropy.distribution import BinnedSeries, normalize
from socentropy.entropy import (
    LN2,
    big_H_be,
    big_H_mbg,
    big_S_be,
    big_S_mbg,
    h_be,
    h_mbg,
    inequality_index,
    qlog,
    s_be,
    s_mbg,
    s_theta,
)
from socentropy.errors import DomainError

from conftest import make_dist

mpmath.mp.dps = 50


def mp_h(x):
    x = mpmath.mpf(x)
    return float((1 + x) * mpmath.log(1 + x) - (x * mpmath.log(x) if x else 0))


def mp_qlog(x, theta):
    x, theta = mpmath.mpf(x), mpmath.mpf(theta)
    if theta == 0:
        return float(mpmath.log(x))
    return float(-mpmath.expm1(-theta * mpmath.log(x)) / theta)


# -- quasi-logarithm -----------------------------------------------------------


def test_qlog_examples():
    for th in (-0.9, -0.3, 0.0, 0.4, 1.0):
        assert qlog(1.0, th) == 0
    assert qlog(2.0, 1.0) == 0.5
    assert qlog(math.e, 1e-8) == pytest.approx(1.0, abs=1e-6)
    assert qlog(math.e, 0.0) == 1.0


def test_qlog_domain():
    for bad in (0.0, -1.0, math.nan):
        with pytest.raises(DomainError):
            qlog(bad, 0.2)
    with pytest.raises(DomainError):
        qlog(np.array([1.0, 0.0]), 0.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-6, 1e6), st.floats(-0.95, 0.95))
def test_qlog_matches_high_precision(x, theta):
    assert qlog(x, theta) == pytest.approx(mp_qlog(x, theta), rel=1e-13, abs=1e-15)


def test_qlog_continuity_at_zero():
    x = np.linspace(0.1, 10, 2001)
    for th in (1e-6, -1e-6):
        assert np.max(np.abs(qlog(x, th) - np.log(x))) < 1e-5


def triple_rhs(px, py, pz, th):
    a, b, c = (mp_qlog(p, th) for p in (px, py, pz))
    return a + b + c - th * (a * b + a * c + b * c) + th * th * a * b * c


def test_triple_product_spot_value():
    lhs = qlog(0.125, 0.5)
    assert lhs == pytest.approx(-3.656854, abs=1e-6)
    assert triple_rhs(0.5, 0.5, 0.5, 0.5) == pytest.approx(lhs, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(
    st.floats(1e-3, 1 - 1e-9),
    st.floats(1e-3, 1 - 1e-9),
    st.floats(1e-3, 1 - 1e-9),
    st.floats(-0.9, 0.9),
)
def test_triple_product_identity(px, py, pz, th):
    assert qlog(px * py * pz, th) == pytest.approx(triple_rhs(px, py, pz, th), abs=1e-12, rel=1e-12)


# -- B-E group entropies ------------------------------------------------------------


def test_h_be_examples():
    assert h_be(0.0) == 0.0
    assert h_be(1.0) == pytest.approx(2 * LN2, abs=1e-15)
    assert h_be(3.0) == pytest.approx(2.2493410, abs=1e-6)
    assert h_be(3.0) == pytest.approx(4 * math.log(4) - 3 * math.log(3), abs=1e-14)


@pytest.mark.parametrize("x", [0.0, 1e-300, 1e-12, 0.01, 0.5, 1.0, 7.3, 1e3, 1e8])
def test_h_be_matches_high_precision(x):
    assert h_be(x) == pytest.approx(mp_h(x), rel=1e-12, abs=1e-300)
    assert s_be(x) == h_be(x)


def test_s_be_examples():
    assert s_be(0.0) == 0.0
    assert s_be(1.0) == pytest.approx(2 * LN2, abs=1e-15)
    h = 1e-5
    slope = (s_be(1 + h) - s_be(1 - h)) / (2 * h)
    assert slope == pytest.approx(LN2, abs=1e-6)


def test_negative_arguments_rejected():
    for f in (h_be, s_be, h_mbg, s_mbg):
        with pytest.raises(DomainError):
            f(-0.1)
    with pytest.raises(DomainError):
        s_theta(-1.0, 0.3)


def test_array_in_array_out():
    out = h_be(np.array([0.0, 1.0, 3.0]))
    assert isinstance(out, np.ndarray) and out.shape == (3,)
    assert isinstance(h_be(2.0), float)


def test_strict_concavity():
    x = np.geomspace(1e-3, 1e3, 400)
    for f in (h_be, s_be):
        for xi in x:
            d = 1e-3 * xi
            assert f(xi + d) - 2 * f(xi) + f(xi - d) < 0


# -- deformed entropy -------------------------------------------------------------


def test_s_theta_examples():
    for nu in (0.5, 1.0, 2.0):
        assert s_theta(nu, 0.0) == s_be(nu)
    assert s_theta(1.0, 1.0) == 1.0
    assert abs(s_theta(1.0, 1e-6) - 2 * LN2) < 1e-5
    assert s_theta(0.0, 0.4) == 0.0
    np.testing.assert_array_equal(s_theta(np.array([0.0, 0.0]), -0.4), [0.0, 0.0])


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-6, 1e4), st.floats(-0.9, 0.9))
def test_s_theta_matches_definition(nu, th):
    expected = (1 + nu) * mp_qlog(1 + nu, th) - nu * mp_qlog(nu, th)
    assert s_theta(nu, th) == pytest.approx(expected, rel=1e-9, abs=1e-12)


# -- classical forms ------------------------------------------------------------------


def test_mbg_examples():
    assert h_mbg(1.0) == 1.0
    assert h_mbg(math.e) == pytest.approx(0.0, abs=1e-15)
    assert h_mbg(0.0) == 0.0
    assert s_mbg(1.0) == 1.0
    assert s_mbg(0.0) == 0.0


def test_mbg_totals():
    d = make_dist([0.5, 2.0], [1.0, 3.0], g=[2.0, 1.0])
    assert big_H_mbg(d) == pytest.approx(2 * 0.5 * (1 - math.log(0.5)) + 3 * 2 * (1 - math.log(2)), abs=1e-14)
    assert big_S_mbg(d) == pytest.approx(2 * 1.0 + 3 * (1 - math.log(3)), abs=1e-14)


# -- totals ---------------------------------------------------------------------


def test_big_H_examples():
    d = make_dist([1.0, 1.0 + 1e-9], [2.0, 3.0], g=[4.0, 1.0])
    assert big_H_be(d) == pytest.approx(11 * 2 * LN2, rel=1e-8)
    single = normalize(BinnedSeries([5.0], [9.0]))
    assert big_H_be(single) == pytest.approx(18 * LN2, abs=1e-13)
    two = make_dist([0.5, 1.5], [1.0, 1.0])
    # h_be(0.5) + h_be(1.5) = 0.954771 + 1.682529
    assert big_H_be(two) == pytest.approx(2.637300, abs=1e-6)
    assert big_H_be(two) == pytest.approx(mp_h(0.5) + mp_h(1.5), abs=1e-14)


def test_big_S_examples():
    assert big_S_be(make_dist([0.5, 1.5], [0.0, 0.0])) == 0.0
    assert big_S_be(make_dist([0.5, 1.0, 2.0], [1.0, 1.0, 1.0], g=[3, 2, 5])) == pytest.approx(20 * LN2, abs=1e-13)
    d = make_dist([0.5, 2.0], [1.0, 3.0], g=[2.0, 1.0])
    assert big_S_be(d) == pytest.approx(5.0219, abs=5e-5)
    assert big_S_be(d) == pytest.approx(4 * LN2 + mp_h(3), abs=1e-14)


def test_compensated_sum_is_order_independent(rng):
    n = 50_000
    om = np.sort(rng.uniform(0, 10, n))
    nu = rng.exponential(1.0, n)
    d = make_dist(om, nu)
    rev = make_dist(om[::-1], nu[::-1])
    assert big_H_be(d) == pytest.approx(big_H_be(rev), rel=1e-15)
    assert big_S_be(d) == pytest.approx(big_S_be(rev), rel=1e-15)


# -- inequality index -----------------------------------------------------------------


def test_inequality_at_equality():
    r = inequality_index(normalize(BinnedSeries([250.0], [40.0])))
    assert r.index_I == 0.0
    assert r.welfare_U == 250.0
    assert r.redundancy == r.index_I
    assert r.H == r.H_max


def test_inequality_two_bins():
    r = inequality_index(make_dist([0.5, 1.5], [1.0, 1.0]))
    assert r.H_max == pytest.approx(4 * LN2, abs=1e-15)
    assert r.index_I == pytest.approx(0.048795, abs=1e-6)
    assert r.index_I == pytest.approx(1 - (mp_h(0.5) + mp_h(1.5)) / (4 * LN2), abs=1e-14)


def test_inequality_scaling():
    s = BinnedSeries([1.0, 3.0, 8.0], [5.0, 3.0, 1.0])
    a = inequality_index(normalize(s))
    b = inequality_index(normalize(BinnedSeries(s.benefit * 10, s.count)))
    assert b.index_I == pytest.approx(a.index_I, abs=1e-12)
    assert b.welfare_U == pytest.approx(10 * a.welfare_U, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(0.01, 50), st.floats(0.1, 100)), min_size=1, max_size=30), st.data())
def test_inequality_invariances(rows, data):
    gaps, counts = zip(*rows)
    benefit = np.cumsum(gaps)
    d = normalize(BinnedSeries(benefit, counts))
    r = inequality_index(d)
    assert 0.0 <= r.index_I <= 1.0
    assert r.welfare_U == pytest.approx(d.w_bar * (1 - r.index_I), rel=1e-15)
    # permutation: bins in a different order
    perm = np.array(data.draw(st.permutations(range(len(d)))))
    p = make_dist(d.omega[perm], d.nu[perm], d.g[perm])
    assert abs(inequality_index(p).index_I - r.index_I) < 1e-12
    # replication: every bin duplicated
    rep = make_dist(np.repeat(d.omega, 2), np.repeat(d.nu, 2), np.repeat(d.g, 2))
    assert abs(inequality_index(rep).index_I - r.index_I) < 1e-12
    # scale
    c = data.draw(st.floats(1e-3, 1e3))
    sc = inequality_index(normalize(BinnedSeries(benefit * c, counts)))
    assert abs(sc.index_I - r.index_I) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0.01, 50), min_size=2, max_size=20))
def test_inequality_positive_unless_equal(gaps):
    d = normalize(BinnedSeries(np.cumsum(gaps), np.ones(len(gaps))))
    assert inequality_index(d).index_I > 0
