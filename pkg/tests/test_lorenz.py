import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from socentropy.distribution import BinnedSeries, normalize
from socentropy.errors import InvalidInputError, NoSymmetricEquivalentError
from socentropy.lorenz import (
    classify_symmetry,
    equivalent_ratio,
    lorenz_points,
    uniform_gini,
    uniform_lorenz,
)

from conftest import make_dist


def gini_mean_abs_difference(values, weights):
    """Weighted Gini as half the relative mean absolute difference, O(n^2)."""
    v = np.asarray(values, float)
    w = np.asarray(weights, float)
    diff = np.abs(v[:, None] - v[None, :])
    mad = (w[:, None] * w[None, :] * diff).sum() / w.sum() ** 2
    return mad / (2 * (w * v).sum() / w.sum())


def uniform_family(R, n=10_000):
    # omega on midpoints of n equal cells spanning [R, 1] (ratio min/max = R)
    edges = np.linspace(R, 1.0, n + 1)
    return normalize(BinnedSeries((edges[:-1] + edges[1:]) / 2, np.ones(n)))


def test_equality_gives_zero():
    lc = lorenz_points(make_dist([1.0], [5.0]))
    assert lc.gini == 0
    np.testing.assert_array_equal(lc.L, lc.F)


def test_two_individuals_one_holds_everything():
    lc = lorenz_points(make_dist([0.0, 2.0], [1.0, 1.0]))
    assert lc.points == [(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)]
    assert lc.gini == pytest.approx(0.5, abs=1e-15)


def test_quadratic_lorenz_tends_to_one_third():
    # L(F) = F^2 is the Lorenz curve of benefits growing linearly with rank
    area, _ = quad(lambda F: F * F, 0, 1)
    assert 1 - 2 * area == pytest.approx(1 / 3, abs=1e-14)
    n = 20_000
    om = (np.arange(n) + 0.5) / n
    assert lorenz_points(make_dist(om, np.ones(n))).gini == pytest.approx(1 / 3, abs=1e-6)


def test_trapezoid_matches_mean_abs_difference(rng):
    for _ in range(20):
        k = int(rng.integers(2, 40))
        om = np.sort(rng.uniform(0, 5, k))
        w = rng.uniform(0.1, 3, k)
        lc = lorenz_points(make_dist(om, w))
        assert lc.gini == pytest.approx(gini_mean_abs_difference(om, w), abs=1e-12)


def test_zero_benefit_rejected():
    with pytest.raises(InvalidInputError):
        lorenz_points(make_dist([0.0, 1.0], [1.0, 0.0]))


def test_uniform_lorenz_values():
    assert uniform_lorenz(1.0, 0.37) == pytest.approx(1.0, abs=1e-15)
    assert uniform_lorenz(0.3, 1.0) == pytest.approx(0.3, abs=1e-15)
    assert uniform_lorenz(0.5, 0.0) == 0.25
    with pytest.raises(InvalidInputError):
        uniform_lorenz(1.2, 0.5)
    with pytest.raises(InvalidInputError):
        uniform_lorenz(0.5, -0.1)


@pytest.mark.parametrize("R", [0.0, 0.2, 0.5, 0.9])
def test_uniform_lorenz_integrates_to_uniform_gini(R):
    area, _ = quad(lambda F: uniform_lorenz(F, R), 0, 1)
    assert 1 - 2 * area == pytest.approx(uniform_gini(R), abs=1e-12)


def test_uniform_gini_values():
    assert uniform_gini(1.0) == 0.0
    assert uniform_gini(0.0) == pytest.approx(1 / 3, abs=1e-16)
    assert uniform_gini(1 / 3) == pytest.approx(1 / 6, abs=1e-16)


def test_uniform_gini_monotone_and_bounded():
    R = np.linspace(0, 1, 1001)
    g = np.array([uniform_gini(r) for r in R])
    assert np.all(np.diff(g) < 0)
    assert g.max() <= 1 / 3 + 1e-15


def test_equivalent_ratio_values():
    assert equivalent_ratio(0.0) == 1.0
    assert equivalent_ratio(1 / 3) == 0.0
    assert equivalent_ratio(1 / 6) == pytest.approx(1 / 3, abs=1e-15)
    with pytest.raises(NoSymmetricEquivalentError):
        equivalent_ratio(0.34)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1 / 3))
def test_equivalent_ratio_round_trip(gi):
    assert uniform_gini(equivalent_ratio(gi)) == pytest.approx(gi, abs=1e-12)


def test_classify_symmetry():
    v = classify_symmetry(0.2)
    assert v.kind == "symmetry-feasible" and v.equivalent_ratio == pytest.approx(0.25, abs=1e-15)
    v = classify_symmetry(1 / 3)
    assert v.kind == "symmetry-feasible" and v.equivalent_ratio == 0.0
    v = classify_symmetry(0.45)
    assert v.kind == "asymmetry-required" and v.equivalent_ratio is None


@pytest.mark.parametrize("R", [round(0.1 * i, 1) for i in range(10)])
def test_discretized_uniform_matches_formula(R):
    gi = lorenz_points(uniform_family(R)).gini
    assert abs(gi - uniform_gini(R)) < 1e-4


gaps = st.lists(st.floats(0.01, 100), min_size=1, max_size=25)


@settings(max_examples=100, deadline=None)
@given(gaps, st.data())
def test_gini_properties(g, data):
    k = len(g)
    counts = data.draw(st.lists(st.floats(0.1, 1e4), min_size=k, max_size=k))
    benefit = np.cumsum(g)
    d = normalize(BinnedSeries(benefit, counts))
    lc = lorenz_points(d)
    assert 0 <= lc.gini < 1
    assert np.all(lc.L <= lc.F + 1e-15)
    assert np.all(np.diff(lc.F) > 0)
    c = data.draw(st.floats(1e-3, 1e3))
    assert lorenz_points(normalize(BinnedSeries(benefit * c, counts))).gini == pytest.approx(lc.gini, abs=1e-12)
    doubled = normalize(BinnedSeries(benefit, np.array(counts) * 2, states=np.array(counts) * 2))
    assert lorenz_points(doubled).gini == pytest.approx(lc.gini, abs=1e-12)
