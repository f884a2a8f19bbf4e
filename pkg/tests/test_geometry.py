import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import vqlab as vq
from vqlab.energy import Quadrature1D, tube_mass
from vqlab.geometry import heaviside_matrix, min_pairwise_gap, winner_gap


def test_heaviside():
    assert vq.heaviside(0.0) == 1
    assert vq.heaviside(-0.5) == 0
    assert vq.heaviside(3.0) == 1
    with pytest.raises(ValueError):
        vq.heaviside(float("nan"))


def test_distance_profile_tie_lowest_index():
    prof = vq.distance_profile([[0], [2]], [1])
    assert np.allclose(prof.squared, [1, 1])
    assert prof.winner == 1


def test_distance_profile_values():
    prof = vq.distance_profile([[0], [2]], [0.9])
    assert np.allclose(prof.squared, [0.81, 1.21])
    assert prof.winner == 1
    prof = vq.distance_profile([[0, 0], [3, 4]], [0, 0])
    assert np.allclose(prof.squared, [0, 25])
    assert prof.winner == 1


def test_distance_profile_dim_mismatch():
    with pytest.raises(ValueError):
        vq.distance_profile([[0, 0]], [1])


def test_perturbation_bound_values():
    cp = vq.perturbation_bound(0.5, 2.0)
    assert cp.mu == pytest.approx(math.sqrt(16.125) - 4, abs=1e-9)
    assert cp.nu == pytest.approx(0.0125, abs=1e-12)
    cp = vq.perturbation_bound(1.0, 0.5)
    assert cp.mu == pytest.approx(math.sqrt(1.5) - 1, abs=1e-9)
    assert cp.nu == pytest.approx(0.2, abs=1e-12)
    with pytest.raises(ValueError):
        vq.perturbation_bound(0.0, 1.0)


def test_perturbation_bound_vanishes():
    assert vq.perturbation_bound(1e-8, 2.0).nu < 1e-15


def test_cellular_membership():
    w = [[0], [2]]
    cp = vq.perturbation_bound(0.5, 2.0)  # theta = 0.25
    assert vq.in_cellular_manifold(w, [1.1], cp) is True
    assert vq.in_cellular_manifold(w, [1.05], cp) is False
    assert vq.in_cellular_manifold(w, [0.0], cp) is True
    assert vq.tube_indicator(w, [1.05], cp) == 1
    assert vq.tube_indicator(w, [1.1], cp) == 0


def test_single_prototype_never_tubular():
    cp = vq.perturbation_bound(0.3, 1.0)
    assert vq.tube_indicator([[0.4]], [0.9], cp) == 0


def test_coincident_prototypes_always_tubular():
    cp = vq.perturbation_bound(0.1, 1.0)
    assert vq.tube_indicator([[0.3], [0.3]], [0.9], cp) == 1


def test_tube_width_1d_analytic():
    # tube of |d1^2 - d2^2| <= theta has width theta / |w2 - w1|
    d = vq.UniformInterval(0, 1)
    w = [[0.25], [0.75]]
    for eta in (0.2, 0.1):
        cp = vq.perturbation_bound(eta, 1.0)
        width = tube_mass(d, w, cp, Quadrature1D(200_000))
        assert width == pytest.approx(cp.theta / 0.5, abs=1e-6)


def test_gap_continuity_bisection():
    rng = np.random.default_rng(0)
    w = rng.random((4, 2))
    cp = vq.perturbation_bound(0.15, math.sqrt(2))
    found = 0
    for _ in range(50):
        a, b = rng.random(2), rng.random(2)
        ina, inb = vq.in_cellular_manifold(w, a, cp), vq.in_cellular_manifold(w, b, cp)
        if ina == inb:
            continue
        found += 1
        for _ in range(80):
            m = 0.5 * (a + b)
            if vq.in_cellular_manifold(w, m, cp) == ina:
                a = m
            else:
                b = m
        # membership flips exactly on the theta level set of the winner gap
        assert winner_gap(w, 0.5 * (a + b)) == pytest.approx(cp.theta, abs=1e-9)
    assert found > 0


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=6), st.floats(-5, 5))
def test_winner_deterministic(xs, v):
    w = [[x] for x in xs]
    p1 = vq.distance_profile(w, [v]).winner
    p2 = vq.distance_profile(w, [v]).winner
    assert p1 == p2
    sq = vq.distance_profile(w, [v]).squared
    assert sq[p1 - 1] == sq.min()
    assert all(sq[i] > sq[p1 - 1] or i >= p1 - 1 for i in range(len(xs)))


def test_min_pairwise_gap():
    assert min_pairwise_gap([[0], [1], [3]], [0.0]) == pytest.approx(1.0)
    assert math.isinf(min_pairwise_gap([[0.5]], [0.0]))


def test_heaviside_matrix_diagonal():
    m = heaviside_matrix([[0], [1], [3]], [0.2])
    assert np.all(np.diag(m))
    assert m[2, 0] and not m[0, 2]
