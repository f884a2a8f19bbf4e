import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import vqlab as vq


D1 = vq.UniformInterval(0, 1)


def test_per_sample_energy_examples():
    assert vq.per_sample_energy([[0], [2]], [0.5], vq.KMeansWinner()) == pytest.approx(0.125)
    assert vq.per_sample_energy([[0], [2]], [0.0], vq.KMeansWinner()) == 0.0
    # tie at v = 1 fires both all-winner indicators: 0.5 * (1 + 1)
    assert vq.per_sample_energy([[0], [2]], [1.0], vq.KMeansAllWinners()) == pytest.approx(1.0)
    assert vq.per_sample_energy([[0], [2]], [1.0], vq.KMeansWinner()) == pytest.approx(0.5)


def test_energy_single_prototype_closed_form():
    # int_0^1 0.5 (v - 0.5)^2 dv = 1/24
    e = vq.estimate_energy(D1, [[0.5]], vq.KMeansWinner(), vq.Quadrature1D(100_000))
    assert e == pytest.approx(1 / 24, abs=1e-9)


def test_energy_two_prototypes_closed_form():
    # optimal pair at 1/4, 3/4: 2 * int_0^{1/2} 0.5 (v - 1/4)^2 dv = 1/96
    e = vq.estimate_energy(D1, [[0.25], [0.75]], vq.KMeansWinner(), vq.Quadrature1D(100_000))
    assert e == pytest.approx(1 / 96, abs=1e-9)


def test_energy_zero_when_psi_vanishes():
    spec = vq.RecruitingNG(0.5, (0.0, 0.0))
    e = vq.estimate_energy(D1, [[0.25], [0.75]], spec, vq.Quadrature1D(1000))
    assert e == 0.0


def test_energy_mc_matches_quadrature():
    w = [[0.2], [0.7]]
    spec = vq.NeuralGas(0.8)
    exact = vq.estimate_energy(D1, w, spec, vq.Quadrature1D(200_000))
    cp = vq.perturbation_bound(0.1, 1.0)
    rep = vq.energy_report(D1, w, spec, cp, vq.MonteCarlo(200_000, vq.SeededStream(13)))
    assert abs(rep.energy - exact) < 3 * rep.stderr_energy + 1e-12


def test_cellular_energy_closed_form():
    # remove the tube (theta / 0.5 wide around v = 0.5) from the 1/96 integral:
    # gap = 2 * int_{0.5 - t/2}^{0.5} 0.5 (v - 0.25)^2 dv with t = theta / 0.5
    w = [[0.25], [0.75]]
    cp = vq.perturbation_bound(0.2, 1.0)
    t = cp.theta / 0.5
    gap_exact = (1 / 3) * (0.25**3 - (0.25 - t / 2) ** 3)
    rep = vq.energy_report(D1, w, vq.KMeansWinner(), cp, vq.Quadrature1D(50_000))
    assert rep.gap == pytest.approx(gap_exact, abs=1e-9)
    assert rep.cellular_energy == pytest.approx(1 / 96 - gap_exact, abs=1e-9)
    assert rep.energy == pytest.approx(rep.cellular_energy + rep.gap, abs=1e-15)
    assert rep.tube_mass == pytest.approx(t, abs=1e-9)


def test_cellular_equals_full_for_single_prototype():
    cp = vq.perturbation_bound(0.3, 1.0)
    full = vq.estimate_energy(D1, [[0.4]], vq.KMeansWinner(), vq.Quadrature1D(10_000))
    cell = vq.estimate_energy_cellular(D1, [[0.4]], vq.KMeansWinner(), cp, vq.Quadrature1D(10_000))
    assert cell == pytest.approx(full, abs=1e-12)


def test_gap_vanishes_with_eta():
    w = [[0.25], [0.75]]
    etas = [0.4, 0.2, 0.1, 0.05, 0.025]
    reps = vq.energy_gap_scan(D1, w, vq.KMeansWinner(), etas, vq.Quadrature1D(100_000))
    gaps = [r.gap for r in reps]
    assert all(g >= 0 for g in gaps)
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3
    for r in reps:
        # tube integrand is bounded by half the squared diameter
        assert r.gap <= 0.5 * r.tube_mass * 1.0 + 1e-12


def test_gap_scan_validates_etas():
    with pytest.raises(ValueError):
        vq.energy_gap_scan(D1, [[0.5]], vq.KMeansWinner(), [0.1, 0.2], vq.Quadrature1D(10))
    with pytest.raises(ValueError):
        vq.energy_gap_scan(D1, [[0.5]], vq.KMeansWinner(), [0.1, -0.2], vq.Quadrature1D(10))


def test_gap_scan_mc_shared_samples_monotone():
    w = [[0.25], [0.75]]
    etas = [0.4, 0.3, 0.2, 0.1]
    reps = vq.energy_gap_scan(D1, w, vq.KMeansWinner(), etas,
                              vq.MonteCarlo(50_000, vq.SeededStream(17)))
    gaps = [r.gap for r in reps]
    # common random numbers: nested tubes give exactly monotone gaps
    assert all(a >= b for a, b in zip(gaps, gaps[1:]))
    energies = [r.energy for r in reps]
    assert max(energies) == min(energies)  # full energy independent of eta


def test_analytic_gradient_closed_form():
    # boundary at 0.525; int_0^{0.525} (0.3 - v) dv = 0.0196875
    g = vq.analytic_gradient(D1, [[0.3], [0.75]], vq.KMeansWinner(), 1, vq.Quadrature1D(100_000))
    assert g[0] == pytest.approx(0.0196875, abs=1e-9)


def test_analytic_gradient_symmetry():
    g1 = vq.analytic_gradient(D1, [[0.25], [0.75]], vq.KMeansWinner(), 1, vq.Quadrature1D(50_000))
    g2 = vq.analytic_gradient(D1, [[0.25], [0.75]], vq.KMeansWinner(), 2, vq.Quadrature1D(50_000))
    assert g1[0] == pytest.approx(-g2[0], abs=1e-9)
    assert abs(g1[0]) < 1e-9  # stationary configuration


def test_finite_diff_matches_analytic_on_cellular():
    d = vq.GaussianMixtureTruncated([([0.3], [0.02], 0.5), ([0.75], [0.03], 0.5)], [0], [1])
    w = [[0.3], [0.8]]
    cp = vq.perturbation_bound(0.004, 1.0)
    integ = vq.Quadrature1D(40_000)
    spec = vq.KMeansWinner()
    ana = vq.analytic_gradient(d, w, spec, 1, integ, cp=cp)
    fd = vq.finite_diff_gradient(d, w, spec, cp, 1, cp.nu / 2, integ)
    assert np.linalg.norm(fd - ana) / np.linalg.norm(ana) < 1e-3


def test_finite_diff_rejects_large_h():
    cp = vq.perturbation_bound(0.01, 1.0)
    with pytest.raises(ValueError):
        vq.finite_diff_gradient(D1, [[0.3], [0.8]], vq.KMeansWinner(), cp, 1, cp.nu, vq.Quadrature1D(100))
    with pytest.raises(ValueError):
        vq.finite_diff_gradient(D1, [[0.3], [0.8]], vq.KMeansWinner(), cp, 1, -1.0, vq.Quadrature1D(100))


def test_gradient_index_validation():
    with pytest.raises(ValueError):
        vq.analytic_gradient(D1, [[0.5]], vq.KMeansWinner(), 2, vq.Quadrature1D(10))


def test_invariance_probe_no_flips():
    w = [[0.3], [0.8]]
    cp = vq.perturbation_bound(0.2, 1.0)
    v = vq.invariance_probe(D1, w, cp, 500, vq.SeededStream(7))
    assert v == 0


def test_invariance_probe_2d():
    d = vq.UniformBox([0, 0], [1, 1])
    w = [[0.2, 0.2], [0.8, 0.2], [0.2, 0.8], [0.8, 0.8]]
    cp = vq.perturbation_bound(0.2, math.sqrt(2))
    assert vq.invariance_probe(d, w, cp, 500, vq.SeededStream(8)) == 0


def test_adversarial_probe_flips():
    w = [[0.3], [0.8]]
    cp = vq.perturbation_bound(0.2, 1.0)
    assert vq.adversarial_probe(D1, w, cp, vq.SeededStream(5)) == 1


def test_quadrature_dim_mismatch():
    with pytest.raises(ValueError):
        vq.estimate_energy(vq.UniformBox([0, 0], [1, 1]), [[0.5, 0.5]],
                           vq.KMeansWinner(), vq.Quadrature1D(10))
    with pytest.raises(ValueError):
        vq.estimate_energy(D1, [[0.5]], vq.KMeansWinner(), vq.Quadrature2D(10))


def test_quadrature2d_energy():
    d = vq.UniformBox([0, 0], [1, 1])
    # single prototype at the center: 2 * int_0^1 0.5 (x - 0.5)^2 dx = 1/12
    e = vq.estimate_energy(d, [[0.5, 0.5]], vq.KMeansWinner(), vq.Quadrature2D(2000))
    assert e == pytest.approx(1 / 12, abs=1e-7)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.45), st.floats(0.55, 0.95), st.floats(0.05, 0.3))
def test_gap_nonnegative_and_bounded(w1, w2, eta):
    cp = vq.perturbation_bound(eta, 1.0)
    rep = vq.energy_report(D1, [[w1], [w2]], vq.KMeansWinner(), cp, vq.Quadrature1D(2000))
    assert rep.gap >= 0
    assert rep.cellular_energy <= rep.energy + 1e-12
    assert 0 <= rep.tube_mass <= 1
