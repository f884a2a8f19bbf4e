import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import vqlab as vq
from vqlab.density import GaussianMixtureTruncated, PiecewiseUniform1D, UniformBox, UniformInterval


def make_densities():
    return [
        UniformInterval(0, 1),
        UniformBox([0, 0], [1, 2]),
        PiecewiseUniform1D([(0.1, 10.0, 1 / 9.9)]),
        PiecewiseUniform1D([(0.0, 0.5, 1.0), (1.0, 1.5, 1.0)]),
        GaussianMixtureTruncated([([0.5], [0.04], 1.0)], [0], [1]),
        GaussianMixtureTruncated(
            [([0.3, 0.3], [0.01, 0.02], 0.6), ([0.7, 0.6], [0.05, 0.01], 0.4)],
            [0, 0],
            [1, 1],
        ),
    ]


def test_uniform_interval_pdf():
    d = UniformInterval(0, 1)
    assert vq.pdf_at(d, 0.5) == 1.0
    assert vq.pdf_at(d, -1.0) == 0.0


def test_piecewise_pdf_matches_interval_height():
    d = PiecewiseUniform1D([(0.1, 10.0, 1 / 9.9)])
    assert vq.pdf_at(d, 5.0) == pytest.approx(1 / 9.9, abs=1e-12)


def test_pdf_dimension_mismatch():
    with pytest.raises(ValueError):
        vq.pdf_at(UniformBox([0, 0], [1, 1]), [0.5])


def test_support_bounds():
    lo, hi, diam = vq.support_bounds(UniformInterval(0, 1))
    assert lo[0] == 0 and hi[0] == 1 and diam == 1.0
    _, _, diam = vq.support_bounds(UniformBox([0, 0], [1, 1]))
    assert diam == pytest.approx(math.sqrt(2), abs=1e-12)
    lo, hi, diam = vq.support_bounds(PiecewiseUniform1D([(0.1, 10.0, 1 / 9.9)]))
    assert (lo[0], hi[0]) == (0.1, 10.0) and diam == pytest.approx(9.9)


def test_sample_mean_uniform():
    d = UniformInterval(0, 1)
    x = d.sample(vq.SeededStream(42).fresh(), size=100_000)
    # 3 sigma CLT band for variance 1/12
    assert abs(x.mean() - 0.5) < 0.01


def test_sample_determinism():
    a = [vq.sample(UniformInterval(0, 1), s) for s in [vq.SeededStream(7)] * 1]
    s1, s2 = vq.SeededStream(7), vq.SeededStream(7)
    d = UniformInterval(0, 1)
    first = [float(vq.sample(d, s1)[0]) for _ in range(100)]
    second = [float(vq.sample(d, s2)[0]) for _ in range(100)]
    assert first == second


@pytest.mark.parametrize("d", make_densities())
def test_monte_carlo_mass(d):
    lo, hi = d.bounds()
    vol = float(np.prod(hi - lo))
    rng = vq.SeededStream(5).fresh()
    pts = lo + rng.random((1_000_000, d.dim)) * (hi - lo)
    mass = d.pdf(pts).mean() * vol
    assert mass == pytest.approx(1.0, rel=0.01)


@pytest.mark.parametrize("d", make_densities())
def test_samples_in_support(d):
    pts = d.sample(vq.SeededStream(11).fresh(), size=5000)
    assert np.all(d.pdf(pts) > 0)


def test_piecewise_rejects_bad_mass():
    with pytest.raises(ValueError):
        PiecewiseUniform1D([(0, 1, 2.0)])
    with pytest.raises(ValueError):
        PiecewiseUniform1D([(0, 1, 0.5), (0.5, 1.5, 0.5)])  # overlap


def test_mixture_rejects_bad_weights():
    with pytest.raises(ValueError):
        GaussianMixtureTruncated([([0.5], [0.1], 0.7)], [0], [1])


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 0.99))
def test_uniform_pdf_inside(x):
    assert vq.pdf_at(UniformInterval(0, 1), x) == 1.0


def test_mixture_mass_quadrature():
    d = GaussianMixtureTruncated([([0.2], [0.09], 0.5), ([0.9], [0.01], 0.5)], [0], [1])
    xs = np.linspace(0, 1, 200_001)[:-1] + 0.5 / 200_000
    mass = d.pdf(xs.reshape(-1, 1)).mean()
    assert mass == pytest.approx(1.0, abs=1e-6)
