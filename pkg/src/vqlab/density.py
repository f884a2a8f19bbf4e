"""Sampleable, evaluable probability densities on bounded supports.

Four variants are provided: axis-aligned uniform boxes, uniform intervals,
1-D piecewise-uniform densities (which realize discontinuous densities with
jumps at segment edges), and truncated diagonal-covariance Gaussian mixtures
(which realize smooth densities).  Every density lives inside a finite
bounding box and integrates to one; construction fails otherwise.

Densities are immutable after construction and safe to share between
workers; randomness comes from a caller-owned :class:`~vqlab.streams.SeededStream`.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import ndtr, ndtri

from .streams import SeededStream

_MASS_TOL = 1e-9


def _as_point(v, dim: int) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float))
    if a.ndim != 1 or a.shape[0] != dim:
        raise ValueError(f"expected a point of dimension {dim}, got shape {a.shape}")
    return a


class Density:
    """Base class.  Subclasses define ``dim``, ``pdf``, ``sample`` and ``bounds``."""

    dim: int

    def pdf(self, v: np.ndarray) -> np.ndarray:
        """Density value at one point (d,) or a batch of points (N, d)."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        """Draw one point (size=None) or a (size, d) batch."""
        raise NotImplementedError

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Tight bounding box (lo, hi) of the support."""
        raise NotImplementedError

    @property
    def diameter(self) -> float:
        lo, hi = self.bounds()
        return float(np.linalg.norm(hi - lo))

    def _batch(self, v) -> tuple[np.ndarray, bool]:
        a = np.asarray(v, dtype=float)
        if a.ndim == 0:
            a = a.reshape(1)
        if a.ndim == 1:
            if a.shape[0] != self.dim:
                raise ValueError(f"expected dimension {self.dim}, got {a.shape[0]}")
            return a.reshape(1, -1), True
        if a.ndim == 2 and a.shape[1] == self.dim:
            return a, False
        raise ValueError(f"expected points of dimension {self.dim}, got shape {a.shape}")


class UniformBox(Density):
    """Uniform density on an axis-aligned box [lo, hi]."""

    def __init__(self, lo: Sequence[float], hi: Sequence[float]):
        self.lo = np.atleast_1d(np.asarray(lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise ValueError("lo and hi must be points of the same dimension")
        if not np.all(self.hi > self.lo):
            raise ValueError("box must have positive volume in every axis")
        self.dim = self.lo.shape[0]
        self._height = float(1.0 / np.prod(self.hi - self.lo))

    def pdf(self, v):
        a, single = self._batch(v)
        inside = np.all((a >= self.lo) & (a <= self.hi), axis=1)
        out = np.where(inside, self._height, 0.0)
        return float(out[0]) if single else out

    def sample(self, rng, size=None):
        n = 1 if size is None else int(size)
        pts = self.lo + rng.random((n, self.dim)) * (self.hi - self.lo)
        return pts[0] if size is None else pts

    def bounds(self):
        return self.lo.copy(), self.hi.copy()


class UniformInterval(UniformBox):
    """Uniform density on a 1-D interval [a, b]."""

    def __init__(self, a: float, b: float):
        super().__init__([a], [b])
        self.a = float(a)
        self.b = float(b)


class PiecewiseUniform1D(Density):
    """1-D density that is constant on disjoint segments and zero elsewhere.

    ``segments`` is a list of (a_i, b_i, height_i); the heights must be
    nonnegative and the total mass sum((b_i - a_i) * h_i) must equal one.
    """

    dim = 1

    def __init__(self, segments: Sequence[tuple[float, float, float]]):
        segs = sorted((float(a), float(b), float(h)) for a, b, h in segments)
        if not segs:
            raise ValueError("at least one segment required")
        for a, b, h in segs:
            if b <= a:
                raise ValueError(f"segment ({a}, {b}) has nonpositive length")
            if h < 0:
                raise ValueError("segment heights must be nonnegative")
        for (_, b0, _), (a1, _, _) in zip(segs, segs[1:]):
            if a1 < b0:
                raise ValueError("segments must be disjoint")
        mass = sum((b - a) * h for a, b, h in segs)
        if abs(mass - 1.0) > _MASS_TOL:
            raise ValueError(f"total mass is {mass}, expected 1")
        self.segments = segs
        self._a = np.array([s[0] for s in segs])
        self._b = np.array([s[1] for s in segs])
        self._h = np.array([s[2] for s in segs])
        self._seg_mass = (self._b - self._a) * self._h
        self._cum = np.cumsum(self._seg_mass)

    def pdf(self, v):
        a, single = self._batch(v)
        x = a[:, 0]
        out = np.zeros(x.shape[0])
        for lo, hi, h in self.segments:
            out = np.where((x >= lo) & (x <= hi), h, out)
        return float(out[0]) if single else out

    def sample(self, rng, size=None):
        n = 1 if size is None else int(size)
        u = rng.random(n) * self._cum[-1]
        idx = np.searchsorted(self._cum, u, side="right")
        idx = np.minimum(idx, len(self.segments) - 1)
        frac = rng.random(n)
        x = self._a[idx] + frac * (self._b[idx] - self._a[idx])
        pts = x.reshape(-1, 1)
        return pts[0] if size is None else pts

    def bounds(self):
        return np.array([self._a[0]]), np.array([self._b[-1]])


class GaussianMixtureTruncated(Density):
    """Diagonal-covariance Gaussian mixture truncated to a bounding box.

    ``components`` is a list of (mean, variance-diagonal, weight); the weights
    must sum to one.  Each component is renormalized over the box, so the
    truncated mixture has unit mass exactly.
    """

    def __init__(
        self,
        components: Sequence[tuple[Sequence[float], Sequence[float], float]],
        lo: Sequence[float],
        hi: Sequence[float],
    ):
        if not components:
            raise ValueError("at least one component required")
        self.lo = np.atleast_1d(np.asarray(lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if not np.all(self.hi > self.lo):
            raise ValueError("box must have positive volume in every axis")
        self.dim = self.lo.shape[0]
        self.means = np.array([np.atleast_1d(np.asarray(m, dtype=float)) for m, _, _ in components])
        self.variances = np.array([np.atleast_1d(np.asarray(s, dtype=float)) for _, s, _ in components])
        self.weights = np.array([float(w) for _, _, w in components])
        if self.means.shape[1] != self.dim or self.variances.shape[1] != self.dim:
            raise ValueError("component dimensions must match the bounding box")
        if np.any(self.variances <= 0):
            raise ValueError("variances must be positive")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > _MASS_TOL:
            raise ValueError("component weights must be nonnegative and sum to 1")
        self._std = np.sqrt(self.variances)
        # Per-component, per-axis truncated-normal CDF endpoints.
        self._cdf_lo = ndtr((self.lo - self.means) / self._std)
        self._cdf_hi = ndtr((self.hi - self.means) / self._std)
        self._axis_mass = self._cdf_hi - self._cdf_lo
        if np.any(self._axis_mass <= 0):
            raise ValueError("a component has no mass inside the bounding box")
        self._box_mass = np.prod(self._axis_mass, axis=1)
        self._cum = np.cumsum(self.weights)

    def pdf(self, v):
        a, single = self._batch(v)
        inside = np.all((a >= self.lo) & (a <= self.hi), axis=1)
        z = (a[:, None, :] - self.means) / self._std  # (N, C, d)
        log_phi = -0.5 * z * z - 0.5 * math.log(2 * math.pi) - np.log(self._std)
        comp = np.exp(log_phi.sum(axis=2)) / self._box_mass
        out = comp @ self.weights
        out = np.where(inside, out, 0.0)
        return float(out[0]) if single else out

    def sample(self, rng, size=None):
        n = 1 if size is None else int(size)
        c = np.searchsorted(self._cum, rng.random(n) * self._cum[-1], side="right")
        c = np.minimum(c, len(self.weights) - 1)
        u = rng.random((n, self.dim))
        p = self._cdf_lo[c] + u * self._axis_mass[c]
        pts = self.means[c] + self._std[c] * ndtri(p)
        # inverse-CDF sampling can graze the box edge by rounding
        pts = np.clip(pts, self.lo, self.hi)
        return pts[0] if size is None else pts

    def bounds(self):
        return self.lo.copy(), self.hi.copy()


def pdf_at(density: Density, v) -> float:
    """Density value at a point; zero outside the support."""
    return float(density.pdf(_as_point(v, density.dim)))


def sample(density: Density, stream: SeededStream) -> np.ndarray:
    """Draw one point from the density, advancing the stream."""
    return density.sample(stream.rng())


def support_bounds(density: Density) -> tuple[np.ndarray, np.ndarray, float]:
    """Bounding box of the support and its Euclidean diameter."""
    lo, hi = density.bounds()
    return lo, hi, density.diameter
