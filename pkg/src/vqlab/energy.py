"""Energy estimators, gap scans, gradients and the invariance probe.

The energy of a prototype configuration is the expected weighted squared
quantization error; its cellular restriction drops all mass inside the tube
around the Voronoi boundaries.  Monte-Carlo and midpoint-quadrature
integrators are provided.  Paired quantities (gaps, finite differences) are
always evaluated on shared nodes / common random numbers, otherwise the
O(eta) and O(|zeta|^2) effects under study drown in estimator noise.

For 1-D quadrature the tube boundary inside a panel is located by bisection,
so cellular estimates vary smoothly under prototype perturbations far below
the panel width; finite-difference gradients rely on this.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import Density
from .geometry import (
    CellularParams,
    as_prototype_array,
    min_pairwise_gap_batch,
    perturbation_bound,
    squared_distances_batch,
    winner_gap,
    winner_gap_batch,
)
from .neighborhoods import psi_batch
from .streams import SeededStream

_CHUNK = 1 << 17


# --- integrators -----------------------------------------------------------


@dataclass(frozen=True)
class MonteCarlo:
    """Sample average over draws from the density.

    The same sample set is regenerated from the stream on every call, so all
    estimates sharing one integrator are common-random-number paired.
    """

    samples: int
    stream: SeededStream

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


@dataclass(frozen=True)
class Quadrature1D:
    """Midpoint rule on the support bounding interval."""

    panels: int

    def __post_init__(self):
        if self.panels < 1:
            raise ValueError("panels must be >= 1")


@dataclass(frozen=True)
class Quadrature2D:
    """Tensor midpoint rule on the support bounding box, panels per axis."""

    panels: int

    def __post_init__(self):
        if self.panels < 1:
            raise ValueError("panels must be >= 1")


Integrator = MonteCarlo | Quadrature1D | Quadrature2D


def _plain_nodes(density: Density, integ) -> tuple[np.ndarray, np.ndarray, bool]:
    """Integration nodes and weights; weights absorb P dv (MC: 1/N each)."""
    if isinstance(integ, MonteCarlo):
        V = density.sample(integ.stream.fresh(), size=integ.samples)
        wts = np.full(integ.samples, 1.0 / integ.samples)
        return V, wts, True
    lo, hi = density.bounds()
    if isinstance(integ, Quadrature1D):
        if density.dim != 1:
            raise ValueError("Quadrature1D requires a 1-D density")
        h = (hi[0] - lo[0]) / integ.panels
        mids = lo[0] + (np.arange(integ.panels) + 0.5) * h
        V = mids.reshape(-1, 1)
        return V, density.pdf(V) * h, False
    if isinstance(integ, Quadrature2D):
        if density.dim != 2:
            raise ValueError("Quadrature2D requires a 2-D density")
        hx = (hi[0] - lo[0]) / integ.panels
        hy = (hi[1] - lo[1]) / integ.panels
        xs = lo[0] + (np.arange(integ.panels) + 0.5) * hx
        ys = lo[1] + (np.arange(integ.panels) + 0.5) * hy
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        V = np.column_stack([X.ravel(), Y.ravel()])
        return V, density.pdf(V) * hx * hy, False
    raise TypeError(f"unknown integrator {type(integ).__name__}")


# --- integrand -------------------------------------------------------------


def per_sample_energy(w, v, spec) -> float:
    """0.5 * sum_p psi_p(w, v) * ||v - w_p||^2 (the integrand without P)."""
    v = np.atleast_1d(np.asarray(v, dtype=float)).reshape(1, -1)
    return float(_integrand_batch(w, v, spec)[0])


def _integrand_batch(w, V, spec) -> np.ndarray:
    a = as_prototype_array(w)
    V = np.asarray(V, dtype=float)
    out = np.empty(V.shape[0])
    for s in range(0, V.shape[0], _CHUNK):
        block = V[s : s + _CHUNK]
        sq = squared_distances_batch(a, block)
        psi = psi_batch(spec, a, block)
        out[s : s + _CHUNK] = 0.5 * np.einsum("tp,tp->t", psi, sq)
    return out


# --- cellular splitting ----------------------------------------------------


def _refine_panel(gfun, a: float, b: float, ga: float, gb: float):
    """Split [a, b] into (inside, tube) sub-intervals of the sign of gfun.

    gfun is the winner gap minus theta, continuous in v.  Crossings are
    located by scanning then bisecting to near machine precision.
    """
    scan = np.linspace(a, b, 17)
    vals = [ga] + [gfun(x) for x in scan[1:-1]] + [gb]
    cuts = [a]
    for i in range(len(scan) - 1):
        lo, hi = scan[i], scan[i + 1]
        glo, ghi = vals[i], vals[i + 1]
        if (glo > 0) == (ghi > 0):
            continue
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            gm = gfun(mid)
            if (gm > 0) == (glo > 0):
                lo, glo = mid, gm
            else:
                hi, ghi = mid, gm
        cuts.append(0.5 * (lo + hi))
    cuts.append(b)
    inside, tube = [], []
    for lo, hi in zip(cuts, cuts[1:]):
        if hi <= lo:
            continue
        mid = 0.5 * (lo + hi)
        (inside if gfun(mid) > 0 else tube).append((mid, hi - lo))
    return inside, tube


def _split_cellular_1d(density: Density, w, cp: CellularParams, panels: int):
    """Nodes/lengths of the cellular part and the tube part of the support."""
    lo, hi = density.bounds()
    lo, hi = float(lo[0]), float(hi[0])
    edges = np.linspace(lo, hi, panels + 1)
    h = (hi - lo) / panels
    mids = edges[:-1] + 0.5 * h
    g_edges = winner_gap_batch(w, edges.reshape(-1, 1)) - cp.theta
    g_mids = winner_gap_batch(w, mids.reshape(-1, 1)) - cp.theta

    pos_e = g_edges > 0
    pure_in = pos_e[:-1] & pos_e[1:] & (g_mids > 0)
    pure_tube = ~pos_e[:-1] & ~pos_e[1:] & ~(g_mids > 0)
    mixed = ~(pure_in | pure_tube)

    in_nodes = [mids[pure_in]]
    in_lens = [np.full(int(pure_in.sum()), h)]
    tb_nodes = [mids[pure_tube]]
    tb_lens = [np.full(int(pure_tube.sum()), h)]

    if np.any(mixed):
        gfun = lambda x: winner_gap(w, np.array([x])) - cp.theta
        for i in np.nonzero(mixed)[0]:
            inside, tube = _refine_panel(gfun, edges[i], edges[i + 1], g_edges[i], g_edges[i + 1])
            if inside:
                in_nodes.append(np.array([m for m, _ in inside]))
                in_lens.append(np.array([l for _, l in inside]))
            if tube:
                tb_nodes.append(np.array([m for m, _ in tube]))
                tb_lens.append(np.array([l for _, l in tube]))

    return (
        np.concatenate(in_nodes),
        np.concatenate(in_lens),
        np.concatenate(tb_nodes),
        np.concatenate(tb_lens),
    )


def _cellular_weights(density: Density, w, cp: CellularParams, integ):
    """(V_in, wts_in, V_tube, wts_tube) on shared nodes / panels."""
    if isinstance(integ, Quadrature1D):
        ni, li, nt, lt = _split_cellular_1d(density, w, cp, integ.panels)
        Vi, Vt = ni.reshape(-1, 1), nt.reshape(-1, 1)
        return Vi, density.pdf(Vi) * li, Vt, density.pdf(Vt) * lt
    V, wts, _ = _plain_nodes(density, integ)
    inside = winner_gap_batch(w, V) > cp.theta
    return V[inside], wts[inside], V[~inside], wts[~inside]


# --- energy estimates ------------------------------------------------------


def estimate_energy(density: Density, w, spec, integ) -> float:
    """Estimate of the full energy."""
    V, wts, _ = _plain_nodes(density, integ)
    return float(wts @ _integrand_batch(w, V, spec))


def estimate_energy_cellular(density: Density, w, spec, cp: CellularParams, integ) -> float:
    """Energy with tube contributions removed (same panels as the full estimate)."""
    Vi, wi, _, _ = _cellular_weights(density, w, cp, integ)
    if Vi.shape[0] == 0:
        return 0.0
    return float(wi @ _integrand_batch(w, Vi, spec))


def tube_mass(density: Density, w, cp: CellularParams, integ) -> float:
    """Probability mass of the tubular manifold."""
    _, _, _, wt = _cellular_weights(density, w, cp, integ)
    return float(wt.sum())


@dataclass(frozen=True)
class EnergyReport:
    """Full and cellular energy on shared nodes; gap = energy - cellular >= 0."""

    eta: float
    theta: float
    energy: float
    cellular_energy: float
    gap: float
    tube_mass: float
    stderr_energy: float
    stderr_gap: float


def energy_report(density: Density, w, spec, cp: CellularParams, integ) -> EnergyReport:
    if isinstance(integ, MonteCarlo):
        V, wts, _ = _plain_nodes(density, integ)
        vals = _integrand_batch(w, V, spec)
        tube = winner_gap_batch(w, V) <= cp.theta
        n = vals.shape[0]
        energy = float(vals.mean())
        tube_vals = vals * tube
        gap = float(tube_vals.mean())
        se_e = float(vals.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        se_g = float(tube_vals.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return EnergyReport(cp.eta, cp.theta, energy, energy - gap, gap,
                            float(tube.mean()), se_e, se_g)
    Vi, wi, Vt, wt = _cellular_weights(density, w, cp, integ)
    cellular = float(wi @ _integrand_batch(w, Vi, spec)) if Vi.shape[0] else 0.0
    gap = float(wt @ _integrand_batch(w, Vt, spec)) if Vt.shape[0] else 0.0
    return EnergyReport(cp.eta, cp.theta, cellular + gap, cellular, gap,
                        float(wt.sum()), 0.0, 0.0)


def energy_gap_scan(density: Density, w, spec, etas, integ) -> list[EnergyReport]:
    """Reports for a descending list of tube widths, on shared nodes."""
    etas = [float(e) for e in etas]
    if any(e <= 0 for e in etas):
        raise ValueError("etas must be positive")
    if any(b > a for a, b in zip(etas, etas[1:])):
        raise ValueError("etas must be sorted in descending order")
    delta = density.diameter
    return [energy_report(density, w, spec, perturbation_bound(e, delta), integ) for e in etas]


# --- gradients -------------------------------------------------------------


def analytic_gradient(density: Density, w, spec, j: int, integ, cp: CellularParams | None = None) -> np.ndarray:
    """integral of P(v) psi_j(w, v) (w_j - v) dv, the linear-form gradient.

    With ``cp`` the integration is restricted to the cellular manifold,
    matching the domain of the finite-difference probe.
    """
    a = as_prototype_array(w)
    if not (1 <= j <= a.shape[0]):
        raise ValueError(f"prototype index {j} out of range 1..{a.shape[0]}")
    if cp is None:
        V, wts, _ = _plain_nodes(density, integ)
    else:
        V, wts, _, _ = _cellular_weights(density, a, cp, integ)
    if V.shape[0] == 0:
        return np.zeros(a.shape[1])
    psi_j = psi_batch(spec, a, V)[:, j - 1]
    return np.asarray((wts * psi_j) @ (a[j - 1] - V))


def finite_diff_gradient(density: Density, w, spec, cp: CellularParams, j: int, h: float, integ) -> np.ndarray:
    """Central differences of the cellular energy in the coordinates of w_j.

    Requires h < cp.nu so the neighborhood weights are frozen on the
    cellular manifold across the paired evaluations.
    """
    a = as_prototype_array(w)
    if not (1 <= j <= a.shape[0]):
        raise ValueError(f"prototype index {j} out of range 1..{a.shape[0]}")
    if h <= 0:
        raise ValueError("h must be positive")
    if h >= cp.nu:
        raise ValueError(f"h = {h} must be smaller than nu = {cp.nu}")
    grad = np.empty(a.shape[1])
    for c in range(a.shape[1]):
        wp = a.copy()
        wp[j - 1, c] += h
        ep = estimate_energy_cellular(density, wp, spec, cp, integ)
        wm = a.copy()
        wm[j - 1, c] -= h
        em = estimate_energy_cellular(density, wm, spec, cp, integ)
        grad[c] = (ep - em) / (2.0 * h)
    return grad


# --- invariance probes -----------------------------------------------------


def _heaviside_matrices(w, V) -> np.ndarray:
    sq = squared_distances_batch(w, V)
    return sq[:, :, None] - sq[:, None, :] >= 0


def invariance_probe(density: Density, w, cp: CellularParams, trials: int, stream: SeededStream) -> int:
    """Count Heaviside-matrix flips under perturbations smaller than nu.

    Data are rejection-sampled into the region where every pairwise
    squared-distance difference exceeds theta (the set on which the
    invariance bound applies to the full matrix, not only the winner's row).
    Each trial perturbs every prototype by an independent vector of norm
    below nu.  Returns the number of trials whose matrix changed.
    """
    a = as_prototype_array(w)
    n, d = a.shape
    rng = stream.fresh()
    pts = []
    have = 0
    attempts = 0
    while have < trials:
        batch = density.sample(rng, size=max(4 * trials, 1024))
        keep = batch[min_pairwise_gap_batch(a, batch) > cp.theta]
        pts.append(keep)
        have += keep.shape[0]
        attempts += 1
        if attempts > 1000 and have == 0:
            raise RuntimeError("rejection sampling found no cellular points; theta too large?")
    V = np.concatenate(pts)[:trials]

    direc = rng.normal(size=(trials, n, d))
    direc /= np.linalg.norm(direc, axis=2, keepdims=True)
    radii = cp.nu * (1.0 - 1e-12) * rng.random((trials, n, 1)) ** (1.0 / d)
    zetas = direc * radii

    violations = 0
    before = _heaviside_matrices(a, V)
    for t in range(trials):
        wp = a + zetas[t]
        after = _heaviside_matrices(wp, V[t : t + 1])[0]
        if not np.array_equal(before[t], after):
            violations += 1
    return violations


def adversarial_probe(density: Density, w, cp: CellularParams, stream: SeededStream) -> int:
    """One trial with |zeta| far above nu, built to flip a comparison.

    Moves the winner onto its nearest distinct neighbor, which turns a strict
    inequality into a tie; returns 1 when the Heaviside matrix changed.
    """
    a = as_prototype_array(w)
    if a.shape[0] < 2:
        raise ValueError("need at least two prototypes")
    rng = stream.fresh()
    v = None
    for _ in range(1000):
        batch = density.sample(rng, size=1024)
        keep = batch[min_pairwise_gap_batch(a, batch) > cp.theta]
        if keep.shape[0]:
            v = keep[0]
            break
    if v is None:
        raise RuntimeError("no cellular point found")
    sq = squared_distances_batch(a, v.reshape(1, -1))[0]
    p = int(np.argmin(sq))
    dist = np.linalg.norm(a - a[p], axis=1)
    dist[p] = np.inf
    r = int(np.argmin(dist))
    if not np.isfinite(dist[r]) or dist[r] == 0:
        raise ValueError("prototypes must contain two distinct points")
    wp = a.copy()
    wp[p] = a[r]
    before = _heaviside_matrices(a, v.reshape(1, -1))[0]
    after = _heaviside_matrices(wp, v.reshape(1, -1))[0]
    return int(not np.array_equal(before, after))
