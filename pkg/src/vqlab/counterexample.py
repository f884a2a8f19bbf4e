"""Non-differentiability of the hard competitive-learning energy.

Two prototypes on the line, symmetric about the origin, quantize a uniform
density on [lam, beta] whose left edge lam sits inside the tube around the
Voronoi boundary.  Shifting w1 to the right by zeta1 moves the boundary and
its tube; the resulting variation Delta(zeta1) of (energy - cellular energy)
has two different one-sided linear coefficients depending on whether the
shifted boundary zeta1 / 2 passes the density edge lam.  The distinct slopes
prove the energy is not differentiable there, hence not a potential, even
though it is the uniform limit of the differentiable cellular energies.

Here the tube is the geometric interval of width eta centered on the Voronoi
boundary (the construction's P1..P5 breakpoints), and ``delta_numeric`` is a
brute-force quadrature oracle that recomputes every weight pointwise from
Heaviside steps; ``delta_analytic`` evaluates the exact antiderivatives of
the unexpanded branch integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CounterexampleConfig:
    """w1 < 0 = -(w2), tube width eta, density edge lam in [0, eta/2], beta >> eta."""

    w1: float
    w2: float
    eta: float
    lam: float
    beta: float

    def __post_init__(self):
        if self.w1 >= 0:
            raise ValueError("w1 must be negative")
        if self.w2 != -self.w1:
            raise ValueError("w2 must equal -w1 (origin at the midpoint)")
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if not (0 <= self.lam <= self.eta / 2):
            raise ValueError("lam must lie in [0, eta/2]")
        if self.beta < 25 * self.eta:
            raise ValueError("beta must be at least 25 * eta")

    @property
    def p(self) -> float:
        """Uniform density height 1 / (beta - lam)."""
        return 1.0 / (self.beta - self.lam)

    def breakpoints(self, zeta1: float) -> tuple[float, float, float, float, float]:
        """P1 < P2 < 0 < P3 < P4 < P5 for a shift 0 < zeta1 < eta."""
        _check_zeta(self, zeta1)
        return (
            -self.eta / 2,
            -self.eta / 2 + zeta1 / 2,
            zeta1 / 2,
            self.eta / 2,
            self.eta / 2 + zeta1 / 2,
        )


def _check_zeta(cfg: CounterexampleConfig, zeta1: float) -> None:
    if not (0 < zeta1 < cfg.eta):
        raise ValueError(f"zeta1 must lie in (0, eta), got {zeta1}")


def delta_analytic(cfg: CounterexampleConfig, zeta1: float) -> float:
    """Exact tube-energy variation via closed-form antiderivatives.

    For zeta1 > 2 lam:
        (p/2) * int_lam^{P3} [(w1 + zeta1 - v)^2 - (w2 - v)^2] dv
      + (p/2) * int_{P4}^{P5} (w2 - v)^2 dv
    and only the second integral when zeta1 <= 2 lam.
    """
    _, _, p3, p4, p5 = cfg.breakpoints(zeta1)
    p = cfg.p
    out = (p / 6.0) * ((cfg.w2 - p4) ** 3 - (cfg.w2 - p5) ** 3)
    if zeta1 > 2 * cfg.lam:
        # (w1 + z - v)^2 - (w2 - v)^2 = a * (b - 2 v) with
        a = cfg.w1 + zeta1 - cfg.w2
        b = cfg.w1 + zeta1 + cfg.w2
        first = a * ((b * p3 - p3 * p3) - (b * cfg.lam - cfg.lam * cfg.lam))
        out += (p / 2.0) * first
    return out


def delta_numeric(cfg: CounterexampleConfig, zeta1: float, panels: int) -> float:
    """Brute-force quadrature oracle for the tube-energy variation.

    Integrates the pointwise integrand p/2 * [psi1 d1^2 + psi2 d2^2], with
    psi recomputed from Heaviside steps at every node, over the shifted tube
    minus the original tube, each clipped to the support [lam, beta].
    """
    _check_zeta(cfg, zeta1)
    p1, p2, _, p4, p5 = cfg.breakpoints(zeta1)
    shifted = _tube_integral(cfg, cfg.w1 + zeta1, p2, p5, panels)
    original = _tube_integral(cfg, cfg.w1, p1, p4, panels)
    return shifted - original


def _tube_integral(cfg: CounterexampleConfig, w1: float, lo: float, hi: float, panels: int) -> float:
    lo = max(lo, cfg.lam)
    hi = min(hi, cfg.beta)
    if hi <= lo:
        return 0.0
    h = (hi - lo) / panels
    v = lo + (np.arange(panels) + 0.5) * h
    d1 = (w1 - v) ** 2
    d2 = (cfg.w2 - v) ** 2
    psi1 = (d2 - d1 >= 0).astype(float)
    psi2 = (d1 - d2 >= 0).astype(float)
    return 0.5 * cfg.p * h * float(np.sum(psi1 * d1 + psi2 * d2))


def closed_form_slopes(cfg: CounterexampleConfig) -> tuple[float, float]:
    """The two one-sided linear coefficients of Delta around zeta1 = 0.

    L1 = (p/4) [2 (w1 - lam)^2 + (w2 - eta/2)^2 - (w1^2 + w2^2)] applies on
    the branch zeta1 > 2 lam, L2 = (p/4) (w2 - eta/2)^2 on zeta1 <= 2 lam.
    """
    p = cfg.p
    l2 = (p / 4.0) * (cfg.w2 - cfg.eta / 2.0) ** 2
    l1 = (p / 4.0) * (
        2.0 * (cfg.w1 - cfg.lam) ** 2
        + (cfg.w2 - cfg.eta / 2.0) ** 2
        - (cfg.w1**2 + cfg.w2**2)
    )
    return l1, l2


@dataclass(frozen=True)
class SlopeBreak:
    l1_hat: float
    l2_hat: float
    l1_closed: float
    l2_closed: float
    stderr: float
    distinct: bool
    break_at: float


def _branch_fit(z: np.ndarray, d: np.ndarray, with_constant: bool) -> tuple[float, float]:
    """Linear coefficient of a cubic fit and its standard error.

    Delta is an exact cubic on each branch, so fitting the full cubic basis
    recovers the linear coefficient up to quadrature noise (a polynomial-fit
    realization of Richardson extrapolation).
    """
    cols = [z, z**2, z**3]
    if with_constant:
        cols = [np.ones_like(z)] + cols
    X = np.column_stack(cols)
    coef, res, rank_, _ = np.linalg.lstsq(X, d, rcond=None)
    idx = 1 if with_constant else 0
    dof = z.shape[0] - X.shape[1]
    if dof > 0 and res.size:
        sigma2 = float(res[0]) / dof
        cov = sigma2 * np.linalg.inv(X.T @ X)
        se = math.sqrt(max(cov[idx, idx], 0.0))
    else:
        se = 0.0
    return float(coef[idx]), se


def slope_break(cfg: CounterexampleConfig, zeta1_grid, panels: int = 200_000) -> SlopeBreak:
    """Fit the one-sided slopes of Delta on a grid straddling 2 lam.

    With at least five grid points strictly on each side of 2 lam, both
    branch slopes are fitted from ``delta_numeric`` values and compared;
    ``distinct`` holds when they differ by more than five combined fit
    standard errors.  A grid confined to one branch yields equal slopes and
    ``distinct = False``.
    """
    z = np.sort(np.asarray(list(zeta1_grid), dtype=float))
    if z.size == 0:
        raise ValueError("zeta1 grid is empty")
    for x in z:
        _check_zeta(cfg, x)
    break_at = 2.0 * cfg.lam
    l1_closed, l2_closed = closed_form_slopes(cfg)
    below = z[z < break_at]
    above = z[z > break_at]
    d_all = np.array([delta_numeric(cfg, x, panels) for x in z])
    d_below = d_all[z < break_at]
    d_above = d_all[z > break_at]

    if below.size >= 5 and above.size >= 5:
        l2_hat, se2 = _branch_fit(below, d_below, with_constant=False)
        l1_hat, se1 = _branch_fit(above, d_above, with_constant=True)
        se = math.hypot(se1, se2)
        distinct = abs(l1_hat - l2_hat) > 5.0 * se
        return SlopeBreak(l1_hat, l2_hat, l1_closed, l2_closed, se, distinct, break_at)

    # single-branch regime: no break observable inside the grid
    with_constant = above.size > below.size
    slope, se = _branch_fit(z, d_all, with_constant=with_constant)
    return SlopeBreak(slope, slope, l1_closed, l2_closed, se, False, break_at)


def scan_rows(cfg: CounterexampleConfig, zeta1_grid, panels: int) -> list[dict]:
    """CSV-ready rows comparing the closed form with the quadrature oracle."""
    rows = []
    for z in sorted(float(x) for x in zeta1_grid):
        rows.append(
            {
                "zeta1": z,
                "delta_analytic": delta_analytic(cfg, z),
                "delta_numeric": delta_numeric(cfg, z, panels),
                "branch": 1 if z > 2 * cfg.lam else 2,
            }
        )
    return rows
