"""Stochastic adaptation loop: w_p <- w_p + alpha * psi_p(w, v) * (v - w_p).

All weights are evaluated against the pre-step prototypes, so the update is
simultaneous in p.  A trajectory is strictly sequential and fully determined
by (config, stream); independent runs should use disjoint streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import Density
from .geometry import as_prototype_array
from .neighborhoods import KMeansWinner, psi_vector
from .streams import SeededStream


@dataclass(frozen=True)
class Constant:
    alpha: float

    def __post_init__(self):
        _check_alpha(self.alpha)

    def alpha_at(self, t: int) -> float:
        return self.alpha


@dataclass(frozen=True)
class Linear:
    """Linear decay from alpha0 to alpha_final over horizon steps."""

    alpha0: float
    alpha_final: float
    horizon: int

    def __post_init__(self):
        _check_alpha(self.alpha0)
        _check_alpha(self.alpha_final)
        if self.alpha_final > self.alpha0:
            raise ValueError("schedule must be non-increasing")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")

    def alpha_at(self, t: int) -> float:
        frac = min(t / self.horizon, 1.0)
        return self.alpha0 + frac * (self.alpha_final - self.alpha0)


@dataclass(frozen=True)
class InverseTime:
    """alpha(t) = alpha0 * tau / (tau + t)."""

    alpha0: float
    tau: float

    def __post_init__(self):
        _check_alpha(self.alpha0)
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    def alpha_at(self, t: int) -> float:
        return self.alpha0 * self.tau / (self.tau + t)


Schedule = Constant | Linear | InverseTime


def _check_alpha(a: float) -> None:
    if not (0 < a <= 1):
        raise ValueError(f"alpha must lie in (0, 1], got {a}")


@dataclass(frozen=True)
class TrainRecord:
    iteration: int
    prototypes: np.ndarray
    energy: float | None = None


def adapt_step(w, v, spec, alpha: float) -> np.ndarray:
    """One simultaneous update of all prototypes toward the datum."""
    _check_alpha(alpha)
    a = as_prototype_array(w)
    v = np.atleast_1d(np.asarray(v, dtype=float))
    psi = psi_vector(spec, a, v)
    return a + alpha * psi[:, None] * (v - a)


def run(
    density: Density,
    w0,
    spec,
    schedule: Schedule,
    iterations: int,
    stream: SeededStream,
    snapshot_every: int = 0,
    energy_integrator=None,
) -> list[TrainRecord]:
    """Train for ``iterations`` steps; returns snapshots plus the final state.

    ``snapshot_every`` = 0 records only the initial and final prototypes.
    When an integrator is given, each record carries an energy estimate.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if snapshot_every < 0:
        raise ValueError("snapshot_every must be >= 0")
    w = as_prototype_array(w0).copy()
    samples = density.sample(stream.fresh(), size=iterations)
    fast = isinstance(spec, KMeansWinner)

    records = [_record(0, w, density, spec, energy_integrator)]
    for t in range(iterations):
        alpha = schedule.alpha_at(t)
        v = samples[t]
        if fast:
            diff = w - v
            p = int(np.argmin(np.einsum("ij,ij->i", diff, diff)))
            w[p] += alpha * (v - w[p])
        else:
            psi = psi_vector(spec, w, v)
            w += alpha * psi[:, None] * (v - w)
        if snapshot_every and (t + 1) % snapshot_every == 0 and (t + 1) != iterations:
            records.append(_record(t + 1, w, density, spec, energy_integrator))
    records.append(_record(iterations, w, density, spec, energy_integrator))
    return records


def _record(t, w, density, spec, energy_integrator) -> TrainRecord:
    energy = None
    if energy_integrator is not None:
        from .energy import estimate_energy

        energy = estimate_energy(density, w, spec, energy_integrator)
    return TrainRecord(iteration=t, prototypes=w.copy(), energy=energy)


def records_to_rows(records: list[TrainRecord]) -> list[dict]:
    """Flatten snapshots to CSV-ready rows: iteration, then w{p}_{axis}."""
    rows = []
    for rec in records:
        row = {"iteration": rec.iteration}
        for p, point in enumerate(rec.prototypes, start=1):
            for c, x in enumerate(np.atleast_1d(point)):
                row[f"w{p}_{c}"] = float(x)
        if rec.energy is not None:
            row["energy"] = rec.energy
        rows.append(row)
    return rows
