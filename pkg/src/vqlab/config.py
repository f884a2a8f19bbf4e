"""Experiment configuration: a single JSON file fully validated up front.

Every library parameter is reachable from a config field.  Parse errors
carry the dotted path of the offending field so CLI diagnostics can name it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from . import counterexample as cx
from . import density as dens
from . import energy as en
from . import neighborhoods as nb
from . import training as tr
from .streams import SeededStream


class ConfigError(Exception):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def load_config(path: str) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except FileNotFoundError:
        raise ConfigError(path, "config file not found")
    except json.JSONDecodeError as e:
        raise ConfigError(path, f"invalid JSON: {e}")


def config_hash(cfg: dict) -> str:
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _require(d: dict, key: str, path: str):
    if not isinstance(d, dict):
        raise ConfigError(path, "expected an object")
    if key not in d:
        raise ConfigError(f"{path}.{key}", "missing required field")
    return d[key]


def _number(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ConfigError(path, f"expected a number, got {x!r}")
    return float(x)


def _integer(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ConfigError(path, f"expected an integer, got {x!r}")
    return x


def _kind(d: dict, path: str, allowed: tuple[str, ...]) -> str:
    k = _require(d, "kind", path)
    if k not in allowed:
        raise ConfigError(f"{path}.kind", f"expected one of {allowed}, got {k!r}")
    return k


def _wrap(path: str, fn, *args):
    try:
        return fn(*args)
    except ConfigError:
        raise
    except (ValueError, TypeError) as e:
        raise ConfigError(path, str(e))


def parse_density(d, path: str = "density") -> dens.Density:
    k = _kind(d, path, ("uniform_box", "uniform_interval", "piecewise_uniform_1d", "gaussian_mixture_truncated"))
    if k == "uniform_box":
        return _wrap(path, dens.UniformBox, _require(d, "lo", path), _require(d, "hi", path))
    if k == "uniform_interval":
        return _wrap(path, dens.UniformInterval,
                     _number(_require(d, "a", path), f"{path}.a"),
                     _number(_require(d, "b", path), f"{path}.b"))
    if k == "piecewise_uniform_1d":
        return _wrap(path, dens.PiecewiseUniform1D, _require(d, "segments", path))
    return _wrap(path, dens.GaussianMixtureTruncated,
                 _require(d, "components", path), _require(d, "lo", path), _require(d, "hi", path))


def parse_graph(d, path: str) -> nb.NeighborGraph:
    k = _kind(d, path, ("chain", "grid2d", "explicit"))
    if k == "chain":
        return _wrap(path, nb.NeighborGraph.chain, _integer(_require(d, "n", path), f"{path}.n"))
    if k == "grid2d":
        return _wrap(path, nb.NeighborGraph.grid2d,
                     _integer(_require(d, "rows", path), f"{path}.rows"),
                     _integer(_require(d, "cols", path), f"{path}.cols"))
    return _wrap(path, nb.NeighborGraph.explicit,
                 _integer(_require(d, "n", path), f"{path}.n"),
                 [tuple(e) for e in _require(d, "edges", path)])


def parse_neighborhood(d, path: str = "neighborhood") -> nb.NeighborhoodSpec:
    k = _kind(d, path, ("kmeans_winner", "kmeans_all_winners", "som", "neural_gas",
                        "recruiting_ng", "recruiting_som"))
    if k == "kmeans_winner":
        return nb.KMeansWinner()
    if k == "kmeans_all_winners":
        return nb.KMeansAllWinners()
    if k == "som":
        return _wrap(path, nb.SOM,
                     parse_graph(_require(d, "graph", path), f"{path}.graph"),
                     _number(_require(d, "sigma", path), f"{path}.sigma"))
    if k == "neural_gas":
        return _wrap(path, nb.NeuralGas, _number(_require(d, "sigma", path), f"{path}.sigma"))
    if k == "recruiting_ng":
        return _wrap(path, nb.RecruitingNG,
                     _number(_require(d, "sigma", path), f"{path}.sigma"),
                     tuple(_require(d, "epsilons", path)))
    return _wrap(path, nb.RecruitingSOM,
                 parse_graph(_require(d, "graph", path), f"{path}.graph"),
                 tuple(_require(d, "sigmas", path)))


def parse_schedule(d, path: str = "schedule") -> tr.Schedule:
    k = _kind(d, path, ("constant", "linear", "inverse_time"))
    if k == "constant":
        return _wrap(path, tr.Constant, _number(_require(d, "alpha", path), f"{path}.alpha"))
    if k == "linear":
        return _wrap(path, tr.Linear,
                     _number(_require(d, "alpha0", path), f"{path}.alpha0"),
                     _number(_require(d, "alpha_final", path), f"{path}.alpha_final"),
                     _integer(_require(d, "horizon", path), f"{path}.horizon"))
    return _wrap(path, tr.InverseTime,
                 _number(_require(d, "alpha0", path), f"{path}.alpha0"),
                 _number(_require(d, "tau", path), f"{path}.tau"))


def parse_integrator(d, seed: int, path: str = "integrator") -> en.Integrator:
    k = _kind(d, path, ("monte_carlo", "quadrature1d", "quadrature2d"))
    if k == "monte_carlo":
        return _wrap(path, en.MonteCarlo,
                     _integer(_require(d, "samples", path), f"{path}.samples"),
                     SeededStream(seed, stream_id=1))
    if k == "quadrature1d":
        return _wrap(path, en.Quadrature1D, _integer(_require(d, "panels", path), f"{path}.panels"))
    return _wrap(path, en.Quadrature2D, _integer(_require(d, "panels", path), f"{path}.panels"))


def parse_prototypes(d, density: dens.Density, seed: int, path: str = "prototypes") -> np.ndarray:
    if not isinstance(d, dict):
        raise ConfigError(path, "expected an object")
    if "points" in d:
        pts = np.asarray(d["points"], dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[1] != density.dim:
            raise ConfigError(f"{path}.points", f"expected points of dimension {density.dim}")
        return pts
    if "random" in d:
        count = _integer(d["random"], f"{path}.random")
        if count < 1:
            raise ConfigError(f"{path}.random", "need at least one prototype")
        return density.sample(SeededStream(seed, stream_id=2).fresh(), size=count)
    raise ConfigError(path, "expected either 'points' or 'random'")


def parse_counterexample(d, path: str = "counterexample") -> cx.CounterexampleConfig:
    return _wrap(path, cx.CounterexampleConfig,
                 _number(_require(d, "w1", path), f"{path}.w1"),
                 _number(_require(d, "w2", path), f"{path}.w2"),
                 _number(_require(d, "eta", path), f"{path}.eta"),
                 _number(_require(d, "lambda", path), f"{path}.lambda"),
                 _number(_require(d, "beta", path), f"{path}.beta"))


def parse_etas(d, path: str = "etas") -> list[float]:
    if not isinstance(d, list) or not d:
        raise ConfigError(path, "expected a nonempty list of tube widths")
    etas = [_number(x, f"{path}[{i}]") for i, x in enumerate(d)]
    if any(e <= 0 for e in etas):
        raise ConfigError(path, "tube widths must be positive")
    if any(b > a for a, b in zip(etas, etas[1:])):
        raise ConfigError(path, "tube widths must be sorted in descending order")
    return etas


def get_seed(cfg: dict, override: int | None = None) -> int:
    if override is not None:
        return override
    seed = cfg.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed", "expected a nonnegative integer")
    return seed
