"""Experiment configuration file.

A single JSON document. Every key is optional and falls back to the
parameters of the measured experiment::

    {
      "inputs": {
        "squeezed": {"kind": "squeezed", "var_x_db": -1.8, "var_p_db": 5.1},
        "vacuum": {"kind": "vacuum"},
        "thermal": {"kind": "hot_squeezed", "var_x_db": 9.6, "var_p_db": 10.2}
      },
      "preparation_loss": 0.0,
      "detection_efficiency": [0.839, 0.780, 0.784],
      "detection_loss_band": [0.06, 0.22],
      "loss_grid": {"start": 0.0, "stop": 0.3, "num": 61},
      "phase_sigma_deg": {"start": 0.0, "stop": 10.0, "step": 0.25},
      "thermal_db": {"start": 0.0, "stop": 60.0, "num": 200},
      "fig3_squeezing_db": [10.0, 6.0],
      "fig3_losses": [0.2, 0.3, 0.4, 0.5, 0.6],
      "p_G": 0.75,
      "monte_carlo": {"n_samples": 100000, "n_runs": 100, "seed": 20120101},
      "gamma": null,
      "output_dir": "out"
    }

Grids are either explicit lists or ``{"start", "stop", "num"}`` (inclusive
linspace) or ``{"start", "stop", "step"}`` (inclusive arange).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import data
from .states import SingleModeSpec


class ConfigError(ValueError):
    pass


def parse_grid(spec, name: str) -> np.ndarray:
    if isinstance(spec, dict):
        try:
            start, stop = float(spec["start"]), float(spec["stop"])
            if "num" in spec:
                grid = np.linspace(start, stop, int(spec["num"]))
            else:
                step = float(spec["step"])
                if step <= 0:
                    raise ConfigError(f"{name}: step must be positive")
                count = int(round((stop - start) / step)) + 1
                grid = start + step * np.arange(count)
        except KeyError as exc:
            raise ConfigError(f"{name}: missing grid key {exc}") from None
    else:
        grid = np.asarray(spec, dtype=float).ravel()
    if grid.size == 0:
        raise ConfigError(f"{name}: grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ConfigError(f"{name}: grid must be strictly increasing")
    return grid


@dataclass
class MonteCarloConfig:
    n_samples: int = 100_000
    n_runs: int = 100
    seed: int = 20120101

    def __post_init__(self):
        if self.n_samples < 100:
            raise ConfigError("monte_carlo.n_samples must be at least 100")
        if self.n_runs < 1:
            raise ConfigError("monte_carlo.n_runs must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("monte_carlo.seed must be an unsigned 64-bit integer")


@dataclass
class ExperimentConfig:
    squeezed: SingleModeSpec = data.SQUEEZED_INPUT
    vacuum: SingleModeSpec = data.VACUUM_INPUT
    thermal: SingleModeSpec = data.HOT_SQUEEZED_INPUT
    preparation_loss: float = 0.0
    detection_efficiency: tuple = data.DETECTION_EFFICIENCY
    detection_loss_band: tuple = data.DETECTION_LOSS_BAND
    loss_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 0.3, 61))
    phase_sigma_deg: np.ndarray = field(default_factory=lambda: 0.25 * np.arange(41))
    thermal_db: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 60.0, 200))
    fig3_squeezing_db: tuple = (10.0, 6.0)
    fig3_losses: tuple = (0.2, 0.3, 0.4, 0.5, 0.6)
    p_G: float = 0.75
    monte_carlo: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    gamma: str | None = None
    output_dir: str = "out"

    def validate(self) -> "ExperimentConfig":
        if not 0 <= self.preparation_loss <= 1:
            raise ConfigError("preparation_loss must lie in [0, 1]")
        eta = np.asarray(self.detection_efficiency, dtype=float)
        if eta.shape != (3,) or np.any(eta <= 0) or np.any(eta > 1):
            raise ConfigError("detection_efficiency needs three values in (0, 1]")
        lo, hi = self.detection_loss_band
        if not 0 <= lo <= hi < 1:
            raise ConfigError("detection_loss_band must satisfy 0 <= lower <= upper < 1")
        if np.any(self.loss_grid < 0) or np.any(self.loss_grid >= 1):
            raise ConfigError("loss_grid values must lie in [0, 1)")
        if np.any(self.phase_sigma_deg < 0):
            raise ConfigError("phase_sigma_deg must be nonnegative")
        if not 0 <= self.p_G <= 1:
            raise ConfigError("p_G must lie in [0, 1]")
        if not self.fig3_squeezing_db or not self.fig3_losses:
            raise ConfigError("fig3_squeezing_db and fig3_losses must be nonempty")
        if any(not 0 <= x <= 1 for x in self.fig3_losses):
            raise ConfigError("fig3_losses must lie in [0, 1]")
        return self


def _spec(doc, name):
    try:
        return SingleModeSpec.from_json(doc)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"inputs.{name}: {exc}") from None


def from_dict(doc: dict, base_dir: Path | None = None) -> ExperimentConfig:
    known = {
        "inputs", "preparation_loss", "detection_efficiency", "detection_loss_band", "loss_grid",
        "phase_sigma_deg", "thermal_db", "fig3_squeezing_db", "fig3_losses", "p_G",
        "monte_carlo", "gamma", "output_dir",
    }
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = ExperimentConfig()
    try:
        inputs = doc.get("inputs", {})
        for name in ("squeezed", "vacuum", "thermal"):
            if name in inputs:
                setattr(cfg, name, _spec(inputs[name], name))
        for key in ("preparation_loss", "p_G"):
            if key in doc:
                setattr(cfg, key, float(doc[key]))
        for key in ("detection_efficiency", "detection_loss_band", "fig3_squeezing_db", "fig3_losses"):
            if key in doc:
                setattr(cfg, key, tuple(float(v) for v in doc[key]))
        for key in ("loss_grid", "phase_sigma_deg", "thermal_db"):
            if key in doc:
                setattr(cfg, key, parse_grid(doc[key], key))
        if "monte_carlo" in doc:
            cfg.monte_carlo = MonteCarloConfig(**doc["monte_carlo"])
        if doc.get("gamma") is not None:
            g = Path(doc["gamma"])
            cfg.gamma = str(g if g.is_absolute() or base_dir is None else base_dir / g)
        if "output_dir" in doc:
            cfg.output_dir = str(doc["output_dir"])
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def load(path) -> ExperimentConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    return from_dict(doc, path.parent)
