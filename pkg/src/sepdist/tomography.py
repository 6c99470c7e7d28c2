"""Simulated three-detector homodyne tomography.

Each detector records ``X cos(theta) + P sin(theta)`` of its mode. Six
detector settings suffice to fill all 21 independent entries of a three-mode
covariance matrix:

===  =========  =========  =========
 #   A          B          C
===  =========  =========  =========
 1   X          X          X
 2   P          P          P
 3   P          X          X
 4   X          P          X
 5   X          X          P
 6   (X+P)/√2   (X+P)/√2   (X+P)/√2
===  =========  =========  =========
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, InsufficientSamples, MissingSetting, NotPositiveDefinite
from .symplectic import covariance, ppt_values

N_MODES = 3
MIN_SAMPLES = 100
CLIP_TOL = 1e-10

_X, _D, _P = 0.0, math.pi / 4, math.pi / 2


@dataclass(frozen=True)
class MeasurementSetting:
    angles: tuple

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles)
        if len(angles) != N_MODES:
            raise ValueError("a setting holds one angle per mode")
        object.__setattr__(self, "angles", angles)

    def directions(self) -> np.ndarray:
        """3 x 6 matrix whose rows pick the measured quadrature of each mode."""
        U = np.zeros((N_MODES, 2 * N_MODES))
        for j, th in enumerate(self.angles):
            U[j, 2 * j] = math.cos(th)
            U[j, 2 * j + 1] = math.sin(th)
        return U


SETTINGS = (
    MeasurementSetting((_X, _X, _X)),
    MeasurementSetting((_P, _P, _P)),
    MeasurementSetting((_P, _X, _X)),
    MeasurementSetting((_X, _P, _X)),
    MeasurementSetting((_X, _X, _P)),
    MeasurementSetting((_D, _D, _D)),
)


def setting_index(setting: MeasurementSetting) -> int:
    """Position of ``setting`` in :data:`SETTINGS` (0-based)."""
    for i, s in enumerate(SETTINGS):
        if np.allclose(s.angles, setting.angles, atol=1e-12):
            return i
    raise MissingSetting(f"{setting.angles} is not one of the six tomography settings")


def projected_covariance(gamma, setting: MeasurementSetting) -> np.ndarray:
    """Exact 3x3 covariance of the quadratures recorded under ``setting``."""
    g = covariance(gamma, N_MODES)
    U = setting.directions()
    return U @ g @ U.T


def population_moments(gamma) -> dict:
    return {i: projected_covariance(gamma, s) for i, s in enumerate(SETTINGS)}


@dataclass
class QuadratureSampleBlock:
    setting: MeasurementSetting
    samples: np.ndarray
    seed: object = None

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2 or self.samples.shape[1] != N_MODES:
            raise DimensionMismatch("samples must be an n x 3 array")
        if self.n < 2:
            raise InsufficientSamples("need at least two samples")

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    def second_moments(self) -> np.ndarray:
        """Covariance with known zero mean (denominator n)."""
        x = self.samples
        return x.T @ x / self.n

    def mean_is_consistent(self, n_se: float = 5.0) -> bool:
        x = self.samples
        se = np.sqrt(np.mean(x**2, axis=0) / self.n)
        return bool(np.all(np.abs(x.mean(axis=0)) <= n_se * se))

    def save(self, path) -> None:
        """Write ``xA,xB,xC`` CSV plus a ``.json`` sidecar with the setting and seed."""
        path = Path(path)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["xA", "xB", "xC"])
            w.writerows(self.samples.tolist())
        sidecar = {
            "setting": setting_index(self.setting) + 1,
            "angles_rad": list(self.setting.angles),
            "n": self.n,
            "seed": self.seed,
        }
        path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "QuadratureSampleBlock":
        path = Path(path)
        meta = json.loads(path.with_suffix(".json").read_text())
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(MeasurementSetting(meta["angles_rad"]), data, meta.get("seed"))


def sample_block(gamma, setting: MeasurementSetting, n: int, seed=None) -> QuadratureSampleBlock:
    """Draw ``n`` zero-mean Gaussian samples of the three measured quadratures.

    The sampling factor is the symmetric square root of the projected
    covariance; eigenvalues down to ``-CLIP_TOL`` are clipped to zero.
    """
    if n < 2:
        raise InsufficientSamples("need at least two samples")
    C = projected_covariance(gamma, setting)
    w, V = np.linalg.eigh(C)
    if w[0] < -CLIP_TOL:
        raise NotPositiveDefinite(f"projected covariance has eigenvalue {w[0]:.3g}")
    root = (V * np.sqrt(np.clip(w, 0, None))) @ V.T
    z = np.random.default_rng(seed).standard_normal((n, N_MODES))
    seed_info = seed if isinstance(seed, (int, type(None))) else None
    return QuadratureSampleBlock(setting, z @ root, seed_info)


@dataclass(frozen=True)
class ReconstructionResult:
    gamma_hat: np.ndarray
    std_errors: np.ndarray


def _gaussian_se(C: np.ndarray, i: int, j: int, n: int) -> float:
    # var of the mean of x_i x_j for zero-mean Gaussian data
    return math.sqrt((C[i, i] * C[j, j] + C[i, j] ** 2) / n)


def reconstruct_from_moments(moments: dict, n=None) -> ReconstructionResult:
    """Assemble the 6x6 covariance from the six 3x3 setting covariances.

    Args:
        moments (dict): setting index (0-5) -> 3x3 covariance of the recorded quadratures.
        n (int or dict, optional): samples per setting; enables standard errors,
            otherwise they are zero.
    """
    missing = [i for i in range(len(SETTINGS)) if i not in moments]
    if missing:
        raise MissingSetting(f"settings {[i + 1 for i in missing]} missing")
    M = {i: np.asarray(moments[i], dtype=float) for i in range(len(SETTINGS))}
    counts = n if isinstance(n, dict) else {i: n for i in M}

    def se(i, a, b):
        return 0.0 if counts[i] is None else _gaussian_se(M[i], a, b, counts[i])

    g = np.zeros((6, 6))
    err = np.zeros((6, 6))

    def put(r, c, value, e):
        g[r, c] = g[c, r] = value
        err[r, c] = err[c, r] = e

    for j in range(N_MODES):
        put(2 * j, 2 * j, M[0][j, j], se(0, j, j))
        put(2 * j + 1, 2 * j + 1, M[1][j, j], se(1, j, j))
        for k in range(j + 1, N_MODES):
            put(2 * j, 2 * k, M[0][j, k], se(0, j, k))
            put(2 * j + 1, 2 * k + 1, M[1][j, k], se(1, j, k))
        # settings 3, 4, 5 put P on mode j and X on the others
        for k in range(N_MODES):
            if k != j:
                put(2 * j + 1, 2 * k, M[2 + j][j, k], se(2 + j, j, k))

    # (X+P)/sqrt2 has variance (VarX + VarP)/2 + Cov(X, P)
    for j in range(N_MODES):
        vx, vp = g[2 * j, 2 * j], g[2 * j + 1, 2 * j + 1]
        e = math.sqrt(se(5, j, j) ** 2 + (err[2 * j, 2 * j] ** 2 + err[2 * j + 1, 2 * j + 1] ** 2) / 4)
        put(2 * j, 2 * j + 1, M[5][j, j] - (vx + vp) / 2, e)
    return ReconstructionResult(g, err)


def reconstruct(blocks) -> ReconstructionResult:
    """Covariance estimate from one sample block per tomography setting."""
    by_index = {}
    for b in blocks:
        by_index[setting_index(b.setting)] = b
    missing = [i + 1 for i in range(len(SETTINGS)) if i not in by_index]
    if missing:
        raise MissingSetting(f"settings {missing} missing")
    for b in by_index.values():
        if b.n < MIN_SAMPLES:
            raise InsufficientSamples(f"{b.n} samples < {MIN_SAMPLES}")
    moments = {i: b.second_moments() for i, b in by_index.items()}
    return reconstruct_from_moments(moments, {i: b.n for i, b in by_index.items()})


def simulate_tomography(gamma, n: int, seed) -> list:
    """One block per setting, seeded from independent children of ``seed``."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [sample_block(gamma, s, n, child) for s, child in zip(SETTINGS, ss.spawn(len(SETTINGS)))]


def run_seed(master_seed: int, run: int) -> np.random.SeedSequence:
    """Seed of Monte Carlo run ``run``; depends only on (master seed, run index)."""
    return np.random.SeedSequence(master_seed, spawn_key=(run,))


def _one_run(args):
    gamma, n, master_seed, run = args
    est = reconstruct(simulate_tomography(gamma, n, run_seed(master_seed, run)))
    return ppt_values(est.gamma_hat)


@dataclass(frozen=True)
class MonteCarloResult:
    mu: np.ndarray  # n_runs x 3
    n_samples: int
    n_runs: int
    seed: int

    @property
    def mean(self) -> np.ndarray:
        return np.array([math.fsum(col) / len(col) for col in self.mu.T])

    @property
    def std(self) -> np.ndarray:
        if self.n_runs < 2:
            return np.zeros(self.mu.shape[1])
        m = self.mean
        return np.array(
            [math.sqrt(math.fsum((col - c) ** 2) / (len(col) - 1)) for col, c in zip(self.mu.T, m)]
        )

    def to_json(self) -> dict:
        doc = {}
        for label, m, s in zip("ABC", self.mean, self.std):
            doc[f"mu{label}"] = {"mean": float(m), "std": float(s)}
        doc.update(n_samples=self.n_samples, n_runs=self.n_runs, seed=self.seed)
        return doc


def monte_carlo_ppt(gamma_true, n_samples: int, n_runs: int, seed: int, workers: int = 1) -> MonteCarloResult:
    """Repeat simulated tomography and collect the spread of the three PPT values.

    Every run draws its own six sample blocks, reconstructs the covariance
    matrix and evaluates the PPT values. Runs are seeded independently so the
    result does not depend on ``workers``.
    """
    g = covariance(gamma_true, N_MODES)
    jobs = [(g, n_samples, seed, r) for r in range(n_runs)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            mus = list(pool.map(_one_run, jobs))
    else:
        mus = [_one_run(j) for j in jobs]
    return MonteCarloResult(np.array(mus, dtype=float).reshape(n_runs, N_MODES), n_samples, n_runs, seed)
