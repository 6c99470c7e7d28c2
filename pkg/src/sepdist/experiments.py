"""End-to-end workflows built from the library modules.

These are the computations behind the command-line subcommands; they return
plain data so tests can check them without touching the filesystem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import compensation, network
from .states import SingleModeSpec, apply_preparation_loss, make_state
from .symplectic import covariance, is_physical, is_separable, min_symplectic_eigenvalue, ppt_values

SUCCESS = "separable-carrier distribution succeeded"
FAILURE = "separable-carrier distribution failed"

#: analytic loss above which thermal noise can make C|AB separable
LOSS_THRESHOLD = 1 / 3


# -- thermal-noise sweep ------------------------------------------------------


def ideal_state(squeezing_db: float, loss: float, thermal_db: float) -> np.ndarray:
    """Three-mode state from a lossy pure squeezed state and a symmetric thermal state."""
    sq = apply_preparation_loss(make_state(SingleModeSpec.pure_squeezed(squeezing_db)), loss)
    return network.prepare_three_mode(sq, SingleModeSpec.vacuum(), SingleModeSpec.thermal(thermal_db))


def ppt_vs_thermal(squeezing_db: float, loss: float, thermal_db) -> np.ndarray:
    """PPT values (A, B, C) for each thermal noise power; shape ``len(thermal_db) x 3``."""
    return np.array([ppt_values(ideal_state(squeezing_db, loss, t)) for t in thermal_db])


def thermal_crossing(squeezing_db: float, loss: float, thermal_db, xtol: float = 1e-9):
    """Thermal power (dB) where PPT_C first reaches 1, or ``None`` if it never does on the grid."""
    grid = np.asarray(thermal_db, dtype=float)

    def excess(t):
        return ppt_values(ideal_state(squeezing_db, loss, t))[network.MODE_C] - 1

    prev = None
    for t in grid:
        e = excess(t)
        if is_separable(e + 1):
            if prev is None or e <= 0:
                return float(t)
            return float(brentq(excess, prev, t, xtol=xtol))
        prev = t
    return None


def crossing_exists(squeezing_db: float, loss: float, thermal_db) -> bool:
    """Whether PPT_C reaches 1 anywhere on the thermal grid (largest powers are tried first)."""
    grid = np.asarray(thermal_db, dtype=float)[::-1]
    return any(is_separable(ppt_values(ideal_state(squeezing_db, loss, t))[network.MODE_C]) for t in grid)


def loss_threshold(squeezing_db: float, thermal_db, tol: float = 1e-4) -> float:
    """Smallest preparation loss for which PPT_C reaches 1 somewhere on the thermal grid."""
    lo, hi = 0.0, 1.0
    if crossing_exists(squeezing_db, lo, thermal_db):
        return lo
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if crossing_exists(squeezing_db, mid, thermal_db):
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2


@dataclass
class Fig3Result:
    thermal_db: np.ndarray
    series: dict  # (squeezing_db, loss) -> ppt array (n x 3)
    crossings: dict  # (squeezing_db, loss) -> dB or None
    threshold: dict  # squeezing_db -> loss threshold

    def header(self):
        cols = ["thermal_db"]
        cols += [f"ppt_C_sq{sq:g}dB_loss{loss:g}" for sq, loss in self.series]
        return cols

    def rows(self):
        for i, t in enumerate(self.thermal_db):
            yield [float(t)] + [float(v[i, network.MODE_C]) for v in self.series.values()]

    def max_bc_asymmetry(self) -> float:
        return max(float(np.max(np.abs(v[:, 1] - v[:, 2]))) for v in self.series.values())


def fig3(squeezing_db, losses, thermal_db) -> Fig3Result:
    grid = np.asarray(thermal_db, dtype=float)
    series, crossings, threshold = {}, {}, {}
    for sq in squeezing_db:
        for loss in losses:
            series[(sq, loss)] = ppt_vs_thermal(sq, loss, grid)
            crossings[(sq, loss)] = thermal_crossing(sq, loss, grid)
        threshold[sq] = loss_threshold(sq, grid)
    return Fig3Result(grid, series, crossings, threshold)


# -- protocol -----------------------------------------------------------------


@dataclass
class ProtocolReport:
    ppt: tuple
    mu0: float
    physical: bool
    phi: float
    duan: float
    gamma: np.ndarray = field(repr=False)

    @property
    def class_iii(self) -> bool:
        a, b, c = self.ppt
        return (not is_separable(a)) and is_separable(b) and is_separable(c)

    @property
    def success(self) -> bool:
        return self.physical and self.class_iii and self.duan < 4

    @property
    def verdict(self) -> str:
        return SUCCESS if self.success else FAILURE

    def to_json(self) -> dict:
        doc = {f"ppt_{lab}": float(v) for lab, v in zip(network.LABELS, self.ppt)}
        doc.update(
            separable={lab: is_separable(v) for lab, v in zip(network.LABELS, self.ppt)},
            mu0=float(self.mu0),
            physical=bool(self.physical),
            phi_deg=math.degrees(self.phi),
            duan=float(self.duan),
            verdict=self.verdict,
        )
        return doc


def run_protocol(gamma_abc) -> ProtocolReport:
    g = covariance(gamma_abc, 3)
    phi, duan = network.optimize_distribution_phase(g)
    return ProtocolReport(ppt_values(g), min_symplectic_eigenvalue(g), is_physical(g), phi, duan, g)


# -- detection loss -----------------------------------------------------------


def loss_band_summary(rows, band) -> dict:
    lo, hi = band
    inside = [r for r in rows if lo - 1e-12 <= r.loss <= hi + 1e-12]
    if not inside:
        return {"band": list(band), "rows": 0}
    return {
        "band": list(band),
        "rows": len(inside),
        "max_muA": max(r.mu[0] for r in inside),
        "min_muB": min(r.mu[1] for r in inside),
        "min_muC": min(r.mu[2] for r in inside),
        "all_physical": all(r.physical for r in inside),
    }


# -- phase noise --------------------------------------------------------------


@dataclass
class FigS2Result:
    plain: compensation.PhaseSweep
    degauss: compensation.PhaseSweep
    p_G: float

    header = ("sigma_deg", "mu0", "muA", "min_muB_muC", "min_muB_muC_degauss")

    def rows(self):
        for a, b in zip(self.plain.rows, self.degauss.rows):
            yield a.csv_row() + [b.min_bc]


def figs2(gamma_m, eta, sigma_deg, p_G: float) -> FigS2Result:
    """Remove detection loss, then sweep the phase-noise compensation with and without de-Gaussification."""
    gamma_l = compensation.invert_loss(gamma_m, eta)
    grid = np.radians(np.asarray(sigma_deg, dtype=float))
    plain = compensation.phase_noise_sweep(gamma_l, grid, require_crossing=False)
    degauss = compensation.phase_noise_sweep(gamma_l, grid, p_G=p_G, require_crossing=False)
    return FigS2Result(plain, degauss, p_G)
