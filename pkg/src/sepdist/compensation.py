"""Imperfection channels between state preparation and detection, and their inverses.

Three effects are modelled on the covariance level:

* inefficient homodyne detection: a pure-loss channel per mode;
* phase jitter between signal and local oscillator: independent zero-mean
  Gaussian phase shifts per mode, averaged in closed form;
* non-Gaussian hot-squeezing modulation: bounded by keeping only a fraction
  ``p_G`` of the two largest input variances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, DimensionMismatch, NoCrossing, NotPositiveDefinite, ZeroEfficiency
from .symplectic import (
    covariance,
    is_physical,
    local_blocks,
    min_symplectic_eigenvalue,
    n_modes,
    ppt_values,
    symplectic_form,
)

DEGENERACY_TOL = 1e-6
#: bisection tolerance on the phase-noise threshold, radians
THRESHOLD_TOL = 1e-4


def _efficiencies(eta, n: int) -> np.ndarray:
    eta = np.asarray(eta, dtype=float).ravel()
    if eta.shape != (n,):
        raise DimensionMismatch(f"need {n} efficiencies, got {eta.size}")
    if np.any(eta > 1) or np.any(eta < 0) or not np.all(np.isfinite(eta)):
        raise ValueError(f"efficiencies must lie in (0, 1], got {eta}")
    return eta


def apply_loss(gamma, eta) -> np.ndarray:
    """Per-mode pure loss: ``S gamma S^T + I - S S^T`` with ``S = diag(sqrt(eta))``."""
    g = covariance(gamma)
    eta = _efficiencies(eta, n_modes(g))
    if np.any(eta <= 0):
        raise ValueError("efficiencies must be strictly positive")
    s = np.repeat(np.sqrt(eta), 2)
    return g * np.outer(s, s) + np.diag(1 - s**2)


def invert_loss(gamma, eta) -> np.ndarray:
    """Undo :func:`apply_loss`. The result may be unphysical; check with ``is_physical``."""
    g = covariance(gamma)
    eta = _efficiencies(eta, n_modes(g))
    if np.any(eta <= 0):
        raise ZeroEfficiency("cannot invert a channel with zero efficiency")
    s = np.repeat(np.sqrt(eta), 2)
    return (g - np.diag(1 - s**2)) / np.outer(s, s)


@dataclass(frozen=True)
class LossRow:
    loss: float
    mu: tuple
    physical: bool

    def csv_row(self):
        return [self.loss, *self.mu, int(self.physical)]


LOSS_HEADER = ("loss", "muA", "muB", "muC", "physical")


def loss_sweep(gamma_m, loss_grid) -> list[LossRow]:
    """PPT values after removing a uniform detection loss from every mode.

    Rows whose loss-corrected matrix violates the uncertainty relation are
    kept and flagged; if the corrected matrix is not even positive definite
    the PPT values are NaN.
    """
    g = covariance(gamma_m)
    n = n_modes(g)
    rows = []
    for loss in loss_grid:
        if not 0 <= loss < 1:
            raise ValueError(f"loss {loss} outside [0, 1)")
        corrected = invert_loss(g, np.full(n, 1.0 - loss))
        try:
            mu = ppt_values(corrected)
        except NotPositiveDefinite:
            mu = (math.nan,) * n
        rows.append(LossRow(float(loss), mu, is_physical(corrected)))
    return rows


def apply_phase_noise(gamma, sigma: float) -> np.ndarray:
    r"""Average of ``S(phi) gamma S(phi)^T`` over independent Gaussian phases.

    .. math::
        e^{-\sigma^2}\gamma + \tfrac{(1-e^{-\sigma^2})^2}{2} D(\gamma)
        + \tfrac{1-e^{-2\sigma^2}}{2} J D(\gamma) J^T

    where ``D`` keeps only the single-mode 2x2 blocks.
    """
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    g = covariance(gamma)
    J = symplectic_form(n_modes(g))
    d = local_blocks(g)
    e1 = math.exp(-(sigma**2))
    e2 = math.exp(-2 * sigma**2)
    return covariance(e1 * g + (1 - e1) ** 2 / 2 * d + (1 - e2) / 2 * J @ d @ J.T)


def invert_phase_noise(gamma, sigma: float) -> np.ndarray:
    """Covariance before phase jitter of strength ``sigma`` (radians).

    Exact inverse of :func:`apply_phase_noise`; large ``sigma`` can yield an
    unphysical or indefinite matrix.
    """
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    g = covariance(gamma)
    J = symplectic_form(n_modes(g))
    d = local_blocks(g)
    e1 = math.exp(sigma**2)
    e2 = math.exp(2 * sigma**2)
    return covariance(e1 * g + (e1 - 1) ** 2 / 2 * d + (1 - e2) / 2 * J @ d @ J.T)


def degauss_hot_squeezing(gamma, p_G: float) -> np.ndarray:
    """Scale the two largest eigenvalues of ``gamma`` by ``p_G`` in its own eigenbasis.

    The two largest variances are attributed to the hot-squeezed input;
    both are scaled because the modulated one cannot be told apart reliably.
    """
    if not 0 <= p_G <= 1:
        raise ValueError("p_G must lie in [0, 1]")
    g = covariance(gamma)
    lam, O = np.linalg.eigh(g)
    if len(lam) < 3:
        raise DimensionMismatch("need at least two modes")
    if lam[-2] - lam[-3] < DEGENERACY_TOL:
        raise DegenerateSpectrum("cannot single out the two largest eigenvalues")
    lam = lam.copy()
    lam[-2:] *= p_G
    return covariance(O @ np.diag(lam) @ O.T)


PHASE_HEADER = ("sigma_deg", "mu0", "muA", "min_muB_muC")


@dataclass(frozen=True)
class PhaseRow:
    sigma: float
    mu0: float
    mu: tuple

    @property
    def sigma_deg(self) -> float:
        return math.degrees(self.sigma)

    @property
    def min_bc(self) -> float:
        return min(self.mu[1:])

    def csv_row(self):
        return [self.sigma_deg, self.mu0, self.mu[0], self.min_bc]


@dataclass(frozen=True)
class PhaseSweep:
    rows: list
    threshold: float | None

    @property
    def threshold_deg(self):
        return None if self.threshold is None else math.degrees(self.threshold)


def _phase_row(gamma_l, sigma: float, p_G: float) -> PhaseRow:
    gk = invert_phase_noise(gamma_l, sigma)
    mu0 = min_symplectic_eigenvalue(gk)
    if p_G < 1:
        gk = degauss_hot_squeezing(gk, p_G)
    return PhaseRow(float(sigma), mu0, ppt_values(gk))


def phase_noise_sweep(gamma_l, sigma_grid, p_G: float = 1.0, tol: float = THRESHOLD_TOL,
                      require_crossing: bool = True) -> PhaseSweep:
    """Undo phase jitter of increasing strength and track the PPT values.

    For every ``sigma`` (radians) the pre-jitter matrix is reconstructed; its
    smallest symplectic eigenvalue and the three PPT values are recorded. If
    ``p_G < 1`` the PPT values are taken after :func:`degauss_hot_squeezing`.
    The threshold where ``min(muB, muC)`` first falls below one is bisected
    between the bracketing grid points.

    Raises:
        NoCrossing: if ``min(muB, muC)`` stays above one over the whole grid
            and ``require_crossing`` is set.
    """
    grid = np.asarray(sigma_grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("sigma grid must be nonempty and strictly increasing")
    rows = [_phase_row(gamma_l, s, p_G) for s in grid]

    threshold = None
    for lo, hi in zip(rows, rows[1:]):
        if lo.min_bc >= 1 > hi.min_bc:
            a, b = lo.sigma, hi.sigma
            while b - a > tol:
                m = (a + b) / 2
                if _phase_row(gamma_l, m, p_G).min_bc >= 1:
                    a = m
                else:
                    b = m
            threshold = (a + b) / 2
            break
    if threshold is None and rows[0].min_bc < 1:
        threshold = rows[0].sigma
    if threshold is None and require_crossing:
        raise NoCrossing("min(muB, muC) stays above 1 over the whole sigma grid")
    return PhaseSweep(rows, threshold)
