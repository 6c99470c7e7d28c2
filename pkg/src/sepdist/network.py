"""Symplectic circuit algebra and the three-mode distribution circuit.

Mode labels are fixed for the whole package: mode 0 is A, 1 is B, 2 is C.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import block_diag

from .errors import DimensionMismatch, IndexOutOfRange, TransmittanceOutOfRange
from .states import SingleModeSpec, make_state
from .symplectic import _check_mode, covariance, n_modes

MODE_A, MODE_B, MODE_C = 0, 1, 2
LABELS = ("A", "B", "C")

BALANCED = 0.5
#: coarse grid for the distribution phase scan
PHASE_SCAN_POINTS = 360
PHASE_TOL = 1e-6
_INVPHI = (math.sqrt(5) - 1) / 2


def rotation(phi: float) -> np.ndarray:
    """``R(phi)`` acting on ``(X, P)``: ``X' = X cos + P sin``, ``P' = P cos - X sin``."""
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, s], [-s, c]])


def phase_shift(phi: float, mode: int, n: int) -> np.ndarray:
    _check_mode(mode, n)
    S = np.eye(2 * n)
    S[2 * mode : 2 * mode + 2, 2 * mode : 2 * mode + 2] = rotation(phi)
    return S


def local_rotations(phis) -> np.ndarray:
    """Independent phase shift on every mode, ``R(phi_0) + R(phi_1) + ...``."""
    return block_diag(*(rotation(p) for p in phis))


def beamsplitter(t: float, i: int, j: int, n: int) -> np.ndarray:
    """Beam splitter of transmittance ``t`` between modes ``i`` and ``j``.

    ``out_i = sqrt(t) in_i + sqrt(1-t) in_j`` and
    ``out_j = sqrt(1-t) in_i - sqrt(t) in_j``, identically on X and P.
    At ``t = 1`` mode ``j`` picks up a sign flip (a pi phase shift).
    """
    _check_mode(i, n)
    _check_mode(j, n)
    if i == j:
        raise IndexOutOfRange("beam splitter needs two distinct modes")
    if not 0 <= t <= 1:
        raise TransmittanceOutOfRange(f"transmittance {t} outside [0, 1]")
    a, b = math.sqrt(t), math.sqrt(1 - t)
    S = np.eye(2 * n)
    for q in (0, 1):
        u, v = 2 * i + q, 2 * j + q
        S[u, u], S[u, v] = a, b
        S[v, u], S[v, v] = b, -a
    return S


def transform(gamma, S) -> np.ndarray:
    """Apply a symplectic map: ``S gamma S^T``."""
    g = covariance(gamma)
    S = np.asarray(S, dtype=float)
    if S.shape != g.shape:
        raise DimensionMismatch(f"map {S.shape} does not fit covariance {g.shape}")
    return covariance(S @ g @ S.T)


def tensor(*gammas) -> np.ndarray:
    """Block-diagonal composition of independent states."""
    return block_diag(*(covariance(g) for g in gammas))


def trace_out(gamma, mode: int) -> np.ndarray:
    """Marginal state with ``mode`` discarded."""
    g = covariance(gamma)
    n = n_modes(g)
    if n < 2:
        raise IndexOutOfRange("cannot trace out the only mode")
    _check_mode(mode, n)
    keep = [q for q in range(2 * n) if q // 2 != mode]
    return g[np.ix_(keep, keep)]


def prepare_three_mode(
    squeezed: SingleModeSpec | np.ndarray,
    vacuum: SingleModeSpec | np.ndarray,
    thermal: SingleModeSpec | np.ndarray,
) -> np.ndarray:
    """Three-mode state (A, B, C) from a squeezed, a vacuum and a thermal input.

    The squeezed state (mode 0) and the vacuum (mode 1) meet at the first
    balanced beam splitter, vacuum on its first port. Mode 0 leaves as A.
    Mode 1 then meets the thermal state (mode 2) at the second balanced beam
    splitter and the outputs are B and C.

    The port assignment at the first splitter fixes the sign of the A-B'
    correlations after distribution. With this choice an amplitude-squeezed
    input gives ``X_A ~ X_B'`` and ``P_A ~ -P_B'``, which is the
    combination the unit-gain Duan witness tests.

    Inputs may be specs or 2x2 covariance matrices.
    """
    blocks = [make_state(s) if isinstance(s, SingleModeSpec) else covariance(s, 1) for s in (squeezed, vacuum, thermal)]
    g = tensor(*blocks)
    g = transform(g, beamsplitter(BALANCED, MODE_B, MODE_A, 3))
    g = transform(g, beamsplitter(BALANCED, MODE_B, MODE_C, 3))
    return g


def distribute(gamma_abc, phi: float) -> np.ndarray:
    """Send C to Bob, mix it with B after a phase ``phi`` and keep the first port.

    Returns the two-mode covariance of (A, B').
    """
    g = covariance(gamma_abc, 3)
    S = beamsplitter(BALANCED, MODE_B, MODE_C, 3) @ phase_shift(phi, MODE_C, 3)
    return trace_out(transform(g, S), MODE_C)


def duan_value(gamma_ab) -> float:
    """``Var(X_A - X_B) + Var(P_A + P_B)``; below 4 witnesses entanglement."""
    g = covariance(gamma_ab, 2)
    var_x = g[0, 0] + g[2, 2] - 2 * g[0, 2]
    var_p = g[1, 1] + g[3, 3] + 2 * g[1, 3]
    return float(var_x + var_p)


def _golden_min(f, lo: float, hi: float, tol: float):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    x = (lo + hi) / 2
    return x, f(x)


def optimize_distribution_phase(gamma_abc, points: int = PHASE_SCAN_POINTS, tol: float = PHASE_TOL):
    """Phase on C that minimizes the Duan value of the distributed state.

    A coarse scan over ``[0, 2pi)`` picks the best grid angle (ties go to the
    smaller angle), then golden-section search refines it inside the
    neighbouring grid cells. The refined point is only kept if it is strictly
    better, so a flat objective returns ``phi = 0``.

    Returns:
        tuple[float, float]: ``(phi_star, duan_star)`` with ``phi_star`` in ``[0, 2pi)``.
    """
    g = covariance(gamma_abc, 3)

    def objective(phi):
        return duan_value(distribute(g, phi))

    step = 2 * math.pi / points
    grid = step * np.arange(points)
    values = np.array([objective(p) for p in grid])
    best = int(np.argmin(values))
    phi0, f0 = float(grid[best]), float(values[best])

    phi1, f1 = _golden_min(objective, phi0 - step, phi0 + step, tol)
    if f1 < f0 - 1e-12:
        return phi1 % (2 * math.pi), f1
    return phi0, f0
