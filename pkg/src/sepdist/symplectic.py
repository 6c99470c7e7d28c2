"""Covariance matrices, symplectic spectra and the PPT separability test.

Conventions used throughout the package:

* quadratures are interleaved, ``(X1, P1, X2, P2, ...)``;
* the vacuum has unit quadrature variance, i.e. ``[X, P] = 2i``;
* the symplectic form is the direct sum of ``[[0, 1], [-1, 0]]`` blocks.

The opposite sign of the symplectic block gives the same symplectic spectrum,
so nothing downstream depends on that choice.

Covariance matrices are plain ``numpy`` arrays. Public functions pass their
input through :func:`covariance` which checks the shape and symmetrizes.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    IndexOutOfRange,
    NotPositiveDefinite,
    PairingFailure,
)

#: asymmetry below this is silently removed, above it is an error
SYMMETRY_TOL = 1e-6
#: relative tolerance for matching the +-i*mu eigenvalue pairs
PAIRING_TOL = 1e-7
#: physicality / separability threshold slack
PHYSICAL_TOL = 1e-9


def covariance(matrix, n_modes: int | None = None) -> np.ndarray:
    """Validate and symmetrize a covariance matrix.

    Args:
        matrix (array_like): square real matrix of even dimension.
        n_modes (int, optional): expected number of modes.

    Returns:
        array: a fresh float array ``(M + M.T) / 2``.

    Raises:
        DimensionMismatch: if the matrix is not square with dimension ``2 * n_modes``.
        AsymmetricMatrix: if ``max|M - M.T|`` exceeds ``SYMMETRY_TOL``.
    """
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 or m.shape[0] == 0:
        raise DimensionMismatch(f"covariance matrix must be 2N x 2N, got shape {m.shape}")
    if n_modes is not None and m.shape[0] != 2 * n_modes:
        raise DimensionMismatch(f"expected {n_modes} modes, got {m.shape[0] // 2}")
    if not np.all(np.isfinite(m)):
        raise DimensionMismatch("covariance matrix contains non-finite entries")
    asym = np.max(np.abs(m - m.T))
    if asym > SYMMETRY_TOL:
        raise AsymmetricMatrix(f"matrix asymmetric by {asym:.3g}")
    return (m + m.T) / 2


def n_modes(gamma) -> int:
    return np.shape(gamma)[0] // 2


def symplectic_form(n: int) -> np.ndarray:
    """Block-diagonal symplectic form for ``n`` modes."""
    if n < 1:
        raise DimensionMismatch("need at least one mode")
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _check_mode(k: int, n: int) -> int:
    if not isinstance(k, (int, np.integer)) or not 0 <= k < n:
        raise IndexOutOfRange(f"mode index {k!r} outside [0, {n})")
    return int(k)


def transpose_mask(n: int, k: int) -> np.ndarray:
    """Diagonal of ``T_k``: all ones except -1 at the phase quadrature of mode ``k``."""
    _check_mode(k, n)
    t = np.ones(2 * n)
    t[2 * k + 1] = -1.0
    return t


def symplectic_eigenvalues(gamma) -> np.ndarray:
    r"""Symplectic eigenvalues of a covariance matrix, ascending.

    The ordinary eigenvalues of :math:`J\gamma` are :math:`\pm i\mu_j`; each
    :math:`\mu_j` is returned once after the positive and negative branches
    have been matched against each other.

    Args:
        gamma (array): 2N x 2N positive definite covariance matrix.

    Returns:
        array: the N symplectic eigenvalues, sorted ascending.

    Raises:
        NotPositiveDefinite: if any ordinary eigenvalue of ``gamma`` is <= 0.
        PairingFailure: if the spectrum of ``J @ gamma`` is not a set of +-i*mu pairs.
    """
    g = covariance(gamma)
    n = n_modes(g)
    lam = np.linalg.eigvalsh(g)
    if lam[0] <= 0:
        raise NotPositiveDefinite(f"smallest eigenvalue {lam[0]:.3g} <= 0")

    ev = np.linalg.eigvals(symplectic_form(n) @ g)
    scale = np.max(np.abs(ev))
    if np.max(np.abs(ev.real)) > PAIRING_TOL * scale:
        raise PairingFailure("eigenvalues of J @ gamma are not purely imaginary")
    im = np.sort(ev.imag)
    neg = -im[:n][::-1]
    pos = im[n:]
    if np.any(pos <= 0) or np.any(np.abs(pos - neg) > PAIRING_TOL * np.maximum(pos, 1.0)):
        raise PairingFailure(f"unmatched eigenvalue branches {pos} vs {neg}")
    return np.sort((pos + neg) / 2)


def partial_transpose(gamma, k: int) -> np.ndarray:
    """Flip the sign of mode ``k``'s phase quadrature, ``T_k gamma T_k``."""
    g = covariance(gamma)
    t = transpose_mask(n_modes(g), k)
    return g * np.outer(t, t)


def ppt_value(gamma, k: int) -> float:
    """Smallest symplectic eigenvalue of the state partially transposed in mode ``k``.

    A value below one means the ``k | rest`` splitting is entangled; for a
    single mode against the rest this is also sufficient for Gaussian states.
    Physicality of ``gamma`` is not enforced here so loss-inverted matrices
    can still be scored; check :func:`is_physical` separately.
    """
    return float(symplectic_eigenvalues(partial_transpose(gamma, k))[0])


def ppt_values(gamma) -> tuple[float, ...]:
    """PPT value for every single-mode splitting, in mode order."""
    g = covariance(gamma)
    return tuple(ppt_value(g, k) for k in range(n_modes(g)))


def min_symplectic_eigenvalue(gamma) -> float:
    return float(symplectic_eigenvalues(gamma)[0])


def is_physical(gamma, tol: float = PHYSICAL_TOL) -> bool:
    """True if ``gamma`` obeys the uncertainty relation ``gamma + iJ >= 0``."""
    try:
        return min_symplectic_eigenvalue(gamma) >= 1 - tol
    except NotPositiveDefinite:
        return False


def is_separable(ppt: float, tol: float = PHYSICAL_TOL) -> bool:
    return ppt >= 1 - tol


def is_symplectic(S, tol: float = 1e-9) -> bool:
    S = np.asarray(S, dtype=float)
    J = symplectic_form(S.shape[0] // 2)
    return bool(np.max(np.abs(S @ J @ S.T - J)) <= tol)


def block(gamma, j: int, k: int) -> np.ndarray:
    """The 2x2 block coupling modes ``j`` and ``k``."""
    g = np.asarray(gamma)
    return g[2 * j : 2 * j + 2, 2 * k : 2 * k + 2]


def local_blocks(gamma) -> np.ndarray:
    """Keep the single-mode 2x2 diagonal blocks, zero all inter-mode covariances."""
    g = covariance(gamma)
    out = np.zeros_like(g)
    for j in range(n_modes(g)):
        out[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = block(g, j, j)
    return out
