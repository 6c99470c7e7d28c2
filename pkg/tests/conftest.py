import math

import numpy as np
import pytest

from sepdist import data
from sepdist.network import beamsplitter, local_rotations


def squeezer(r, mode, n):
    S = np.eye(2 * n)
    S[2 * mode, 2 * mode] = np.exp(-r)
    S[2 * mode + 1, 2 * mode + 1] = np.exp(r)
    return S


def random_symplectic(rng, n, depth=6, max_r=0.8):
    """Product of random squeezers, phase shifts and beam splitters."""
    S = np.eye(2 * n)
    for _ in range(depth):
        S = local_rotations(rng.uniform(0, 2 * np.pi, n)) @ S
        for m in range(n):
            S = squeezer(rng.uniform(-max_r, max_r), m, n) @ S
        if n > 1:
            i, j = rng.choice(n, 2, replace=False)
            S = beamsplitter(rng.uniform(0, 1), int(i), int(j), n) @ S
    return S


def random_physical(rng, n, max_nu=3.0):
    """Random mixed Gaussian state via its Williamson form."""
    S = random_symplectic(rng, n)
    nu = np.repeat(rng.uniform(1, max_nu, n), 2)
    g = S @ np.diag(nu) @ S.T
    return (g + g.T) / 2


def random_separable(rng, n, k):
    """State separable across k | rest: a local product plus classical correlated noise."""
    single = random_physical(rng, 1)
    rest = random_physical(rng, n - 1)
    g = np.zeros((2 * n, 2 * n))
    idx = [2 * k, 2 * k + 1]
    others = [q for q in range(2 * n) if q not in idx]
    g[np.ix_(idx, idx)] = single
    g[np.ix_(others, others)] = rest
    A = rng.normal(size=(2 * n, 2 * n)) * rng.uniform(0, 1)
    return g + A @ A.T


def phase_average_mc(gamma, sigma, n, rng):
    """Sample-average of R(phi) gamma R(phi)^T over independent Gaussian phases.

    Returns the mean matrix and the elementwise standard error.
    """
    m = gamma.shape[0] // 2
    phi = rng.normal(0.0, sigma, size=(n, m))
    c, s = np.cos(phi), np.sin(phi)
    S = np.zeros((n, 2 * m, 2 * m))
    for j in range(m):
        S[:, 2 * j, 2 * j] = c[:, j]
        S[:, 2 * j, 2 * j + 1] = s[:, j]
        S[:, 2 * j + 1, 2 * j] = -s[:, j]
        S[:, 2 * j + 1, 2 * j + 1] = c[:, j]
    out = np.einsum("nij,jk,nlk->nil", S, gamma, S)
    return out.mean(axis=0), out.std(axis=0, ddof=1) / math.sqrt(n)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def gamma_m():
    return data.GAMMA_MEASURED.copy()


@pytest.fixture
def gamma_l():
    return data.GAMMA_LOSS_CORRECTED.copy()


@pytest.fixture
def eta():
    return np.array(data.DETECTION_EFFICIENCY)
