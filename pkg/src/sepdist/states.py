"""Single-mode input states described by their quadrature variances.

Decibels are power ratios relative to shot noise: ``variance = 10 ** (db / 10)``,
so negative values are squeezing below the vacuum level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import LossOutOfRange, UnphysicalSpec
from .symplectic import PHYSICAL_TOL, covariance


def db_to_variance(db: float) -> float:
    return 10.0 ** (db / 10.0)


def variance_to_db(variance: float) -> float:
    if variance <= 0:
        raise ValueError("variance must be positive")
    return 10.0 * math.log10(variance)


class Kind(str, Enum):
    VACUUM = "vacuum"
    SQUEEZED = "squeezed"
    THERMAL = "thermal"
    HOT_SQUEEZED = "hot_squeezed"


@dataclass(frozen=True)
class SingleModeSpec:
    """Diagonal single-mode state, variances in shot-noise units."""

    kind: Kind
    var_x: float = 1.0
    var_p: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        vx, vp = float(self.var_x), float(self.var_p)
        object.__setattr__(self, "var_x", vx)
        object.__setattr__(self, "var_p", vp)
        tol = PHYSICAL_TOL
        if not (vx > 0 and vp > 0 and math.isfinite(vx) and math.isfinite(vp)):
            raise UnphysicalSpec(f"variances must be positive and finite, got {vx}, {vp}")
        if vx * vp < 1 - tol:
            raise UnphysicalSpec(f"var_x * var_p = {vx * vp:.6g} violates the uncertainty bound")
        if self.kind is Kind.VACUUM and (abs(vx - 1) > tol or abs(vp - 1) > tol):
            raise UnphysicalSpec("vacuum must have unit variances")
        if self.kind is Kind.THERMAL and (abs(vx - vp) > tol * max(vx, 1.0) or vx < 1 - tol):
            raise UnphysicalSpec("thermal state needs var_x == var_p >= 1")
        if self.kind is Kind.HOT_SQUEEZED and (vx < 1 - tol or vp < 1 - tol):
            raise UnphysicalSpec("hot squeezed state must be above shot noise in both quadratures")

    @classmethod
    def vacuum(cls) -> "SingleModeSpec":
        return cls(Kind.VACUUM)

    @classmethod
    def squeezed(cls, x_db: float, p_db: float) -> "SingleModeSpec":
        return cls(Kind.SQUEEZED, db_to_variance(x_db), db_to_variance(p_db))

    @classmethod
    def pure_squeezed(cls, squeezing_db: float) -> "SingleModeSpec":
        """Minimum-uncertainty state squeezed by ``squeezing_db`` in X."""
        return cls.squeezed(-abs(squeezing_db), abs(squeezing_db))

    @classmethod
    def thermal(cls, noise_db: float) -> "SingleModeSpec":
        v = db_to_variance(noise_db)
        return cls(Kind.THERMAL, v, v)

    @classmethod
    def hot_squeezed(cls, x_db: float, p_db: float) -> "SingleModeSpec":
        return cls(Kind.HOT_SQUEEZED, db_to_variance(x_db), db_to_variance(p_db))

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "var_x_db": variance_to_db(self.var_x),
            "var_p_db": variance_to_db(self.var_p),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SingleModeSpec":
        """Build from ``{"kind": ..., "var_x_db": ..., "var_p_db": ...}``.

        ``thermal`` also accepts a single ``"noise_db"`` key; ``vacuum`` needs no values.
        """
        kind = Kind(doc["kind"])
        if kind is Kind.VACUUM:
            return cls.vacuum()
        if kind is Kind.THERMAL and "noise_db" in doc:
            return cls.thermal(doc["noise_db"])
        return cls(kind, db_to_variance(doc["var_x_db"]), db_to_variance(doc["var_p_db"]))


@dataclass(frozen=True)
class HotSqueezingSpec:
    """Squeezed state whose X quadrature is randomly displaced.

    ``sigma_N_sq`` is the variance of the added displacement and ``p_G`` the
    fraction of it that is Gaussian. Only covariances are modelled, so
    ``p_G`` does not change :meth:`spec`; it only matters for the
    de-Gaussification analysis in :mod:`sepdist.compensation`.
    """

    base: SingleModeSpec
    sigma_N_sq: float
    p_G: float = 1.0

    def __post_init__(self):
        if self.sigma_N_sq < 0:
            raise UnphysicalSpec("displacement noise variance must be nonnegative")
        if not 0 <= self.p_G <= 1:
            raise UnphysicalSpec("p_G must lie in [0, 1]")

    @property
    def var_x(self) -> float:
        return self.base.var_x + self.sigma_N_sq

    def spec(self) -> SingleModeSpec:
        vx, vp = self.var_x, self.base.var_p
        kind = Kind.HOT_SQUEEZED if vx >= 1 and vp >= 1 else Kind.SQUEEZED
        return SingleModeSpec(kind, vx, vp)

    def gaussian_part(self) -> SingleModeSpec:
        """State obtained by keeping only the Gaussian share of the displacement noise."""
        return HotSqueezingSpec(self.base, self.p_G * self.sigma_N_sq).spec()


def make_state(spec: SingleModeSpec) -> np.ndarray:
    """``diag(var_x, var_p)`` for a single-mode spec."""
    if isinstance(spec, HotSqueezingSpec):
        spec = spec.spec()
    if spec.var_x * spec.var_p < 1 - PHYSICAL_TOL:
        raise UnphysicalSpec("spec violates the uncertainty bound")
    return np.diag([spec.var_x, spec.var_p])


def apply_preparation_loss(gamma, loss: float) -> np.ndarray:
    """Mix a state with vacuum: ``(1 - loss) * gamma + loss * I``."""
    if not 0 <= loss <= 1:
        raise LossOutOfRange(f"loss {loss} outside [0, 1]")
    g = covariance(gamma)
    return (1 - loss) * g + loss * np.eye(g.shape[0])
