"""Diagonal weight operators and estimation of the decay onset K0.

Two families are provided. The original weights ``sqrt(1 + |k|^(2p))`` (or
``exp(|k|)`` for ``p = inf``) encode Sobolev/analytic smoothness directly but
quickly push singular values of the weighted frame below machine precision.
The corrected weights stay flat (``1/K0``) below the decay onset ``K0`` and
grow from there on a scale stretched by ``(N - K0)^(K0/(K0 + C)) * T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from .model import (
    AUTO,
    ExtensionConfig,
    NumericalError,
    ValidationError,
    WeightMode,
    mode_indices,
)

if TYPE_CHECKING:
    from .model import SampledFunction

BOOTSTRAP_P = 4.0


@dataclass(frozen=True)
class WeightSpec:
    mode: WeightMode
    p: float
    n_modes: int
    t_ext: float
    k0: int = 0
    c_const: float = 32.0

    def __post_init__(self):
        object.__setattr__(self, "mode", WeightMode(self.mode))
        if self.mode is WeightMode.CORRECTED and not 0 <= self.k0 <= self.n_modes:
            raise ValidationError("BAD_K0", f"K0={self.k0} outside [0, {self.n_modes}]")

    @classmethod
    def from_config(cls, cfg: ExtensionConfig, k0: Optional[int] = None) -> "WeightSpec":
        if k0 is None:
            k0 = 0 if cfg.k0_policy == AUTO else cfg.k0_policy
        return cls(cfg.weight_mode, cfg.p, cfg.n_modes, cfg.t_ext, k0, cfg.c_const)

    def vector(self) -> np.ndarray:
        if self.mode is WeightMode.UNWEIGHTED:
            return np.ones(2 * self.n_modes + 1)
        if self.mode is WeightMode.ORIGINAL:
            return original_weights(self.p, self.n_modes)
        return corrected_weights(self.p, self.n_modes, self.t_ext, self.k0, self.c_const)


def _check_finite(w: np.ndarray, n_modes: int, what: str) -> np.ndarray:
    bad = ~np.isfinite(w)
    if bad.any():
        k = int(np.flatnonzero(bad)[-1]) - n_modes
        raise NumericalError(
            "OVERFLOW", f"{what} weight at k={k} exceeds the double range; use CORRECTED mode"
        )
    return w


def original_weights(p: float, n_modes: int) -> np.ndarray:
    """``sqrt(1 + |k|^(2p))`` for finite p, ``exp(|k|)`` for ``p = inf``.

    ``|k|^0`` is taken as 1 for every k, so ``p = 0`` gives the constant
    weight ``sqrt(2)``.
    """
    if math.isnan(p) or p < 0:
        raise ValidationError("BAD_RANGE", f"p must be >= 0 or inf, got {p}")
    k = np.abs(mode_indices(n_modes)).astype(float)
    with np.errstate(over="ignore"):
        if math.isinf(p):
            w = np.exp(k)
        else:
            w = np.sqrt(1.0 + k ** (2.0 * p))
    return _check_finite(w, n_modes, "original")


def decay_scale(n_modes: int, t_ext: float, k0: int, c_const: float = 32.0) -> float:
    """Denominator ``(N - K0)^(K0/(K0 + C)) * T`` of the corrected weights."""
    return float(n_modes - k0) ** (k0 / (k0 + c_const)) * t_ext


def corrected_weights(
    p: float, n_modes: int, t_ext: float, k0: int, c_const: float = 32.0
) -> np.ndarray:
    """Corrected weight vector for decay onset ``k0``.

    With ``r = (|k| - K0) / decay_scale(...)``: ``1/K0`` for ``|k| < K0``,
    ``r^p + 1/K0`` (finite p) or ``exp(r) - K0/(K0 + 1)`` (``p = inf``)
    beyond. ``K0 = 0`` uses 1 in place of ``1/K0``. ``p = 0`` drops the growth
    term and returns the flat vector, i.e. the unweighted method.
    """
    if isinstance(k0, bool) or int(k0) != k0 or not 0 <= k0 <= n_modes:
        raise ValidationError("BAD_K0", f"K0={k0} outside [0, {n_modes}]")
    if math.isnan(p) or p < 0:
        raise ValidationError("BAD_RANGE", f"p must be >= 0 or inf, got {p}")
    k0 = int(k0)
    k = np.abs(mode_indices(n_modes)).astype(float)
    floor = 1.0 / k0 if k0 > 0 else 1.0
    if p == 0:
        return np.full(k.shape, floor)

    scale = decay_scale(n_modes, t_ext, k0, c_const)
    outer = k >= k0
    # K0 = N makes the scale 0 while the only outer modes sit at r = 0
    r = np.zeros_like(k)
    if scale > 0:
        r[outer] = (k[outer] - k0) / scale
    w = np.full(k.shape, floor)
    with np.errstate(over="ignore"):
        if math.isinf(p):
            w[outer] = np.exp(r[outer]) - k0 / (k0 + 1.0)
        else:
            w[outer] = r[outer] ** p + floor
    return _check_finite(w, n_modes, "corrected")


def estimate_k0(coeffs: np.ndarray, thresh: float = 0.1) -> int:
    """Largest ``|k|`` with ``|c_k| > thresh``; 0 when nothing exceeds it.

    This is the smallest K beyond which every coefficient has decayed to at
    most ``thresh``.
    """
    coeffs = np.asarray(coeffs)
    n_modes = (coeffs.size - 1) // 2
    above = np.flatnonzero(np.abs(coeffs) > thresh)
    if above.size == 0:
        return 0
    return int(np.max(np.abs(above - n_modes)))


def bootstrap_k0(cfg: ExtensionConfig, samples: "SampledFunction") -> int:
    """Estimate K0 from a pilot solve with corrected weights (p=4, K0=0).

    The pilot reuses N, gamma, T, eps and C from ``cfg``.
    """
    from .extension import solve_weighted

    w = corrected_weights(BOOTSTRAP_P, cfg.n_modes, cfg.t_ext, 0, cfg.c_const)
    pilot = solve_weighted(cfg, samples, w)
    return estimate_k0(pilot.coeffs, cfg.coeff_thresh)


def weights_for(cfg: ExtensionConfig, k0: Optional[int] = None) -> np.ndarray:
    return WeightSpec.from_config(cfg, k0).vector()
