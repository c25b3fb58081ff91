"""Fitting, evaluation, differentiation and error metrics.

A fit solves the weighted frame system ``(F / d) c~ = f`` by truncated SVD and
recovers the Fourier coefficients ``c = c~ / d``. The extension is the
trigonometric polynomial ``sum_k c_k phi_k`` on [-T, T].
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Union

import numpy as np
from scipy.integrate import trapezoid

from . import frame, linalg, weights
from .model import (
    AUTO,
    ExtensionConfig,
    ExtensionSolution,
    SampledFunction,
    ValidationError,
    WeightMode,
    mode_indices,
)
from .testfns import TestFunction

log = logging.getLogger(__name__)

_EVAL_CHUNK = 4096


@dataclass(frozen=True)
class ErrorReport:
    max_abs_error: float
    eval_grid_factor: int = 10
    derivative_order: int = 0


def sample(cfg: ExtensionConfig, fn: Union[Callable, TestFunction, np.ndarray], tag: str = None) -> SampledFunction:
    """Sample ``fn`` on the construction grid of ``cfg``.

    ``fn`` may be a callable or an array of values already on the grid.
    """
    grid = frame.make_grid(cfg.m)
    if callable(fn):
        values = fn(grid.nodes)
        tag = tag or getattr(fn, "tag", "CUSTOM")
    else:
        values = fn
        tag = tag or "CUSTOM"
    return SampledFunction(tag=tag, values=values, grid=grid, scale_l=cfg.scale_l)


def _check_samples(cfg: ExtensionConfig, samples: SampledFunction):
    if samples.grid.m != cfg.m:
        raise ValidationError(
            "SHAPE_MISMATCH", f"samples on M={samples.grid.m} grid, config needs M={cfg.m}"
        )


def solve_weighted(cfg: ExtensionConfig, samples: SampledFunction, w: np.ndarray, k0_used=None) -> ExtensionSolution:
    """One TSVD solve with an explicit weight vector."""
    _check_samples(cfg, samples)
    system = frame.build_system(cfg, w)
    factors = linalg.svd(system.weighted_matrix)
    wc, kept = linalg.tsvd_solve(factors, samples.rhs, cfg.trunc_eps)
    if kept == 0:
        log.warning("DEGENERATE: no singular value above eps=%g; returning zero solution", cfg.trunc_eps)
    return ExtensionSolution(
        coeffs=wc / system.weights,
        weighted_coeffs=wc,
        weights=system.weights,
        kept_rank=kept,
        k0_used=k0_used,
        config=cfg,
    )


def fit(cfg: ExtensionConfig, f: Union[SampledFunction, Callable]) -> ExtensionSolution:
    """Compute the Fourier extension of sampled data.

    With ``CORRECTED`` weights and ``k0_policy="auto"`` a pilot solve first
    estimates the decay onset K0. A solution with ``kept_rank == 0`` is
    returned as the zero vector (see ``ExtensionSolution.degenerate``).
    """
    samples = f if isinstance(f, SampledFunction) else sample(cfg, f)
    _check_samples(cfg, samples)
    k0 = None
    if cfg.weight_mode is WeightMode.CORRECTED:
        k0 = weights.bootstrap_k0(cfg, samples) if cfg.k0_policy == AUTO else cfg.k0_policy
    w = weights.weights_for(cfg, k0)
    return solve_weighted(cfg, samples, w, k0_used=k0)


def evaluate(sol: ExtensionSolution, points) -> np.ndarray:
    """Evaluate ``c_0/sqrt(2) + sum_{k != 0} c_k exp(i*pi*k*x/T)`` at ``points``."""
    t_ext = sol.config.t_ext
    x = np.asarray(points, dtype=float)
    flat = x.ravel()
    if flat.size and np.max(np.abs(flat)) > t_ext * (1 + 1e-14):
        raise ValidationError("OUT_OF_DOMAIN", f"evaluation points must lie in [-{t_ext}, {t_ext}]")
    out = np.empty(flat.size, dtype=complex)
    for start in range(0, flat.size, _EVAL_CHUNK):
        block = flat[start:start + _EVAL_CHUNK]
        out[start:start + _EVAL_CHUNK] = frame.fourier_columns(block, sol.n_modes, t_ext) @ sol.coeffs
    return out.reshape(x.shape)


def differentiate(sol: ExtensionSolution, order: int = 1) -> ExtensionSolution:
    """Exact derivative in coefficient space: ``c_k * (i*pi*k/T)^order``."""
    if order not in (1, 2):
        raise ValidationError("BAD_RANGE", f"order must be 1 or 2, got {order}")
    factor = 1j * math.pi * mode_indices(sol.n_modes) / sol.config.t_ext
    coeffs = sol.coeffs
    # one multiplication per order keeps d2 == d1(d1) bit for bit
    for _ in range(order):
        coeffs = coeffs * factor
    return replace(
        sol,
        coeffs=coeffs,
        weighted_coeffs=coeffs * sol.weights,
        derivative_order=sol.derivative_order + order,
    )


def dense_grid(m: int, grid_factor: int = 10) -> np.ndarray:
    """Equispaced points on [-1, 1], endpoints included, ``grid_factor`` times denser."""
    n = 2 * m * grid_factor
    return np.arange(-n // 2, n // 2 + 1) / (m * grid_factor)


def max_pointwise_error(
    sol: ExtensionSolution,
    f_exact: Union[TestFunction, Callable],
    grid_factor: int = 10,
    derivative_order: int = 0,
) -> ErrorReport:
    """Sup-norm error on [-1, 1] of the (differentiated) extension.

    A :class:`TestFunction` supplies its own exact derivative; any other
    callable is taken to already be the derivative of the requested order.
    """
    if grid_factor < 1:
        raise ValidationError("BAD_RANGE", f"grid_factor must be >= 1, got {grid_factor}")
    target = f_exact.derivative(derivative_order) if isinstance(f_exact, TestFunction) else f_exact
    approx = sol if derivative_order == 0 else differentiate(sol, derivative_order)
    x = dense_grid(sol.config.m, grid_factor)
    err = np.max(np.abs(evaluate(approx, x) - np.asarray(target(x), dtype=complex)))
    return ErrorReport(float(err), grid_factor, derivative_order)


def extension_region_h1(sol: ExtensionSolution, samples_per_unit: int = 16) -> float:
    """RMS of ``d/dt Re(extension)`` over ``1 < |t| < T`` (trapezoid rule)."""
    if samples_per_unit < 16:
        raise ValidationError("BAD_RANGE", f"samples_per_unit must be >= 16, got {samples_per_unit}")
    t_ext = sol.config.t_ext
    n = max(1, math.ceil((t_ext - 1.0) * samples_per_unit))
    right = np.linspace(1.0, t_ext, n + 1)
    deriv = differentiate(sol, 1)
    total = 0.0
    for side in (right, -right[::-1]):
        g = evaluate(deriv, side).real
        total += trapezoid(g * g, side)
    return math.sqrt(total / (2.0 * (t_ext - 1.0)))


def profile_points(t_ext: float, samples_per_unit: int = 16) -> np.ndarray:
    """Equispaced points over [-T, T] for plotting the whole extension."""
    n = max(1, round(2 * t_ext * samples_per_unit))
    return np.linspace(-t_ext, t_ext, n + 1)
