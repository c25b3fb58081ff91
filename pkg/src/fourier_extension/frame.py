"""Sampling grid and frame matrices for uniform samples on [-1, 1]."""

import math

import numpy as np

from .model import ExtensionConfig, FrameSystem, SamplingGrid, ValidationError


def make_grid(m: int) -> SamplingGrid:
    """Equispaced nodes ``l/m`` for ``l = -m..m``."""
    if int(m) != m or m < 1:
        raise ValidationError("BAD_RANGE", f"grid needs m >= 1, got {m}")
    m = int(m)
    ell = np.arange(-m, m + 1)
    nodes = ell / m
    # l/m and -l/m round identically, but keep the symmetry explicit
    nodes[:m] = -nodes[:m:-1]
    nodes.setflags(write=False)
    return SamplingGrid(m=m, nodes=nodes)


def fourier_columns(x: np.ndarray, n_modes: int, t_ext: float) -> np.ndarray:
    """Matrix of ``phi_k(x)`` for ``k = -N..N`` (rows follow ``x``).

    ``phi_0 = 1/sqrt(2)`` and ``phi_k = exp(i*pi*k*x/T)`` otherwise. Negative
    frequencies are the conjugates of the positive ones, bit for bit.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((x.size, 2 * n_modes + 1), dtype=complex)
    k = np.arange(1, n_modes + 1)
    pos = np.exp(1j * (math.pi / t_ext) * np.outer(x, k))
    out[:, n_modes + 1:] = pos
    out[:, :n_modes] = np.conj(pos[:, ::-1])
    out[:, n_modes] = 1.0 / math.sqrt(2.0)
    return out


def build_frame_matrix(cfg: ExtensionConfig, grid: SamplingGrid) -> np.ndarray:
    """Unweighted frame matrix ``phi_k(t_l) / sqrt(L)``, shape (2M+1, 2N+1)."""
    if grid.m != cfg.m:
        raise ValidationError(
            "SHAPE_MISMATCH", f"grid has M={grid.m} but config implies M={cfg.m}"
        )
    return fourier_columns(grid.nodes, cfg.n_modes, cfg.t_ext) / math.sqrt(cfg.scale_l)


def apply_weights(f_matrix: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Divide column k of ``f_matrix`` by ``weights[k]``."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (f_matrix.shape[1],):
        raise ValidationError(
            "SHAPE_MISMATCH",
            f"{weights.size} weights for a matrix with {f_matrix.shape[1]} columns",
        )
    if not np.all(weights > 0):
        bad = int(np.flatnonzero(~(weights > 0))[0])
        raise ValidationError("ZERO_WEIGHT", f"weight at column {bad} is {weights[bad]}")
    return f_matrix / weights


def build_system(cfg: ExtensionConfig, weights: np.ndarray) -> FrameSystem:
    grid = make_grid(cfg.m)
    f_matrix = build_frame_matrix(cfg, grid)
    return FrameSystem(
        grid=grid,
        f_matrix=f_matrix,
        weights=np.asarray(weights, dtype=float),
        weighted_matrix=apply_weights(f_matrix, weights),
        scale_l=cfg.scale_l,
    )
