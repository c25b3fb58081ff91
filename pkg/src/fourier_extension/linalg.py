"""SVD and truncated-SVD least squares for dense complex matrices.

The factorization is delegated to LAPACK. ``gesdd`` is tried first; it
occasionally fails to converge on the highly redundant frames produced for
large T, in which case the slower but more robust ``gesvd`` is used.
"""

import logging

import numpy as np
import scipy.linalg

from .model import NumericalError, SvdFactors, ValidationError

log = logging.getLogger(__name__)


def svd(a: np.ndarray) -> SvdFactors:
    """Thin SVD ``a = u @ diag(sigma) @ v.conj().T``.

    Returns ``min(rows, cols)`` singular values in nonincreasing order.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValidationError("SHAPE_MISMATCH", f"need a nonempty matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("BAD_RANGE", "matrix has non-finite entries")
    attempts = []
    for driver in ("gesdd", "gesvd"):
        try:
            u, s, vh = scipy.linalg.svd(
                a, full_matrices=False, check_finite=False, lapack_driver=driver
            )
        except np.linalg.LinAlgError as exc:
            log.debug("%s failed on %s matrix: %s", driver, a.shape, exc)
            attempts.append(f"{driver}: {exc}")
            continue
        return SvdFactors(u=u, sigma=s, v=vh.conj().T)
    raise NumericalError(
        "NO_CONVERGENCE",
        f"SVD of {a.shape[0]}x{a.shape[1]} matrix failed ({'; '.join(attempts)})",
    )


def tsvd_solve(factors: SvdFactors, rhs: np.ndarray, eps: float):
    """Truncated-SVD solution keeping triplets with ``sigma > eps``.

    Computes ``sum_i <rhs, u_i> / sigma_i * v_i`` where
    ``<x, y> = sum(x * conj(y))``.

    Returns:
        (solution, kept_rank)
    """
    rhs = np.asarray(rhs, dtype=complex)
    if rhs.shape != (factors.u.shape[0],):
        raise ValidationError(
            "SHAPE_MISMATCH", f"rhs of length {rhs.size} for {factors.u.shape[0]} rows"
        )
    if not eps > 0:
        raise ValidationError("BAD_RANGE", f"eps must be > 0, got {eps}")
    keep = factors.sigma > eps
    kept = int(np.count_nonzero(keep))
    if kept == 0:
        return np.zeros(factors.v.shape[0], dtype=complex), 0
    proj = factors.u[:, keep].conj().T @ rhs
    return factors.v[:, keep] @ (proj / factors.sigma[keep]), kept


def singular_value_profile(a: np.ndarray) -> np.ndarray:
    """Singular values only, descending."""
    return svd(a).sigma
