import numpy as np
import pytest
import scipy.linalg

from fourier_extension.model import SvdFactors


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_unitary(rng, n):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_matrix(rng, m, n, cond=1e3):
    """Complex m x n matrix with singular values log-spaced from 1 down to 1/cond."""
    k = min(m, n)
    s = np.logspace(0, -np.log10(cond), k)
    u = random_unitary(rng, m)[:, :k]
    v = random_unitary(rng, n)[:, :k]
    return (u * s) @ v.conj().T


def lstsq_min_norm_qr(a, b):
    """Minimum-norm least squares via QR; no SVD involved."""
    m, n = a.shape
    if m >= n:
        q, r = scipy.linalg.qr(a, mode="economic")
        return scipy.linalg.solve_triangular(r, q.conj().T @ b)
    q, r = scipy.linalg.qr(a.conj().T, mode="economic")
    y = scipy.linalg.solve_triangular(r.conj().T, b, lower=True)
    return q @ y


def check_factors(f: SvdFactors, a, tol=1e-12):
    assert np.all(np.diff(f.sigma) <= 0) and np.all(f.sigma >= 0)
    recon = (f.u * f.sigma) @ f.v.conj().T
    assert np.linalg.norm(recon - a) <= tol * max(1.0, np.linalg.norm(a))
    k = f.sigma.size
    assert np.max(np.abs(f.u.conj().T @ f.u - np.eye(k))) <= tol
    assert np.max(np.abs(f.v.conj().T @ f.v - np.eye(k))) <= tol


ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one acceptance line: ``acceptance(number, ok, detail)``."""

    def record(number, ok, detail=""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
