"""Test functions with exact first and second derivatives.

Tags: ``f1`` .. ``f6`` and ``cexp:OMEGA`` for ``exp(i*pi*OMEGA*t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import ValidationError

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_SERIES_CUTOFF = 1.5


def _erf_series(x: np.ndarray) -> np.ndarray:
    # erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_n 2^n x^(2n+1) / (1*3*...*(2n+1));
    # every term is positive, so there is no cancellation
    x2 = x * x
    term = x.copy()
    total = x.copy()
    n = 0
    while True:
        n += 1
        term = term * (2.0 * x2) / (2 * n + 1)
        total += term
        if np.all(term <= 1e-17 * np.abs(total)):
            break
    return _TWO_OVER_SQRT_PI * np.exp(-x2) * total


def _erfc_cf(x: np.ndarray, depth: int = 100) -> np.ndarray:
    # erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))) for x > 0,
    # evaluated bottom-up at a fixed depth
    tail = np.zeros_like(x)
    for j in range(depth, 0, -1):
        tail = (j / 2.0) / (x + tail)
    return np.exp(-x * x) / math.sqrt(math.pi) / (x + tail)


def erf(x):
    """Error function; absolute error below 1e-15 on [-12, 12]."""
    arr = np.asarray(x, dtype=float)
    flat = np.atleast_1d(arr).ravel()
    ax = np.abs(flat)
    out = np.empty_like(ax)
    small = ax <= _SERIES_CUTOFF
    if small.any():
        out[small] = _erf_series(ax[small])
    if (~small).any():
        out[~small] = 1.0 - _erfc_cf(ax[~small])
    out = np.copysign(out, flat)
    if arr.ndim == 0:
        return float(out[0])
    return out.reshape(arr.shape)


@dataclass(frozen=True)
class TestFunction:
    __test__ = False

    tag: str
    f: Callable
    d1: Callable
    d2: Callable
    real: bool = True

    def __call__(self, t):
        return np.asarray(self.f(np.asarray(t, dtype=float)), dtype=complex)

    def derivative(self, order: int) -> Callable:
        """Callable for the exact derivative of the given order (0, 1 or 2)."""
        fn = {0: self.f, 1: self.d1, 2: self.d2}.get(order)
        if fn is None:
            raise ValidationError("BAD_RANGE", f"derivative order must be 0, 1 or 2, got {order}")
        return lambda t: np.asarray(fn(np.asarray(t, dtype=float)), dtype=complex)


def _f3_parts(t):
    g = np.sin(2.7 * np.pi * t) + np.cos(np.pi * t)
    g1 = 2.7 * np.pi * np.cos(2.7 * np.pi * t) - np.pi * np.sin(np.pi * t)
    g2 = -((2.7 * np.pi) ** 2) * np.sin(2.7 * np.pi * t) - np.pi**2 * np.cos(np.pi * t)
    return np.exp(g), g1, g2


def _f6_parts(t):
    q = 1.0 + 25.0 * t * t
    u = 10.0 / q
    u1 = -500.0 * t / q**2
    u2 = -500.0 / q**2 + 50000.0 * t * t / q**3
    return u, u1, u2


def _f3_d1(t):
    e, g1, _ = _f3_parts(t)
    return g1 * e


def _f3_d2(t):
    e, g1, g2 = _f3_parts(t)
    return (g2 + g1 * g1) * e


def _f6_d1(t):
    u, u1, _ = _f6_parts(t)
    return -np.sin(u) * u1


def _f6_d2(t):
    u, u1, u2 = _f6_parts(t)
    return -np.cos(u) * u1 * u1 - np.sin(u) * u2


def _gauss(t):
    return np.exp(-100.0 * t * t)


TEST_FUNCTIONS = {
    "f1": TestFunction("f1", lambda t: t * t, lambda t: 2.0 * t, lambda t: np.full_like(t, 2.0)),
    "f2": TestFunction("f2", np.exp, np.exp, np.exp),
    "f3": TestFunction("f3", lambda t: _f3_parts(t)[0], _f3_d1, _f3_d2),
    "f4": TestFunction(
        "f4",
        lambda t: erf(10.0 * t),
        lambda t: 10.0 * _TWO_OVER_SQRT_PI * _gauss(t),
        lambda t: -2000.0 * _TWO_OVER_SQRT_PI * t * _gauss(t),
    ),
    "f5": TestFunction(
        "f5",
        lambda t: np.cos(10.0 * t * t),
        lambda t: -20.0 * t * np.sin(10.0 * t * t),
        lambda t: -20.0 * np.sin(10.0 * t * t) - 400.0 * t * t * np.cos(10.0 * t * t),
    ),
    "f6": TestFunction("f6", lambda t: np.cos(_f6_parts(t)[0]), _f6_d1, _f6_d2),
}


def complex_exp(omega: float) -> TestFunction:
    """``exp(i*pi*omega*t)``; matches ``phi_k`` on [-T, T] when ``k = omega*T``."""
    a = 1j * math.pi * omega
    return TestFunction(
        f"cexp:{omega:g}",
        lambda t: np.exp(a * t),
        lambda t: a * np.exp(a * t),
        lambda t: a * a * np.exp(a * t),
        real=False,
    )


def get_test_function(tag: str) -> TestFunction:
    """Look up ``f1``..``f6`` or build ``cexp:OMEGA``."""
    key = tag.strip().lower()
    if key in TEST_FUNCTIONS:
        return TEST_FUNCTIONS[key]
    if key.startswith("cexp:"):
        try:
            omega = float(key[5:])
        except ValueError:
            raise ValidationError("VALIDATION", f"bad frequency in tag {tag!r}") from None
        return complex_exp(omega)
    raise ValidationError("VALIDATION", f"unknown test function {tag!r}")


def eval_test(tag: str, t):
    return get_test_function(tag)(t)


def d1_test(tag: str, t):
    return get_test_function(tag).derivative(1)(t)


def d2_test(tag: str, t):
    return get_test_function(tag).derivative(2)(t)
