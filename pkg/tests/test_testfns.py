import math

import mpmath
import numpy as np
import pytest

from fourier_extension.testfns import (
    TEST_FUNCTIONS,
    complex_exp,
    d1_test,
    d2_test,
    erf,
    eval_test,
    get_test_function,
)
from fourier_extension.model import ValidationError

H = 1e-5
TAGS = ["f1", "f2", "f3", "f4", "f5", "f6", "cexp:1", "cexp:20"]


def erf_maclaurin(x, terms=80):
    """erf by its Maclaurin series in 50-digit arithmetic."""
    with mpmath.workdps(50):
        x = mpmath.mpf(x)
        s = mpmath.mpf(0)
        for n in range(terms):
            s += (-1) ** n * x ** (2 * n + 1) / (mpmath.factorial(n) * (2 * n + 1))
        return float(2 * s / mpmath.sqrt(mpmath.pi))


def test_values():
    assert eval_test("f1", 0.5) == 0.25
    assert eval_test("f3", 0.0) == pytest.approx(math.e, rel=1e-15)
    assert eval_test("f6", 0.0) == pytest.approx(-0.8390715290764525, rel=1e-15)
    assert eval_test("f2", 1.0).imag == 0


def test_erf_examples():
    assert erf(0.0) == 0.0
    assert erf(1.0) == pytest.approx(0.8427007929497149, abs=1e-15)
    assert erf(1.0) == pytest.approx(erf_maclaurin(1.0), abs=1e-15)
    x = np.linspace(0, 12, 97)
    np.testing.assert_array_equal(erf(-x), -erf(x))


def test_erf_accuracy():
    x = np.concatenate([np.linspace(-12, 12, 4001), np.linspace(1.45, 1.55, 201)])
    ref = np.array([float(mpmath.erf(v)) for v in x])
    assert np.max(np.abs(erf(x) - ref)) <= 1e-15
    for v in (0.1, 0.7, 1.3, 2.0):
        assert erf(v) == pytest.approx(erf_maclaurin(v), abs=1e-15)


def test_derivative_examples():
    assert d1_test("f1", 0.3) == pytest.approx(0.6)
    assert d2_test("f1", -0.8) == 2
    assert d1_test("f4", 0.0) == pytest.approx(11.283791670955126, rel=1e-15)
    w = 3.5
    t = 0.37
    assert d1_test(f"cexp:{w}", t) == pytest.approx(1j * math.pi * w * np.exp(1j * math.pi * w * t))


@pytest.mark.parametrize("tag", TAGS)
def test_derivatives_against_finite_differences(tag, rng):
    fn = get_test_function(tag)
    t = rng.uniform(-1, 1, 100)
    f = fn
    # five-point central stencils
    fd1 = (f(t - 2 * H) - 8 * f(t - H) + 8 * f(t + H) - f(t + 2 * H)) / (12 * H)
    fd2 = (-f(t - 2 * H) + 16 * f(t - H) - 30 * f(t) + 16 * f(t + H) - f(t + 2 * H)) / (12 * H * H)
    assert np.max(np.abs(fd1 - fn.derivative(1)(t))) <= 1e-7
    assert np.max(np.abs(fd2 - fn.derivative(2)(t))) <= 1e-4


@pytest.mark.parametrize("tag,sign", [("f1", 1), ("f4", -1), ("f5", 1), ("f6", 1)])
def test_parity(tag, sign, rng):
    t = rng.uniform(-1, 1, 50)
    fn = TEST_FUNCTIONS[tag]
    np.testing.assert_allclose(fn(-t), sign * fn(t), rtol=0, atol=1e-15)


def test_real_tags_have_zero_imaginary_part(rng):
    t = rng.uniform(-1, 1, 20)
    for tag in ("f1", "f2", "f3", "f4", "f5", "f6"):
        assert np.all(eval_test(tag, t).imag == 0)
    assert not complex_exp(2).real


def test_unknown_tags():
    for bad in ("f7", "cexp:", "cexp:abc", "sin"):
        with pytest.raises(ValidationError):
            get_test_function(bad)
    with pytest.raises(ValidationError):
        get_test_function("f1").derivative(3)
