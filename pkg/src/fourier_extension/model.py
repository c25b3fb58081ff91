"""Domain types shared across the Fourier extension pipeline.

Coefficient vectors are stored in ascending frequency order, so index ``j``
holds frequency ``k = j - N``. Use :func:`mode_indices` rather than doing
that arithmetic by hand.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional, Union

import jsonschema
import numpy as np


class ExtensionError(Exception):
    """Base class for all errors raised by this package.

    ``code`` is a stable identifier for the failure (e.g. ``NON_INTEGRAL_M``)
    and ``exit_code`` is what the CLI returns when the error escapes.
    """

    exit_code = 1

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class ValidationError(ExtensionError, ValueError):
    exit_code = 2


class NumericalError(ExtensionError, ArithmeticError):
    exit_code = 3


class WeightMode(str, enum.Enum):
    UNWEIGHTED = "UNWEIGHTED"
    ORIGINAL = "ORIGINAL"
    CORRECTED = "CORRECTED"


AUTO = "auto"
K0Policy = Union[str, int]


def _as_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError("BAD_RANGE", f"gamma must be numeric, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    # str() of a float gives its shortest decimal form, so 0.15 -> 3/20
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError("BAD_RANGE", f"cannot read gamma={value!r}") from exc


def _as_p(value: Any) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "∞"):
            return math.inf
        value = float(value)
    return float(value)


def _as_k0_policy(value: Any) -> K0Policy:
    if isinstance(value, str):
        v = value.strip().lower()
        if v == AUTO:
            return AUTO
        if v.startswith("fixed:"):
            v = v[len("fixed:"):]
        try:
            return int(v)
        except ValueError as exc:
            raise ValidationError("BAD_RANGE", f"bad k0_policy {value!r}") from exc
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValidationError("BAD_RANGE", f"bad k0_policy {value!r}")
    return int(value)


@dataclass(frozen=True)
class ExtensionConfig:
    """All parameters of one Fourier extension run.

    Attributes:
        n_modes: N, frequencies ``k = -N..N``.
        gamma: sampling ratio M/N, kept as an exact fraction.
        t_ext: half-width T > 1 of the periodic extension interval.
        p: smoothness order of the weights; ``math.inf`` for the analytic case.
        trunc_eps: TSVD threshold.
        weight_mode: which diagonal weight operator to use.
        k0_policy: ``"auto"`` to bootstrap K0, or a fixed non-negative int.
        c_const: the constant C in the exponent of the corrected weights.
        coeff_thresh: magnitude threshold used when estimating K0.
    """

    n_modes: int
    gamma: Fraction = Fraction(3)
    t_ext: float = 2.0
    p: float = 2.0
    trunc_eps: float = 1e-14
    weight_mode: WeightMode = WeightMode.CORRECTED
    k0_policy: K0Policy = AUTO
    c_const: float = 32.0
    coeff_thresh: float = 0.1

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "gamma", _as_fraction(self.gamma))
        set_(self, "p", _as_p(self.p))
        set_(self, "t_ext", float(self.t_ext))
        set_(self, "trunc_eps", float(self.trunc_eps))
        set_(self, "c_const", float(self.c_const))
        set_(self, "coeff_thresh", float(self.coeff_thresh))
        set_(self, "weight_mode", WeightMode(self.weight_mode))
        set_(self, "k0_policy", _as_k0_policy(self.k0_policy))
        if isinstance(self.n_modes, bool) or int(self.n_modes) != self.n_modes:
            raise ValidationError("BAD_RANGE", f"n_modes must be an integer, got {self.n_modes!r}")
        set_(self, "n_modes", int(self.n_modes))
        self._check()

    def _check(self):
        if self.n_modes < 1:
            raise ValidationError("BAD_RANGE", f"n_modes must be >= 1, got {self.n_modes}")
        if self.gamma <= 0:
            raise ValidationError("BAD_RANGE", f"gamma must be > 0, got {self.gamma}")
        m = self.gamma * self.n_modes
        if m.denominator != 1:
            raise ValidationError(
                "NON_INTEGRAL_M",
                f"gamma*N = {self.gamma}*{self.n_modes} = {float(m)} is not an integer",
            )
        if not (math.isfinite(self.t_ext) and self.t_ext > 1):
            raise ValidationError("BAD_RANGE", f"t_ext must be a finite value > 1, got {self.t_ext}")
        if not 0 < self.trunc_eps < 1:
            raise ValidationError("BAD_RANGE", f"trunc_eps must lie in (0, 1), got {self.trunc_eps}")
        if math.isnan(self.p) or self.p < 0:
            raise ValidationError("BAD_RANGE", f"p must be >= 0 or inf, got {self.p}")
        if not self.c_const > 0:
            raise ValidationError("BAD_RANGE", f"c_const must be > 0, got {self.c_const}")
        if not self.coeff_thresh > 0:
            raise ValidationError("BAD_RANGE", f"coeff_thresh must be > 0, got {self.coeff_thresh}")
        if self.k0_policy != AUTO and not 0 <= self.k0_policy <= self.n_modes:
            raise ValidationError(
                "BAD_K0", f"fixed K0={self.k0_policy} outside [0, {self.n_modes}]"
            )

    @property
    def m(self) -> int:
        """Number of sampling intervals per unit length (M = gamma*N)."""
        return int(self.gamma * self.n_modes)

    @property
    def scale_l(self) -> float:
        """The normalisation constant L = 2*T*gamma*N."""
        return 2.0 * self.t_ext * self.m

    @property
    def n_coeffs(self) -> int:
        return 2 * self.n_modes + 1

    def replace(self, **changes) -> "ExtensionConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        gamma = self.gamma
        return {
            "n_modes": self.n_modes,
            "gamma": gamma.numerator if gamma.denominator == 1 else f"{gamma.numerator}/{gamma.denominator}",
            "t_ext": self.t_ext,
            "p": "inf" if math.isinf(self.p) else self.p,
            "trunc_eps": self.trunc_eps,
            "weight_mode": self.weight_mode.value,
            "k0_policy": self.k0_policy,
            "c_const": self.c_const,
            "coeff_thresh": self.coeff_thresh,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExtensionConfig":
        try:
            jsonschema.validate(dict(data), CONFIG_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ValidationError("BAD_RANGE", f"config rejected: {exc.message}") from exc
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ExtensionConfig":
        return cls.from_dict(json.loads(text))


CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "n_modes": {"type": "integer", "minimum": 1},
        "gamma": {"type": ["number", "string"]},
        "t_ext": {"type": "number", "exclusiveMinimum": 1},
        "p": {"anyOf": [{"type": "number", "minimum": 0}, {"enum": ["inf", "Infinity", "INF"]}]},
        "trunc_eps": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "weight_mode": {"enum": [m.value for m in WeightMode]},
        "k0_policy": {"anyOf": [{"type": "integer", "minimum": 0}, {"enum": ["auto", "AUTO"]}]},
        "c_const": {"type": "number", "exclusiveMinimum": 0},
        "coeff_thresh": {"type": "number", "exclusiveMinimum": 0},
    },
    "required": ["n_modes"],
    "additionalProperties": False,
}


def validate_config(cfg: Union[ExtensionConfig, Mapping[str, Any]]) -> ExtensionConfig:
    """Return a validated config, building one first if given a mapping."""
    if isinstance(cfg, ExtensionConfig):
        cfg._check()
        return cfg
    return ExtensionConfig.from_dict(cfg)


def mode_indices(n_modes: int) -> np.ndarray:
    """Signed frequencies ``-N..N`` in storage order."""
    return np.arange(-n_modes, n_modes + 1)


@dataclass(frozen=True)
class SamplingGrid:
    m: int
    nodes: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.nodes)


@dataclass(frozen=True)
class FrameSystem:
    grid: SamplingGrid
    f_matrix: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    weighted_matrix: np.ndarray = field(repr=False)
    scale_l: float


@dataclass(frozen=True)
class SvdFactors:
    u: np.ndarray = field(repr=False)
    sigma: np.ndarray
    v: np.ndarray = field(repr=False)

    def rank_kept(self, eps: float) -> int:
        return int(np.count_nonzero(self.sigma > eps))

    @property
    def shape(self) -> tuple:
        return (self.u.shape[0], self.v.shape[0])


@dataclass(frozen=True)
class ExtensionSolution:
    """Fourier coefficients of an extension on [-T, T].

    ``coeffs[j]`` is the coefficient of ``phi_k`` with ``k = j - N``;
    ``weighted_coeffs`` equals ``weights * coeffs``. ``derivative_order`` is
    non-zero for solutions produced by differentiation.
    """

    coeffs: np.ndarray = field(repr=False)
    weighted_coeffs: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    kept_rank: int
    k0_used: Optional[int]
    config: ExtensionConfig
    derivative_order: int = 0

    @property
    def degenerate(self) -> bool:
        """True when TSVD kept no singular triplet and the solution is zero."""
        return self.kept_rank == 0

    @property
    def n_modes(self) -> int:
        return self.config.n_modes

    def coeff(self, k: int) -> complex:
        """Coefficient for signed frequency ``k``."""
        if abs(k) > self.n_modes:
            raise IndexError(f"frequency {k} outside [-{self.n_modes}, {self.n_modes}]")
        return complex(self.coeffs[k + self.n_modes])


@dataclass(frozen=True)
class SampledFunction:
    tag: str
    values: np.ndarray = field(repr=False)
    grid: SamplingGrid
    scale_l: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (len(self.grid),):
            raise ValidationError(
                "SHAPE_MISMATCH",
                f"{values.shape[0] if values.ndim else 0} values for a grid of {len(self.grid)} nodes",
            )
        object.__setattr__(self, "values", values)

    @property
    def rhs(self) -> np.ndarray:
        return self.values / math.sqrt(self.scale_l)
