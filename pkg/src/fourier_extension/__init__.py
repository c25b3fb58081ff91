"""Fourier extension of uniformly sampled functions by weighted truncated SVD."""

from .extension import (
    ErrorReport,
    differentiate,
    evaluate,
    extension_region_h1,
    fit,
    max_pointwise_error,
    sample,
)
from .frame import apply_weights, build_frame_matrix, build_system, make_grid
from .linalg import singular_value_profile, svd, tsvd_solve
from .model import (
    AUTO,
    ExtensionConfig,
    ExtensionError,
    ExtensionSolution,
    FrameSystem,
    NumericalError,
    SampledFunction,
    SamplingGrid,
    SvdFactors,
    ValidationError,
    WeightMode,
    validate_config,
)
from .testfns import TestFunction, complex_exp, erf, get_test_function
from .weights import (
    WeightSpec,
    bootstrap_k0,
    corrected_weights,
    estimate_k0,
    original_weights,
)

__version__ = "0.1.0"
