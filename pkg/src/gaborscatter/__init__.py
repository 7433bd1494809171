"""Gabor scattering features for audio-like signals.

Windowed time-frequency analysis stacked with modulus nonlinearities,
a harmonic tone model with deformation operators, certified error and
stability bounds for the resulting features, and a verification battery
that measures every bound the package promises.
"""

from .errors import (
    BudgetExceeded,
    ConfigError,
    ConvergenceError,
    FormatError,
    GaborScatterError,
    InvalidArgument,
    NotAFrameError,
    VerificationFailure,
)
from .windows import Window, decay_constants, make_window, normalize_for_contractivity, window_dtft
from .gabor import CoefficientGrid, GaborFrame, dgt, frame_bounds, periodization_check
from .signal_model import (
    Deformation,
    EnvelopeSpec,
    Tone,
    deform,
    envelope_derivative_bound,
    phase_mod_threshold,
    realized_envelope,
    synthesize,
)
from .scattering import (
    DEFAULT_NODE_BUDGET,
    FeatureVector,
    ScatterLayer,
    TripletSequence,
    extract_features,
    feature_distance,
    layer_forward,
    scatter,
)
from .bounds import (
    BoundReport,
    contractivity_check,
    envelope_warp_bound,
    harmonic_tail,
    layer1_error_bound,
    layer1_split,
    layer2_split,
    make_report,
    phase_mod_bound,
)
from .io import (
    ExperimentConfig,
    default_config,
    load_config,
    load_features,
    read_wav,
    save_config,
    save_features,
    write_wav,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ConfigError",
    "ConvergenceError",
    "FormatError",
    "GaborScatterError",
    "InvalidArgument",
    "NotAFrameError",
    "VerificationFailure",
    "Window",
    "decay_constants",
    "make_window",
    "normalize_for_contractivity",
    "window_dtft",
    "CoefficientGrid",
    "GaborFrame",
    "dgt",
    "frame_bounds",
    "periodization_check",
    "Deformation",
    "EnvelopeSpec",
    "Tone",
    "deform",
    "envelope_derivative_bound",
    "phase_mod_threshold",
    "realized_envelope",
    "synthesize",
    "DEFAULT_NODE_BUDGET",
    "FeatureVector",
    "ScatterLayer",
    "TripletSequence",
    "extract_features",
    "feature_distance",
    "layer_forward",
    "scatter",
    "BoundReport",
    "contractivity_check",
    "envelope_warp_bound",
    "harmonic_tail",
    "layer1_error_bound",
    "layer1_split",
    "layer2_split",
    "make_report",
    "phase_mod_bound",
    "ExperimentConfig",
    "default_config",
    "load_config",
    "load_features",
    "read_wav",
    "save_config",
    "save_features",
    "write_wav",
    "__version__",
]
