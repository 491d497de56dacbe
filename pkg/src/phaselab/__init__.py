"""Numerical laboratory for uniqueness and stability of phaseless linear
measurements on finite dimensional signal models."""

from .core import (
    COMPLEX,
    DEFAULT_TOL,
    REAL,
    DimensionMismatch,
    MeasurementSpace,
    SignalSpace,
    Tolerances,
    measure,
    phase_align,
    quotient_distance,
)
from .frames import (
    Frame,
    FrameFormatError,
    SincFrameSpec,
    load_frame,
    random_frame,
    restrict,
    save_frame,
    sinc_frame,
    sinc_gram,
)
from .bounds import (
    ExhaustiveCapExceeded,
    StabilityReport,
    alpha_estimate,
    beta,
    build_report,
    condition_number,
    frame_bounds,
    scp_sigma,
)
from .cp import CpVerdict, check_cp, nonuniqueness_pair
from .witness import (
    SweepResult,
    WitnessPair,
    build_witness,
    dimension_sweep,
    fixed_dimension_sweep,
    oversample_sweep,
)
from .sampling import (
    SamplingSet,
    lower_beurling_density,
    parse_set_expression,
    phaseless_injectivity_verdict,
)
from .recon import ReconResult, solve

__all__ = [
    "COMPLEX",
    "CpVerdict",
    "DEFAULT_TOL",
    "REAL",
    "DimensionMismatch",
    "ExhaustiveCapExceeded",
    "Frame",
    "FrameFormatError",
    "MeasurementSpace",
    "ReconResult",
    "SamplingSet",
    "SignalSpace",
    "SincFrameSpec",
    "StabilityReport",
    "SweepResult",
    "Tolerances",
    "WitnessPair",
    "alpha_estimate",
    "beta",
    "build_report",
    "build_witness",
    "check_cp",
    "condition_number",
    "dimension_sweep",
    "fixed_dimension_sweep",
    "frame_bounds",
    "load_frame",
    "lower_beurling_density",
    "measure",
    "nonuniqueness_pair",
    "oversample_sweep",
    "parse_set_expression",
    "phase_align",
    "phaseless_injectivity_verdict",
    "quotient_distance",
    "random_frame",
    "restrict",
    "save_frame",
    "scp_sigma",
    "sinc_frame",
    "sinc_gram",
    "solve",
]

__version__ = "0.1.0"
