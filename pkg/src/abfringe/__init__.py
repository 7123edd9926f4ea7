"""Fringe correlations of distant electron interferometers coupled to a
two-mode quantized electromagnetic field.

Truncated number-basis linear algebra, characteristic-function values,
closed-form and numeric fringe intensities, correlation ratios with their
bounds, and a deterministic CLI for grids, slices, time series, validation,
and coupling calibration.
"""

from .errors import (
    CalibrationError,
    ConsistencyError,
    ConvergenceError,
    DegenerateScreenError,
    DimensionError,
    FringeError,
    StateFormatError,
    StateValidationError,
    TruncationError,
)
from .fock import (
    DEFAULT_POLICY,
    TruncationPolicy,
    converge_scalar,
    displacement_analytic,
    displacement_exp,
    make_annihilation,
    make_creation,
    partial_trace,
    tensor,
)
from .interference import (
    CalibrationResult,
    ExperimentConfig,
    ModeParams,
    alpha,
    beta,
    calibrate_q,
    intensity_joint_ent_closed,
    intensity_joint_numeric,
    intensity_joint_numeric_many,
    intensity_joint_sep_closed,
    intensity_single,
    intensity_single_closed,
    lambda_of,
    ratio,
    ratio_ent_closed,
    ratio_sep_closed,
    ratio_sep_range,
    rsep_bounds,
)
from .states import (
    CorrelationClass,
    TwoModeState,
    classify,
    load_state,
    make_product,
    make_rho_ent,
    make_rho_sep,
    ppt_min_eigenvalue,
    validate_density_matrix,
)
from .sweeps import (
    FringeGrid,
    TimeSeries,
    compute_grid,
    compute_slice,
    compute_timeseries,
    default_axis,
    parse_angle,
    write_grid_csv,
    write_series_csv,
)
from .weyl import WeylValue, expectation_two, weyl_single, weyl_two

__version__ = "0.1.0"
