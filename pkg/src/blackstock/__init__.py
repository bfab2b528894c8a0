"""Spectral-Galerkin simulator and energy-decay laboratory for the strongly
damped Blackstock acoustic wave equation

    psi_tt - c^2 (1 - 2 k psi_t) Delta psi - b Delta psi_t
        + 2 sigma grad psi . grad psi_t = 0

on rectangular boxes with homogeneous Dirichlet data.  The package integrates
the equation with IMEX and fixed-point (Picard) schemes, evaluates the full
family of energy, dissipation and Lyapunov functionals along runs, verifies
the interpolation-inequality toolbox numerically, and maps the small-data
decay / blow-up dichotomy.
"""

from .config import ConfigError, RunConfig, load_config, parse_config
from .dynamics import MediumParams, assemble_f, linearized_acceleration, nonlinear_acceleration
from .energy import (
    EnergySample,
    GammaWeights,
    calibrated_gammas,
    default_probe_states,
    energy_E,
    equivalence_constants,
    functionals,
    identity_residual,
    lyapunov_L,
    weighted_norms,
)
from .experiments import (
    DecayFit,
    RegularityStudy,
    ThresholdReport,
    default_window,
    fit_decay,
    threshold_bisection,
    weighted_regularity_study,
)
from .fields import InitialDataSpec, SimState, build_initial, full_h_norm, norm
from .grid import (
    Grid,
    SpectralField,
    dealiased_product,
    gradient_physical,
    laplacian_symbol,
    padded_field_values,
    padded_gradient_values,
    project_padded_to_sine,
    to_physical,
    to_spectral,
)
from .inequalities import (
    GronwallCheck,
    GronwallParams,
    agmon_ratio,
    empirical_max_ratio,
    gronwall_verify,
    interpolation_ratio,
    random_admissible_gronwall,
    random_trig_fields,
)
from .integrate import (
    PicardFailure,
    StepConfig,
    Termination,
    TimeSeries,
    simulate,
    step_imex,
    step_picard,
)
from .storage import (
    LoadedSeries,
    load_checkpoint,
    read_series_csv,
    save_checkpoint,
    write_json,
    write_series_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DecayFit",
    "EnergySample",
    "GammaWeights",
    "GronwallCheck",
    "GronwallParams",
    "Grid",
    "InitialDataSpec",
    "LoadedSeries",
    "MediumParams",
    "PicardFailure",
    "RegularityStudy",
    "RunConfig",
    "SimState",
    "SpectralField",
    "StepConfig",
    "Termination",
    "ThresholdReport",
    "TimeSeries",
    "agmon_ratio",
    "assemble_f",
    "build_initial",
    "calibrated_gammas",
    "dealiased_product",
    "default_probe_states",
    "default_window",
    "empirical_max_ratio",
    "energy_E",
    "equivalence_constants",
    "fit_decay",
    "full_h_norm",
    "functionals",
    "gradient_physical",
    "gronwall_verify",
    "identity_residual",
    "interpolation_ratio",
    "laplacian_symbol",
    "linearized_acceleration",
    "load_checkpoint",
    "load_config",
    "lyapunov_L",
    "nonlinear_acceleration",
    "norm",
    "padded_field_values",
    "padded_gradient_values",
    "parse_config",
    "project_padded_to_sine",
    "random_admissible_gronwall",
    "random_trig_fields",
    "read_series_csv",
    "save_checkpoint",
    "simulate",
    "step_imex",
    "step_picard",
    "threshold_bisection",
    "to_physical",
    "to_spectral",
    "weighted_norms",
    "weighted_regularity_study",
    "write_json",
    "write_series_csv",
]
