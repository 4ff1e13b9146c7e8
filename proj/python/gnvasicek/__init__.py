"""Vasicek model driven by Gaussian noise: simulation and parameter estimation."""

from ._core import (
    ConfigError,
    DecompositionError,
    DegenerateDesign,
    DomainError,
    EmbeddingError,
    ExperimentError,
    GnvError,
    IntegrationError,
    IoError,
    Kernel,
    NonPositiveVariance,
    NumericError,
    ShapeError,
    StiffnessError,
    asymptotic_constants,
    check_assumption,
    estimate,
    increment_bound_constant,
    run_cli,
    run_experiment,
    sample_noise,
    simulate,
    skorohod_correction,
    stationary_variance,
)

__version__ = "0.1.0"
