"""Extreme first-passage times of diffusive searchers."""

from ._core import (
    AnnulusModel,
    ConfigError,
    DomainError,
    NumericalError,
    OUWellModel,
    UnsupportedError,
    build_figure,
    classify,
    eigenvalues,
    figure_ids,
    large_n_mean,
    max_approximation,
    mean_fpt,
    mean_kth_fastest,
    mfpt_asymptotic,
    n_thresholds,
    short_time_coefficients,
    solve_survival,
)

__all__ = [
    "AnnulusModel",
    "ConfigError",
    "DomainError",
    "NumericalError",
    "OUWellModel",
    "UnsupportedError",
    "build_figure",
    "classify",
    "eigenvalues",
    "figure_ids",
    "large_n_mean",
    "max_approximation",
    "mean_fpt",
    "mean_kth_fastest",
    "mfpt_asymptotic",
    "n_thresholds",
    "short_time_coefficients",
    "solve_survival",
]
