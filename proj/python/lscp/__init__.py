"""Change-point tests for integrated parameters of locally stationary series."""

from ._core import (
    LscpError,
    arctan_transform,
    cv_bandwidth,
    default_bandwidth_grid,
    estimate,
    estimator_error_cell,
    functional_gradient,
    functional_value,
    log_returns,
    nw_pilot,
    pvalue_histogram,
    run_test,
    simulate,
    simulate_tvar,
    size_power_cell,
    stability_check,
)

__all__ = [
    "LscpError",
    "arctan_transform",
    "cv_bandwidth",
    "default_bandwidth_grid",
    "estimate",
    "estimator_error_cell",
    "functional_gradient",
    "functional_value",
    "log_returns",
    "nw_pilot",
    "pvalue_histogram",
    "run_test",
    "simulate",
    "simulate_tvar",
    "size_power_cell",
    "stability_check",
]
