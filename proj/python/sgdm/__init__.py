"""SGD with momentum: trajectories, time-window diagnostics and rate formulas."""

import json

from ._core import (
    ConfigError,
    InvalidArgument,
    MomentumParams,
    NoiseModel,
    Problem,
    RegimeViolation,
    SgdmError,
    StepSchedule,
    auxiliary_z,
    build_partition,
    chung_bound_check,
    default_window,
    estimate_exponent,
    log_rate_case,
    make_problem,
    merit_value,
    optimal_gamma,
    rate_Phi_Psi,
    rate_psi_phi,
    run,
    self_check,
    sgdm_step,
    validate_schedule,
)
from ._core import run_config as _run_config


def run_config(text, seed_offset=0):
    """Run a config document and return the summary as a dict."""
    return json.loads(_run_config(text, seed_offset))


__all__ = [
    "ConfigError", "InvalidArgument", "MomentumParams", "NoiseModel", "Problem",
    "RegimeViolation", "SgdmError", "StepSchedule", "auxiliary_z", "build_partition",
    "chung_bound_check", "default_window", "estimate_exponent", "log_rate_case",
    "make_problem", "merit_value", "optimal_gamma", "rate_Phi_Psi", "rate_psi_phi",
    "run", "run_config", "self_check", "sgdm_step", "validate_schedule",
]
