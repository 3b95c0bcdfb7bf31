"""Experiment harness: text and CSV formats, sweeps, threshold search, fits and claim checks."""

from .records import SweepRow, ThresholdPoint, FitResult, ScalingResult, SWEEP_HEADER, THRESHOLD_HEADER
from .fitting import fit_exponent, thresholds_from_sweep
from .runner import ExperimentRunner
from .claims import ClaimResult, ClaimsReport, verify_claims

__all__ = [
    "SweepRow",
    "ThresholdPoint",
    "FitResult",
    "ScalingResult",
    "SWEEP_HEADER",
    "THRESHOLD_HEADER",
    "fit_exponent",
    "thresholds_from_sweep",
    "ExperimentRunner",
    "ClaimResult",
    "ClaimsReport",
    "verify_claims",
]
