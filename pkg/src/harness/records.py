"""Result records written by the harness."""

from typing import List

from pydantic import BaseModel, Field

from ..core.distinguishers import BiasEstimate

SWEEP_HEADER = ("n", "budget", "p_function", "p_permutation", "bias", "ci_halfwidth", "trials", "seed")
THRESHOLD_HEADER = ("n", "threshold_budget")


class SweepRow(BaseModel):
    """One (n, budget) measurement; budget is the total query budget."""

    n: int = Field(..., ge=1)
    budget: int = Field(..., ge=1)
    p_function: float = Field(..., ge=0.0, le=1.0)
    p_permutation: float = Field(..., ge=0.0, le=1.0)
    bias: float = Field(..., ge=-1.0, le=1.0)
    ci_halfwidth: float = Field(..., ge=0.0)
    trials: int = Field(..., ge=1)
    seed: int

    @classmethod
    def from_estimate(cls, n: int, budget: int, estimate: BiasEstimate, seed: int) -> "SweepRow":
        return cls(
            n=n,
            budget=budget,
            p_function=estimate.p_function,
            p_permutation=estimate.p_permutation,
            bias=estimate.bias,
            ci_halfwidth=estimate.confidence_halfwidth,
            trials=estimate.trials,
            seed=seed,
        )


class ThresholdPoint(BaseModel):
    """Smallest total budget whose measured bias reached the target."""

    n: int = Field(..., ge=1)
    threshold_budget: int = Field(..., ge=1)
    bias: float = 0.0
    trials: int = 0


class FitResult(BaseModel):
    """Least-squares line through (log2 n, log2 budget)."""

    slope: float
    intercept: float
    r2: float
    points: int = Field(..., ge=3)


class ScalingResult(BaseModel):
    distinguisher: str
    thresholds: List[ThresholdPoint]
    fit: FitResult
