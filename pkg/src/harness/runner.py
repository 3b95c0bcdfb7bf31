"""
Sweep orchestration and threshold-budget search.

Every measurement draws its randomness from a stream keyed by the master
seed and the (n, budget) it measures, so rows are reproducible one by one
and independent of evaluation order and worker count.
"""

import math
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..config.experiment_config import ExperimentConfig
from ..config.simulation_config import SimulationConfig, simulation_config
from ..core.collision_profiles import CollisionProfile
from ..core.distinguishers import (
    BiasEstimate,
    HybridGapReport,
    bht_parameters,
    build_distinguisher,
    estimate_bias,
    measure_hybrid_gaps,
    normal_quantile,
)
from ..core.function_model import uniform_function_sampler, uniform_permutation_sampler
from ..core.hybrids_reductions import build_hybrids
from ..domain.interfaces import IDistinguisher
from ..utils.exceptions import ExperimentError, FitError
from ..utils.helpers import ceil_root, trial_rng
from .fitting import fit_exponent
from .records import ScalingResult, SweepRow, ThresholdPoint


class ExperimentRunner:
    """Runs sweeps, single rows and threshold searches for one config."""

    def __init__(self, config: ExperimentConfig, sim_config: Optional[SimulationConfig] = None):
        self.config = config
        self.sim_config = sim_config or simulation_config

    def default_budget(self, n: int) -> int:
        """Total budget used when the config lists none."""
        if self.config.distinguisher == "bht":
            k, grover_budget = bht_parameters(n, None, self.config.k, self.sim_config)
            return k + grover_budget
        return ceil_root(n, 2)

    def _distinguisher(self, n: int, budget: int) -> IDistinguisher:
        return build_distinguisher(self.config.distinguisher, n, budget, self.config.k, self.sim_config)

    def _estimate(self, n: int, budget: int, trials: int, stream: str) -> BiasEstimate:
        return estimate_bias(
            self._distinguisher(n, budget),
            uniform_function_sampler(n),
            uniform_permutation_sampler(n),
            trials,
            trial_rng(self.config.seed, f"{stream}:{n}:{budget}", 0),
            workers=self.config.workers,
            config=self.sim_config,
        )

    def plan(self) -> List[Tuple[int, int]]:
        """
        (n, budget) pairs of the sweep, in output order.

        Every pair is validated here, before any trial runs.
        """
        pairs = []
        for n in self.config.n_values:
            for budget in self.config.budgets or [self.default_budget(n)]:
                self._distinguisher(n, budget)
                pairs.append((n, budget))
        return pairs

    def run_row(self, n: int, budget: Optional[int] = None) -> SweepRow:
        """Measure one (n, budget) pair."""
        budget = budget if budget is not None else self.default_budget(n)
        estimate = self._estimate(n, budget, self.config.trials, "sweep")
        return SweepRow.from_estimate(n, budget, estimate, self.config.seed)

    def run_sweep(self) -> List[SweepRow]:
        """All rows of the sweep, n-major then budget order."""
        pairs = self.plan()
        logger.info(
            f"Sweep: {self.config.distinguisher}, {len(pairs)} rows, "
            f"{self.config.trials} trials each, seed={self.config.seed}"
        )
        rows = []
        for n, budget in pairs:
            row = self.run_row(n, budget)
            logger.debug(f"n={n} budget={budget} bias={row.bias:.4f}")
            rows.append(row)
        logger.info(f"Sweep finished: {len(rows)} rows")
        return rows

    def threshold_trials(self) -> int:
        """
        Trials per distribution so the halfwidth stays under the target at
        any rates: z * sqrt(1/(2t)) < target.
        """
        z = normal_quantile(self.sim_config.confidence_level)
        needed = math.floor(z * z / (2.0 * self.sim_config.ci_target_halfwidth ** 2)) + 1
        return max(self.config.trials, needed)

    def _budget_range(self, n: int) -> Tuple[int, int]:
        """Smallest and largest total budget worth measuring."""
        if self.config.distinguisher == "bht":
            k, _ = bht_parameters(n, None, self.config.k, self.sim_config)
            return k + 1, k + n
        return 2, n

    def find_threshold_budget(self, n: int) -> ThresholdPoint:
        """
        Smallest total budget whose measured bias reaches the configured
        threshold: doubling up from the smallest budget, then bisection.

        Raises:
            ExperimentError: If even the largest budget falls short
        """
        target = self.sim_config.bias_threshold
        trials = self.threshold_trials()
        lowest, highest = self._budget_range(n)
        measured: Dict[int, BiasEstimate] = {}

        def passes(budget: int) -> bool:
            if budget not in measured:
                measured[budget] = self._estimate(n, budget, trials, "threshold")
            return measured[budget].bias >= target

        failing, budget = lowest - 1, lowest
        while not passes(budget):
            if budget >= highest:
                raise ExperimentError(
                    f"Bias {target} not reached at n={n} with budget {highest}",
                    details={"n": n, "budget": highest, "bias": measured[budget].bias}
                )
            failing, budget = budget, min(2 * budget, highest)

        while budget - failing > 1:
            middle = (failing + budget) // 2
            if passes(middle):
                budget = middle
            else:
                failing = middle

        logger.info(f"Threshold at n={n}: budget {budget} (bias {measured[budget].bias:.4f})")
        return ThresholdPoint(
            n=n,
            threshold_budget=budget,
            bias=measured[budget].bias,
            trials=trials,
        )

    def run_scaling(self) -> ScalingResult:
        """Threshold budget for every n and the fitted exponent."""
        if len(set(self.config.n_values)) < 3:
            raise FitError(
                f"Scaling needs at least 3 distinct sizes, got {self.config.n_values}",
                details={"n_values": self.config.n_values}
            )
        for n in self.config.n_values:
            self._budget_range(n)
        thresholds = [self.find_threshold_budget(n) for n in self.config.n_values]
        fit = fit_exponent([(p.n, p.threshold_budget) for p in thresholds])
        return ScalingResult(
            distinguisher=self.config.distinguisher,
            thresholds=thresholds,
            fit=fit,
        )

    def run_hybrid_gaps(self, profile: CollisionProfile, budget: Optional[int] = None) -> HybridGapReport:
        """Acceptance rate of the configured distinguisher on every hybrid of a profile, split at n**d."""
        budget = budget if budget is not None else self.default_budget(profile.n)
        hs = build_hybrids(profile, self.config.d)
        logger.info(f"Hybrid gaps: n={profile.n} d={self.config.d} budget={budget}, {len(hs.profiles)} hybrids")
        return measure_hybrid_gaps(
            self._distinguisher(profile.n, budget),
            hs,
            self.config.trials,
            trial_rng(self.config.seed, f"hybrids:{profile.n}:{budget}", 0),
            workers=self.config.workers,
        )
