"""
Self-contained checks of the structural claims behind the simulator.

verify_claims samples everything it needs from one master seed and returns a
machine-readable pass/fail report:

* good: fraction of uniform functions with a good profile
* load: fraction of range values with k preimages against e^-1 / k!
* maxload: how often maxload reaches the goodness threshold, against 1/n
* hybrid_length: hybrid chain length of sampled good profiles
* conjugation: uniformity of conjugation over one collision class at n=4
"""

import itertools
import math
from collections import Counter
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel
from scipy import stats

from ..config.simulation_config import SimulationConfig, simulation_config
from ..core.collision_profiles import (
    CollisionProfile,
    binomial_load_fraction,
    enumerate_class,
    is_good,
    load_fractions,
    maxload,
    poisson_load_fraction,
    profile_of,
)
from ..core.function_model import (
    FunctionTable,
    conjugate,
    sample_uniform_function,
    sample_uniform_permutation,
)
from ..core.hybrids_reductions import build_hybrids
from ..utils.exceptions import InvalidParameterError
from ..utils.helpers import goodness_threshold, trial_rng
from ..utils.validators import ParameterValidator

MIN_CLAIMS_N = 16
GOOD_FRACTION_SLACK = 0.005
LOAD_SAMPLES = 10
LOAD_KS = (0, 1, 2, 3, 4)
LOAD_TOLERANCE = {0: 0.01, 1: 0.01, 2: 0.01, 3: 0.005, 4: 0.005}
CONJUGATION_BASE = (0, 0, 1, 2)
MIN_CONJUGATION_DRAWS = 2880


class ClaimResult(BaseModel):
    name: str
    passed: bool
    measured: Dict[str, Any]
    expected: Dict[str, Any]


class ClaimsReport(BaseModel):
    n: int
    trials: int
    seed: int
    claims: List[ClaimResult]

    @property
    def passed(self) -> bool:
        return all(claim.passed for claim in self.claims)


def _threshold(n: int, cfg: SimulationConfig) -> float:
    return goodness_threshold(n, cfg.goodness_constant, cfg.goodness_log_base)


def check_good_fraction(profiles: List[CollisionProfile], cfg: SimulationConfig) -> ClaimResult:
    n = profiles[0].n
    good = sum(is_good(p, cfg.goodness_constant, cfg.goodness_log_base) for p in profiles)
    fraction = good / len(profiles)
    floor = 1.0 - 1.0 / n - GOOD_FRACTION_SLACK
    return ClaimResult(
        name="good",
        passed=fraction >= floor,
        measured={"fraction": fraction, "samples": len(profiles)},
        expected={"at_least": floor},
    )


def check_load_fractions(n: int, seed: int, samples: int) -> ClaimResult:
    """
    Range-value load fractions averaged over samples tables.

    A fraction passes when it sits within its tolerance, widened to four
    standard errors at small n, of the exact finite-n expectation; the
    distance to the Poisson limit is reported next to it.
    """
    range_sum = np.zeros(len(LOAD_KS))
    domain_sum = np.zeros(len(LOAD_KS))
    for index in range(samples):
        f = sample_uniform_function(n, trial_rng(seed, "claims-load", index))
        for reading, total in (("range", range_sum), ("domain", domain_sum)):
            fractions = load_fractions(f, reading)
            upto = min(fractions.shape[0], len(LOAD_KS))
            total[:upto] += fractions[:upto]
    range_mean = range_sum / samples
    domain_mean = domain_sum / samples

    passed = True
    measured, expected = {}, {}
    for k in LOAD_KS:
        exact = binomial_load_fraction(n, k)
        error = 4.0 * math.sqrt(exact * (1.0 - exact) / (n * samples))
        tolerance = max(LOAD_TOLERANCE[k], error)
        ok = bool(abs(range_mean[k] - exact) <= tolerance)
        passed = passed and ok
        measured[f"range_{k}"] = float(range_mean[k])
        measured[f"domain_{k}"] = float(domain_mean[k])
        expected[f"range_{k}"] = {
            "poisson": poisson_load_fraction(k, "range"),
            "binomial": exact,
            "tolerance": tolerance,
        }
        expected[f"domain_{k}"] = poisson_load_fraction(k, "domain")
    return ClaimResult(name="load", passed=passed, measured=measured, expected=expected)


def check_maxload(profiles: List[CollisionProfile], cfg: SimulationConfig) -> ClaimResult:
    """
    Largest observed maxload against the goodness threshold.

    A uniform function reaches the threshold with probability at most 1/n,
    so the check fails only when the number of samples at or above it is
    improbable under that rate at the configured significance level.
    """
    loads = np.array([maxload(p) for p in profiles])
    n = profiles[0].n
    threshold = _threshold(n, cfg)
    exceeding = int(np.count_nonzero(loads >= threshold))
    tail_p = float(stats.binom.sf(exceeding - 1, loads.size, 1.0 / n))
    return ClaimResult(
        name="maxload",
        passed=tail_p > cfg.chi_square_alpha,
        measured={
            "mean": float(loads.mean()),
            "max": int(loads.max()),
            "exceeding": exceeding,
            "p_value": tail_p,
        },
        expected={"below": threshold, "exceed_rate_at_most": 1.0 / n, "p_value_above": cfg.chi_square_alpha},
    )


def check_hybrid_lengths(profiles: List[CollisionProfile], cfg: SimulationConfig) -> ClaimResult:
    n = profiles[0].n
    bound = _threshold(n, cfg) + 2
    good = [p for p in profiles if is_good(p, cfg.goodness_constant, cfg.goodness_log_base)]
    lengths = [len(build_hybrids(p, cfg.hybrid_exponent)) for p in good]
    longest = max(lengths) if lengths else 0
    return ClaimResult(
        name="hybrid_length",
        passed=longest <= bound,
        measured={"max_length": longest, "profiles": len(lengths)},
        expected={"at_most": bound},
    )


def conjugation_counts(base: FunctionTable) -> Counter:
    """Multiset of pi . base . sigma over every pair of permutations."""
    n = base.n
    counts: Counter = Counter()
    perms = [FunctionTable.from_values(p) for p in itertools.permutations(range(n))]
    for pi in perms:
        for sigma in perms:
            counts[conjugate(base, pi, sigma).key()] += 1
    return counts


def check_conjugation(seed: int, draws: int, cfg: SimulationConfig) -> ClaimResult:
    """Chi-square of random conjugates against uniform, plus the exact enumeration."""
    base = FunctionTable.from_values(CONJUGATION_BASE)
    members = [member.key() for member in enumerate_class(profile_of(base))]
    index = {key: i for i, key in enumerate(members)}

    observed = np.zeros(len(members), dtype=np.int64)
    rng = trial_rng(seed, "claims-conjugation", 0)
    for _ in range(draws):
        pi = sample_uniform_permutation(base.n, rng)
        sigma = sample_uniform_permutation(base.n, rng)
        observed[index[conjugate(base, pi, sigma).key()]] += 1
    p_value = float(stats.chisquare(observed).pvalue)

    exact = conjugation_counts(base)
    hits = set(exact.values())
    exact_uniform = set(exact) == set(members) and len(hits) == 1
    return ClaimResult(
        name="conjugation",
        passed=p_value > cfg.chi_square_alpha and exact_uniform,
        measured={
            "class_size": len(members),
            "draws": draws,
            "p_value": p_value,
            "hits_per_member": sorted(hits),
        },
        expected={"p_value_above": cfg.chi_square_alpha, "uniform_enumeration": True},
    )


def verify_claims(
    n: int,
    trials: int,
    seed: int,
    config: Optional[SimulationConfig] = None
) -> ClaimsReport:
    """
    Run every check at size n.

    Args:
        n: Domain size, at least 16
        trials: Uniform functions sampled for the good/maxload/hybrid checks
        seed: Master seed
        config: Goodness, hybrid and significance constants

    Returns:
        Report with one entry per check
    """
    cfg = config or simulation_config
    trials = ParameterValidator.validate_positive_int(trials, "trials")
    if n < MIN_CLAIMS_N:
        raise InvalidParameterError(
            f"verify-claims needs n >= {MIN_CLAIMS_N}, got {n}",
            details={"n": n}
        )

    logger.info(f"Verifying claims at n={n} with {trials} trials, seed={seed}")
    profiles = [
        profile_of(sample_uniform_function(n, trial_rng(seed, "claims-good", index)))
        for index in range(trials)
    ]

    claims = [
        check_good_fraction(profiles, cfg),
        check_load_fractions(n, seed, min(trials, LOAD_SAMPLES)),
        check_maxload(profiles, cfg),
        check_hybrid_lengths(profiles, cfg),
        check_conjugation(seed, max(trials, MIN_CONJUGATION_DRAWS), cfg),
    ]
    for claim in claims:
        logger.info(f"Claim {claim.name}: {'pass' if claim.passed else 'FAIL'}")
    return ClaimsReport(n=n, trials=trials, seed=seed, claims=claims)
