"""
RP-RF distinguishers with exact query accounting.

Classical birthday baseline, the table-plus-search collision algorithm,
the conjugation wrapper that turns average-case behavior over a collision
class into worst-case behavior, repetition with a threshold, and the bias
estimators that drive every experiment.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field
from scipy import stats

from ..config.settings import settings
from ..config.simulation_config import SimulationConfig, simulation_config
from ..domain.interfaces import IDistinguisher, IOracle
from ..utils.exceptions import InvalidParameterError, SimulationError
from ..utils.helpers import ceil_root, child_seed, trial_rng, two_proportion_halfwidth
from ..utils.validators import ParameterValidator, TableValidator
from .collision_profiles import profile_sampler
from .function_model import (
    CountingOracle,
    FunctionSampler,
    FunctionTable,
    sample_uniform_permutation,
)
from .hybrids_reductions import HybridSequence
from .quantum_query_sim import BooleanOracle, bbht_search

DistinguisherName = Literal["birthday", "bht"]


class DistinguisherReport(BaseModel):
    """Output bit of one run plus its exact query counts."""

    output_bit: int = Field(..., ge=0, le=1)
    classical_queries: int = Field(default=0, ge=0)
    oracle_queries: int = Field(default=0, ge=0, description="Quantum oracle applications")
    transcript: Optional[List[Tuple[int, int]]] = Field(
        default=None,
        description="Classically queried (x, f(x)) pairs"
    )
    collision: Optional[Tuple[int, int]] = Field(
        default=None,
        description="Distinct x, y with f(x) == f(y) behind an output of 1"
    )

    @property
    def total_queries(self) -> int:
        return self.classical_queries + self.oracle_queries


class BiasEstimate(BaseModel):
    """Acceptance rates under the two input distributions."""

    p_function: float = Field(..., ge=0.0, le=1.0)
    p_permutation: float = Field(..., ge=0.0, le=1.0)
    bias: float = Field(..., ge=-1.0, le=1.0, description="p_function - p_permutation")
    abs_bias: float = Field(..., ge=0.0, le=1.0)
    trials: int = Field(..., ge=1)
    confidence_halfwidth: float = Field(..., ge=0.0)


class HybridGapReport(BaseModel):
    """Acceptance rate on every hybrid and the gaps between neighbours."""

    rates: List[float]
    gaps: List[float]
    largest_gap_index: Optional[int]
    total: float
    telescoping_holds: bool
    largest_gap_bound_holds: bool


def _first_collision(points: np.ndarray, values: np.ndarray) -> Optional[Tuple[int, int]]:
    """First pair of queried points (in sorted-value order) sharing a value."""
    order = np.argsort(values, kind="stable")
    ordered = values[order]
    hits = np.flatnonzero(ordered[1:] == ordered[:-1])
    if hits.size == 0:
        return None
    i = int(hits[0])
    return int(points[order[i]]), int(points[order[i + 1]])


def _transcript(points: np.ndarray, values: np.ndarray) -> List[Tuple[int, int]]:
    return [(int(x), int(y)) for x, y in zip(points, values)]


def classical_birthday(oracle: IOracle, q: int, rng: np.random.Generator) -> DistinguisherReport:
    """
    Query q distinct uniform points; output 1 iff two answers collide.

    Raises:
        InvalidParameterError: If q is outside [1, n]
    """
    q = ParameterValidator.validate_budget(q, oracle.n)
    before = oracle.query_count
    points = rng.choice(oracle.n, size=q, replace=False).astype(np.int64)
    values = np.asarray(oracle.query_many(points), dtype=np.int64)
    collision = _first_collision(points, values)
    return DistinguisherReport(
        output_bit=int(collision is not None),
        classical_queries=oracle.query_count - before,
        transcript=_transcript(points, values),
        collision=collision,
    )


def build_marked_oracle(
    table_entries: Sequence[Tuple[int, int]],
    oracle: IOracle
) -> BooleanOracle:
    """
    Marking oracle H for the table L = {(s, f(s)) : s in T}.

    H(x) = 1 iff some s in T with s != x has f(x) == L(s). The mask is built
    from the simulator's uncounted view; every later application of H is
    counted by the returned oracle, one f-query each.

    Raises:
        InvalidParameterError: If an entry disagrees with the oracle
    """
    table = oracle.peek_table()
    points = np.fromiter((s for s, _ in table_entries), dtype=np.int64)
    values = np.fromiter((v for _, v in table_entries), dtype=np.int64)
    for s in points:
        TableValidator.validate_index(int(s), oracle.n)
    if points.size and not np.array_equal(table[points], values):
        raise InvalidParameterError("Table entries disagree with the oracle")

    mask = np.isin(table, values)
    if points.size:
        # a point of T matches itself; keep it only if another s carries its value
        distinct, counts = np.unique(values, return_counts=True)
        shared = dict(zip(distinct.tolist(), counts.tolist()))
        mask[points] = [shared[int(v)] >= 2 for v in values]
    return BooleanOracle(mask)


def bht_distinguisher(
    oracle: IOracle,
    k: int,
    grover_budget: int,
    rng: np.random.Generator,
    config: Optional[SimulationConfig] = None
) -> DistinguisherReport:
    """
    Table-plus-search collision distinguisher.

    Sample T of size k and query it classically. Output 1 straight away on a
    collision inside T; otherwise run the unknown-count search for a point
    outside T hitting a table value, within grover_budget applications of H.

    Args:
        oracle: Input function
        k: Table size, 1 <= k <= n
        grover_budget: Largest number of H applications, 0 skips the search
        rng: Random source
        config: Engine configuration

    Returns:
        Report; oracle_queries counts applications of H
    """
    n = oracle.n
    k = ParameterValidator.validate_budget(k, n, "table size k")
    grover_budget = ParameterValidator.validate_positive_int(grover_budget, "grover budget", minimum=0)
    before = oracle.query_count

    points = rng.choice(n, size=k, replace=False).astype(np.int64)
    values = np.asarray(oracle.query_many(points), dtype=np.int64)
    transcript = _transcript(points, values)

    collision = _first_collision(points, values)
    if collision is not None:
        return DistinguisherReport(
            output_bit=1,
            classical_queries=oracle.query_count - before,
            transcript=transcript,
            collision=collision,
        )

    if grover_budget == 0:
        return DistinguisherReport(
            output_bit=0,
            classical_queries=oracle.query_count - before,
            transcript=transcript,
        )

    marked = build_marked_oracle(transcript, oracle)
    result = bbht_search(marked, n, grover_budget, rng, config)
    if result.found:
        target = int(oracle.peek_table()[result.x])
        partner = int(points[np.flatnonzero(values == target)[0]])
        collision = (partner, result.x)

    return DistinguisherReport(
        output_bit=int(result.found),
        classical_queries=oracle.query_count - before,
        oracle_queries=marked.query_count,
        transcript=transcript,
        collision=collision,
    )


class ConjugatedOracle(IOracle):
    """
    Virtual oracle x -> pi(f(sigma(x))).

    Each virtual query costs exactly one query to the base oracle.
    """

    def __init__(self, base: IOracle, pi: FunctionTable, sigma: FunctionTable):
        TableValidator.validate_same_size(base=base.n, pi=pi.n, sigma=sigma.n)
        TableValidator.validate_bijection(pi.values, "pi")
        TableValidator.validate_bijection(sigma.values, "sigma")
        self._base = base
        self._pi = pi
        self._sigma = sigma
        self._pi_inverse = np.argsort(pi.values)
        self._query_count = 0

    @property
    def n(self) -> int:
        return self._base.n

    @property
    def query_count(self) -> int:
        return self._query_count

    def query(self, x: int) -> int:
        index = TableValidator.validate_index(x, self.n)
        value = self._base.query(int(self._sigma.values[index]))
        self._query_count += 1
        return int(self._pi.values[value])

    def query_many(self, xs: np.ndarray) -> np.ndarray:
        points = np.asarray(xs, dtype=np.int64)
        for x in points[(points < 0) | (points >= self.n)][:1]:
            TableValidator.validate_index(int(x), self.n)
        values = np.asarray(self._base.query_many(self._sigma.values[points]), dtype=np.int64)
        self._query_count += int(points.size)
        return self._pi.values[values]

    def reset(self) -> None:
        self._query_count = 0

    def peek_table(self) -> np.ndarray:
        return self._pi.values[self._base.peek_table()[self._sigma.values]]

    def to_base_point(self, x: int) -> int:
        """Base-oracle point behind virtual point x."""
        return int(self._sigma.values[x])

    def to_base_value(self, y: int) -> int:
        """Base-oracle value behind virtual value y."""
        return int(self._pi_inverse[y])


def conjugated_distinguisher(
    inner: IDistinguisher,
    oracle: IOracle,
    rng: np.random.Generator
) -> DistinguisherReport:
    """
    Run inner against x -> pi(f(sigma(x))) with fresh uniform pi, sigma.

    Query counts are inner's. Transcript and collision are mapped back to
    points and values of the real oracle.
    """
    pi = sample_uniform_permutation(oracle.n, rng)
    sigma = sample_uniform_permutation(oracle.n, rng)
    virtual = ConjugatedOracle(oracle, pi, sigma)
    report = inner.run(virtual, rng)

    updates: Dict[str, object] = {}
    if report.transcript is not None:
        updates["transcript"] = [
            (virtual.to_base_point(x), virtual.to_base_value(y)) for x, y in report.transcript
        ]
    if report.collision is not None:
        x, y = report.collision
        updates["collision"] = (virtual.to_base_point(x), virtual.to_base_point(y))
    return report.model_copy(update=updates)


def amplify(
    inner: IDistinguisher,
    reps: int,
    threshold: float,
    oracle: IOracle,
    rng: np.random.Generator
) -> DistinguisherReport:
    """
    Repeat inner reps times and output 1 iff the acceptance fraction reaches
    threshold.

    Args:
        inner: Distinguisher to repeat
        reps: Repetitions, at least 1
        threshold: Acceptance fraction in (0, 1]
        oracle: Input function, shared by all repetitions
        rng: Random source; every repetition continues the stream

    Returns:
        Report whose counts are the sums over repetitions
    """
    reps = ParameterValidator.validate_positive_int(reps, "reps")
    if not 0.0 < threshold <= 1.0:
        raise InvalidParameterError(
            f"threshold must lie in (0, 1], got {threshold}",
            details={"threshold": threshold}
        )

    accepted, classical, quantum = 0, 0, 0
    collision = None
    for _ in range(reps):
        report = inner.run(oracle, rng)
        accepted += report.output_bit
        classical += report.classical_queries
        quantum += report.oracle_queries
        if collision is None:
            collision = report.collision

    return DistinguisherReport(
        output_bit=int(accepted >= threshold * reps),
        classical_queries=classical,
        oracle_queries=quantum,
        collision=collision,
    )


class ClassicalBirthday(IDistinguisher):
    """Birthday baseline with a fixed budget q."""

    def __init__(self, q: int):
        self.q = ParameterValidator.validate_positive_int(q, "query budget")

    @property
    def name(self) -> str:
        return f"birthday[q={self.q}]"

    def run(self, oracle: IOracle, rng: np.random.Generator) -> DistinguisherReport:
        return classical_birthday(oracle, self.q, rng)


class BHTDistinguisher(IDistinguisher):
    """Table-plus-search distinguisher with fixed k and search budget."""

    def __init__(self, k: int, grover_budget: int, config: Optional[SimulationConfig] = None):
        self.k = ParameterValidator.validate_positive_int(k, "table size k")
        self.grover_budget = ParameterValidator.validate_positive_int(
            grover_budget, "grover budget", minimum=0
        )
        self.config = config

    @property
    def name(self) -> str:
        return f"bht[k={self.k},grover={self.grover_budget}]"

    def run(self, oracle: IOracle, rng: np.random.Generator) -> DistinguisherReport:
        return bht_distinguisher(oracle, self.k, self.grover_budget, rng, self.config)


class ConjugatedDistinguisher(IDistinguisher):
    """inner behind a freshly conjugated oracle on every run."""

    def __init__(self, inner: IDistinguisher):
        self.inner = inner

    @property
    def name(self) -> str:
        return f"conjugated({self.inner.name})"

    def run(self, oracle: IOracle, rng: np.random.Generator) -> DistinguisherReport:
        return conjugated_distinguisher(self.inner, oracle, rng)


class AmplifiedDistinguisher(IDistinguisher):
    """inner repeated with an acceptance threshold."""

    def __init__(self, inner: IDistinguisher, reps: int, threshold: float):
        self.inner = inner
        self.reps = ParameterValidator.validate_positive_int(reps, "reps")
        self.threshold = threshold

    @property
    def name(self) -> str:
        return f"amplify({self.inner.name},reps={self.reps},threshold={self.threshold})"

    def run(self, oracle: IOracle, rng: np.random.Generator) -> DistinguisherReport:
        return amplify(self.inner, self.reps, self.threshold, oracle, rng)


class ConstantDistinguisher(IDistinguisher):
    """Outputs a fixed bit without querying."""

    def __init__(self, bit: int):
        if bit not in (0, 1):
            raise InvalidParameterError(f"bit must be 0 or 1, got {bit}")
        self.bit = bit

    @property
    def name(self) -> str:
        return f"constant[{self.bit}]"

    def run(self, oracle: IOracle, rng: np.random.Generator) -> DistinguisherReport:
        return DistinguisherReport(output_bit=self.bit)


def worst_case_distinguisher(inner: IDistinguisher, reps: int, threshold: float) -> IDistinguisher:
    """Bounded-error distinguisher for one collision class: amplify(conjugated(inner))."""
    return AmplifiedDistinguisher(ConjugatedDistinguisher(inner), reps, threshold)


def bht_parameters(
    n: int,
    budget: Optional[int] = None,
    k: Optional[int] = None,
    config: Optional[SimulationConfig] = None
) -> Tuple[int, int]:
    """
    Resolve (k, grover_budget) from a total budget.

    k defaults to ceil(n**(1/3)); the total budget defaults to
    k + grover_budget_factor * ceil(n**(1/3)).

    Raises:
        InvalidParameterError: If budget < k or k > n
    """
    cfg = config or simulation_config
    n = TableValidator.validate_size(n)
    root = ceil_root(n, 3)
    k = ParameterValidator.validate_budget(k if k is not None else min(root, n), n, "table size k")
    if budget is None:
        budget = k + cfg.grover_budget_factor * root
    budget = ParameterValidator.validate_positive_int(budget, "budget")
    if budget < k:
        raise InvalidParameterError(
            f"Total budget {budget} is smaller than table size k={k}",
            details={"budget": budget, "k": k}
        )
    return k, budget - k


def build_distinguisher(
    name: DistinguisherName,
    n: int,
    budget: Optional[int] = None,
    k: Optional[int] = None,
    config: Optional[SimulationConfig] = None
) -> IDistinguisher:
    """
    Distinguisher for a total query budget.

    Birthday spends the whole budget classically (default ceil(sqrt(n))).
    """
    if name == "birthday":
        q = budget if budget is not None else ceil_root(n, 2)
        return ClassicalBirthday(ParameterValidator.validate_budget(q, n))
    if name == "bht":
        table_size, grover_budget = bht_parameters(n, budget, k, config)
        return BHTDistinguisher(table_size, grover_budget, config)
    raise InvalidParameterError(f"Unknown distinguisher: {name}", details={"name": name})


def _run_trial(
    distinguisher: IDistinguisher,
    sampler: FunctionSampler,
    seed: int,
    stream: str,
    index: int
) -> int:
    rng = trial_rng(seed, stream, index)
    oracle = CountingOracle(sampler(rng))
    report = distinguisher.run(oracle, rng)
    if report.classical_queries != oracle.query_count:
        raise SimulationError(
            f"{distinguisher.name} reported {report.classical_queries} classical queries, "
            f"oracle served {oracle.query_count}",
            details={"stream": stream, "index": index}
        )
    return report.output_bit


def acceptance_rate(
    distinguisher: IDistinguisher,
    sampler: FunctionSampler,
    trials: int,
    seed: int,
    stream: str,
    workers: Optional[int] = None
) -> float:
    """
    Fraction of trials accepted, each on a fresh sample and fresh oracle.

    Trial i uses the source keyed by (seed, stream, i), so the result does
    not depend on the worker count.
    """
    trials = ParameterValidator.validate_positive_int(trials, "trials")
    pool_size = workers or settings.max_workers

    def trial(index: int) -> int:
        return _run_trial(distinguisher, sampler, seed, stream, index)

    if pool_size > 1:
        with ThreadPoolExecutor(max_workers=pool_size) as executor:
            outputs = list(executor.map(trial, range(trials)))
    else:
        outputs = [trial(index) for index in range(trials)]
    return sum(outputs) / trials


def normal_quantile(confidence_level: float) -> float:
    """Two-sided normal quantile for a confidence level."""
    return float(stats.norm.ppf(1.0 - (1.0 - confidence_level) / 2.0))


def estimate_bias(
    distinguisher: IDistinguisher,
    sampler_one: FunctionSampler,
    sampler_zero: FunctionSampler,
    trials: int,
    rng: np.random.Generator,
    workers: Optional[int] = None,
    config: Optional[SimulationConfig] = None
) -> BiasEstimate:
    """
    Monte Carlo bias of a distinguisher between two input distributions.

    Args:
        distinguisher: Distinguisher under test
        sampler_one: D_F or D_C
        sampler_zero: D_P
        trials: Trials per distribution
        rng: Source of the master seed for the per-trial streams
        workers: Thread pool width (settings.max_workers by default)
        config: Supplies the confidence level

    Returns:
        Rates, signed and absolute bias, and the two-proportion halfwidth
    """
    cfg = config or simulation_config
    trials = ParameterValidator.validate_positive_int(trials, "trials")
    seed = child_seed(rng)

    p_one = acceptance_rate(distinguisher, sampler_one, trials, seed, "function", workers)
    p_zero = acceptance_rate(distinguisher, sampler_zero, trials, seed, "permutation", workers)
    halfwidth = two_proportion_halfwidth(p_one, p_zero, trials, normal_quantile(cfg.confidence_level))

    logger.debug(
        f"{distinguisher.name}: p1={p_one:.4f} p0={p_zero:.4f} over {trials} trials"
    )
    return BiasEstimate(
        p_function=p_one,
        p_permutation=p_zero,
        bias=p_one - p_zero,
        abs_bias=abs(p_one - p_zero),
        trials=trials,
        confidence_halfwidth=halfwidth,
    )


def measure_hybrid_gaps(
    distinguisher: IDistinguisher,
    hs: HybridSequence,
    trials: int,
    rng: np.random.Generator,
    workers: Optional[int] = None
) -> HybridGapReport:
    """
    Acceptance rate on the uniform distribution of every hybrid.

    Adjacent gaps telescope to p(H_last) - p(H_0), so some gap is at least
    the total divided by the number of steps.
    """
    seed = child_seed(rng)
    rates = [
        acceptance_rate(distinguisher, profile_sampler(profile), trials, seed, f"hybrid-{j}", workers)
        for j, profile in enumerate(hs.profiles)
    ]
    gaps = [later - earlier for earlier, later in zip(rates, rates[1:])]
    total = rates[-1] - rates[0]
    largest = int(np.argmax(np.abs(gaps))) if gaps else None
    steps = max(len(gaps), 1)

    return HybridGapReport(
        rates=rates,
        gaps=gaps,
        largest_gap_index=largest,
        total=total,
        telescoping_holds=math.isclose(sum(gaps), total, abs_tol=1e-9),
        largest_gap_bound_holds=(
            abs(total) <= 1e-12 if not gaps else abs(gaps[largest]) + 1e-12 >= abs(total) / steps
        ),
    )


def birthday_acceptance(n: int, q: int) -> float:
    """Exact P(collision) among q distinct uniform points of a uniform function."""
    n = TableValidator.validate_size(n)
    q = ParameterValidator.validate_positive_int(q, "query budget", minimum=0)
    if q > n:
        return 1.0
    return float(1.0 - np.exp(np.sum(np.log1p(-np.arange(q) / n))))


def birthday_approximation(n: int, q: int) -> float:
    """1 - exp(-q(q-1)/(2n))."""
    return 1.0 - math.exp(-q * (q - 1) / (2.0 * n))


def hoeffding_error_bound(reps: int, gap: float) -> float:
    """One-sided Hoeffding bound exp(-2 reps gap^2) on the error of amplify."""
    return math.exp(-2.0 * reps * gap * gap)

