"""
Exact simulation of Grover search over [n] with a classical marking oracle.

Only the n-dimensional search register is simulated: the marking predicate is
deterministic, so the phase-oracle form is exact and no ancilla is needed.
Starting from the uniform state, all marked amplitudes stay equal to each
other and so do all unmarked ones. Above statevector_max_n the engine keeps
just that pair of amplitudes, which is the same state written in its
invariant two-dimensional subspace.
"""

import math
from typing import Callable, NamedTuple, Optional

import numpy as np
from loguru import logger

from ..config.simulation_config import SimulationConfig, simulation_config
from ..utils.exceptions import InvalidParameterError, NormViolationError
from ..utils.validators import ParameterValidator, TableValidator


class StateVector:
    """
    n complex amplitudes with unit norm.

    Operators below return new states; a StateVector is never shared mutably.
    """

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes: np.ndarray, tolerance: Optional[float] = None):
        array = np.array(amplitudes, dtype=np.complex128)
        if array.ndim != 1 or array.size == 0:
            raise InvalidParameterError("Amplitudes must be a non-empty flat array")
        tol = tolerance if tolerance is not None else simulation_config.norm_tolerance
        norm = float(np.sum(np.abs(array) ** 2))
        if abs(norm - 1.0) > tol:
            raise NormViolationError(
                f"State norm {norm:.12f} differs from 1 by more than {tol}",
                details={"norm": norm}
            )
        array.setflags(write=False)
        self._amplitudes = array

    @property
    def n(self) -> int:
        return int(self._amplitudes.shape[0])

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    def probabilities(self) -> np.ndarray:
        return np.abs(self._amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sum(self.probabilities()))

    def __repr__(self) -> str:
        return f"StateVector(n={self.n})"


class BooleanOracle:
    """
    Static marking predicate H over [n] with an application counter.

    The counter grows by one per application to a whole state and per
    classical verification. The marking mask is the simulator's precomputed
    view and is never counted.
    """

    def __init__(self, mask: np.ndarray):
        marks = np.asarray(mask, dtype=bool).copy()
        if marks.ndim != 1 or marks.size == 0:
            raise InvalidParameterError("Marking mask must be a non-empty flat array")
        marks.setflags(write=False)
        self._mask = marks
        self._marked: Optional[np.ndarray] = None
        self._unmarked: Optional[np.ndarray] = None
        self.query_count = 0

    @classmethod
    def from_predicate(cls, n: int, predicate: Callable[[int], bool]) -> "BooleanOracle":
        """Tabulate a point predicate over [0, n)."""
        n = TableValidator.validate_size(n)
        return cls(np.fromiter((bool(predicate(x)) for x in range(n)), dtype=bool, count=n))

    @property
    def n(self) -> int:
        return int(self._mask.shape[0])

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @property
    def marked_count(self) -> int:
        return int(self.marked_indices.size)

    @property
    def marked_indices(self) -> np.ndarray:
        if self._marked is None:
            self._marked = np.flatnonzero(self._mask)
        return self._marked

    @property
    def unmarked_indices(self) -> np.ndarray:
        if self._unmarked is None:
            self._unmarked = np.flatnonzero(~self._mask)
        return self._unmarked

    def __call__(self, x: int) -> bool:
        index = TableValidator.validate_index(x, self.n)
        self.query_count += 1
        return bool(self._mask[index])

    def record_application(self) -> None:
        """Count one application of the phase oracle."""
        self.query_count += 1


class SearchResult(NamedTuple):
    x: int
    found: bool


def uniform_state(n: int) -> StateVector:
    """All amplitudes 1/sqrt(n)."""
    n = TableValidator.validate_size(n)
    return StateVector(np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128))


def apply_phase_oracle(s: StateVector, o: BooleanOracle) -> StateVector:
    """
    Negate the amplitudes of marked points; one oracle application.

    Raises:
        SizeMismatchError: If the state and oracle sizes differ
    """
    TableValidator.validate_same_size(state=s.n, oracle=o.n)
    o.record_application()
    return StateVector(np.where(o.mask, -s.amplitudes, s.amplitudes))


def apply_diffusion(s: StateVector) -> StateVector:
    """Reflect about the uniform state: a_x -> 2 mean(a) - a_x."""
    amplitudes = s.amplitudes
    return StateVector(2.0 * amplitudes.mean() - amplitudes)


def grover_success_probability(n: int, m: int, k: int) -> float:
    """
    Closed form sin^2((2k+1) theta), theta = arcsin(sqrt(m/n)).

    Zero when nothing is marked.
    """
    n = TableValidator.validate_size(n)
    k = ParameterValidator.validate_positive_int(k, "iterations", minimum=0)
    if not 0 <= m <= n:
        raise InvalidParameterError(f"Marked count {m} outside [0, {n}]", details={"m": m, "n": n})
    if m == 0:
        return 0.0
    theta = math.asin(math.sqrt(m / n))
    return math.sin((2 * k + 1) * theta) ** 2


def optimal_iterations(n: int, m: int) -> int:
    """Iteration count maximising success for a known marked count m >= 1."""
    if not 1 <= m <= n:
        raise InvalidParameterError(f"Marked count {m} outside [1, {n}]", details={"m": m, "n": n})
    amplitude = math.sqrt(m / n)
    return int(round(math.acos(amplitude) / (2 * math.asin(amplitude))))


def _evolve_statevector(o: BooleanOracle, k: int) -> np.ndarray:
    """Full-vector evolution; returns the final probabilities."""
    n = o.n
    amplitudes = np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
    sign = np.where(o.mask, -1.0, 1.0)
    for _ in range(k):
        o.record_application()
        amplitudes *= sign
        amplitudes = 2.0 * amplitudes.mean() - amplitudes
    return np.abs(amplitudes) ** 2


def _evolve_subspace(o: BooleanOracle, k: int) -> tuple:
    """Two-amplitude evolution; returns (per-point marked prob, per-point unmarked prob)."""
    n, m = o.n, o.marked_count
    u = n - m
    a_marked = a_unmarked = 1.0 / math.sqrt(n)
    for _ in range(k):
        o.record_application()
        a_marked = -a_marked
        mean = (m * a_marked + u * a_unmarked) / n
        a_marked, a_unmarked = 2.0 * mean - a_marked, 2.0 * mean - a_unmarked
    return a_marked ** 2, a_unmarked ** 2


def success_after(o: BooleanOracle, k: int, config: Optional[SimulationConfig] = None) -> float:
    """
    Simulated probability of measuring a marked point after k iterations.

    Runs the same engine as grover_search (so it spends k oracle applications)
    without measuring.
    """
    cfg = config or simulation_config
    if o.n <= cfg.statevector_max_n:
        probabilities = _evolve_statevector(o, k)
        return float(probabilities[o.mask].sum())
    p_marked, _ = _evolve_subspace(o, k)
    return float(o.marked_count * p_marked)


def _measure(probabilities: np.ndarray, rng: np.random.Generator, tolerance: float) -> int:
    """Inverse-CDF sample of one index."""
    cdf = np.cumsum(probabilities)
    total = float(cdf[-1])
    if abs(total - 1.0) > tolerance:
        raise NormViolationError(f"State norm {total:.12f} drifted", details={"norm": total})
    index = int(np.searchsorted(cdf, rng.random() * total, side="right"))
    return min(index, probabilities.shape[0] - 1)


def grover_search(
    o: BooleanOracle,
    n: int,
    k: int,
    rng: np.random.Generator,
    config: Optional[SimulationConfig] = None
) -> SearchResult:
    """
    k Grover iterations from the uniform state, one measurement, one
    classical verification.

    The oracle counter grows by exactly k + 1.

    Args:
        o: Marking oracle over [n]
        n: Domain size
        k: Iterations, at least 0
        rng: Random source for the measurement
        config: Engine configuration

    Returns:
        The measured point and whether it is marked
    """
    cfg = config or simulation_config
    TableValidator.validate_same_size(n=n, oracle=o.n)
    k = ParameterValidator.validate_positive_int(k, "iterations", minimum=0)

    if n <= cfg.statevector_max_n:
        x = _measure(_evolve_statevector(o, k), rng, cfg.norm_tolerance)
    else:
        p_marked, p_unmarked = _evolve_subspace(o, k)
        m = o.marked_count
        buckets = np.array([m * p_marked, (n - m) * p_unmarked])
        if _measure(buckets, rng, cfg.norm_tolerance) == 0:
            x = int(o.marked_indices[rng.integers(m)])
        else:
            x = int(o.unmarked_indices[rng.integers(n - m)])

    return SearchResult(x=x, found=o(x))


def bbht_search(
    o: BooleanOracle,
    n: int,
    budget: int,
    rng: np.random.Generator,
    config: Optional[SimulationConfig] = None
) -> SearchResult:
    """
    Search with an unknown number of marked points.

    Stage s draws an iteration count uniformly from [0, min(ceil(growth**s),
    ceil(pi/4 sqrt(n)))), runs grover_search and stops on success. The last
    attempt is shortened so the oracle counter never exceeds budget; without
    early stop a fruitless search spends exactly budget queries.
    """
    cfg = config or simulation_config
    budget = ParameterValidator.validate_positive_int(budget, "budget")
    TableValidator.validate_same_size(n=n, oracle=o.n)
    cap = math.ceil(math.pi / 4.0 * math.sqrt(n))

    spent, stage = 0, 0
    result = SearchResult(x=0, found=False)
    while spent < budget:
        limit = min(math.ceil(cfg.bbht_growth ** stage), cap)
        iterations = min(int(rng.integers(0, limit)), budget - spent - 1)
        result = grover_search(o, n, iterations, rng, cfg)
        spent += iterations + 1
        if result.found:
            logger.debug(f"Search hit x={result.x} after {spent} queries (stage {stage})")
            return result
        if cfg.bbht_early_stop and limit >= cap:
            break
        stage += 1

    logger.debug(f"Search exhausted {spent}/{budget} queries without a hit")
    return result
