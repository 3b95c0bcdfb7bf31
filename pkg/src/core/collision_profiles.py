"""
Multiplicity, collision profiles, maxload and goodness.

A collision profile records, for each multiplicity i, how many domain
elements x satisfy |f^-1(f(x))| = i. Profiles are stored sparsely since a good
profile has only O(log n / log log n) nonzero entries.
"""

import itertools
import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterator, List, Literal, Mapping, Optional, Tuple

import numpy as np
from scipy import stats

from ..config.simulation_config import simulation_config
from ..utils.exceptions import InvalidParameterError
from ..utils.helpers import goodness_threshold
from ..utils.validators import ProfileValidator, TableValidator
from .function_model import FunctionSampler, FunctionTable, conjugate, sample_uniform_permutation

LoadReading = Literal["range", "domain"]

# Exhaustive class enumeration walks all n**n tables.
MAX_ENUMERATION_N = 6


@dataclass(frozen=True, eq=False)
class CollisionProfile:
    """
    Sparse collision profile <b_1, ..., b_n>.

    Invariants: sum of b_i is n, i divides b_i, stored b_i are positive.
    """

    n: int
    counts: Mapping[int, int] = field(repr=False)

    def __post_init__(self):
        n = TableValidator.validate_size(self.n)
        clean = ProfileValidator.validate_counts(n, self.counts)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "counts", MappingProxyType(clean))

    @classmethod
    def permutation(cls, n: int) -> "CollisionProfile":
        """The profile <n, 0, ..., 0> shared by every bijection."""
        return cls(n=n, counts={1: n})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CollisionProfile):
            return NotImplemented
        return self.n == other.n and dict(self.counts) == dict(other.counts)

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.counts.items())))

    def __repr__(self) -> str:
        return f"CollisionProfile(n={self.n}, counts={dict(self.counts)})"

    def get(self, i: int) -> int:
        """b_i, zero when absent."""
        return self.counts.get(i, 0)

    def items(self) -> Iterator[Tuple[int, int]]:
        """(i, b_i) pairs in increasing i."""
        return iter(self.counts.items())

    def blocks(self) -> Dict[int, int]:
        """Number of preimage blocks per multiplicity, b_i / i."""
        return {i: b // i for i, b in self.counts.items()}

    def distinct_values(self) -> int:
        """Size of the image of any function with this profile."""
        return sum(b // i for i, b in self.counts.items())


def multiplicities(f: FunctionTable) -> np.ndarray:
    """Multiplicity of every domain element, as one array."""
    hits = np.bincount(f.values, minlength=f.n)
    return hits[f.values]


def multiplicity(f: FunctionTable, x: int) -> int:
    """
    |f^-1(f(x))|.

    Raises:
        DomainIndexError: If x is outside [0, n)
    """
    index = TableValidator.validate_index(x, f.n)
    return int(np.count_nonzero(f.values == f.values[index]))


def load_histogram(f: FunctionTable) -> np.ndarray:
    """
    Entry k is the number of range values with exactly k preimages.

    The array has length maxload + 1 and sums to n.
    """
    hits = np.bincount(f.values, minlength=f.n)
    return np.bincount(hits)


def profile_of(f: FunctionTable) -> CollisionProfile:
    """Col(f): for each i, the number of domain elements of multiplicity i."""
    histogram = load_histogram(f)
    counts = {
        int(k): int(k * histogram[k])
        for k in np.flatnonzero(histogram)
        if k > 0
    }
    return CollisionProfile(n=f.n, counts=counts)


def maxload(profile: CollisionProfile) -> int:
    """Largest multiplicity present."""
    return max(profile.counts)


def is_good(
    profile: CollisionProfile,
    constant: Optional[float] = None,
    base: Optional[float] = None
) -> bool:
    """
    Goodness predicate: maxload < constant * log n / log log n.

    Args:
        profile: Profile to test
        constant: Leading constant (configured default 3)
        base: Logarithm base (configured default 2)

    Raises:
        InvalidParameterError: If n < 4, where log log n is not positive
    """
    if profile.n < 4:
        raise InvalidParameterError(
            f"Goodness threshold undefined for n={profile.n} < 4",
            details={"n": profile.n}
        )
    threshold = goodness_threshold(
        profile.n,
        constant if constant is not None else simulation_config.goodness_constant,
        base if base is not None else simulation_config.goodness_log_base,
    )
    return maxload(profile) < threshold


def collision_equivalent(f: FunctionTable, g: FunctionTable) -> bool:
    """
    True iff Col(f) == Col(g).

    Raises:
        SizeMismatchError: If f and g have different sizes
    """
    TableValidator.validate_same_size(f=f.n, g=g.n)
    return profile_of(f) == profile_of(g)


def canonical_function(profile: CollisionProfile) -> FunctionTable:
    """
    A fixed member of the class of profile.

    Blocks are laid out over consecutive domain segments in increasing
    multiplicity; a block of size i maps every element to the block's first
    element.
    """
    values = np.empty(profile.n, dtype=np.int64)
    start = 0
    for i, b in profile.items():
        segment = np.arange(start, start + b, dtype=np.int64)
        values[start:start + b] = start + ((segment - start) // i) * i
        start += b
    return FunctionTable(n=profile.n, values=values)


def sample_from_profile(profile: CollisionProfile, rng: np.random.Generator) -> FunctionTable:
    """
    Uniform draw from the class of profile.

    Conjugating one fixed member by independent uniform permutations on both
    sides is uniform over the class.
    """
    pi = sample_uniform_permutation(profile.n, rng)
    sigma = sample_uniform_permutation(profile.n, rng)
    return conjugate(canonical_function(profile), pi, sigma)


def profile_sampler(profile: CollisionProfile) -> FunctionSampler:
    """Sampler for D_C."""
    base = canonical_function(profile)
    n = profile.n

    def sample(rng: np.random.Generator) -> FunctionTable:
        pi = sample_uniform_permutation(n, rng)
        sigma = sample_uniform_permutation(n, rng)
        return conjugate(base, pi, sigma)

    sample.__name__ = f"profile[{dict(profile.counts)}]"
    return sample


def class_size(profile: CollisionProfile) -> int:
    """
    Number of tables with this profile.

    Set partitions of [n] with the profile's block sizes, times the injective
    assignments of blocks to range values.
    """
    n = profile.n
    partitions = math.factorial(n)
    for i, blocks in profile.blocks().items():
        partitions //= math.factorial(i) ** blocks * math.factorial(blocks)
    assignments = math.perm(n, profile.distinct_values())
    return partitions * assignments


def enumerate_class(profile: CollisionProfile) -> List[FunctionTable]:
    """
    Every member of the class, in lexicographic order.

    Raises:
        InvalidParameterError: If n is too large to enumerate
    """
    if profile.n > MAX_ENUMERATION_N:
        raise InvalidParameterError(
            f"Class enumeration limited to n <= {MAX_ENUMERATION_N}, got n={profile.n}"
        )
    members = []
    for entries in itertools.product(range(profile.n), repeat=profile.n):
        table = FunctionTable(n=profile.n, values=np.asarray(entries, dtype=np.int64))
        if profile_of(table) == profile:
            members.append(table)
    return members


def load_fractions(f: FunctionTable, reading: LoadReading = "range") -> np.ndarray:
    """
    Empirical load statistics of one table.

    Args:
        f: Table
        reading: "range" gives the fraction of range values with k preimages;
            "domain" gives the fraction of domain elements of multiplicity k

    Returns:
        Array indexed by k
    """
    histogram = load_histogram(f).astype(float)
    if reading == "domain":
        histogram = histogram * np.arange(histogram.shape[0])
    return histogram / f.n


def poisson_load_fraction(k: int, reading: LoadReading = "range") -> float:
    """
    Large-n limit of load_fractions: e^-1 / k! per range value.

    The domain reading weights by k, giving k e^-1 / k!.
    """
    p = float(stats.poisson.pmf(k, 1.0))
    return k * p if reading == "domain" else p


def binomial_load_fraction(n: int, k: int) -> float:
    """Exact expected fraction of range values with k preimages at finite n."""
    return float(stats.binom.pmf(k, n, 1.0 / n))
