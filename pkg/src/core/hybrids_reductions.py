"""
Hybrid profiles between the permutation profile and a target profile C, the
collision-problem embedding into adjacent hybrids, and the relation pairing
the last two hybrids.

Multiplicities i > 1 of C are split by the threshold n**d into empty, small
and large types. The hybrid chain adds the large types one at a time in
ascending order, then all small types at once.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import FrozenSet, Mapping, Optional, Tuple

import numpy as np
from loguru import logger

from ..domain.interfaces import IOracle
from ..utils.exceptions import (
    InvalidParameterError,
    MalformedWitnessError,
    ReductionError,
    RelationPreconditionError,
)
from ..utils.validators import ParameterValidator, TableValidator
from .collision_profiles import CollisionProfile, is_good, maxload, multiplicities, profile_of
from .function_model import FunctionTable


@dataclass(frozen=True)
class IndexPartition:
    """Split of the multiplicities 2..n of a profile by the threshold n**d."""

    n: int
    d: float
    threshold: float
    i_empty: FrozenSet[int] = field(repr=False)
    i_small: FrozenSet[int]
    i_large: FrozenSet[int]


@dataclass(frozen=True)
class HybridSequence:
    """
    Profiles H_0, ..., H_{q+1} and the partition that produced them.

    large_order lists i_1 < ... < i_q; offsets lists g_0 = 0, ..., g_q with
    g_k = c_{i_1} + ... + c_{i_k}.
    """

    base_profile: CollisionProfile
    partition: IndexPartition
    profiles: Tuple[CollisionProfile, ...]
    large_order: Tuple[int, ...]
    offsets: Tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.large_order)

    @property
    def n(self) -> int:
        return self.base_profile.n

    def __len__(self) -> int:
        return len(self.profiles)

    def block(self, j: int) -> Tuple[int, int]:
        """Domain segment [g_{j-1}, g_j) carrying the i_j-to-1 part."""
        return self.offsets[j - 1], self.offsets[j]


@dataclass(frozen=True)
class RelationWitness:
    """
    The set S of small-multiplicity positions and each one's swap partner.

    Partners are distinct and lie outside S.
    """

    s_set: FrozenSet[int]
    pairing: Mapping[int, int]

    def __post_init__(self):
        s_set = frozenset(int(x) for x in self.s_set)
        pairing = {int(x): int(y) for x, y in dict(self.pairing).items()}
        if set(pairing) != s_set:
            raise MalformedWitnessError(
                "Pairing keys must be exactly the set S",
                details={"missing": sorted(s_set - set(pairing))[:10],
                         "extra": sorted(set(pairing) - s_set)[:10]}
            )
        partners = list(pairing.values())
        if len(set(partners)) != len(partners):
            raise MalformedWitnessError("Partners must be distinct")
        if s_set & set(partners):
            raise MalformedWitnessError("Partners must lie outside S")
        object.__setattr__(self, "s_set", s_set)
        object.__setattr__(self, "pairing", MappingProxyType(dict(sorted(pairing.items()))))

    @classmethod
    def empty(cls) -> "RelationWitness":
        return cls(s_set=frozenset(), pairing={})

    def __len__(self) -> int:
        return len(self.s_set)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """S and partners as aligned index arrays, ascending in S."""
        xs = np.fromiter(self.pairing.keys(), dtype=np.int64, count=len(self.pairing))
        ys = np.fromiter(self.pairing.values(), dtype=np.int64, count=len(self.pairing))
        return xs, ys


def partition_indices(profile: CollisionProfile, d: float) -> IndexPartition:
    """
    Split multiplicities i > 1 into empty (c_i = 0), small (0 < c_i < n**d)
    and large (c_i >= n**d).

    Raises:
        InvalidParameterError: If d is outside (0, 1)
    """
    d = ParameterValidator.validate_exponent(d)
    n = profile.n
    threshold = float(n) ** d
    present = {i: c for i, c in profile.items() if i > 1}
    i_small = frozenset(i for i, c in present.items() if c < threshold)
    i_large = frozenset(i for i, c in present.items() if c >= threshold)
    i_empty = frozenset(range(2, n + 1)) - i_small - i_large
    return IndexPartition(
        n=n, d=d, threshold=threshold,
        i_empty=i_empty, i_small=i_small, i_large=i_large,
    )


def build_hybrids(profile: CollisionProfile, d: float) -> HybridSequence:
    """
    The chain H_0 = permutation profile, H_1..H_q adding one large type each,
    H_{q+1} = profile.

    When the target is itself the permutation profile the chain collapses to
    the single entry H_0.
    """
    partition = partition_indices(profile, d)
    n = profile.n
    large_order = tuple(sorted(partition.i_large))

    offsets = [0]
    for i in large_order:
        offsets.append(offsets[-1] + profile.get(i))

    h0 = CollisionProfile.permutation(n)
    profiles = [h0]
    for j in range(1, len(large_order) + 1):
        counts = {i: profile.get(i) for i in large_order[:j]}
        if n - offsets[j] > 0:
            counts[1] = n - offsets[j]
        profiles.append(CollisionProfile(n=n, counts=counts))
    if profile != h0:
        profiles.append(profile)

    logger.debug(
        f"Built {len(profiles)} hybrids for n={n}, d={partition.d:.3f}: "
        f"large={list(large_order)}, small={sorted(partition.i_small)}"
    )
    return HybridSequence(
        base_profile=profile,
        partition=partition,
        profiles=tuple(profiles),
        large_order=large_order,
        offsets=tuple(offsets),
    )


def _fixed_part(hs: HybridSequence, j: int) -> np.ndarray:
    """h_f outside block j: canonical i_k-to-1 maps on earlier blocks, identity after."""
    values = np.arange(hs.n, dtype=np.int64)
    for k in range(1, j):
        start, stop = hs.block(k)
        i_k = hs.large_order[k - 1]
        segment = values[start:stop]
        values[start:stop] = start + ((segment - start) // i_k) * i_k
    return values


def _check_hybrid_index(j: int, hs: HybridSequence) -> None:
    if not 1 <= j <= hs.q:
        raise InvalidParameterError(
            f"Hybrid index j must lie in [1, {hs.q}], got {j}",
            details={"j": j, "q": hs.q}
        )


def embed_collision_instance(f: FunctionTable, j: int, hs: HybridSequence) -> FunctionTable:
    """
    Embed an instance f: [c] -> [c], c = c_{i_j}, into h_f: [n] -> [n].

    If f is 1-to-1 then h_f has profile H_{j-1}; if f is i_j-to-1 then h_f has
    profile H_j. The promise on f is not checked.

    Raises:
        InvalidParameterError: If j is outside [1, q]
        SizeMismatchError: If f's size is not c_{i_j}
    """
    _check_hybrid_index(j, hs)
    start, stop = hs.block(j)
    TableValidator.validate_same_size(f=f.n, block=stop - start)
    values = _fixed_part(hs, j)
    values[start:stop] = f.values + start
    return FunctionTable(n=hs.n, values=values)


class EmbeddedOracle(IOracle):
    """
    Lazy oracle for h_f over query access to f.

    Each evaluation costs at most one query to the inner oracle; only points
    of block j reach it.
    """

    def __init__(self, inner: IOracle, j: int, hs: HybridSequence):
        _check_hybrid_index(j, hs)
        self._start, self._stop = hs.block(j)
        TableValidator.validate_same_size(inner=inner.n, block=self._stop - self._start)
        self._inner = inner
        self._fixed = _fixed_part(hs, j)
        self._fixed.setflags(write=False)
        self._n = hs.n
        self._query_count = 0

    @property
    def n(self) -> int:
        return self._n

    @property
    def query_count(self) -> int:
        return self._query_count

    @property
    def inner(self) -> IOracle:
        return self._inner

    def query(self, x: int) -> int:
        index = TableValidator.validate_index(x, self._n)
        self._query_count += 1
        if self._start <= index < self._stop:
            return self._start + self._inner.query(index - self._start)
        return int(self._fixed[index])

    def query_many(self, xs: np.ndarray) -> np.ndarray:
        return np.asarray([self.query(int(x)) for x in np.asarray(xs).ravel()], dtype=np.int64)

    def reset(self) -> None:
        self._query_count = 0

    def peek_table(self) -> np.ndarray:
        values = self._fixed.copy()
        values[self._start:self._stop] = self._inner.peek_table() + self._start
        values.setflags(write=False)
        return values


def small_mass(profile: CollisionProfile, d: float) -> int:
    """
    v, the number of elements whose multiplicity is a small type.

    Raises:
        ReductionError: If profile is good and v >= maxload * n**d
    """
    partition = partition_indices(profile, d)
    v = sum(profile.get(i) for i in partition.i_small)
    if profile.n >= 4 and is_good(profile):
        bound = maxload(profile) * partition.threshold
        if not v < bound:
            raise ReductionError(
                f"Small mass {v} not below maxload * n^d = {bound:.3f}",
                details={"v": v, "bound": bound}
            )
    return v


def build_related_pair(
    f1: FunctionTable,
    hs: HybridSequence,
    rng: np.random.Generator
) -> Tuple[FunctionTable, RelationWitness]:
    """
    Transform f1 with profile H_{q+1} into a related f2 with profile H_q.

    S is the set of small-multiplicity positions. The intermediate table
    agrees with f1 off S and is 1-to-1 on S with images drawn from f1(S) and
    the unused range values; f2 then swaps each x in S with a distinct
    partner outside S.

    Raises:
        RelationPreconditionError: Naming the failed invariant
    """
    target = hs.profiles[-1]
    if profile_of(f1) != target:
        raise RelationPreconditionError(
            "profile_of(f1) == H_{q+1}",
            f"f1 has profile {dict(profile_of(f1).counts)}, expected {dict(target.counts)}"
        )

    n = f1.n
    mult = multiplicities(f1)
    in_s = np.isin(mult, np.fromiter(hs.partition.i_small, dtype=np.int64))
    xs = np.flatnonzero(in_s)
    v = int(xs.size)
    if v == 0:
        return f1, RelationWitness.empty()

    if n - v < v:
        raise RelationPreconditionError(
            "n - v >= v",
            f"only {n - v} positions outside S for {v} partners",
            details={"n": n, "v": v}
        )

    hits = np.bincount(f1.values, minlength=n)
    allowed = np.union1d(np.unique(f1.values[xs]), np.flatnonzero(hits == 0))
    if allowed.size < v:
        raise RelationPreconditionError(
            "|f1(S)| + |unused range| >= |S|",
            f"{allowed.size} admissible images for {v} positions",
            details={"allowed": int(allowed.size), "v": v}
        )

    intermediate = f1.values.copy()
    intermediate[xs] = rng.permutation(allowed)[:v]

    pool = np.flatnonzero(~in_s & (mult == 1))
    if pool.size < v:
        pool = np.flatnonzero(~in_s)
    ys = rng.choice(pool, size=v, replace=False).astype(np.int64)

    values = intermediate.copy()
    values[xs] = intermediate[ys]
    values[ys] = intermediate[xs]
    f2 = FunctionTable(n=n, values=values)

    expected = hs.profiles[-2] if len(hs.profiles) > 1 else target
    if profile_of(f2) != expected:
        raise ReductionError(
            "Related pair landed outside H_q",
            details={"got": dict(profile_of(f2).counts), "expected": dict(expected.counts)}
        )

    witness = RelationWitness(s_set=frozenset(xs.tolist()), pairing=dict(zip(xs.tolist(), ys.tolist())))
    logger.debug(f"Related pair built: n={n}, |S|={v}, partners from pool of {pool.size}")
    return f2, witness


def check_relation_witness(
    f1: FunctionTable,
    f2: FunctionTable,
    w: RelationWitness,
    hs: Optional[HybridSequence] = None
) -> bool:
    """
    True iff w exhibits the swap transformation from f1 to f2.

    With hs given, additionally require f1 in H_{q+1}, f2 in H_q and S equal
    to the small-multiplicity positions of f1.

    Raises:
        SizeMismatchError: If f1 and f2 differ in size
        MalformedWitnessError: If the witness names indices outside [0, n)
    """
    n = TableValidator.validate_same_size(f1=f1.n, f2=f2.n)
    xs, ys = w.arrays()
    if xs.size and (max(xs.max(), ys.max()) >= n or min(xs.min(), ys.min()) < 0):
        raise MalformedWitnessError(f"Witness indices outside [0, {n})")

    if hs is not None:
        if profile_of(f1) != hs.profiles[-1]:
            return False
        expected = hs.profiles[-2] if len(hs.profiles) > 1 else hs.profiles[-1]
        if profile_of(f2) != expected:
            return False
        small = np.isin(multiplicities(f1), np.fromiter(hs.partition.i_small, dtype=np.int64))
        if not np.array_equal(np.flatnonzero(small), xs):
            return False

    if xs.size == 0:
        return f1 == f2

    # S must be a union of whole preimage classes of f1
    s_values = np.unique(f1.values[xs])
    if np.count_nonzero(np.isin(f1.values, s_values)) != xs.size:
        return False

    untouched = np.ones(n, dtype=bool)
    untouched[xs] = False
    untouched[ys] = False
    if not np.array_equal(f1.values[untouched], f2.values[untouched]):
        return False

    # f2(x) = intermediate(y) = f1(y) since the intermediate agrees with f1 off S
    if not np.array_equal(f2.values[xs], f1.values[ys]):
        return False

    images = f2.values[ys]
    if np.unique(images).size != images.size:
        return False
    hits = np.bincount(f1.values, minlength=n)
    allowed = np.union1d(s_values, np.flatnonzero(hits == 0))
    return bool(np.all(np.isin(images, allowed)))
