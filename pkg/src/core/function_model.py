"""
Function tables, counted oracle access and the base samplers.

Tables are total functions [n] -> [n] stored densely, 0-based. Sampling always
goes through an explicitly seeded numpy Generator.
"""

from dataclasses import dataclass, field
from typing import Callable, Sequence, Tuple, Union

import numpy as np

from ..domain.interfaces import IOracle
from ..utils.validators import TableValidator

FunctionSampler = Callable[[np.random.Generator], "FunctionTable"]


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """
    A total function [n] -> [n].

    Immutable after construction; the backing array is flagged read-only so
    tables can be shared across trial workers.
    """

    n: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = TableValidator.validate_size(self.n)
        values = TableValidator.validate_values(self.values, n)
        values.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values: Union[Sequence[int], np.ndarray]) -> "FunctionTable":
        """Build a table whose size is the length of values."""
        array = np.asarray(values)
        return cls(n=int(array.shape[0]) if array.ndim == 1 else -1, values=array)

    @classmethod
    def identity(cls, n: int) -> "FunctionTable":
        return cls(n=n, values=np.arange(n, dtype=np.int64))

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash((self.n, self.values.tobytes()))

    def __repr__(self) -> str:
        preview = self.values[:8].tolist()
        suffix = ", ..." if self.n > 8 else ""
        return f"FunctionTable(n={self.n}, values={preview}{suffix})"

    def key(self) -> Tuple[int, ...]:
        """Hashable tuple of the entries, for enumeration counts."""
        return tuple(int(v) for v in self.values)

    def to_list(self) -> list:
        return self.values.tolist()

    def is_bijection(self) -> bool:
        return bool(np.all(np.bincount(self.values, minlength=self.n) == 1))

    def image_size(self) -> int:
        """Number of distinct range values used."""
        return int(np.count_nonzero(np.bincount(self.values, minlength=self.n)))


class CountingOracle(IOracle):
    """
    Counted point evaluations of one FunctionTable.

    Single-owner mutable state: one oracle per trial.
    """

    def __init__(self, table: FunctionTable):
        self._table = table
        self._query_count = 0

    @property
    def table(self) -> FunctionTable:
        return self._table

    @property
    def n(self) -> int:
        return self._table.n

    @property
    def query_count(self) -> int:
        return self._query_count

    def query(self, x: int) -> int:
        index = TableValidator.validate_index(x, self._table.n)
        value = int(self._table.values[index])
        self._query_count += 1
        return value

    def query_many(self, xs: np.ndarray) -> np.ndarray:
        points = np.asarray(xs, dtype=np.int64)
        if points.size and (points.min() < 0 or points.max() >= self._table.n):
            bad = points[(points < 0) | (points >= self._table.n)][0]
            TableValidator.validate_index(int(bad), self._table.n)
        values = self._table.values[points]
        self._query_count += int(points.size)
        return values

    def reset(self) -> None:
        self._query_count = 0

    def peek_table(self) -> np.ndarray:
        return self._table.values


def query(oracle: IOracle, x: int) -> int:
    """
    Evaluate an oracle at x, counting exactly one query.

    Raises:
        DomainIndexError: If x is outside [0, n); the counter is unchanged
    """
    return oracle.query(x)


def sample_uniform_function(n: int, rng: np.random.Generator) -> FunctionTable:
    """
    Draw from D_F: every entry independent and uniform on [0, n).

    Args:
        n: Domain size, at least 1
        rng: Seeded random source

    Returns:
        A uniformly random table; each of the n**n tables is equally likely
    """
    n = TableValidator.validate_size(n)
    return FunctionTable(n=n, values=rng.integers(0, n, size=n, dtype=np.int64))


def sample_uniform_permutation(n: int, rng: np.random.Generator) -> FunctionTable:
    """
    Draw from D_P with an unbiased shuffle.

    Args:
        n: Domain size, at least 1
        rng: Seeded random source

    Returns:
        A uniformly random bijection
    """
    n = TableValidator.validate_size(n)
    return FunctionTable(n=n, values=rng.permutation(n).astype(np.int64))


def conjugate(f: FunctionTable, pi: FunctionTable, sigma: FunctionTable) -> FunctionTable:
    """
    Relabel f on both sides: x -> pi(f(sigma(x))).

    Args:
        f: Any table
        pi: Bijection applied to outputs
        sigma: Bijection applied to inputs

    Returns:
        The conjugated table; its collision profile equals f's

    Raises:
        SizeMismatchError: If sizes differ
        NotABijectionError: If pi or sigma is not a permutation
    """
    TableValidator.validate_same_size(f=f.n, pi=pi.n, sigma=sigma.n)
    TableValidator.validate_bijection(pi.values, "pi")
    TableValidator.validate_bijection(sigma.values, "sigma")
    return FunctionTable(n=f.n, values=pi.values[f.values[sigma.values]])


def uniform_function_sampler(n: int) -> FunctionSampler:
    """Sampler for D_F at size n."""
    n = TableValidator.validate_size(n)

    def sample(rng: np.random.Generator) -> FunctionTable:
        return sample_uniform_function(n, rng)

    sample.__name__ = f"uniform_function[{n}]"
    return sample


def uniform_permutation_sampler(n: int) -> FunctionSampler:
    """Sampler for D_P at size n."""
    n = TableValidator.validate_size(n)

    def sample(rng: np.random.Generator) -> FunctionTable:
        return sample_uniform_permutation(n, rng)

    sample.__name__ = f"uniform_permutation[{n}]"
    return sample
