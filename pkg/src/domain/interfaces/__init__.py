"""
Abstract interfaces for the query simulator.

These interfaces define the contracts that oracles and distinguishers follow,
so wrappers (conjugation, embedding, amplification) compose with any
implementation.
"""

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from ...core.distinguishers import DistinguisherReport


class IOracle(ABC):
    """
    Classical query access to a function [n] -> [n].

    Defines the contract for counted point evaluations. The uncounted
    peek_table view exists for the simulator only (building marking masks,
    precomputing virtual tables) and is never reachable from an algorithm's
    query accounting.
    """

    @property
    @abstractmethod
    def n(self) -> int:
        """Domain size."""
        pass

    @property
    @abstractmethod
    def query_count(self) -> int:
        """Exact number of point evaluations served since the last reset."""
        pass

    @abstractmethod
    def query(self, x: int) -> int:
        """
        Evaluate the function at one point.

        Args:
            x: Domain index in [0, n)

        Returns:
            The function value; the counter grows by exactly one
        """
        pass

    @abstractmethod
    def query_many(self, xs: np.ndarray) -> np.ndarray:
        """
        Evaluate the function at several points.

        Args:
            xs: Domain indices

        Returns:
            Values in the same order; the counter grows by len(xs)
        """
        pass

    @abstractmethod
    def reset(self) -> None:
        """Zero the query counter."""
        pass

    @abstractmethod
    def peek_table(self) -> np.ndarray:
        """Read-only view of the full table, without counting."""
        pass


class IDistinguisher(ABC):
    """
    Interface for RP-RF distinguishers.

    A distinguisher receives oracle access to one function and its own random
    source, and outputs a bit together with exact query accounting.
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """Short identifier used in logs and reports."""
        pass

    @abstractmethod
    def run(self, oracle: IOracle, rng: np.random.Generator) -> "DistinguisherReport":
        """
        Run once against an oracle.

        Args:
            oracle: Query access to the input function
            rng: Random source owned by this run

        Returns:
            Report with the output bit and query counts
        """
        pass
