"""
Input validation utilities.

This module provides validation functions for function tables, collision
profiles and the numeric parameters of experiments.
"""

from typing import Any, Dict, Mapping

import numpy as np

from .exceptions import (
    DomainIndexError,
    InvalidFunctionTableError,
    InvalidParameterError,
    InvalidProfileError,
    InvalidSizeError,
    NotABijectionError,
    SizeMismatchError,
)


class TableValidator:
    """Validates function tables and domain indices."""

    @staticmethod
    def validate_size(n: Any) -> int:
        """
        Validate a domain size.

        Args:
            n: Candidate size

        Returns:
            The size as a plain int

        Raises:
            InvalidSizeError: If n is not an integer >= 1
        """
        if isinstance(n, bool):
            raise InvalidSizeError(n)
        try:
            size = int(n)
        except (ValueError, TypeError) as e:
            raise InvalidSizeError(n, original_exception=e)
        if size != n or size < 1:
            raise InvalidSizeError(n)
        return size

    @staticmethod
    def validate_index(x: Any, n: int) -> int:
        """
        Validate a domain index.

        Raises:
            DomainIndexError: If x is not an integer in [0, n)
        """
        if isinstance(x, (bool, float)):
            raise DomainIndexError(x, n)
        try:
            index = int(x)
        except (ValueError, TypeError) as e:
            raise DomainIndexError(x, n, original_exception=e)
        if not 0 <= index < n:
            raise DomainIndexError(x, n)
        return index

    @classmethod
    def validate_values(cls, values: Any, n: int) -> np.ndarray:
        """
        Validate the entries of a table over [0, n).

        Args:
            values: Sequence of integers
            n: Declared domain size

        Returns:
            A fresh int64 array holding the entries

        Raises:
            InvalidFunctionTableError: If the length or any entry is wrong
        """
        n = cls.validate_size(n)
        try:
            array = np.asarray(values)
        except (ValueError, TypeError) as e:
            raise InvalidFunctionTableError(
                "Table values are not a flat integer sequence",
                original_exception=e
            )

        if array.ndim != 1 or array.shape[0] != n:
            raise InvalidFunctionTableError(
                f"Table length {array.size} does not match n={n}",
                details={"n": n, "length": int(array.size)}
            )
        if array.size and not np.issubdtype(array.dtype, np.integer):
            raise InvalidFunctionTableError(
                f"Table entries must be integers, got dtype {array.dtype}"
            )

        array = array.astype(np.int64, copy=True)
        if array.size and (array.min() < 0 or array.max() >= n):
            bad = int(np.flatnonzero((array < 0) | (array >= n))[0])
            raise InvalidFunctionTableError(
                f"Entry {int(array[bad])} at position {bad} outside [0, {n})",
                details={"position": bad, "value": int(array[bad]), "n": n}
            )
        return array

    @staticmethod
    def validate_bijection(values: np.ndarray, name: str = "table") -> None:
        """
        Check that a validated table is a permutation.

        Raises:
            NotABijectionError: If some value is hit twice
        """
        hits = np.bincount(values, minlength=values.shape[0])
        if np.any(hits != 1):
            raise NotABijectionError(
                f"{name} is not a bijection",
                details={"name": name, "repeated_values": np.flatnonzero(hits > 1)[:10].tolist()}
            )

    @staticmethod
    def validate_same_size(**sizes: int) -> int:
        """
        Check that all named sizes agree.

        Returns:
            The common size

        Raises:
            SizeMismatchError: If any two sizes differ
        """
        distinct = set(sizes.values())
        if len(distinct) != 1:
            raise SizeMismatchError(dict(sizes))
        return distinct.pop()


class ProfileValidator:
    """Validates sparse collision profiles."""

    @staticmethod
    def validate_counts(n: int, counts: Mapping[Any, Any]) -> Dict[int, int]:
        """
        Validate a sparse multiplicity -> b_i map.

        Args:
            n: Domain size
            counts: Map from multiplicity i to the number of elements with it

        Returns:
            A clean dict with int keys, zero entries dropped

        Raises:
            InvalidProfileError: If any profile invariant fails
        """
        errors = []
        clean: Dict[int, int] = {}

        for raw_key, raw_value in counts.items():
            try:
                i, b = int(raw_key), int(raw_value)
            except (ValueError, TypeError):
                errors.append(f"Non-integer entry {raw_key!r}: {raw_value!r}")
                continue
            if b == 0:
                continue
            if not 1 <= i <= n:
                errors.append(f"Multiplicity {i} outside [1, {n}]")
                continue
            if b < 0:
                errors.append(f"Negative count b_{i}={b}")
            elif b % i != 0:
                errors.append(f"b_{i}={b} is not a multiple of {i}")
            clean[i] = b

        total = sum(clean.values())
        if total != n:
            errors.append(f"Counts sum to {total}, expected n={n}")

        if errors:
            raise InvalidProfileError(
                "Collision profile validation failed",
                details={"errors": errors, "n": n}
            )
        return dict(sorted(clean.items()))


class ParameterValidator:
    """General numeric parameter validation."""

    @staticmethod
    def validate_positive_int(value: Any, field_name: str, minimum: int = 1) -> int:
        """
        Validate an integer parameter with a lower bound.

        Raises:
            InvalidParameterError: If validation fails
        """
        if isinstance(value, bool):
            raise InvalidParameterError(f"Invalid {field_name}: {value}")
        try:
            number = int(value)
        except (ValueError, TypeError) as e:
            raise InvalidParameterError(
                f"Invalid {field_name}: {value}",
                original_exception=e
            )
        if number != value or number < minimum:
            raise InvalidParameterError(
                f"{field_name} must be an integer >= {minimum}, got {value}",
                details={field_name: value}
            )
        return number

    @staticmethod
    def validate_exponent(d: Any) -> float:
        """
        Validate the hybrid threshold exponent d.

        Raises:
            InvalidParameterError: If d is not strictly inside (0, 1)
        """
        try:
            value = float(d)
        except (ValueError, TypeError) as e:
            raise InvalidParameterError(f"Invalid exponent d: {d}", original_exception=e)
        if not 0.0 < value < 1.0:
            raise InvalidParameterError(
                f"Exponent d must lie in (0, 1), got {d}",
                details={"d": d}
            )
        return value

    @staticmethod
    def validate_open_unit(value: Any, field_name: str) -> float:
        """
        Validate a real strictly between 0 and 1.

        Raises:
            InvalidParameterError: If validation fails
        """
        try:
            number = float(value)
        except (ValueError, TypeError) as e:
            raise InvalidParameterError(
                f"Invalid {field_name}: {value}",
                original_exception=e
            )
        if not 0.0 < number < 1.0:
            raise InvalidParameterError(
                f"{field_name} must lie in (0, 1), got {value}",
                details={field_name: value}
            )
        return number

    @staticmethod
    def validate_budget(q: Any, n: int, field_name: str = "query budget") -> int:
        """
        Validate a classical query budget 1 <= q <= n.

        Raises:
            InvalidParameterError: If validation fails
        """
        budget = ParameterValidator.validate_positive_int(q, field_name)
        if budget > n:
            raise InvalidParameterError(
                f"{field_name} {budget} exceeds domain size {n}",
                details={field_name: budget, "n": n}
            )
        return budget
