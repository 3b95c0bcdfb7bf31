"""
Helper utility functions.

Seed splitting, random source construction and small numeric helpers shared
across the simulator.
"""

import math
import zlib
from typing import Sequence, Tuple

import numpy as np


def stream_key(name: str) -> int:
    """
    Map a stream name to a stable 32-bit integer.

    Args:
        name: Stream label, e.g. "function" or "permutation"

    Returns:
        CRC32 of the label (stable across interpreter runs, unlike hash())
    """
    return zlib.crc32(name.encode("utf-8"))


def derive_seed_sequence(seed: int, stream: str, index: int) -> np.random.SeedSequence:
    """
    Derive the seed sequence for one trial.

    The splitting rule is fixed: entropy (seed, crc32(stream), index).

    Args:
        seed: Master seed
        stream: Named sub-stream
        index: Trial index

    Returns:
        A SeedSequence unique to (seed, stream, index)
    """
    return np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, stream_key(stream), int(index)])


def trial_rng(seed: int, stream: str, index: int) -> np.random.Generator:
    """Build the per-trial random source for (seed, stream, index)."""
    return np.random.default_rng(derive_seed_sequence(seed, stream, index))


def make_rng(seed: int) -> np.random.Generator:
    """Build a random source from an explicit seed."""
    return np.random.default_rng(int(seed))


def child_seed(rng: np.random.Generator) -> int:
    """Draw a 63-bit seed from a parent source to key a family of child sources."""
    return int(rng.integers(0, 2**63 - 1))


def ceil_root(n: int, degree: int) -> int:
    """
    Smallest integer r with r**degree >= n.

    Exact for integers, unlike math.ceil(n ** (1/degree)).
    """
    r = max(1, int(round(n ** (1.0 / degree))))
    while r ** degree < n:
        r += 1
    while r > 1 and (r - 1) ** degree >= n:
        r -= 1
    return r


def goodness_threshold(n: int, constant: float = 3.0, base: float = 2.0) -> float:
    """
    The maxload bound constant * log n / log log n.

    Args:
        n: Domain size (must make log log n positive)
        constant: Leading constant
        base: Logarithm base

    Returns:
        Threshold value
    """
    log = math.log2 if base == 2 else (lambda value: math.log(value, base))
    log_n = log(n)
    return constant * log_n / log(log_n)


def format_float(value: float) -> str:
    """Render a float for CSV output with a fixed, locale-free representation."""
    return repr(float(value))


def two_proportion_halfwidth(p1: float, p0: float, trials: int, z: float) -> float:
    """
    Normal-approximation halfwidth for a difference of two independent rates.

    Args:
        p1: First acceptance rate
        p0: Second acceptance rate
        trials: Samples per rate
        z: Normal quantile for the confidence level

    Returns:
        z * sqrt(p1(1-p1)/t + p0(1-p0)/t)
    """
    if trials <= 0:
        return float("nan")
    variance = (p1 * (1.0 - p1) + p0 * (1.0 - p0)) / trials
    return float(z * math.sqrt(variance))


def pairs_to_arrays(pairs: Sequence[Tuple[float, float]]) -> Tuple[np.ndarray, np.ndarray]:
    """Split (x, y) pairs into two float arrays."""
    xs = np.asarray([p[0] for p in pairs], dtype=float)
    ys = np.asarray([p[1] for p in pairs], dtype=float)
    return xs, ys
