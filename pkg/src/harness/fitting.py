"""
Scaling-exponent fits.

A threshold budget growing like n**a shows up as a line of slope a in
(log2 n, log2 budget).
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

from ..config.simulation_config import simulation_config
from ..utils.exceptions import FitError
from ..utils.helpers import pairs_to_arrays
from .records import FitResult, SweepRow


def fit_exponent(points: Sequence[Tuple[float, float]]) -> FitResult:
    """
    Least-squares fit of log2(threshold) against log2(n).

    Args:
        points: (n, threshold budget) pairs

    Returns:
        Slope, intercept and r^2

    Raises:
        FitError: On fewer than 3 points, a non-positive value, or a single n
    """
    if len(points) < 3:
        raise FitError(
            f"Need at least 3 points for an exponent fit, got {len(points)}",
            details={"points": len(points)}
        )
    ns, budgets = pairs_to_arrays(points)
    if np.any(ns <= 0) or np.any(budgets <= 0):
        raise FitError("All sizes and budgets must be positive")
    if np.unique(ns).size < 2:
        raise FitError("All points share one n; the slope is undefined")

    x = np.log2(ns).reshape(-1, 1)
    y = np.log2(budgets)
    model = LinearRegression().fit(x, y)
    r2 = float(r2_score(y, model.predict(x))) if np.ptp(y) > 0 else 1.0

    result = FitResult(
        slope=float(model.coef_[0]),
        intercept=float(model.intercept_),
        r2=r2,
        points=len(points),
    )
    logger.info(f"Exponent fit over {result.points} points: slope={result.slope:.4f}, r2={result.r2:.4f}")
    return result


def thresholds_from_sweep(
    rows: Iterable[SweepRow],
    bias_threshold: Optional[float] = None
) -> List[Tuple[int, int]]:
    """
    Smallest budget per n whose measured bias reaches bias_threshold.

    Sizes where no budget reaches it are skipped with a warning.
    """
    target = bias_threshold if bias_threshold is not None else simulation_config.bias_threshold
    best: Dict[int, Optional[int]] = {}
    for row in rows:
        best.setdefault(row.n, None)
        if row.bias >= target and (best[row.n] is None or row.budget < best[row.n]):
            best[row.n] = row.budget

    points = []
    for n in sorted(best):
        if best[n] is None:
            logger.warning(f"No budget reached bias {target} at n={n}; skipped")
            continue
        points.append((n, best[n]))
    return points
