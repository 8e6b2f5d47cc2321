from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DomainError


def evaluate(predictions: Sequence[float], truths: Sequence[float]) -> tuple[float, float]:
    """Return ``(mse, r2)`` with ``r2 = 1 - SS_res / SS_tot``."""
    pred = np.asarray(predictions, dtype=np.float64)
    y = np.asarray(truths, dtype=np.float64)
    if pred.shape != y.shape or y.ndim != 1:
        raise DomainError(f"shape mismatch: predictions {pred.shape}, truths {y.shape}")
    if y.size < 2:
        raise DomainError("need at least 2 points to evaluate")
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise DomainError("R^2 is undefined for constant truths")
    return ss_res / y.size, 1.0 - ss_res / ss_tot
