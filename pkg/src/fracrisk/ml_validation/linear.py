"""Penalized linear regression on pre-standardized features.

Both models fit an unpenalized intercept equal to the training target mean,
so callers must pass column-centred ``X``.
"""
from __future__ import annotations

import numpy as np

from ..errors import ConvergenceError, DomainError, NumericalRankError


class Ridge:
    """Minimizes ``||y - Xb||^2 / (2n) + alpha/2 ||b||^2`` by a direct solve."""

    def __init__(self, alpha: float = 1e-3):
        if alpha < 0:
            raise DomainError(f"alpha must be non-negative, got {alpha!r}")
        self.alpha = alpha

    def fit(self, X: np.ndarray, y: np.ndarray) -> "Ridge":
        n, p = X.shape
        if n < 2:
            raise DomainError("ridge needs at least 2 training rows")
        self.intercept_ = float(y.mean())
        if self.alpha == 0.0:
            rank = np.linalg.matrix_rank(X)
            if rank < p:
                raise NumericalRankError(f"design has rank {rank} < {p} columns; use alpha > 0")
        gram = X.T @ X / n + self.alpha * np.eye(p)
        self.coef_ = np.linalg.solve(gram, X.T @ (y - self.intercept_) / n)
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.intercept_ + X @ self.coef_


def soft_threshold(z: float, gamma: float) -> float:
    if z > gamma:
        return z - gamma
    if z < -gamma:
        return z + gamma
    return 0.0


def duality_gap(X: np.ndarray, y: np.ndarray, b: np.ndarray, alpha: float) -> float:
    """Lasso duality gap, scaled by ``n``, for centred ``y``."""
    n = X.shape[0]
    r = y - X @ b
    alpha_n = alpha * n
    dual_norm = np.max(np.abs(X.T @ r)) if X.shape[1] else 0.0
    const = alpha_n / dual_norm if dual_norm > alpha_n else 1.0
    rr = float(r @ r)
    return 0.5 * rr * (1.0 + const**2) + alpha_n * float(np.abs(b).sum()) - const * float(r @ y)


class Lasso:
    """Cyclic coordinate descent for ``||y - Xb||^2 / (2n) + alpha ||b||_1``.

    A fit has converged once a full sweep moves no coefficient by more than
    ``tol``, or once the duality gap falls below ``gap_tol`` times
    ``||y - mean(y)||^2``. The gap test matters when features are nearly
    collinear: coefficients then drift along flat directions long after the
    objective has settled.
    """

    def __init__(self, alpha: float = 1e-4, tol: float = 1e-10, max_sweeps: int = 10_000,
                 gap_tol: float = 1e-5, check_every: int = 10):
        if alpha < 0:
            raise DomainError(f"alpha must be non-negative, got {alpha!r}")
        self.alpha = alpha
        self.tol = tol
        self.max_sweeps = max_sweeps
        self.gap_tol = gap_tol
        self.check_every = check_every

    def fit(self, X: np.ndarray, y: np.ndarray) -> "Lasso":
        n, p = X.shape
        self.intercept_ = float(y.mean())
        yc = y - self.intercept_
        gram = X.T @ X / n
        corr = X.T @ yc / n
        diag = np.diag(gram).copy()
        active = [j for j in range(p) if diag[j] > 0.0]
        scale = float(yc @ yc)
        b = np.zeros(p)
        delta, gap = np.inf, np.inf
        for sweep in range(1, self.max_sweeps + 1):
            delta = 0.0
            for j in active:
                rho = corr[j] - gram[j] @ b + diag[j] * b[j]
                new = soft_threshold(rho, self.alpha) / diag[j]
                delta = max(delta, abs(new - b[j]))
                b[j] = new
            if delta < self.tol:
                break
            if sweep % self.check_every == 0:
                gap = duality_gap(X, yc, b, self.alpha)
                if gap <= self.gap_tol * scale:
                    break
        else:
            raise ConvergenceError(
                f"lasso did not converge in {self.max_sweeps} sweeps (last max coefficient "
                f"change {delta:.3e}, tol {self.tol:.1e}; duality gap {gap:.3e})")
        self.coef_ = b
        self.n_sweeps_ = sweep
        self.last_change_ = delta
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return self.intercept_ + X @ self.coef_
