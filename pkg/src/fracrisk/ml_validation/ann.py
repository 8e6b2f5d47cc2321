"""Two-hidden-layer tanh network trained by full-batch gradient descent."""
from __future__ import annotations

import math

import numpy as np

from ..errors import DivergenceError, DomainError


def init_params(n_in: int, hidden: tuple[int, int], seed: int) -> list[np.ndarray]:
    """LeCun-normal weights, zero biases: ``[W1, b1, W2, b2, W3, b3]``."""
    rng = np.random.default_rng(seed)
    sizes = [n_in, *hidden, 1]
    params = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        params.append(rng.standard_normal((fan_in, fan_out)) / math.sqrt(fan_in))
        params.append(np.zeros(fan_out))
    return params


def forward(params: list[np.ndarray], X: np.ndarray):
    W1, b1, W2, b2, W3, b3 = params
    a1 = np.tanh(X @ W1 + b1)
    a2 = np.tanh(a1 @ W2 + b2)
    out = a2 @ W3 + b3
    return out[:, 0], (X, a1, a2)


def loss_and_grads(params: list[np.ndarray], X: np.ndarray, y: np.ndarray):
    """Mean squared error and its gradient with respect to every parameter."""
    W1, b1, W2, b2, W3, b3 = params
    pred, (x0, a1, a2) = forward(params, X)
    n = X.shape[0]
    resid = pred - y
    loss = float(np.mean(resid**2))
    d_out = (2.0 / n) * resid[:, None]
    gW3 = a2.T @ d_out
    gb3 = d_out.sum(axis=0)
    d2 = (d_out @ W3.T) * (1.0 - a2**2)
    gW2 = a1.T @ d2
    gb2 = d2.sum(axis=0)
    d1 = (d2 @ W2.T) * (1.0 - a1**2)
    gW1 = x0.T @ d1
    gb1 = d1.sum(axis=0)
    return loss, [gW1, gb1, gW2, gb2, gW3, gb3]


class MLP:
    """Regression net: two tanh hidden layers, linear output.

    The output bias starts at the training target mean; the loss after every
    epoch is kept in ``loss_history_``.
    """

    def __init__(self, hidden: tuple[int, int] = (16, 8), epochs: int = 5000,
                 lr: float = 1e-2, seed: int = 0):
        if len(hidden) != 2 or min(hidden) < 1:
            raise DomainError(f"hidden must be two positive sizes, got {hidden}")
        if not lr > 0:
            raise DomainError(f"learning rate must be positive, got {lr!r}")
        if epochs < 0:
            raise DomainError(f"epochs must be non-negative, got {epochs}")
        self.hidden = tuple(hidden)
        self.epochs = epochs
        self.lr = lr
        self.seed = seed

    def fit(self, X: np.ndarray, y: np.ndarray) -> "MLP":
        params = init_params(X.shape[1], self.hidden, self.seed)
        params[-1][:] = y.mean()
        history = []
        for epoch in range(self.epochs):
            loss, grads = loss_and_grads(params, X, y)
            if not math.isfinite(loss):
                raise DivergenceError(f"loss became {loss} at epoch {epoch}")
            history.append(loss)
            for w, g in zip(params, grads):
                w -= self.lr * g
        if self.epochs and not np.isfinite(forward(params, X)[0]).all():
            raise DivergenceError(f"predictions became non-finite at epoch {self.epochs}")
        self.params_ = params
        self.loss_history_ = history
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return forward(self.params_, X)[0]
