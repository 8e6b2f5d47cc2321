"""CART regression trees and a bootstrap-aggregated random forest."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..errors import DomainError

_LEAF = -1


class RegressionTree:
    """Variance-reduction CART with a random feature subset tried at each node."""

    def __init__(self, min_leaf: int = 1, max_features: int | None = None,
                 rng: np.random.Generator | None = None):
        if min_leaf < 1:
            raise DomainError(f"min_leaf must be >= 1, got {min_leaf}")
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.rng = rng if rng is not None else np.random.default_rng(0)

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RegressionTree":
        n, p = X.shape
        if n < 2:
            raise DomainError("a regression tree needs at least 2 training rows")
        self._m = p if self.max_features is None else max(1, min(p, self.max_features))
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self._grow(X, y, np.arange(n))
        return self

    def _new_node(self, value: float) -> int:
        self.feature.append(_LEAF)
        self.threshold.append(0.0)
        self.left.append(_LEAF)
        self.right.append(_LEAF)
        self.value.append(value)
        return len(self.value) - 1

    def _best_split(self, X, y, idx):
        n = idx.size
        total = y[idx].sum()
        best_gain, best = total**2 / n, None
        p = X.shape[1]
        features = self.rng.choice(p, size=self._m, replace=False) if self._m < p else np.arange(p)
        # left child = first i sorted samples; both children keep >= min_leaf rows
        sizes = np.arange(self.min_leaf, n - self.min_leaf + 1)
        for f in features:
            xs = X[idx, f]
            order = np.argsort(xs, kind="stable")
            xs = xs[order]
            cum = np.cumsum(y[idx][order])
            i = sizes[xs[sizes - 1] < xs[sizes]]
            if i.size == 0:
                continue
            s_left = cum[i - 1]
            gain = s_left**2 / i + (total - s_left) ** 2 / (n - i)
            k = int(np.argmax(gain))
            if gain[k] > best_gain + 1e-12 * abs(best_gain):
                best_gain = gain[k]
                cut = i[k]
                best = (int(f), 0.5 * (xs[cut - 1] + xs[cut]))
        return best

    def _grow(self, X, y, idx) -> int:
        node = self._new_node(float(y[idx].mean()))
        if idx.size < 2 * self.min_leaf or np.ptp(y[idx]) == 0.0:
            return node
        split = self._best_split(X, y, idx)
        if split is None:
            return node
        f, thr = split
        mask = X[idx, f] <= thr
        self.feature[node] = f
        self.threshold[node] = thr
        left = self._grow(X, y, idx[mask])
        right = self._grow(X, y, idx[~mask])
        self.left[node], self.right[node] = left, right
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0])
        for r, row in enumerate(X):
            node = 0
            while self.feature[node] != _LEAF:
                node = self.left[node] if row[self.feature[node]] <= self.threshold[node] else self.right[node]
            out[r] = self.value[node]
        return out

    @property
    def n_nodes(self) -> int:
        return len(self.value)


class RandomForest:
    """Mean of CART trees, each grown on a bootstrap resample.

    Each tree gets its own PRNG stream spawned from ``seed``, so results do
    not depend on ``threads``.
    """

    def __init__(self, trees: int = 200, min_leaf: int = 2, feat_frac: float = 1.0,
                 seed: int = 0, bootstrap: bool = True, threads: int = 1):
        if trees < 1:
            raise DomainError(f"trees must be >= 1, got {trees}")
        if min_leaf < 1:
            raise DomainError(f"min_leaf must be >= 1, got {min_leaf}")
        if not (0.0 < feat_frac <= 1.0):
            raise DomainError(f"feat_frac must be in (0, 1], got {feat_frac!r}")
        self.trees = trees
        self.min_leaf = min_leaf
        self.feat_frac = feat_frac
        self.seed = seed
        self.bootstrap = bootstrap
        self.threads = threads

    def _fit_one(self, X, y, seq: np.random.SeedSequence) -> RegressionTree:
        rng = np.random.default_rng(seq)
        n = X.shape[0]
        rows = rng.integers(0, n, size=n) if self.bootstrap else np.arange(n)
        m = max(1, int(round(self.feat_frac * X.shape[1])))
        return RegressionTree(self.min_leaf, m, rng).fit(X[rows], y[rows])

    def fit(self, X: np.ndarray, y: np.ndarray) -> "RandomForest":
        if X.shape[0] < 2:
            raise DomainError("random forest needs at least 2 training rows")
        seqs = np.random.SeedSequence(self.seed).spawn(self.trees)
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                self.estimators_ = list(pool.map(lambda s: self._fit_one(X, y, s), seqs))
        else:
            self.estimators_ = [self._fit_one(X, y, s) for s in seqs]
        return self

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.mean([t.predict(X) for t in self.estimators_], axis=0)
