"""Train/test protocol shared by the four regressors.

Rows are shuffled once with ``split_seed`` and the first 20% held out.
Features are standardized with training-split statistics; zero-variance
columns are centred only. ``protocol="loo"`` switches to leave-one-out, in
which case the test metrics come from the pooled held-out predictions.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import DomainError
from .ann import MLP
from .features import FeatureMatrix
from .forest import RandomForest
from .linear import Lasso, Ridge
from .metrics import evaluate

TEST_FRACTION = 0.2


class Model(str, enum.Enum):
    RIDGE = "ridge"
    LASSO = "lasso"
    RANDOM_FOREST = "random-forest"
    ANN = "ann"

    @property
    def title(self) -> str:
        return {"ridge": "Ridge", "lasso": "Lasso", "random-forest": "Random Forest", "ann": "ANN"}[self.value]


DEFAULTS = {
    Model.RIDGE: {"alpha": 1e-3},
    Model.LASSO: {"alpha": 1e-4},
    # all features per split: the utility signal sits in 2 of 25 columns
    Model.RANDOM_FOREST: {"trees": 200, "min_leaf": 2, "feat_frac": 1.0},
    Model.ANN: {"hidden": (16, 8), "epochs": 5000, "lr": 1e-2},
}


@dataclass(frozen=True)
class FitReport:
    model: Model
    mse: float
    r2: float
    train_mse: float
    train_r2: float
    split_seed: int
    hyperparams: dict = field(default_factory=dict)
    target: str = ""
    protocol: str = "holdout"
    n_train: int = 0
    n_test: int = 0

    def as_dict(self) -> dict:
        return {
            "model": self.model.value, "target": self.target, "protocol": self.protocol,
            "mse": self.mse, "r2": self.r2, "train_mse": self.train_mse, "train_r2": self.train_r2,
            "split_seed": self.split_seed, "n_train": self.n_train, "n_test": self.n_test,
            "hyperparams": {k: list(v) if isinstance(v, tuple) else v for k, v in self.hyperparams.items()},
        }


def train_test_split(n: int, split_seed: int, test_fraction: float = TEST_FRACTION):
    if n < 4:
        raise DomainError(f"need at least 4 rows to split, got {n}")
    perm = np.random.default_rng(split_seed).permutation(n)
    n_test = min(n - 2, max(2, int(round(test_fraction * n))))
    return np.sort(perm[n_test:]), np.sort(perm[:n_test])


def standardize(train: np.ndarray, *others: np.ndarray):
    mean = train.mean(axis=0)
    scale = train.std(axis=0)
    scale[scale == 0.0] = 1.0
    return [(a - mean) / scale for a in (train, *others)]


def _run(F: FeatureMatrix, make: Callable[[], object], model: Model, split_seed: int,
         protocol: str, hyperparams: dict, describe: Callable[[object], dict] | None = None) -> FitReport:
    X, y = F.X, F.target
    n = X.shape[0]
    if protocol == "holdout":
        tr, te = train_test_split(n, split_seed)
        Xtr, Xte = standardize(X[tr], X[te])
        est = make().fit(Xtr, y[tr])
        mse, r2 = evaluate(est.predict(Xte), y[te])
        train_mse, train_r2 = evaluate(est.predict(Xtr), y[tr])
        n_train, n_test = tr.size, te.size
    elif protocol == "loo":
        pred = np.empty(n)
        for i in range(n):
            mask = np.arange(n) != i
            Xtr, Xte = standardize(X[mask], X[i:i + 1])
            pred[i] = make().fit(Xtr, y[mask]).predict(Xte)[0]
        mse, r2 = evaluate(pred, y)
        (Xall,) = standardize(X)
        est = make().fit(Xall, y)
        train_mse, train_r2 = evaluate(est.predict(Xall), y)
        n_train, n_test = n - 1, n
    else:
        raise DomainError(f"unknown protocol {protocol!r}; expected 'holdout' or 'loo'")
    hp = dict(hyperparams)
    if describe is not None:
        hp.update(describe(est))
    return FitReport(model, mse, r2, train_mse, train_r2, split_seed, hp, F.target_name,
                     protocol, n_train, n_test)


def fit_ridge(F: FeatureMatrix, alpha: float = 1e-3, split_seed: int = 0,
              protocol: str = "holdout") -> FitReport:
    return _run(F, lambda: Ridge(alpha), Model.RIDGE, split_seed, protocol, {"alpha": alpha})


def fit_lasso(F: FeatureMatrix, alpha: float = 1e-4, split_seed: int = 0,
              protocol: str = "holdout") -> FitReport:
    def describe(est):
        nz = np.flatnonzero(est.coef_)
        return {"n_nonzero": int(nz.size), "selected": [F.names[j] for j in nz],
                "sweeps": est.n_sweeps_}

    return _run(F, lambda: Lasso(alpha), Model.LASSO, split_seed, protocol, {"alpha": alpha}, describe)


def fit_random_forest(F: FeatureMatrix, trees: int = 200, min_leaf: int = 2, feat_frac: float = 1.0,
                      split_seed: int = 0, protocol: str = "holdout", bootstrap: bool = True,
                      threads: int = 1) -> FitReport:
    hp = {"trees": trees, "min_leaf": min_leaf, "feat_frac": feat_frac, "bootstrap": bootstrap}
    return _run(F, lambda: RandomForest(trees, min_leaf, feat_frac, split_seed, bootstrap, threads),
                Model.RANDOM_FOREST, split_seed, protocol, hp)


def fit_ann(F: FeatureMatrix, hidden: tuple[int, int] = (16, 8), epochs: int = 5000, lr: float = 1e-2,
            split_seed: int = 0, protocol: str = "holdout") -> FitReport:
    hp = {"hidden": tuple(hidden), "epochs": epochs, "lr": lr, "activation": "tanh"}

    def describe(est):
        return {"final_loss": est.loss_history_[-1] if est.loss_history_ else None}

    return _run(F, lambda: MLP(hidden, epochs, lr, split_seed), Model.ANN, split_seed, protocol, hp, describe)


def fit_model(model: Model | str, F: FeatureMatrix, split_seed: int = 0, protocol: str = "holdout",
              threads: int = 1, **overrides) -> FitReport:
    """Fit ``model`` with its default hyperparameters, updated by ``overrides``."""
    model = Model(model)
    hp = {**DEFAULTS[model], **overrides}
    if model is Model.RIDGE:
        return fit_ridge(F, hp["alpha"], split_seed, protocol)
    if model is Model.LASSO:
        return fit_lasso(F, hp["alpha"], split_seed, protocol)
    if model is Model.RANDOM_FOREST:
        return fit_random_forest(F, hp["trees"], hp["min_leaf"], hp["feat_frac"], split_seed, protocol,
                                 threads=threads)
    return fit_ann(F, hp["hidden"], hp["epochs"], hp["lr"], split_seed, protocol)


MEASURE_ORDER = ("neu-fe", "eu-fe", "neu-fev", "eu-fev")


def run_validation(prospects, cfg, models=tuple(Model), measures=MEASURE_ORDER, split_seed: int = 7,
                   feature_seed: int = 0, bootstrap_reps: int = 50, sample_size: int = 245,
                   threads: int = 1) -> tuple[FeatureMatrix, list[FitReport]]:
    """Fit every model against every measure's risk target at ``cfg``'s q and lambda."""
    from ..risk_measures import Measure
    from .features import build_features, risk_targets, target_name

    F = build_features(prospects, cfg, bootstrap_reps, feature_seed, sample_size)
    reports = []
    for m in measures:
        mcfg = cfg.replace(measure=Measure(m))
        Fm = F.with_target(risk_targets(prospects, mcfg), target_name(mcfg))
        for model in models:
            reports.append(fit_model(model, Fm, split_seed, threads=threads))
    return F, reports
