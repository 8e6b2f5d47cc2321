"""Per-stock feature matrix and risk targets for the regression study."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..entropy_core import EntropyParams, fractional_entropy, normalized_fractional_entropy
from ..errors import DomainError
from ..prospects import Prospect, moments
from ..risk_measures import ActionSpace, RiskConfig, risk_score

FEATURE_SET_VERSION = "1"
Q_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))
BOOTSTRAP_Q = 0.5


def feature_names() -> tuple[str, ...]:
    return (
        *(f"ns_q{q:.1f}" for q in Q_GRID),
        *(f"s_q{q:.1f}" for q in Q_GRID),
        "eu", "eu_norm",
        "var", "var_norm",
        "skewness", "kurtosis_m4",
        f"boot_std_ns_q{BOOTSTRAP_Q:.1f}",
    )


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    labels: tuple[str, ...]
    names: tuple[str, ...]
    X: np.ndarray
    target: np.ndarray
    target_name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.X.shape != (len(self.labels), len(self.names)):
            raise DomainError(f"X shape {self.X.shape} does not match labels x names")
        if len(set(self.names)) != len(self.names):
            raise DomainError("feature names must be unique")
        if self.target.shape != (len(self.labels),):
            raise DomainError("target length must equal the row count")
        if not (np.isfinite(self.X).all() and np.isfinite(self.target).all()):
            raise DomainError("feature matrix contains non-finite entries")

    @property
    def constant_columns(self) -> list[str]:
        """Names of zero-variance columns."""
        return [n for n, s in zip(self.names, np.ptp(self.X, axis=0)) if s == 0.0]

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.names.index(name)]

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        cols = [self.names.index(n) for n in names]
        return FeatureMatrix(self.labels, tuple(names), self.X[:, cols], self.target,
                             self.target_name, dict(self.meta))

    def with_target(self, target: np.ndarray, name: str) -> "FeatureMatrix":
        return FeatureMatrix(self.labels, self.names, self.X, np.asarray(target, dtype=np.float64),
                             name, dict(self.meta))


def risk_targets(prospects: Sequence[Prospect], cfg: RiskConfig) -> np.ndarray:
    space = ActionSpace(prospects)
    return np.array([risk_score(p, space, cfg).total for p in space])


def target_name(cfg: RiskConfig) -> str:
    return f"{cfg.measure.title}(q={cfg.q:g},lambda={cfg.lam:g})"


def _bootstrap_ns_std(p: Prospect, params: EntropyParams, reps: int, sample_size: int,
                      seq: np.random.SeedSequence) -> float:
    # resampling T returns and re-binning them is a multinomial draw over the bins
    rng = np.random.default_rng(seq)
    counts = rng.multinomial(sample_size, np.asarray(p.probs), size=reps)
    values = [normalized_fractional_entropy(c[c > 0] / sample_size, params) for c in counts]
    return float(np.std(values, ddof=1))


def build_features(prospects: Sequence[Prospect], cfg: RiskConfig, bootstrap_reps: int = 50,
                   seed: int = 0, sample_size: int = 245) -> FeatureMatrix:
    """Feature rows for each prospect plus the ``cfg`` risk total as target.

    The bootstrap column is the standard deviation of ``NS_0.5`` across
    ``bootstrap_reps`` resampled histograms of ``sample_size`` returns.
    """
    if len(prospects) < 5:
        raise DomainError(f"need at least 5 prospects, got {len(prospects)}")
    if bootstrap_reps < 10:
        raise DomainError(f"bootstrap_reps must be >= 10, got {bootstrap_reps}")
    space = ActionSpace(prospects)
    bin_count = cfg.entropy.bin_count
    max_eu, max_var = space.max_abs_eu, space.max_var
    seqs = np.random.SeedSequence(seed).spawn(len(space))
    boot_params = EntropyParams(BOOTSTRAP_Q, bin_count)
    rows = []
    for p, eu, var, seq in zip(space, space.expected_utilities, space.variances, seqs):
        m = moments(p)
        rows.append([
            *(normalized_fractional_entropy(p.probs, EntropyParams(q, bin_count)) for q in Q_GRID),
            *(fractional_entropy(p.probs, q) for q in Q_GRID),
            eu, eu / max_eu if max_eu else 0.0,
            var, var / max_var if max_var else 0.0,
            m.skewness, m.kurtosis_m4,
            _bootstrap_ns_std(p, boot_params, bootstrap_reps, sample_size, seq),
        ])
    meta = {
        "feature_set_version": FEATURE_SET_VERSION,
        "bootstrap_reps": bootstrap_reps,
        "bootstrap_sample_size": sample_size,
        "bootstrap_seed": seed,
        "bootstrap_indicator": "std of NS_q(q=0.5) over multinomial histogram resamples (stand-in)",
        "support_rule": cfg.entropy.support_rule,
    }
    return FeatureMatrix(tuple(p.label for p in space), feature_names(),
                         np.array(rows, dtype=np.float64),
                         risk_targets(prospects, cfg), target_name(cfg), meta)

