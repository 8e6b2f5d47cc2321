"""Entropy/utility risk measures, the selection rule, and variance diagnostics.

Four measures are available. The normalized ones combine

    NEU-FE :  lam * NS_q - (1 - lam) * EU / max|EU|
    NEU-FEV:  lam / 2 * (NS_q + Var / maxVar) - (1 - lam) * EU / max|EU|

where the maxima run over the action space. The EU-FE / EU-FEV baselines use
the raw fractional entropy ``S_q`` in place of ``NS_q`` and, for EU-FEV, the
raw variance in place of ``Var / maxVar``. When ``max|EU|`` is zero the utility
term is dropped; when ``maxVar`` is zero the variance term is zero.

Lower totals are preferred.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .entropy_core import EntropyParams, fractional_entropy, normalized_fractional_entropy
from .errors import DomainError
from .prospects import Prospect, expected_utility, moments


class Measure(str, enum.Enum):
    EU_FE = "eu-fe"
    EU_FEV = "eu-fev"
    NEU_FE = "neu-fe"
    NEU_FEV = "neu-fev"

    @property
    def normalized(self) -> bool:
        return self in (Measure.NEU_FE, Measure.NEU_FEV)

    @property
    def with_variance(self) -> bool:
        return self in (Measure.EU_FEV, Measure.NEU_FEV)

    @property
    def title(self) -> str:
        return self.name.replace("_", "-")


@dataclass(frozen=True)
class RiskConfig:
    measure: Measure = Measure.NEU_FE
    lam: float = 0.5
    entropy: EntropyParams = field(default_factory=EntropyParams)

    def __post_init__(self):
        object.__setattr__(self, "measure", Measure(self.measure))
        if not (0.0 <= self.lam <= 1.0):
            raise DomainError(f"lambda must be in [0, 1], got {self.lam!r}")

    @property
    def q(self) -> float:
        return self.entropy.q

    def replace(self, **changes) -> "RiskConfig":
        q = changes.pop("q", None)
        bin_count = changes.pop("bin_count", self.entropy.bin_count)
        entropy = changes.pop("entropy", EntropyParams(self.q if q is None else q, bin_count))
        return RiskConfig(changes.pop("measure", self.measure), changes.pop("lam", self.lam), entropy)


@dataclass(frozen=True)
class RiskScore:
    total: float
    entropy_term: float
    variance_term: float
    utility_term: float
    normalizers: tuple[float, float]  # (max_abs_eu, max_var)
    measure: Measure
    lam: float

    def recompose(self) -> float:
        return combine(self.measure, self.lam, self.entropy_term, self.variance_term, self.utility_term)


@dataclass(frozen=True)
class Ranking:
    entries: tuple[tuple[str, RiskScore], ...]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.entries]

    @property
    def totals(self) -> list[float]:
        return [s.total for _, s in self.entries]


class ActionSpace:
    """Immutable set of prospects plus their expected utilities and variances.

    Scores are always computed against one of these so the ``max|EU|`` and
    ``maxVar`` normalizers match the set being compared.
    """

    def __init__(self, prospects: Sequence[Prospect]):
        self.prospects = tuple(prospects)
        if not self.prospects:
            raise DomainError("action space must not be empty")
        self._index = {id(p): i for i, p in enumerate(self.prospects)}

    def __len__(self):
        return len(self.prospects)

    def __iter__(self):
        return iter(self.prospects)

    def __contains__(self, p):
        return id(p) in self._index or p in self.prospects

    @cached_property
    def expected_utilities(self) -> tuple[float, ...]:
        return tuple(expected_utility(p) for p in self.prospects)

    @cached_property
    def variances(self) -> tuple[float, ...]:
        return tuple(moments(p).variance for p in self.prospects)

    @cached_property
    def max_abs_eu(self) -> float:
        return max(abs(u) for u in self.expected_utilities)

    @cached_property
    def max_var(self) -> float:
        return max(self.variances)

    def stats(self, p: Prospect) -> tuple[float, float]:
        i = self._index.get(id(p))
        if i is None:
            if p not in self.prospects:
                raise DomainError(f"prospect {p.label!r} is not in the action space")
            i = self.prospects.index(p)
        return self.expected_utilities[i], self.variances[i]


def combine(measure: Measure, lam: float, entropy_term: float, variance_term: float,
            utility_term: float) -> float:
    if Measure(measure).with_variance:
        return lam / 2.0 * (entropy_term + variance_term) - (1.0 - lam) * utility_term
    return lam * entropy_term - (1.0 - lam) * utility_term


def _as_space(ctx) -> ActionSpace:
    return ctx if isinstance(ctx, ActionSpace) else ActionSpace(ctx)


def risk_score(p: Prospect, ctx, cfg: RiskConfig) -> RiskScore:
    """Score ``p`` under ``cfg.measure`` against the action space ``ctx``."""
    space = _as_space(ctx)
    eu, var = space.stats(p)
    max_eu, max_var = space.max_abs_eu, space.max_var
    measure = cfg.measure
    if measure.normalized:
        h = normalized_fractional_entropy(p.probs, cfg.entropy)
    else:
        h = fractional_entropy(p.probs, cfg.q)
    u = eu / max_eu if max_eu != 0.0 else 0.0
    if not measure.with_variance:
        v = 0.0
    elif measure.normalized:
        v = var / max_var if max_var != 0.0 else 0.0
    else:
        v = var
    total = combine(measure, cfg.lam, h, v, u)
    return RiskScore(total, h, v, u, (max_eu, max_var), measure, cfg.lam)


def _checked(measure: Measure, cfg: RiskConfig) -> None:
    if cfg.measure is not measure:
        raise DomainError(f"config measure is {cfg.measure.title}, expected {measure.title}")


def risk_neu_fe(p: Prospect, ctx, cfg: RiskConfig) -> RiskScore:
    _checked(Measure.NEU_FE, cfg)
    return risk_score(p, ctx, cfg)


def risk_neu_fev(p: Prospect, ctx, cfg: RiskConfig) -> RiskScore:
    _checked(Measure.NEU_FEV, cfg)
    return risk_score(p, ctx, cfg)


def risk_eu_fe(p: Prospect, ctx, cfg: RiskConfig) -> RiskScore:
    _checked(Measure.EU_FE, cfg)
    return risk_score(p, ctx, cfg)


def risk_eu_fev(p: Prospect, ctx, cfg: RiskConfig) -> RiskScore:
    _checked(Measure.EU_FEV, cfg)
    return risk_score(p, ctx, cfg)


def rank(actions: Sequence[Prospect], cfg: RiskConfig) -> Ranking:
    """Order actions from least to most risky; equal totals fall back to label order."""
    space = ActionSpace(actions)
    scored = [(p.label, risk_score(p, space, cfg)) for p in space]
    scored.sort(key=lambda item: (item[1].total, item[0]))
    return Ranking(tuple(scored))


def scaling_lambda_bound(p: Prospect, k: float) -> float:
    """Upper end ``b`` of the lambda interval ``[0, b)`` on which NEU-FEV prefers ``kA`` to ``A``.

    Valid for the two-action space ``{A, kA}`` with non-negative payoffs and
    ``k > 1``.
    """
    if not k > 1.0:
        raise DomainError(f"scale factor must exceed 1, got {k!r}")
    if min(p.payoffs) < 0.0:
        raise DomainError("scaling bound assumes non-negative payoffs")
    eu_k = expected_utility(p.scale(k))
    if eu_k == 0.0:
        raise DomainError("expected utility of the scaled prospect is zero")
    rho = expected_utility(p) / eu_k
    return (1.0 - rho) / (1.5 - 0.5 / k / k - rho)


# --- variance sensitivity diagnostics -------------------------------------------

def variance_influence(x: float, mu: float, sigma2: float) -> float:
    """Influence of one observation ``x`` on the variance functional."""
    if sigma2 < 0.0:
        raise DomainError(f"sigma2 must be non-negative, got {sigma2!r}")
    return (x - mu) ** 2 - sigma2


def target_shift(delta_s2: float, lam: float, v_max: float) -> float:
    """First-order change of the NEU-FEV total when the variance moves by ``delta_s2``."""
    if not v_max > 0.0:
        raise DomainError(f"v_max must be positive, got {v_max!r}")
    return lam / (2.0 * v_max) * delta_s2


def outlier_target_shift(x: float, mu: float, sigma2: float, lam: float, v_max: float) -> float:
    """Approximate NEU-FEV shift caused by inserting the return ``x``; quadratic in ``|x - mu|``."""
    return target_shift(variance_influence(x, mu, sigma2), lam, v_max)


def sample_variance_variance(series: Sequence[float]) -> float:
    """Large-sample variance of the sample variance, ``(mu4 - sigma^4) / n``.

    Uses plug-in (divide-by-n) central moments.
    """
    r = np.asarray(series, dtype=np.float64)
    n = r.size
    if n < 4:
        raise DomainError(f"need at least 4 observations, got {n}")
    dev = r - r.mean()
    sigma2 = np.mean(dev**2)
    mu4 = np.mean(dev**4)
    return float(max(mu4 - sigma2**2, 0.0) / n)


def normvar_variance(series: Sequence[float], v_max: float) -> float:
    """Sampling variance of ``s^2 / v_max``."""
    if not v_max > 0.0:
        raise DomainError(f"v_max must be positive, got {v_max!r}")
    return sample_variance_variance(series) / v_max**2


def target_variance(lam: float, var_ns: float, var_normvar: float, cov_normvar_neu: float) -> float:
    """Leading terms of the NEU-FEV total's sampling variance.

    Only the entropy, normalized-variance and variance/utility covariance
    contributions are included; higher-order cross terms are omitted.
    """
    half = lam / 2.0
    return half**2 * var_ns + half**2 * var_normvar - 2.0 * half * (1.0 - lam) * cov_normvar_neu


def variance_contribution(lam: float, series: Sequence[float], v_max: float) -> float:
    """The ``(lam/2)^2 (mu4 - sigma^4) / (n v_max^2)`` term of the target variance."""
    return (lam / 2.0) ** 2 * normvar_variance(series, v_max)


def is_finite_score(s: RiskScore) -> bool:
    return all(math.isfinite(v) for v in (s.total, s.entropy_term, s.variance_term, s.utility_term))
