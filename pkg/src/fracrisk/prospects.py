"""Risky prospects, the S-shaped utility and probability-weighted moments."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .entropy_core import Distribution
from .errors import DomainError


@dataclass(frozen=True)
class Prospect:
    """Finite risky action: payoff outcomes with their probabilities.

    Duplicate payoffs are kept as separate outcomes.
    """

    payoffs: tuple[float, ...]
    probs: tuple[float, ...]
    label: str = ""

    def __post_init__(self):
        payoffs = tuple(float(x) for x in self.payoffs)
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "payoffs", payoffs)
        object.__setattr__(self, "probs", probs)
        if not payoffs:
            raise DomainError("prospect needs at least one outcome")
        if len(payoffs) != len(probs):
            raise DomainError(f"{len(payoffs)} payoffs but {len(probs)} probabilities")
        for x in payoffs:
            if not math.isfinite(x):
                raise DomainError(f"payoff {x!r} is not finite")
        Distribution(probs)

    @classmethod
    def from_pairs(cls, outcomes: Iterable[tuple[float, float]], label: str = "") -> "Prospect":
        pairs = list(outcomes)
        return cls(tuple(x for x, _ in pairs), tuple(p for _, p in pairs), label)

    @property
    def outcomes(self) -> list[tuple[float, float]]:
        return list(zip(self.payoffs, self.probs))

    def shift(self, c: float, label: str | None = None) -> "Prospect":
        """Add ``c`` to every payoff."""
        return Prospect(tuple(x + c for x in self.payoffs), self.probs,
                        f"{self.label}+{c:g}" if label is None else label)

    def scale(self, k: float, label: str | None = None) -> "Prospect":
        """Multiply every payoff by ``k``."""
        return Prospect(tuple(k * x for x in self.payoffs), self.probs,
                        f"{k:g}*{self.label}" if label is None else label)


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    variance: float
    skewness: float
    kurtosis_m4: float


def utility(x: float) -> float:
    """S-shaped utility: ``log(1+x)`` for gains, ``-log(1-x)`` for losses."""
    if x <= -1.0:
        raise DomainError(f"utility is undefined for payoff {x!r} <= -1")
    if x >= 0.0:
        return math.log1p(x)
    return -math.log1p(-x)


def expected_utility(p: Prospect) -> float:
    return math.fsum(pi * utility(x) for x, pi in zip(p.payoffs, p.probs))


def moments(p: Prospect) -> MomentSummary:
    x = np.asarray(p.payoffs)
    w = np.asarray(p.probs)
    mean = math.fsum(w * x)
    dev = x - mean
    var = math.fsum(w * dev**2)
    m4 = math.fsum(w * dev**4)
    sd = math.sqrt(var)
    # standardize first: var**1.5 underflows long before var does
    skew = math.fsum(w * (dev / sd) ** 3) if sd > 0.0 else 0.0
    return MomentSummary(mean=mean, variance=var, skewness=skew, kurtosis_m4=m4)


def distribution_of(p: Prospect) -> Distribution:
    return Distribution(p.probs)
