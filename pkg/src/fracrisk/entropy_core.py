"""Fractional-order (Ubriaco) entropy and its normalized form.

All logarithms are natural. Zero-probability outcomes contribute nothing to
any entropy value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DomainError

PROB_TOL = 1e-9


@dataclass(frozen=True)
class Distribution:
    """A finite probability vector.

    Probabilities must lie in [0, 1] and sum to one within ``PROB_TOL``.
    Out-of-tolerance input is rejected, never renormalized.
    """

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if not probs:
            raise DomainError("distribution must have at least one outcome")
        for i, p in enumerate(probs):
            if not (0.0 <= p <= 1.0):
                raise DomainError(f"probability {p!r} at index {i} is outside [0, 1]")
        total = math.fsum(probs)
        if abs(total - 1.0) > PROB_TOL:
            raise DomainError(f"probabilities sum to {total!r}, expected 1 within {PROB_TOL}")

    def __len__(self):
        return len(self.probs)

    @property
    def support_size(self) -> int:
        return sum(1 for p in self.probs if p > 0.0)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=np.float64)


DistributionLike = Union[Distribution, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class EntropyParams:
    """Fractional order ``q`` and the outcome count used by the normalizer.

    ``bin_count=None`` normalizes by the number of nonzero probabilities.
    An integer fixes the count, which keeps values comparable across
    prospects binned on a shared grid.
    """

    q: float = 0.5
    bin_count: int | None = None

    def __post_init__(self):
        _check_q(self.q)
        if self.bin_count is not None and int(self.bin_count) < 1:
            raise DomainError(f"bin_count must be >= 1, got {self.bin_count}")

    @property
    def support_rule(self) -> str:
        return "NONZERO_SUPPORT" if self.bin_count is None else f"FIXED_BIN_COUNT({self.bin_count})"


def _check_q(q: float) -> None:
    if not (0.0 <= q <= 1.0) or math.isnan(q):
        raise DomainError(f"fractional order q must be in [0, 1], got {q!r}")


def as_distribution(d: DistributionLike) -> Distribution:
    if isinstance(d, Distribution):
        return d
    return Distribution(tuple(np.asarray(d, dtype=np.float64).ravel()))


def information_gain(p: float, q: float) -> float:
    """Return ``(-log p) ** q``.

    At ``q = 0`` the gain is 1 for any ``p < 1`` and 0 for ``p = 1``.
    """
    _check_q(q)
    if not (0.0 < p <= 1.0):
        raise DomainError(f"information gain needs 0 < p <= 1, got {p!r}")
    surprise = -math.log(p)
    if surprise == 0.0:
        return 0.0
    return surprise**q


def _entropy_terms(probs: np.ndarray, q: float) -> np.ndarray:
    nz = probs[probs > 0.0]
    surprise = -np.log(nz)
    gain = np.zeros_like(surprise)
    pos = surprise > 0.0
    gain[pos] = surprise[pos] ** q
    return nz * gain


def fractional_entropy(d: DistributionLike, q: float) -> float:
    """Ubriaco entropy ``sum p * (-log p) ** q``; Shannon entropy at ``q = 1``."""
    _check_q(q)
    dist = as_distribution(d)
    return math.fsum(_entropy_terms(dist.as_array(), q))


def entropy_term_max(q: float) -> float:
    """Largest value of ``p * (-log p) ** q`` over ``p``, namely ``q**q * e**-q``.

    The maximum sits at ``p = e**-q``; ``q = 0`` uses ``0**0 = 1``.
    """
    _check_q(q)
    if q == 0.0:
        return 1.0
    return q**q * math.exp(-q)


def _outcome_count(dist: Distribution, params: EntropyParams) -> int:
    support = dist.support_size
    if params.bin_count is None:
        return support
    n = int(params.bin_count)
    if n < support:
        raise DomainError(f"bin_count {n} is smaller than the {support} nonzero outcomes")
    return n


def normalized_fractional_entropy(d: DistributionLike, params: EntropyParams) -> float:
    """Fractional entropy divided by its loose upper bound ``n q^q e^{-q}``."""
    dist = as_distribution(d)
    n = _outcome_count(dist, params)
    if n == 0:
        raise DomainError("outcome count for normalization is zero")
    return fractional_entropy(dist, params.q) / (n * entropy_term_max(params.q))


def shannon_entropy(d: DistributionLike) -> float:
    dist = as_distribution(d)
    p = dist.as_array()
    p = p[p > 0.0]
    return -math.fsum(p * np.log(p))


def normalized_shannon_entropy(d: DistributionLike) -> float:
    """Shannon entropy over ``log n`` with ``n`` the nonzero support size (0 if ``n = 1``)."""
    dist = as_distribution(d)
    n = dist.support_size
    if n == 1:
        return 0.0
    return shannon_entropy(dist) / math.log(n)
