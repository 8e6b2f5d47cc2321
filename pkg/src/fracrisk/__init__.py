"""Normalized fractional-order entropy risk measures for stock selection."""
from .entropy_core import (Distribution, EntropyParams, entropy_term_max, fractional_entropy,
                           information_gain, normalized_fractional_entropy, normalized_shannon_entropy)
from .errors import (ConvergenceError, DivergenceError, DomainError, FracRiskError, IngestionError,
                     NumericalRankError)
from .prospects import MomentSummary, Prospect, distribution_of, expected_utility, moments, utility
from .risk_measures import (ActionSpace, Measure, Ranking, RiskConfig, RiskScore, rank, risk_score,
                            scaling_lambda_bound)

__version__ = "0.1.0"
