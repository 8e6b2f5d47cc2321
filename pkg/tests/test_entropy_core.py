import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracrisk.entropy_core import (Distribution, EntropyParams, entropy_term_max, fractional_entropy,
                                   information_gain, normalized_fractional_entropy, normalized_shannon_entropy,
                                   shannon_entropy)
from fracrisk.errors import DomainError

import oracles
from conftest import distributions

Q_GRID = [i / 20 for i in range(21)]
qs = st.floats(0.0, 1.0)


class TestDistribution:
    def test_valid(self):
        d = Distribution((0.2, 0.0, 0.8))
        assert len(d) == 3 and d.support_size == 2

    @pytest.mark.parametrize("probs", [(), (0.5, 0.6), (1.2, -0.2), (0.5, float("nan"), 0.5), (0.0, 0.0)])
    def test_invalid(self, probs):
        with pytest.raises(DomainError):
            Distribution(probs)

    def test_tolerance_is_not_renormalized(self):
        Distribution((0.5, 0.5 + 5e-10))
        with pytest.raises(DomainError, match="sum"):
            Distribution((0.5, 0.5 + 1e-8))


class TestInformationGain:
    def test_examples(self):
        assert information_gain(1.0, 0.5) == 0.0
        assert information_gain(math.exp(-1), 0.7) == pytest.approx(1.0, abs=1e-15)
        assert information_gain(0.5, 0.5) == pytest.approx(oracles.S_HALF_UNIFORM2, abs=1e-5)

    def test_q_zero_convention(self):
        assert information_gain(0.3, 0.0) == 1.0
        assert information_gain(1.0, 0.0) == 0.0

    @pytest.mark.parametrize("p", [0.0, -0.1, 1.0000001])
    def test_bad_p(self, p):
        with pytest.raises(DomainError):
            information_gain(p, 0.5)

    @pytest.mark.parametrize("q", [-0.01, 1.01, float("nan")])
    def test_bad_q(self, q):
        with pytest.raises(DomainError):
            information_gain(0.5, q)


class TestFractionalEntropy:
    def test_examples(self):
        assert fractional_entropy([1.0], 0.3) == 0.0
        assert fractional_entropy([0.5, 0.5], 1.0) == pytest.approx(math.log(2), abs=1e-15)
        assert fractional_entropy([0.5, 0.5], 0.5) == pytest.approx(oracles.S_HALF_UNIFORM2, abs=1e-5)

    def test_q_zero_counts_mass_below_one(self):
        assert fractional_entropy([0.25, 0.75], 0.0) == pytest.approx(1.0)
        assert fractional_entropy([1.0, 0.0], 0.0) == 0.0

    def test_invalid_distribution(self):
        with pytest.raises(DomainError):
            fractional_entropy([0.4, 0.4], 0.5)

    @given(distributions(), qs)
    def test_matches_naive(self, p, q):
        assert fractional_entropy(p, q) == pytest.approx(oracles.naive_fractional_entropy(p, q), rel=1e-12, abs=1e-15)

    @given(distributions())
    def test_shannon_at_one(self, p):
        assert abs(fractional_entropy(p, 1.0) - oracles.naive_shannon(p)) < 1e-12
        assert abs(shannon_entropy(p) - oracles.naive_shannon(p)) < 1e-12

    @given(distributions(), qs, st.randoms())
    def test_permutation_invariant(self, p, q, rnd):
        shuffled = list(p)
        rnd.shuffle(shuffled)
        assert fractional_entropy(shuffled, q) == pytest.approx(fractional_entropy(p, q), rel=1e-12, abs=1e-15)


class TestTermMax:
    def test_examples(self):
        assert entropy_term_max(1.0) == pytest.approx(math.exp(-1))
        assert entropy_term_max(0.0) == 1.0
        assert entropy_term_max(0.5) == pytest.approx(oracles.TERM_MAX_HALF, abs=1e-5)

    def test_bad_q(self):
        with pytest.raises(DomainError):
            entropy_term_max(1.5)

    @pytest.mark.parametrize("q", [0.05, 0.3, 0.5, 0.8, 1.0])
    def test_argmax_is_exp_minus_q(self, q):
        p_star = oracles.golden_section_max(lambda p: oracles.entropy_term(p, q), 1e-12, 1 - 1e-12)
        assert abs(p_star - math.exp(-q)) < 1e-6
        assert oracles.entropy_term(p_star, q) == pytest.approx(entropy_term_max(q), rel=1e-12)

    @pytest.mark.parametrize("q", [0.1, 0.5, 1.0])
    def test_bound_dominates_grid(self, q):
        p = np.linspace(1e-6, 1 - 1e-6, 10001)
        assert (p * (-np.log(p)) ** q).max() <= entropy_term_max(q) + 1e-15


class TestNormalized:
    def test_examples(self):
        assert normalized_fractional_entropy([1.0], EntropyParams(0.5)) == 0.0
        assert normalized_fractional_entropy([0.5, 0.5], EntropyParams(0.5)) == pytest.approx(
            oracles.NS_HALF_UNIFORM2, abs=1e-4)
        assert normalized_fractional_entropy([0.5, 0.5], EntropyParams(1.0)) == pytest.approx(
            oracles.NS_ONE_UNIFORM2, abs=1e-4)

    def test_fixed_bin_count(self):
        fixed = normalized_fractional_entropy([0.5, 0.5], EntropyParams(0.5, 4))
        assert fixed == pytest.approx(oracles.naive_ns([0.5, 0.5], 0.5, 4))

    def test_fixed_count_below_support(self):
        with pytest.raises(DomainError):
            normalized_fractional_entropy([0.2, 0.3, 0.5], EntropyParams(0.5, 2))

    def test_params_validation(self):
        with pytest.raises(DomainError):
            EntropyParams(q=-0.1)
        with pytest.raises(DomainError):
            EntropyParams(bin_count=0)
        assert EntropyParams(0.5, 15).support_rule == "FIXED_BIN_COUNT(15)"
        assert EntropyParams().support_rule == "NONZERO_SUPPORT"

    @given(distributions(), qs)
    def test_unit_interval(self, p, q):
        v = normalized_fractional_entropy(p, EntropyParams(q))
        assert 0.0 <= v <= 1.0
        assert v == pytest.approx(oracles.naive_ns(p, q), rel=1e-12, abs=1e-15)

    @given(distributions(), qs, st.integers(1, 5))
    def test_zero_padding_invariant(self, p, q, pad):
        params = EntropyParams(q)
        assert normalized_fractional_entropy(list(p) + [0.0] * pad, params) == normalized_fractional_entropy(p, params)

    @given(st.integers(0, 10**6))
    def test_strictly_increasing_in_q(self, seed):
        rng = np.random.default_rng(seed)
        while True:
            p = rng.dirichlet(np.full(15, 5.0))
            if p.max() < 0.36:
                break
        for bins in (None, 15):
            v = [normalized_fractional_entropy(p, EntropyParams(q, bins)) for q in Q_GRID[1:]]
            assert all(b > a for a, b in zip(v, v[1:]))
        s = [fractional_entropy(p, q) for q in Q_GRID[1:]]
        assert all(b > a for a, b in zip(s, s[1:]))


class TestShannonBaseline:
    def test_examples(self):
        assert normalized_shannon_entropy([0.25] * 4) == pytest.approx(1.0)
        assert normalized_shannon_entropy([1.0]) == 0.0
        assert normalized_shannon_entropy([0.9, 0.1]) == pytest.approx(oracles.NSH_90_10, abs=1e-4)

    @given(distributions(min_size=2))
    def test_unit_interval(self, p):
        assert -1e-15 <= normalized_shannon_entropy(p) <= 1.0 + 1e-12
