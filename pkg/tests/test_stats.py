import math
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from powbench.errors import InsufficientSamples, InvalidParam, SigmaZero, TooFewSamples
from powbench.kernels import PowConfig
from powbench.stats import (
    StatsSummary,
    balanced_sample,
    chebyshev_coverage,
    derive_gate,
    k_for_threshold,
    summarize,
)

from .conftest import make_record
from .oracles import naive_summary

CFG = PowConfig.argon2i(8, 100, 4096)

durations = st.lists(
    st.floats(min_value=0.001, max_value=1000.0, allow_nan=False, allow_infinity=False),
    min_size=2,
    max_size=200,
)


def spread(xs):
    return max(xs) - min(xs) > 1e-6 * max(xs)


class TestSummarize:
    def test_one_two_three(self):
        s = summarize([1, 2, 3])
        assert (s.n, s.mean_s, s.sigma_s, s.k_factor, s.coverage) == (3, 2.0, 1.0, 1.0, 0.0)

    def test_five_point_fixture(self):
        # hand oracle: deviations ±0.2, ±0.1, 0 -> variance 0.1/4, max deviation 0.2
        s = summarize([0.1, 0.2, 0.3, 0.4, 0.5])
        assert s.mean_s == pytest.approx(0.3, abs=1e-15)
        assert s.sigma_s == pytest.approx(0.158114, abs=1e-6)
        assert s.k_factor == pytest.approx(1.264911, abs=1e-6)
        assert s.coverage == pytest.approx(0.375, abs=1e-12)
        assert (s.min_s, s.max_s) == (0.1, 0.5)

    def test_constant(self):
        with pytest.raises(SigmaZero):
            summarize([5, 5, 5])

    @pytest.mark.parametrize("xs", [[], [1.0]])
    def test_too_few(self, xs):
        with pytest.raises(TooFewSamples):
            summarize(xs)

    @pytest.mark.parametrize("xs", [[1.0, -1.0], [1.0, math.nan], [1.0, math.inf]])
    def test_rejects_bad_values(self, xs):
        with pytest.raises(InvalidParam):
            summarize(xs)

    @settings(max_examples=200)
    @given(durations)
    def test_self_coverage(self, xs):
        assume(spread(xs))
        s = summarize(xs)
        inside = sum(abs(x - s.mean_s) <= s.k_factor * s.sigma_s * (1 + 1e-12) for x in xs)
        assert inside == len(xs)
        assert s.min_s <= s.mean_s <= s.max_s

    @settings(max_examples=200)
    @given(durations, st.floats(min_value=0.01, max_value=100.0))
    def test_scaling(self, xs, c):
        assume(spread(xs))
        a, b = summarize(xs), summarize([c * x for x in xs])
        for f in ("min_s", "max_s", "mean_s", "sigma_s"):
            assert getattr(b, f) == pytest.approx(c * getattr(a, f), rel=1e-9)
        assert b.k_factor == pytest.approx(a.k_factor, rel=1e-9)
        assert b.coverage == pytest.approx(a.coverage, rel=1e-9, abs=1e-12)

    @settings(max_examples=200)
    @given(durations, st.floats(min_value=0.0, max_value=100.0))
    def test_shift(self, xs, c):
        assume(spread(xs) and max(xs) - min(xs) > 1e-3)
        a, b = summarize(xs), summarize([x + c for x in xs])
        assert b.sigma_s == pytest.approx(a.sigma_s, rel=1e-6)
        assert b.k_factor == pytest.approx(a.k_factor, rel=1e-6)

    def test_oracle_agreement_small(self):
        rng = random.Random(7)
        for _ in range(50):
            xs = [rng.lognormvariate(0, 0.5) for _ in range(rng.randint(2, 60))]
            mean, sigma, _, k = naive_summary(xs)
            s = summarize(xs)
            assert s.mean_s == pytest.approx(mean, rel=1e-12)
            assert s.sigma_s == pytest.approx(sigma, rel=1e-12)
            assert s.k_factor == pytest.approx(k, rel=1e-12)


class TestCoverage:
    @pytest.mark.parametrize("k, expected", [(2, 0.75), (1, 0.0), (0.5, 0.0), (3, 8 / 9)])
    def test_values(self, k, expected):
        assert chebyshev_coverage(k) == pytest.approx(expected)

    @pytest.mark.parametrize("k, pct, digits", [(7.9, 98.4, 1), (9.99, 99.00, 2), (10.5, 99.1, 1)])
    def test_published_rows(self, k, pct, digits):
        assert round(chebyshev_coverage(k) * 100, digits) == pct

    @pytest.mark.parametrize("k", [0, -1, math.inf, math.nan])
    def test_invalid(self, k):
        with pytest.raises(InvalidParam):
            chebyshev_coverage(k)

    @given(st.floats(0.01, 1e6), st.floats(0.01, 1e6))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert chebyshev_coverage(lo) <= chebyshev_coverage(hi)
        if 1 < lo < hi:
            assert chebyshev_coverage(lo) < chebyshev_coverage(hi)


class TestBalancedSample:
    def records(self):
        rng = random.Random(1)
        return [
            make_record([rng.uniform(0.1, 0.3) for _ in range(9325)], label="i9"),
            make_record([rng.uniform(1.0, 3.0) for _ in range(300)], label="pi3"),
        ]

    def test_size(self):
        out = balanced_sample(self.records(), 150, seed=3)
        assert len(out) == 300
        assert sum(x < 0.5 for x in out) == 150

    def test_insufficient(self):
        with pytest.raises(InsufficientSamples) as exc:
            balanced_sample(self.records(), 500, seed=3)
        assert exc.value.record_label == "pi3"

    def test_deterministic(self):
        recs = self.records()
        assert balanced_sample(recs, 150, 42) == balanced_sample(recs, 150, 42)
        assert balanced_sample(recs, 150, 42) != balanced_sample(recs, 150, 43)

    def test_without_replacement(self):
        rec = make_record([float(i + 1) for i in range(20)])
        assert sorted(balanced_sample([rec], 20, 0)) == [float(i + 1) for i in range(20)]

    def test_failed_runs_excluded(self):
        from dataclasses import replace

        rec = make_record([1.0, 2.0, 3.0])
        rec = replace(rec, samples=rec.samples[:2] + (replace(rec.samples[2], completed=False),))
        with pytest.raises(InsufficientSamples):
            balanced_sample([rec], 3, 0)

    def test_bad_size(self):
        with pytest.raises(InvalidParam):
            balanced_sample(self.records(), 0, 0)


def summary(mean, sigma, k):
    return StatsSummary(n=300, min_s=0.0, max_s=mean + k * sigma, mean_s=mean, sigma_s=sigma, k_factor=k,
                        coverage=chebyshev_coverage(k))


class TestDeriveGate:
    def test_argon2i_row(self):
        gate = derive_gate(summary(0.46, 1.07, 8.1), CFG)
        assert (gate.t_budget_s, gate.n_required) == (10, 2)

    def test_arithmetic(self):
        assert derive_gate(summary(1.0, 0.5, 4), CFG).t_budget_s == 3

    def test_n_zero(self):
        with pytest.raises(InvalidParam):
            derive_gate(summary(1.0, 0.5, 4), CFG, n_required=0)

    def test_k_not_above_one(self):
        with pytest.raises(InvalidParam):
            derive_gate(summary(1.0, 0.5, 1.0), CFG)

    def test_zero_sigma(self):
        with pytest.raises(SigmaZero):
            derive_gate(summary(1.0, 0.0, 4), CFG)

    @given(
        st.floats(0.001, 100), st.floats(0.001, 100), st.floats(1.01, 50),
        st.floats(0, 10), st.floats(0, 10), st.floats(0, 10),
    )
    def test_monotone(self, mean, sigma, k, dm, ds, dk):
        base = derive_gate(summary(mean, sigma, k), CFG).t_budget_s
        assert derive_gate(summary(mean + dm, sigma, k), CFG).t_budget_s >= base
        assert derive_gate(summary(mean, sigma + ds, k), CFG).t_budget_s >= base
        assert derive_gate(summary(mean, sigma, k + dk), CFG).t_budget_s >= base


class TestKForThreshold:
    def test_hand_value(self):
        assert k_for_threshold([1, 2, 3], 4) == pytest.approx(2.0)

    def test_at_mean(self):
        with pytest.raises(InvalidParam):
            k_for_threshold([1, 2, 3], 2)

    def test_five_point_fixture(self):
        assert k_for_threshold([0.1, 0.2, 0.3, 0.4, 0.5], 0.5) == pytest.approx(1.2649, abs=1e-4)

    def test_constant_samples(self):
        with pytest.raises(SigmaZero):
            k_for_threshold([2, 2], 3)
