import itertools
import math
import random

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from luxkit.corpus import MetricId, SegmentScores
from luxkit.errors import CorpusFormatError
from luxkit.metrics import bleu, bleu_sufficient_stats, ter, ter_sufficient_stats
from luxkit.stats import (
    BootstrapConfig,
    SignificanceResult,
    correlation_pvalue,
    kendall_tau_b,
    paired_bootstrap,
    spearman_rho,
    system_correlation_matrix,
)

from appendix_data import CORRELATIONS, FULL_RESULTS, METRIC_ORDER
from oracles import spearman_oracle, tau_b_oracle


def column(lp, metric):
    idx = METRIC_ORDER.index(metric)
    return [FULL_RESULTS[lp][system][idx] for system in FULL_RESULTS[lp]]


class TestBootstrapConfig:
    def test_defaults(self):
        cfg = BootstrapConfig()
        assert cfg.replicates == 1000
        assert cfg.confidence == 0.95

    def test_too_few_replicates_rejected(self):
        with pytest.raises(ValueError):
            BootstrapConfig(replicates=1)

    def test_bad_confidence_rejected(self):
        with pytest.raises(ValueError):
            BootstrapConfig(confidence=1.0)


class TestPairedBootstrap:
    def test_identical_systems_degenerate(self):
        values = np.linspace(60, 95, 50)
        result = paired_bootstrap(values, values.copy(), BootstrapConfig(seed=5))
        assert result.delta == 0.0
        assert (result.ci_lo, result.ci_hi) == (0.0, 0.0)
        assert result.significant is False

    def test_constant_shift(self):
        rng = np.random.default_rng(0)
        base = rng.normal(70, 5, size=80)
        result = paired_bootstrap(base, base + 5.0, BootstrapConfig(seed=9))
        assert result.delta == pytest.approx(5.0, abs=1e-9)
        assert result.ci_lo == pytest.approx(5.0, abs=1e-9)
        assert result.ci_hi == pytest.approx(5.0, abs=1e-9)
        assert result.significant is True

    def test_clear_improvement_is_significant_and_deterministic(self):
        rng = np.random.default_rng(123)
        base = rng.normal(70, 2, size=200)
        cand = base + rng.normal(1.0, 0.5, size=200)
        cfg = BootstrapConfig(seed=77)
        one = paired_bootstrap(base, cand, cfg)
        two = paired_bootstrap(base, cand, cfg)
        assert one.significant is True
        assert one == two  # bit-identical on identical inputs and seed

    def test_different_seed_differs(self):
        rng = np.random.default_rng(5)
        base = rng.normal(70, 2, size=100)
        cand = base + rng.normal(0.3, 2.0, size=100)
        a = paired_bootstrap(base, cand, BootstrapConfig(seed=1))
        b = paired_bootstrap(base, cand, BootstrapConfig(seed=2))
        assert (a.ci_lo, a.ci_hi) != (b.ci_lo, b.ci_hi)

    def test_segment_scores_accepted_for_mean_metrics(self):
        base = SegmentScores(system="b", metric=MetricId.BERTSCORE, lp=None, values=(80.0, 84.0, 88.0))
        cand = SegmentScores(system="c", metric=MetricId.BERTSCORE, lp=None, values=(81.0, 85.0, 89.0))
        result = paired_bootstrap(base, cand, BootstrapConfig(seed=3))
        assert result.delta == pytest.approx(1.0)
        assert result.significant is True

    def test_metric_mismatch_rejected(self):
        base = SegmentScores(system="b", metric=MetricId.BERTSCORE, lp=None, values=(80.0,) * 4)
        cand = SegmentScores(system="c", metric=MetricId.BLEURT20, lp=None, values=(81.0,) * 4)
        with pytest.raises(ValueError, match="metric"):
            paired_bootstrap(base, cand)

    def test_segment_scores_refused_for_corpus_metrics(self):
        base = SegmentScores(system="b", metric=MetricId.BLEU, lp=None, values=(80.0,) * 4)
        with pytest.raises(ValueError, match="sufficient"):
            paired_bootstrap(base, base)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatched"):
            paired_bootstrap(np.ones(5), np.ones(6))

    def test_bleu_resampling_recomputes_corpus_score(self):
        rng = random.Random(8)
        vocab = ["aa", "bb", "cc", "dd"]
        refs = [" ".join(rng.choice(vocab) for _ in range(5)) for _ in range(30)]
        base_hyps = [" ".join(rng.choice(vocab) for _ in range(5)) for _ in range(30)]
        cand_hyps = [r if i % 2 else h for i, (r, h) in enumerate(zip(refs, base_hyps))]
        base = bleu_sufficient_stats(base_hyps, refs)
        cand = bleu_sufficient_stats(cand_hyps, refs)
        result = paired_bootstrap(base, cand, BootstrapConfig(seed=4))
        assert result.delta == pytest.approx(
            bleu(cand_hyps, refs).value - bleu(base_hyps, refs).value, abs=1e-9
        )
        # resampled deltas come from corpus recomputation, not score means
        assert result.ci_lo <= result.delta <= result.ci_hi

    def test_ter_resampling(self):
        refs = ["a b c d", "e f g h", "i j k l"]
        base_hyps = ["a b c d", "e f h g", "i j k l"]
        cand_hyps = ["a b c d", "e f g h", "i j k l"]
        base = ter_sufficient_stats(base_hyps, refs)
        cand = ter_sufficient_stats(cand_hyps, refs)
        result = paired_bootstrap(base, cand, BootstrapConfig(seed=10))
        assert result.delta == pytest.approx(
            ter(cand_hyps, refs).value - ter(base_hyps, refs).value, abs=1e-9
        )
        assert result.delta < 0  # candidate fixed an error; TER drops

    def test_inverted_ci_rejected(self):
        with pytest.raises(ValueError):
            SignificanceResult(delta=0.0, ci_lo=1.0, ci_hi=-1.0, significant=False)


class TestSpearman:
    def test_self_correlation(self):
        x = [3.0, 1.0, 4.0, 1.5, 5.0]
        assert spearman_rho(x, x) == pytest.approx(1.0, abs=1e-12)

    def test_reversed_distinct(self):
        x = [1.0, 2.0, 3.0, 4.0]
        assert spearman_rho(x, list(reversed(x))) == pytest.approx(-1.0, abs=1e-12)

    def test_published_tied_case(self):
        # the QE column is distinct, the second column carries one tie
        rho = spearman_rho(column("lb-fr", "luxembedder_qe"), column("lb-fr", "bertscore"))
        assert rho == pytest.approx(0.9910, abs=5e-4)

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            spearman_rho([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(st.floats(min_value=-100, max_value=100), min_size=3, max_size=12).filter(
            lambda v: len(set(v)) > 1
        ),
        st.lists(st.floats(min_value=-100, max_value=100), min_size=3, max_size=12).filter(
            lambda v: len(set(v)) > 1
        ),
    )
    def test_matches_oracle_and_scipy(self, x, y):
        n = min(len(x), len(y))
        x, y = x[:n], y[:n]
        if len(set(x)) == 1 or len(set(y)) == 1 or n < 3:
            return
        got = spearman_rho(x, y)
        assert got == pytest.approx(spearman_oracle(x, y), abs=1e-9)
        assert got == pytest.approx(scipy.stats.spearmanr(x, y).statistic, abs=1e-9)
        assert -1.0 <= got <= 1.0

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(st.floats(min_value=-50, max_value=50), min_size=3, max_size=10).filter(
            lambda v: len(set(v)) > 1
        )
    )
    def test_antisymmetry_under_negation(self, x):
        rng = random.Random(0)
        y = [rng.uniform(-10, 10) for _ in x]
        if len(set(y)) == 1:
            return
        assert spearman_rho(x, [-v for v in y]) == pytest.approx(-spearman_rho(x, y), abs=1e-9)
        assert kendall_tau_b(x, [-v for v in y]) == pytest.approx(-kendall_tau_b(x, y), abs=1e-9)


class TestKendall:
    def test_self_correlation_distinct(self):
        x = [10.0, 5.0, 7.5, 1.0]
        assert kendall_tau_b(x, x) == pytest.approx(1.0, abs=1e-12)

    def test_published_tied_case(self):
        # C=20, D=0, one tie in the second column among 21 pairs:
        # 20 / sqrt(21 * 20)
        tau = kendall_tau_b(column("lb-fr", "luxembedder_qe"), column("lb-fr", "bertscore"))
        assert tau == pytest.approx(20.0 / math.sqrt(21.0 * 20.0), abs=1e-12)
        assert tau == pytest.approx(0.9759, abs=5e-4)

    def test_four_elements_with_tie_pinned_by_enumeration(self):
        x = [1.0, 2.0, 3.0, 4.0]
        y = [1.0, 2.0, 2.0, 3.0]
        assert kendall_tau_b(x, y) == pytest.approx(tau_b_oracle(x, y), abs=1e-12)
        # C=5, D=0, one y-tie: 5/sqrt(6*5)
        assert kendall_tau_b(x, y) == pytest.approx(5.0 / math.sqrt(30.0), abs=1e-12)

    def test_all_tied_rejected(self):
        with pytest.raises(ValueError):
            kendall_tau_b([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.tuples(st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=6)),
            min_size=3,
            max_size=10,
        )
    )
    def test_matches_oracle_and_scipy(self, pairs):
        x = [float(a) for a, _ in pairs]
        y = [float(b) for _, b in pairs]
        if len(set(x)) == 1 or len(set(y)) == 1:
            return
        got = kendall_tau_b(x, y)
        assert got == pytest.approx(tau_b_oracle(x, y), abs=1e-12)
        assert got == pytest.approx(scipy.stats.kendalltau(x, y).statistic, abs=1e-9)
        assert -1.0 <= got <= 1.0


class TestCorrelationPvalue:
    def test_perfectly_concordant_n7(self):
        x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]
        y = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0]
        # only the identity ordering and the full reversal reach |tau| = 1
        assert correlation_pvalue(x, y, "tau_b") == pytest.approx(2.0 / 5040.0, abs=1e-12)
        assert correlation_pvalue(x, y, "rho") == pytest.approx(2.0 / 5040.0, abs=1e-12)

    def test_n3_identity(self):
        x = [1.0, 2.0, 3.0]
        assert correlation_pvalue(x, x, "tau_b") == pytest.approx(2.0 / 6.0, abs=1e-12)

    def test_exhaustive_scan_matches_bruteforce(self):
        x = [3.0, 1.0, 2.0, 5.0, 4.0]
        y = [2.0, 2.0, 1.0, 4.0, 3.0]
        obs = abs(kendall_tau_b(x, y))
        hits = sum(
            1
            for perm in itertools.permutations(y)
            if abs(tau_b_oracle(x, list(perm))) >= obs - 1e-12
        )
        assert correlation_pvalue(x, y, "tau_b") == pytest.approx(hits / 120.0, abs=1e-12)

    def test_random_vectors_in_range(self):
        rng = random.Random(1)
        x = [rng.random() for _ in range(7)]
        y = [rng.random() for _ in range(7)]
        for stat in ("rho", "tau_b"):
            p = correlation_pvalue(x, y, stat)
            assert 0.0 <= p <= 1.0

    def test_monte_carlo_path_is_seeded(self):
        rng = random.Random(2)
        x = [rng.random() for _ in range(12)]
        y = [rng.random() for _ in range(12)]
        a = correlation_pvalue(x, y, "rho", seed=5, n_mc=2000)
        b = correlation_pvalue(x, y, "rho", seed=5, n_mc=2000)
        c = correlation_pvalue(x, y, "rho", seed=6, n_mc=2000)
        assert a == b
        assert 0.0 <= c <= 1.0


class TestCorrelationMatrix:
    def test_all_published_cells(self, fixture_records):
        for lp, expected in CORRELATIONS.items():
            matrix = system_correlation_matrix(fixture_records, lp)
            for metric_name, (rho, tau) in expected.items():
                res = matrix[MetricId.parse(metric_name)]
                assert res.rho == pytest.approx(rho, abs=5e-4), (lp, metric_name)
                assert res.tau == pytest.approx(tau, abs=5e-4), (lp, metric_name)

    def test_ter_negation_gives_perfect_fr_agreement(self, fixture_records):
        matrix = system_correlation_matrix(fixture_records, "lb-fr")
        assert matrix[MetricId.TER].rho == pytest.approx(1.0, abs=1e-12)
        assert matrix[MetricId.TER].tau == pytest.approx(1.0, abs=1e-12)

    def test_orientation_oracle(self):
        # rank both columns by quality: for TER lower is better, so the
        # negated column must produce the positive correlation
        qe = column("lb-fr", "luxembedder_qe")
        raw_ter = column("lb-fr", "ter")
        assert spearman_rho(qe, [-v for v in raw_ter]) == pytest.approx(1.0, abs=1e-12)
        assert spearman_rho(qe, raw_ter) == pytest.approx(-1.0, abs=1e-12)

    def test_missing_column_rejected(self, fixture_records):
        truncated = [r for r in fixture_records if r.metric is not MetricId.BLEU]
        with pytest.raises(CorpusFormatError, match="bleu"):
            system_correlation_matrix(truncated, "lb-fr")

    def test_row_order_matches_display_order(self, fixture_records):
        matrix = system_correlation_matrix(fixture_records, "lb-de")
        assert [m.value for m in matrix] == ["bertscore", "bleurt20", "xcomet_xl", "bleu", "chrf2", "ter"]
