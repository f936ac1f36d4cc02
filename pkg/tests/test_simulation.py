import numpy as np
import pytest
from scipy.stats import binom

from streak_evidence import (
    EvidenceInputError,
    PerGame,
    TiltModel,
    Uniform,
    history_statistics,
    jensen_experiment,
    longest_run_prob,
    scan_streak_prob_mc,
    simulate_history,
)
from streak_evidence.simulation import CHUNK_SIZE, longest_run_prob_mc

Q = 0.8916


class TestSimulateHistory:
    def test_empty(self):
        assert simulate_history(0, Uniform(0.5), seed=1).size == 0

    def test_reproducible(self):
        a = simulate_history(500, TiltModel(0.6, 0.3), seed=11)
        b = simulate_history(500, TiltModel(0.6, 0.3), seed=11)
        c = simulate_history(500, TiltModel(0.6, 0.3), seed=12)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_zero_tilt_matches_uniform(self):
        tilt = simulate_history(100_000, TiltModel(Q, 0.0), seed=5)
        uni = simulate_history(100_000, Uniform(Q), seed=5)
        assert tilt.mean() == pytest.approx(Q, abs=0.003)
        # same uniforms, same threshold: identical paths
        assert np.array_equal(tilt, uni)

    def test_tilt_creates_positive_dependence(self):
        wins = simulate_history(100_000, TiltModel(0.7, 0.4), seed=9)
        prev, cur = wins[:-1], wins[1:]
        after_win = cur[prev].mean()
        after_loss = cur[~prev].mean()
        assert after_win > after_loss
        assert after_win == pytest.approx(0.7 + 0.4 * 0.3, abs=0.01)
        assert after_loss == pytest.approx(0.7, abs=0.01)

    def test_per_game_length_checked(self):
        with pytest.raises(EvidenceInputError):
            simulate_history(3, PerGame([0.5, 0.5]), seed=0)


class TestScan:
    def test_full_window_matches_binomial_tail(self):
        est = scan_streak_prob_mc(46, Uniform(Q), 45, 46, trials=20_000, seed=3)
        assert est.within(binom.sf(44, 46, Q))

    def test_zero_requirement(self):
        est = scan_streak_prob_mc(10, Uniform(0.2), 0, 4, trials=5, seed=0)
        assert est.estimate == 1.0 and est.std_error == 0.0

    def test_small_enumerated_case(self):
        est = scan_streak_prob_mc(3, Uniform(0.5), 2, 2, trials=20_000, seed=4)
        assert est.within(0.375)

    def test_agrees_with_exact_longest_run(self):
        exact = longest_run_prob(3500, 45, Q)
        est = longest_run_prob_mc(3500, 45, Uniform(Q), trials=4000, seed=21, workers=4)
        assert est.within(exact)

    def test_per_game_model(self):
        qs = np.linspace(0.6, 0.95, 30)
        from streak_evidence import poisson_binomial_pmf

        exact = poisson_binomial_pmf(qs)[25:].sum()
        est = scan_streak_prob_mc(30, PerGame(qs), 25, 30, trials=20_000, seed=8)
        assert est.within(exact)

    @pytest.mark.parametrize("n,req,window", [(5, 2, 6), (5, 4, 3), (0, 1, 1)])
    def test_infeasible(self, n, req, window):
        with pytest.raises(EvidenceInputError):
            scan_streak_prob_mc(n, Uniform(0.5), req, window, trials=10, seed=0)

    @pytest.mark.parametrize("workers", [2, 3, 8])
    def test_thread_count_independent(self, workers):
        trials = 3 * CHUNK_SIZE + 17
        one = scan_streak_prob_mc(400, TiltModel(0.8, 0.2), 12, 15, trials, seed=99, workers=1)
        many = scan_streak_prob_mc(400, TiltModel(0.8, 0.2), 12, 15, trials, seed=99, workers=workers)
        assert one == many


class TestJensenExperiment:
    def test_deterministic_and_in_range(self):
        a = jensen_experiment(0.85, 0.9, 46, 10_000, seed=7)
        b = jensen_experiment(0.85, 0.9, 46, 10_000, seed=7, workers=6)
        assert a == b
        assert 0.992 <= a.estimate <= 0.998

    def test_degenerate_interval(self):
        assert jensen_experiment(0.5, 0.5, 10, 100, seed=1).estimate == pytest.approx(1.0)

    def test_bad_bounds(self):
        with pytest.raises(EvidenceInputError):
            jensen_experiment(0.9, 0.85, 46, 10, seed=1)
        with pytest.raises(EvidenceInputError):
            jensen_experiment(0.85, 0.9, 46, 0, seed=1)


class TestHistoryStatistics:
    def test_uniform(self):
        st = history_statistics(200, Uniform(0.6), reps=2000, seed=2)
        assert st.win_rate == pytest.approx(0.6, abs=4 * st.win_rate_se)
        assert st.p_win_after_win == pytest.approx(st.p_win_after_loss, abs=0.01)
        assert st.max_longest_run >= st.mean_longest_run

    def test_tilt_zero_indistinguishable_from_uniform(self):
        a = history_statistics(46, Uniform(Q), reps=5000, seed=7)
        b = history_statistics(46, TiltModel(Q, 0.0), reps=5000, seed=7)
        assert abs(a.win_rate - b.win_rate) <= 3 * max(a.win_rate_se, 1e-12)

    def test_workers(self):
        a = history_statistics(50, TiltModel(0.7, 0.3), reps=1500, seed=4)
        b = history_statistics(50, TiltModel(0.7, 0.3), reps=1500, seed=4, workers=4)
        assert a == b
