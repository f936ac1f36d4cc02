import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from streak_evidence import (
    DEFAULT_PRIOR,
    CromwellError,
    EvidenceInputError,
    EvidenceReport,
    PriorSpec,
    end_to_end_case,
    posterior,
    sensitivity_sweep,
    win_probability,
)
from streak_evidence.bayes import n_range

ns = st.floats(min_value=1e-3, max_value=1e9)
ps = st.floats(min_value=1e-300, max_value=1.0)


class TestPosterior:
    def test_one_cheater_in_ten_thousand(self):
        r = posterior(PriorSpec(10_000), 0.0286)
        assert r.posterior_odds_innocence == pytest.approx(286)
        assert r.p_guilty == pytest.approx(0.0035, abs=0.0005)
        assert r.p_innocent == pytest.approx(0.9965, abs=0.0005)

    def test_n500(self):
        r = posterior(PriorSpec(500), 0.0285)
        assert r.p_guilty == pytest.approx(0.065, abs=0.001)
        assert r.p_innocent == pytest.approx(0.935, abs=0.001)

    def test_uninformative_evidence(self):
        r = posterior(PriorSpec(37.0), 1.0)
        assert r.bayes_factor == 1.0
        assert r.posterior_odds_innocence == 37.0

    def test_imperfect_cheater(self):
        r = posterior(PriorSpec(100, likelihood_under_guilt=0.5), 0.02)
        assert r.bayes_factor == pytest.approx(0.04)
        assert r.posterior_odds_innocence == pytest.approx(4.0)

    @pytest.mark.parametrize("p", [0.0, -1e-3])
    def test_zero_likelihood_rejected(self, p):
        with pytest.raises(CromwellError, match="Cromwell"):
            posterior(DEFAULT_PRIOR, p)

    def test_likelihood_above_one(self):
        with pytest.raises(EvidenceInputError):
            posterior(DEFAULT_PRIOR, 1.5)

    @pytest.mark.parametrize("n", [0, -5, float("nan"), float("inf")])
    def test_bad_prior_rejected(self, n):
        with pytest.raises(EvidenceInputError):
            PriorSpec(n)

    @pytest.mark.parametrize("lg", [0.0, 1.1])
    def test_bad_guilt_likelihood(self, lg):
        with pytest.raises(CromwellError):
            PriorSpec(10, lg)

    @given(ns, ps)
    def test_probabilities_sum_to_one(self, n, p):
        r = posterior(PriorSpec(n), p)
        assert r.p_guilty + r.p_innocent == pytest.approx(1.0, abs=1e-12)

    @given(ns, ps)
    def test_odds_match_probability_ratio(self, n, p):
        r = posterior(PriorSpec(n), p)
        assume(r.p_guilty > 0)
        assert r.p_innocent / r.p_guilty == pytest.approx(r.posterior_odds_innocence, rel=1e-9)

    @given(ns, ns, st.floats(min_value=1e-6, max_value=1.0))
    def test_monotone_in_n(self, n1, n2, p):
        lo, hi = sorted((n1, n2))
        assert posterior(PriorSpec(lo), p).p_innocent <= posterior(PriorSpec(hi), p).p_innocent

    @given(ns, ps, ps)
    def test_monotone_in_p(self, n, p1, p2):
        lo, hi = sorted((p1, p2))
        a, b = posterior(PriorSpec(n), lo), posterior(PriorSpec(n), hi)
        assert a.p_innocent <= b.p_innocent
        assert a.p_guilty >= b.p_guilty

    def test_likelihood_and_posterior_are_distinct(self):
        r = end_to_end_case(366, 46, 45, DEFAULT_PRIOR)
        assert r.p_innocent / r.likelihood_innocent > 30

    def test_json_round_trip(self):
        r = end_to_end_case(366, 46, 45)
        assert EvidenceReport.from_dict(r.to_dict()) == r
        with pytest.raises(EvidenceInputError):
            EvidenceReport.from_dict({**r.to_dict(), "extra": 1})


class TestSweep:
    def test_default_grid_endpoints(self):
        rows = sensitivity_sweep(0.0286, n_range(100, 2000, 100))
        assert len(rows) == 20
        assert rows[0].p_innocent == pytest.approx(2.86 / 3.86, abs=1e-12)
        assert rows[0].p_innocent == pytest.approx(0.7409, abs=0.0005)
        assert rows[-1].p_innocent == pytest.approx(0.9828, abs=0.0005)
        assert [r.n for r in rows][4] == 500

    def test_strictly_increasing(self):
        rows = sensitivity_sweep(0.0286, n_range(100, 2000, 100))
        vals = [r.p_innocent for r in rows]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_single_point(self):
        (row,) = sensitivity_sweep(0.0286, [10_000])
        assert row.p_innocent == posterior(PriorSpec(10_000), 0.0286).p_innocent

    def test_uninformative(self):
        for row in sensitivity_sweep(1.0, [1, 10, 250]):
            assert row.p_innocent == pytest.approx(row.n / (1 + row.n), abs=1e-15)

    def test_empty_and_invalid(self):
        with pytest.raises(EvidenceInputError):
            sensitivity_sweep(0.1, [])
        with pytest.raises(EvidenceInputError):
            sensitivity_sweep(0.1, [10, -1])
        with pytest.raises(EvidenceInputError):
            n_range(10, 5, 1)
        with pytest.raises(EvidenceInputError):
            n_range(1, 5, 0)


class TestEndToEnd:
    def test_headline(self):
        r = end_to_end_case(366, 46, 45, PriorSpec(10_000))
        assert r.win_odds == pytest.approx(8.23, abs=0.01)
        assert r.win_probability == pytest.approx(0.8916, abs=0.0005)
        assert r.likelihood_innocent == pytest.approx(0.0286, abs=0.0002)
        assert r.p_innocent == pytest.approx(0.9965, abs=0.0005)

    def test_unit_case(self):
        r = end_to_end_case(0, 1, 1, PriorSpec(1))
        assert r.likelihood_innocent == 0.5
        assert r.posterior_odds_innocence == 0.5
        assert r.p_guilty == pytest.approx(2 / 3, abs=1e-15)

    def test_all_wins(self):
        r = end_to_end_case(366, 46, 46)
        q = win_probability(366)
        assert r.likelihood_innocent == pytest.approx(q**46, rel=1e-12)
        assert r.likelihood_innocent == pytest.approx(0.00510, abs=0.00001)
        assert r.p_innocent == pytest.approx(0.9808, abs=0.0001)

    def test_composition(self):
        q = win_probability(250)
        from streak_evidence import StreakObservation, Uniform, binomial_streak_prob

        p = binomial_streak_prob(StreakObservation(30, 27, Uniform(q)))
        expected = posterior(PriorSpec(700), p)
        got = end_to_end_case(250, 30, 27, PriorSpec(700))
        assert got.likelihood_innocent == expected.likelihood_innocent
        assert got.p_innocent == expected.p_innocent

    def test_uplift_weakens_evidence_of_cheating(self):
        base = end_to_end_case(366, 46, 46)
        up = end_to_end_case(366, 46, 46, uplift=0.2)
        assert up.win_probability > base.win_probability
        assert up.p_innocent > base.p_innocent
