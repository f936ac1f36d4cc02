"""Bayesian weight of evidence for cheating given a win streak in rated play."""

from ._validation import CromwellError, EvidenceInputError, NumericalError
from .bayes import (
    DEFAULT_PRIOR,
    EvidenceReport,
    PriorSpec,
    SweepRow,
    end_to_end_case,
    history_case,
    posterior,
    sensitivity_sweep,
)
from .elo import (
    EloParams,
    apply_time_forfeit_uplift,
    implied_performance,
    rating_delta,
    win_odds,
    win_probability,
)
from .ingest import (
    DrawPolicy,
    GameHistory,
    GameRecord,
    Result,
    find_streaks,
    load_history,
    per_game_probabilities,
    serialize_history,
)
from .likelihood import (
    PerGame,
    StreakObservation,
    TiltModel,
    Uniform,
    binomial_streak_prob,
    binomial_tail,
    jensen_ratio,
    longest_run_prob,
    poisson_binomial_pmf,
    poisson_binomial_prob,
)
from .simulation import (
    MCEstimate,
    history_statistics,
    jensen_experiment,
    scan_streak_prob_mc,
    simulate_history,
)

__version__ = "0.1.0"


def bundled_history_path():
    """Path of the synthetic 46-game example history shipped with the package."""
    from importlib.resources import files

    return files(__name__) / "data" / "synthetic_46.csv"
