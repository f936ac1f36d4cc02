"""Posterior odds of innocence from prior odds and a streak likelihood.

Hypotheses are I (innocent) and G (cheating). With ``N`` innocent
players per cheater the prior odds P(I)/P(G) are ``N``; the Bayes factor
is P(E|I)/P(E|G); their product is the posterior odds P(I|E)/P(G|E).

The ratio P(I)/P(G) is sometimes labelled the "odds of guilt" in the
literature. It is named ``posterior_odds_innocence`` here because that is
what the arithmetic computes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Iterable

import numpy as np

from ._validation import CromwellError, EvidenceInputError, check_finite, check_int
from .elo import DEFAULT_PARAMS, EloParams, apply_time_forfeit_uplift, win_odds, win_probability
from .likelihood import (
    PerGame,
    StreakObservation,
    Uniform,
    binomial_streak_prob,
    poisson_binomial_prob,
)


@dataclass(frozen=True)
class PriorSpec:
    """Prior population odds and the likelihood of the evidence under guilt.

    ``likelihood_under_guilt=1`` says a cheater produces the streak for
    certain. Lower it to model cheaters who do not always win.
    """

    n_innocent_per_cheater: float
    likelihood_under_guilt: float = 1.0

    def __post_init__(self):
        n = check_finite(self.n_innocent_per_cheater, "n_innocent_per_cheater")
        if n <= 0:
            raise CromwellError(
                f"prior odds N must be > 0, got {n} (Cromwell's rule: a prior "
                "probability of guilt of 0 or 1 can never be updated)"
            )
        lg = check_finite(self.likelihood_under_guilt, "likelihood_under_guilt")
        if not 0.0 < lg <= 1.0:
            raise CromwellError(f"likelihood_under_guilt must lie in (0, 1], got {lg}")


# one cheater among ten thousand players
DEFAULT_PRIOR = PriorSpec(10_000)


@dataclass(frozen=True)
class EvidenceReport:
    """Everything needed to read off the weight of evidence.

    ``likelihood_innocent`` is P(E|I); ``p_innocent`` is P(I|E). Confusing
    the two is the prosecutor's fallacy. ``win_odds``, ``win_probability``
    and ``games``/``wins`` are filled in by :func:`end_to_end_case`.
    """

    likelihood_innocent: float
    bayes_factor: float
    posterior_odds_innocence: float
    p_guilty: float
    p_innocent: float
    n_innocent_per_cheater: float
    likelihood_under_guilt: float = 1.0
    win_odds: float | None = None
    win_probability: float | None = None
    games: int | None = None
    wins: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EvidenceReport":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise EvidenceInputError(f"unknown EvidenceReport fields: {sorted(unknown)}")
        return cls(**data)


def posterior(prior: PriorSpec, likelihood_innocent: float) -> EvidenceReport:
    """Combine prior odds with the likelihood of the streak under innocence."""
    p = check_finite(likelihood_innocent, "likelihood_innocent")
    if p <= 0.0:
        raise CromwellError(
            f"likelihood under innocence must be > 0, got {p} (Cromwell's rule: "
            "evidence impossible under innocence would make guilt certain)"
        )
    if p > 1.0:
        raise EvidenceInputError(f"likelihood under innocence must be <= 1, got {p}")
    bayes_factor = p / prior.likelihood_under_guilt
    odds = prior.n_innocent_per_cheater * bayes_factor
    p_guilty = 1.0 / (1.0 + odds)
    # odds/(1+odds) rather than 1-p_guilty keeps relative precision when odds is tiny
    p_innocent = odds / (1.0 + odds)
    return EvidenceReport(
        likelihood_innocent=p,
        bayes_factor=bayes_factor,
        posterior_odds_innocence=odds,
        p_guilty=p_guilty,
        p_innocent=p_innocent,
        n_innocent_per_cheater=prior.n_innocent_per_cheater,
        likelihood_under_guilt=prior.likelihood_under_guilt,
    )


@dataclass(frozen=True)
class SweepRow:
    n: float
    p_innocent: float


def sensitivity_sweep(
    p: float, n_grid: Iterable[float], likelihood_under_guilt: float = 1.0
) -> list[SweepRow]:
    """P(I|E) for each prior odds value in ``n_grid``."""
    grid = list(n_grid)
    if not grid:
        raise EvidenceInputError("n_grid must be nonempty")
    return [
        SweepRow(n, posterior(PriorSpec(n, likelihood_under_guilt), p).p_innocent) for n in grid
    ]


def n_range(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid ``start, start+step, ..., <= stop``."""
    start, stop, step = (check_finite(v, name) for v, name in
                         ((start, "n_from"), (stop, "n_to"), (step, "step")))
    if step <= 0:
        raise EvidenceInputError(f"step must be > 0, got {step}")
    if stop < start:
        raise EvidenceInputError(f"n_to={stop} is below n_from={start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def end_to_end_case(
    delta: float,
    m: int,
    k: int,
    prior: PriorSpec = DEFAULT_PRIOR,
    params: EloParams = DEFAULT_PARAMS,
    uplift: float = 0.0,
) -> EvidenceReport:
    """Rating gap -> single-game win probability -> binomial likelihood -> posterior."""
    m = check_int(m, "m", minimum=1)
    k = check_int(k, "k", minimum=0)
    w = win_odds(delta, params)
    q = apply_time_forfeit_uplift(win_probability(delta, params), uplift)
    p = binomial_streak_prob(StreakObservation(m, k, Uniform(q)))
    report = posterior(prior, p)
    return EvidenceReport(
        **{**report.to_dict(), "win_odds": w, "win_probability": q, "games": m, "wins": k}
    )


def history_case(
    history,
    prior: PriorSpec = DEFAULT_PRIOR,
    params: EloParams = DEFAULT_PARAMS,
    per_game: bool = False,
    uplift: float = 0.0,
) -> EvidenceReport:
    """Posterior for a loaded :class:`~streak_evidence.ingest.GameHistory`.

    With ``per_game`` the likelihood is the exact Poisson-binomial
    probability over each game's own win probability; otherwise every game
    gets the win probability of the mean rating gap.
    """
    from .ingest import per_game_probabilities

    mask = history.counted_mask()
    m, k = int(mask.sum()), history.wins
    if m == 0:
        raise EvidenceInputError("history has no counted games")
    qs = per_game_probabilities(history, params)[mask]
    if per_game:
        qs = np.array([apply_time_forfeit_uplift(q, uplift) for q in qs])
        p = poisson_binomial_prob(StreakObservation(m, k, PerGame(qs)))
        report = posterior(prior, p)
        mean_q = float(qs.mean())
        return EvidenceReport(**{**report.to_dict(), "win_odds": mean_q / (1.0 - mean_q),
                                 "win_probability": mean_q, "games": m, "wins": k})
    return end_to_end_case(mean_delta(history)[0], m, k, prior, params, uplift)


def mean_delta(history) -> tuple[float, int]:
    """Mean rating gap over the counted games, and the number of such games."""
    mask = history.counted_mask()
    deltas = []
    for rec, counted in zip(history.records, mask):
        if not counted:
            continue
        player = rec.player_rating if rec.player_rating is not None else history.default_player_rating
        if player is None:
            raise EvidenceInputError(
                f"game {rec.index} has no player rating and the history has no default")
        deltas.append(player - rec.opponent_rating)
    return math.fsum(deltas) / len(deltas), len(deltas)
