"""Exact probabilities of win streaks under the no-cheating hypothesis.

Draws count as no-wins throughout, so every game is a Bernoulli trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ._validation import (
    EvidenceInputError,
    check_finite,
    check_int,
    check_open_probability,
    check_probability_vector,
)


@dataclass(frozen=True)
class Uniform:
    """Every game won independently with the same probability ``q``."""

    q: float

    def __post_init__(self):
        check_open_probability(self.q, "q")


@dataclass(frozen=True, eq=False)
class PerGame:
    """Game ``i`` won independently with probability ``qs[i]``."""

    qs: np.ndarray

    def __post_init__(self):
        arr = check_probability_vector(self.qs)
        arr.setflags(write=False)
        object.__setattr__(self, "qs", arr)

    def __len__(self):
        return self.qs.size


@dataclass(frozen=True)
class TiltModel:
    """First-order Markov dependence between consecutive results.

    After a win the beaten opponent is on tilt: the opponent-side win
    probability ``1 - q_base`` is scaled by ``1 - loss_penalty``, so the
    streak player's next-game probability rises to
    ``q_base + loss_penalty * (1 - q_base)``. After a no-win the
    probability falls back to ``q_base``. ``loss_penalty=0`` recovers
    :class:`Uniform`.
    """

    q_base: float
    loss_penalty: float = 0.0

    def __post_init__(self):
        check_open_probability(self.q_base, "q_base")
        lp = check_finite(self.loss_penalty, "loss_penalty")
        if not 0.0 <= lp < 1.0:
            raise EvidenceInputError(f"loss_penalty must lie in [0, 1), got {lp}")

    @property
    def q_after_win(self) -> float:
        q = self.q_base + self.loss_penalty * (1.0 - self.q_base)
        return min(q, math.nextafter(1.0, 0.0))


WinModel = Union[Uniform, PerGame]


@dataclass(frozen=True)
class StreakObservation:
    """``k`` wins observed in ``m`` games under a given win model."""

    m: int
    k: int
    win_model: WinModel

    def __post_init__(self):
        m = check_int(self.m, "m", minimum=1)
        k = check_int(self.k, "k", minimum=0)
        if k > m:
            raise EvidenceInputError(f"wins k={k} exceeds games m={m}")
        if isinstance(self.win_model, PerGame):
            if len(self.win_model) != m:
                raise EvidenceInputError(
                    f"per-game probability vector has length {len(self.win_model)}, expected m={m}"
                )
        elif not isinstance(self.win_model, Uniform):
            raise EvidenceInputError(
                f"win_model must be Uniform or PerGame, got {type(self.win_model).__name__}"
            )


def _log_binomial_pmf(m: int, k: int, q: float) -> float:
    log_choose = math.lgamma(m + 1) - math.lgamma(k + 1) - math.lgamma(m - k + 1)
    return log_choose + k * math.log(q) + (m - k) * math.log1p(-q)


def binomial_streak_prob(obs: StreakObservation) -> float:
    """P(exactly ``k`` wins in ``m`` games) with a common win probability."""
    if not isinstance(obs.win_model, Uniform):
        raise EvidenceInputError(
            "binomial_streak_prob needs a Uniform win model; "
            "use poisson_binomial_prob for per-game probabilities"
        )
    return math.exp(_log_binomial_pmf(obs.m, obs.k, obs.win_model.q))


def binomial_pmf(m: int, q: float) -> np.ndarray:
    """Full binomial pmf over ``k = 0..m``."""
    m = check_int(m, "m", minimum=0)
    q = check_open_probability(q, "q")
    return np.array([math.exp(_log_binomial_pmf(m, k, q)) for k in range(m + 1)])


def binomial_tail(m: int, k: int, q: float) -> float:
    """P(at least ``k`` wins in ``m`` games)."""
    if k <= 0:
        return 1.0
    if k > m:
        return 0.0
    return float(math.fsum(binomial_pmf(m, q)[k:]))


def poisson_binomial_pmf(qs) -> np.ndarray:
    """Distribution of the win count for independent games with win probabilities ``qs``.

    Built by folding in one game at a time, O(m^2). Every update is a
    convex combination of nonnegative terms, so no cancellation occurs.
    """
    qs = check_probability_vector(qs)
    pmf = np.zeros(qs.size + 1)
    pmf[0] = 1.0
    for i, q in enumerate(qs, start=1):
        pmf[1 : i + 1] = pmf[1 : i + 1] * (1.0 - q) + pmf[:i] * q
        pmf[0] *= 1.0 - q
    return pmf


def poisson_binomial_prob(obs: StreakObservation, k: int | None = None) -> float:
    """P(exactly ``k`` wins) with game-specific win probabilities.

    ``k`` defaults to the observation's own win count.
    """
    if not isinstance(obs.win_model, PerGame):
        raise EvidenceInputError("poisson_binomial_prob needs a PerGame win model")
    k = obs.k if k is None else check_int(k, "k", minimum=0)
    if k > obs.m:
        raise EvidenceInputError(f"k={k} exceeds games m={obs.m}")
    return float(poisson_binomial_pmf(obs.win_model.qs)[k])


def streak_prob(obs: StreakObservation) -> float:
    """Likelihood of the observation, dispatching on its win model."""
    if isinstance(obs.win_model, PerGame):
        return poisson_binomial_prob(obs)
    return binomial_streak_prob(obs)


def jensen_ratio(qs) -> float:
    """``prod(qs) / mean(qs) ** m``.

    Measures how much replacing per-game win probabilities by their mean
    overstates the chance of winning every game. Never exceeds 1 and equals
    1 only for a constant vector.
    """
    qs = check_probability_vector(qs)
    if np.all(qs == qs[0]):
        return 1.0
    log_ratio = np.sum(np.log(qs)) - qs.size * math.log(np.mean(qs))
    return min(math.exp(log_ratio), 1.0)


def longest_run_prob(n: int, run: int, q: float) -> float:
    """P(some run of at least ``run`` consecutive wins in ``n`` i.i.d. games).

    Tracks the distribution of the current trailing run length (capped at
    ``run - 1``) and accumulates the mass that reaches ``run``. Returns 0
    when ``run > n``.
    """
    n = check_int(n, "n", minimum=0)
    run = check_int(run, "run", minimum=1)
    q = check_open_probability(q, "q")
    if run > n:
        return 0.0
    state = np.zeros(run)
    state[0] = 1.0
    hit = 0.0
    for _ in range(n):
        hit += q * state[-1]
        nxt = np.empty_like(state)
        nxt[0] = (1.0 - q) * state.sum()
        nxt[1:] = q * state[:-1]
        state = nxt
    return float(min(hit, 1.0))
