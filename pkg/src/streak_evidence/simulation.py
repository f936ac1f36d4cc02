"""Seeded Monte Carlo for history-wide streak questions.

Trials are split into fixed-size chunks. Chunk ``i`` draws from its own
stream, ``SeedSequence(seed, spawn_key=(i,))``, and chunk results are
combined in chunk order, so estimates are bit-identical for any number of
worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ._validation import EvidenceInputError, check_int, check_open_probability
from .likelihood import PerGame, TiltModel, Uniform

CHUNK_SIZE = 512

HistoryModel = Union[Uniform, PerGame, TiltModel]


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo mean with its standard error."""

    estimate: float
    std_error: float
    trials: int

    def within(self, value: float, n_se: float = 3.0) -> bool:
        return abs(self.estimate - value) <= n_se * self.std_error


def _rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


def _chunk_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, CHUNK_SIZE)
    return [CHUNK_SIZE] * full + ([rest] if rest else [])


def _map_chunks(fn: Callable[[int, int], np.ndarray], trials: int, workers: int) -> np.ndarray:
    """Run ``fn(chunk_index, size)`` over all chunks and concatenate in order."""
    sizes = _chunk_sizes(trials)
    if workers <= 1 or len(sizes) == 1:
        parts = [fn(i, s) for i, s in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(fn, range(len(sizes)), sizes))
    return np.concatenate(parts)


def _check_model(n: int, model: HistoryModel) -> None:
    if isinstance(model, PerGame):
        if len(model) != n:
            raise EvidenceInputError(
                f"per-game model has {len(model)} probabilities but n={n} games were requested"
            )
    elif not isinstance(model, (Uniform, TiltModel)):
        raise EvidenceInputError(
            f"model must be Uniform, PerGame or TiltModel, got {type(model).__name__}"
        )


def _simulate_block(rng: np.random.Generator, trials: int, n: int, model: HistoryModel) -> np.ndarray:
    """Boolean win matrix of shape ``(trials, n)``."""
    u = rng.random((trials, n))
    if isinstance(model, Uniform):
        return u < model.q
    if isinstance(model, PerGame):
        return u < model.qs[np.newaxis, :]
    wins = np.empty((trials, n), dtype=bool)
    if n == 0:
        return wins
    q_hi = model.q_after_win
    wins[:, 0] = u[:, 0] < model.q_base
    for t in range(1, n):
        q = np.where(wins[:, t - 1], q_hi, model.q_base)
        wins[:, t] = u[:, t] < q
    return wins


def simulate_history(n: int, model: HistoryModel, seed: int) -> np.ndarray:
    """One length-``n`` win/no-win sequence (``True`` = win), reproducible per seed."""
    n = check_int(n, "n", minimum=0)
    seed = check_int(seed, "seed", minimum=0)
    _check_model(n, model)
    return _simulate_block(_rng(seed, 0), 1, n, model)[0]


def _max_window_wins(wins: np.ndarray, window: int) -> np.ndarray:
    csum = np.zeros((wins.shape[0], wins.shape[1] + 1), dtype=np.int32)
    np.cumsum(wins, axis=1, out=csum[:, 1:])
    return (csum[:, window:] - csum[:, :-window]).max(axis=1)


def _proportion(hits: np.ndarray) -> MCEstimate:
    trials = hits.size
    p = float(np.count_nonzero(hits)) / trials
    return MCEstimate(p, math.sqrt(p * (1.0 - p) / trials), trials)


def scan_streak_prob_mc(
    n: int,
    model: HistoryModel,
    wins_required: int,
    window: int,
    trials: int,
    seed: int,
    workers: int = 1,
) -> MCEstimate:
    """Estimate P(some ``window`` consecutive games out of ``n`` hold >= ``wins_required`` wins).

    This is the chance that a streak at least as striking as a selected
    window turns up somewhere in a full history, as opposed to the
    likelihood of that particular window.
    """
    n = check_int(n, "n", minimum=1)
    window = check_int(window, "window", minimum=1)
    wins_required = check_int(wins_required, "wins_required", minimum=0)
    trials = check_int(trials, "trials", minimum=1)
    seed = check_int(seed, "seed", minimum=0)
    if window > n:
        raise EvidenceInputError(f"window={window} exceeds history length n={n}")
    if wins_required > window:
        raise EvidenceInputError(f"wins_required={wins_required} exceeds window={window}")
    _check_model(n, model)
    if wins_required == 0:
        return MCEstimate(1.0, 0.0, trials)

    def chunk(i: int, size: int) -> np.ndarray:
        wins = _simulate_block(_rng(seed, i), size, n, model)
        return _max_window_wins(wins, window) >= wins_required

    return _proportion(_map_chunks(chunk, trials, workers))


def longest_run_prob_mc(
    n: int, run: int, model: HistoryModel, trials: int, seed: int, workers: int = 1
) -> MCEstimate:
    """Monte Carlo P(longest winning run >= ``run``); handles non-i.i.d. models."""
    return scan_streak_prob_mc(n, model, run, run, trials, seed, workers)


def jensen_experiment(
    low: float, high: float, games: int, reps: int, seed: int, workers: int = 1
) -> MCEstimate:
    """Mean Jensen ratio when each game's win probability is drawn from U(low, high)."""
    low = check_open_probability(low, "low")
    high = check_open_probability(high, "high")
    if not low <= high:
        raise EvidenceInputError(f"need low <= high, got low={low}, high={high}")
    games = check_int(games, "games", minimum=1)
    reps = check_int(reps, "reps", minimum=1)
    seed = check_int(seed, "seed", minimum=0)

    def chunk(i: int, size: int) -> np.ndarray:
        qs = _rng(seed, i).uniform(low, high, size=(size, games))
        log_ratio = np.log(qs).sum(axis=1) - games * np.log(qs.mean(axis=1))
        return np.minimum(np.exp(log_ratio), 1.0)

    ratios = _map_chunks(chunk, reps, workers)
    se = float(ratios.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    return MCEstimate(float(ratios.mean()), se, reps)


@dataclass(frozen=True)
class HistoryStats:
    """Summary of simulated histories."""

    reps: int
    games: int
    win_rate: float
    win_rate_se: float
    mean_longest_run: float
    max_longest_run: int
    p_win_after_win: float
    p_win_after_loss: float


def _longest_runs(wins: np.ndarray) -> np.ndarray:
    current = np.zeros(wins.shape[0], dtype=np.int64)
    best = np.zeros_like(current)
    for t in range(wins.shape[1]):
        current = np.where(wins[:, t], current + 1, 0)
        np.maximum(best, current, out=best)
    return best


def history_statistics(
    games: int, model: HistoryModel, reps: int, seed: int, workers: int = 1
) -> HistoryStats:
    """Empirical win rate, longest runs and lag-one conditional win rates."""
    games = check_int(games, "games", minimum=2)
    reps = check_int(reps, "reps", minimum=1)
    seed = check_int(seed, "seed", minimum=0)
    _check_model(games, model)

    # per chunk: wins, longest run per row, (ww, w_prev, lw, l_prev) counts
    def chunk(i: int, size: int) -> np.ndarray:
        wins = _simulate_block(_rng(seed, i), size, games, model)
        prev, cur = wins[:, :-1], wins[:, 1:]
        out = np.empty((size, 6), dtype=np.int64)
        out[:, 0] = wins.sum(axis=1)
        out[:, 1] = _longest_runs(wins)
        out[:, 2] = (prev & cur).sum(axis=1)
        out[:, 3] = prev.sum(axis=1)
        out[:, 4] = (~prev & cur).sum(axis=1)
        out[:, 5] = (~prev).sum(axis=1)
        return out

    rows = _map_chunks(chunk, reps, workers)
    per_rep_rate = rows[:, 0] / games
    se = float(per_rep_rate.std(ddof=1) / math.sqrt(reps)) if reps > 1 else 0.0
    totals = rows.sum(axis=0)
    return HistoryStats(
        reps=reps,
        games=games,
        win_rate=float(totals[0]) / (reps * games),
        win_rate_se=se,
        mean_longest_run=float(rows[:, 1].mean()),
        max_longest_run=int(rows[:, 1].max()),
        p_win_after_win=float(totals[2] / totals[3]) if totals[3] else math.nan,
        p_win_after_loss=float(totals[4] / totals[5]) if totals[5] else math.nan,
    )

