"""ELO rating differences as single-game win odds and probabilities.

A rating gap ``delta`` maps to win odds ``base ** (delta / scale)``; the
chess convention is ``base=10``, ``scale=400``, so a 400-point edge is
worth 10:1 odds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._validation import CromwellError, EvidenceInputError, NumericalError, check_finite


@dataclass(frozen=True)
class EloParams:
    """Base and scale of the rating-to-odds map."""

    base: float = 10.0
    scale: float = 400.0

    def __post_init__(self):
        base = check_finite(self.base, "base")
        scale = check_finite(self.scale, "scale")
        if base <= 1.0:
            raise EvidenceInputError(f"ELO base must be > 1, got {base}")
        if scale <= 0.0:
            raise EvidenceInputError(f"ELO scale must be > 0, got {scale}")

    def log_odds(self, delta: float) -> float:
        """Natural-log win odds for a rating gap."""
        return check_finite(delta, "delta") / self.scale * math.log(self.base)


DEFAULT_PARAMS = EloParams()


def rating_delta(player_rating: float, opponent_rating: float) -> float:
    """Player rating minus opponent rating; no rounding is applied."""
    return check_finite(player_rating, "player_rating") - check_finite(
        opponent_rating, "opponent_rating"
    )


def win_odds(delta: float, params: EloParams = DEFAULT_PARAMS) -> float:
    """Win odds ``base ** (delta / scale)`` for a rating advantage ``delta``."""
    delta = check_finite(delta, "delta")
    try:
        return params.base ** (delta / params.scale)
    except OverflowError:
        raise NumericalError(f"win odds overflow for delta={delta}") from None


def win_probability(delta: float, params: EloParams = DEFAULT_PARAMS) -> float:
    """Expected score ``w / (1 + w)``, evaluated as a logistic in log-odds space."""
    x = params.log_odds(delta)
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def implied_performance(
    score_fraction: float, opponent_avg: float, params: EloParams = DEFAULT_PARAMS
) -> float:
    """Rating at which ``score_fraction`` is the expected score against ``opponent_avg``.

    This is the logistic inverse of :func:`win_probability`. A perfect or
    zero score has no finite performance and is rejected.
    """
    s = check_finite(score_fraction, "score_fraction")
    opponent_avg = check_finite(opponent_avg, "opponent_avg")
    if s <= 0.0 or s >= 1.0:
        raise CromwellError(
            f"score_fraction must lie strictly in (0, 1), got {s}; a score of 0 or 1 "
            "implies an infinite performance (Cromwell's rule)"
        )
    log_odds = math.log(s) - math.log1p(-s)
    return opponent_avg + params.scale * log_odds / math.log(params.base)


def apply_time_forfeit_uplift(q: float, uplift: float) -> float:
    """Raise ``q`` toward 1 by the fraction ``uplift`` of the remaining gap.

    Stands in for extra ways to win in fast time controls (flagging) that
    the rating model does not see. ``uplift`` must lie in [0, 1).
    """
    uplift = check_finite(uplift, "uplift")
    if not 0.0 <= uplift < 1.0:
        raise EvidenceInputError(f"uplift must lie in [0, 1), got {uplift}")
    return q + uplift * (1.0 - q)
