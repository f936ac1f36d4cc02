"""Regenerate the bundled synthetic 46-game history.

The real game list was never published. This file only matches the
aggregates: player 3300, opponents averaging exactly 2933, 45 wins and
one draw. Opponent ratings are spread with a standard deviation of about
20 points, a plausible field for top-level blitz.
"""

from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "streak_evidence" / "data" / "synthetic_46.csv"
GAMES, PLAYER, OPP_MEAN, DRAW_AT = 46, 3300, 2933, 30


def opponent_ratings(seed: int = 1, sd: float = 20.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    off = np.round(rng.normal(0, sd, GAMES)).astype(int)
    off -= int(round(off.mean()))
    ratings = OPP_MEAN + off
    gap = OPP_MEAN * GAMES - ratings.sum()
    ratings[np.argsort(ratings)[: abs(gap)]] += np.sign(gap)
    assert ratings.sum() == OPP_MEAN * GAMES
    return ratings


def main() -> None:
    lines = ["index,player_rating,opponent_rating,result,timestamp"]
    for i, r in enumerate(opponent_ratings(), start=1):
        lines.append(f"{i},,{r},{'D' if i == DRAW_AT else 'W'},")
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    OUT.with_suffix(".cfg").write_text(
        "# synthetic data: aggregates only, not the real games\n"
        f"default_player_rating={PLAYER}\n"
        "draw_policy=draw_as_no_win\n",
        encoding="utf-8",
    )


if __name__ == "__main__":
    main()
