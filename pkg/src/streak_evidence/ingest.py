"""Game-history CSV files.

Expected header: ``index,player_rating,opponent_rating,result,timestamp``.
``result`` is one of W, D, L (any case). ``player_rating`` and
``timestamp`` may be left empty; a missing player rating falls back to
the history's default. An optional sidecar file of ``key=value`` lines
supplies ``default_player_rating`` and ``draw_policy``.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import NamedTuple

import numpy as np

from ._validation import EvidenceInputError, check_int
from .elo import DEFAULT_PARAMS, EloParams, win_probability

COLUMNS = ("index", "player_rating", "opponent_rating", "result", "timestamp")
MAX_RATING = 10_000


class HistoryFormatError(EvidenceInputError):
    """A history file or sidecar config could not be parsed."""


class Result(enum.Enum):
    WIN = "W"
    DRAW = "D"
    LOSS = "L"

    @classmethod
    def parse(cls, token: str) -> "Result":
        try:
            return cls(token.strip().upper())
        except ValueError:
            accepted = ", ".join(r.value for r in cls)
            raise HistoryFormatError(
                f"unknown result token {token!r}; accepted tokens: {accepted} (case-insensitive)"
            ) from None


class DrawPolicy(enum.Enum):
    # a draw is a game played but not won: counts toward m, not k
    DRAW_AS_NO_WIN = "draw_as_no_win"
    # draws are dropped from the Bernoulli sequence altogether
    DRAW_AS_HALF_WIN_EXCLUDED = "draw_as_half_win_excluded"


@dataclass(frozen=True)
class GameRecord:
    index: int
    opponent_rating: float
    result: Result
    player_rating: float | None = None
    timestamp: str | None = None


@dataclass(frozen=True)
class GameHistory:
    records: tuple[GameRecord, ...]
    draw_policy: DrawPolicy = DrawPolicy.DRAW_AS_NO_WIN
    default_player_rating: float | None = None

    def __len__(self):
        return len(self.records)

    def counted_mask(self) -> np.ndarray:
        """Which records enter the win/no-win sequence under the draw policy."""
        if self.draw_policy is DrawPolicy.DRAW_AS_NO_WIN:
            return np.ones(len(self.records), dtype=bool)
        return np.array([r.result is not Result.DRAW for r in self.records], dtype=bool)

    def outcomes(self) -> np.ndarray:
        """Win indicators for the counted games, in order."""
        wins = np.array([r.result is Result.WIN for r in self.records], dtype=bool)
        return wins[self.counted_mask()]

    @property
    def games(self) -> int:
        return int(self.counted_mask().sum())

    @property
    def wins(self) -> int:
        return sum(r.result is Result.WIN for r in self.records)

    @property
    def score(self) -> float:
        """Chess score: 1 per win, 1/2 per draw."""
        return sum({Result.WIN: 1.0, Result.DRAW: 0.5, Result.LOSS: 0.0}[r.result]
                   for r in self.records)

    def reversed(self) -> "GameHistory":
        n = len(self.records)
        recs = tuple(replace(r, index=n - 1 - r.index) for r in reversed(self.records))
        return replace(self, records=recs)


@dataclass
class FormatConfig:
    default_player_rating: float | None = None
    draw_policy: DrawPolicy = DrawPolicy.DRAW_AS_NO_WIN
    extra: dict = field(default_factory=dict)


def parse_key_values(text: str, source: str = "<config>") -> dict[str, str]:
    """``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise HistoryFormatError(f"{source}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def load_format_config(path) -> FormatConfig:
    values = parse_key_values(Path(path).read_text(encoding="utf-8"), str(path))
    cfg = FormatConfig()
    if "default_player_rating" in values:
        cfg.default_player_rating = _rating(values.pop("default_player_rating"),
                                            f"{path}: default_player_rating")
    if "draw_policy" in values:
        cfg.draw_policy = _draw_policy(values.pop("draw_policy"))
    cfg.extra = values
    return cfg


def _draw_policy(token: str) -> DrawPolicy:
    try:
        return DrawPolicy(token.strip().lower())
    except ValueError:
        accepted = ", ".join(p.value for p in DrawPolicy)
        raise HistoryFormatError(f"unknown draw policy {token!r}; accepted: {accepted}") from None


def _rating(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise HistoryFormatError(f"{where}: rating {text!r} is not a number") from None
    if not math.isfinite(value) or not 0 < value < MAX_RATING:
        raise HistoryFormatError(f"{where}: rating {value} outside (0, {MAX_RATING})")
    return value


def sidecar_path(path: Path) -> Path | None:
    candidate = path.with_suffix(".cfg")
    return candidate if candidate.exists() else None


def load_history(path, format_config: FormatConfig | None = None) -> GameHistory:
    """Read a history CSV; rows are ordered by ``index`` and renumbered from 0.

    When ``format_config`` is omitted, a sidecar ``<name>.cfg`` next to the
    CSV is used if present.
    """
    path = Path(path)
    if format_config is None:
        sidecar = sidecar_path(path)
        format_config = load_format_config(sidecar) if sidecar else FormatConfig()
    with path.open(newline="", encoding="utf-8") as fh:
        return parse_history(fh, format_config, source=str(path))


def parse_history(stream, format_config: FormatConfig | None = None,
                  source: str = "<stream>") -> GameHistory:
    cfg = format_config or FormatConfig()
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None:
        raise HistoryFormatError(f"{source}: empty history (no header, no games)")
    header = [h.strip().lower() for h in header]
    missing = [c for c in COLUMNS if c not in header]
    if missing:
        raise HistoryFormatError(f"{source}: header is missing column(s) {missing}; "
                                 f"expected {','.join(COLUMNS)}")
    col = {name: header.index(name) for name in COLUMNS}

    parsed = []
    for rowno, row in enumerate(reader, start=2):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise HistoryFormatError(
                f"{source}: row {rowno}: expected {len(header)} columns, got {len(row)}")

        def cell(name):
            return row[col[name]].strip()

        where = f"{source}: row {rowno}, column"
        try:
            index = int(cell("index"))
        except ValueError:
            raise HistoryFormatError(f"{where} index: {cell('index')!r} is not an integer") from None
        player = cell("player_rating")
        try:
            result = Result.parse(cell("result"))
        except HistoryFormatError as exc:
            raise HistoryFormatError(f"{where} result: {exc}") from None
        parsed.append(GameRecord(
            index=index,
            opponent_rating=_rating(cell("opponent_rating"), f"{where} opponent_rating"),
            result=result,
            player_rating=_rating(player, f"{where} player_rating") if player else None,
            timestamp=cell("timestamp") or None,
        ))

    if not parsed:
        raise HistoryFormatError(f"{source}: empty history (header only, no games)")
    parsed.sort(key=lambda r: r.index)
    for a, b in zip(parsed, parsed[1:]):
        if a.index == b.index:
            raise HistoryFormatError(f"{source}: duplicate index {a.index}")
    records = tuple(replace(r, index=i) for i, r in enumerate(parsed))
    return GameHistory(records, cfg.draw_policy, cfg.default_player_rating)


def serialize_history(history: GameHistory) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in history.records:
        writer.writerow([
            r.index,
            "" if r.player_rating is None else _fmt_rating(r.player_rating),
            _fmt_rating(r.opponent_rating),
            r.result.value,
            r.timestamp or "",
        ])
    return buf.getvalue()


def _fmt_rating(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def write_history(history: GameHistory, path) -> None:
    Path(path).write_text(serialize_history(history), encoding="utf-8")


def per_game_probabilities(history: GameHistory, params: EloParams = DEFAULT_PARAMS) -> np.ndarray:
    """ELO win probability for every record, in record order."""
    qs = np.empty(len(history.records))
    for i, r in enumerate(history.records):
        player = r.player_rating if r.player_rating is not None else history.default_player_rating
        if player is None:
            raise EvidenceInputError(
                f"game {r.index} has no player rating and the history has no default "
                "(set default_player_rating)")
        qs[i] = win_probability(player - r.opponent_rating, params)
    return qs


class StreakWindow(NamedTuple):
    start_index: int
    window: int
    wins: int


def find_streaks(history: GameHistory, window: int, min_wins: int) -> list[StreakWindow]:
    """All windows of ``window`` consecutive counted games with at least ``min_wins`` wins.

    ``start_index`` is the position in the counted sequence, which equals
    the record index under the default draw policy.
    """
    outcomes = history.outcomes()
    window = check_int(window, "window", minimum=1)
    min_wins = check_int(min_wins, "min_wins", minimum=0)
    if window > outcomes.size:
        raise EvidenceInputError(f"window={window} exceeds history length {outcomes.size}")
    if min_wins > window:
        raise EvidenceInputError(f"min_wins={min_wins} exceeds window={window}")
    csum = np.concatenate(([0], np.cumsum(outcomes, dtype=np.int64)))
    counts = csum[window:] - csum[:-window]
    return [StreakWindow(int(s), window, int(counts[s]))
            for s in np.flatnonzero(counts >= min_wins)]
