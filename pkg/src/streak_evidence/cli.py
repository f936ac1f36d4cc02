"""``streak-evidence`` command line.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import bayes, elo, ingest, likelihood, simulation
from ._validation import EvidenceInputError, NumericalError
from .svg import line_plot_svg

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class CLIInputError(EvidenceInputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIInputError(message.replace("\n", " "))


def _fmt(x, precise: bool) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(x)
    return repr(float(x)) if precise else f"{x:.4g}"


def _emit_table(rows: list[tuple[str, object]], fmt: str, precise: bool, out) -> None:
    if fmt == "json":
        json.dump({k: v for k, v in rows}, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([k for k, _ in rows])
        writer.writerow([_csv_value(v) for _, v in rows])
    else:
        width = max(len(k) for k, _ in rows)
        for k, v in rows:
            shown = v if isinstance(v, str) or v is None else _fmt(v, precise)
            out.write(f"{k:<{width}}  {shown}\n")


def _csv_value(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def _elo_params(args) -> elo.EloParams:
    return elo.EloParams(args.elo_base, args.elo_scale)


def _prior(args) -> bayes.PriorSpec:
    return bayes.PriorSpec(args.prior_n, args.likelihood_under_guilt)


def _load(args) -> ingest.GameHistory:
    path = Path(args.history)
    if not path.exists():
        raise CLIInputError(f"history file not found: {path}")
    sidecar = ingest.sidecar_path(path)
    cfg = ingest.load_format_config(sidecar) if sidecar else ingest.FormatConfig()
    if args.default_player_rating is not None:
        cfg.default_player_rating = args.default_player_rating
    if args.draw_policy is not None:
        cfg.draw_policy = ingest.DrawPolicy(args.draw_policy)
    return ingest.load_history(path, cfg)


def _delta(args) -> float:
    if args.delta is not None:
        if args.player_rating is not None or args.opponent_rating is not None:
            raise CLIInputError("give either --delta or --player-rating/--opponent-rating, not both")
        return args.delta
    if args.player_rating is None or args.opponent_rating is None:
        raise CLIInputError("need --delta, or both --player-rating and --opponent-rating")
    return elo.rating_delta(args.player_rating, args.opponent_rating)


def cmd_evidence(args, out) -> int:
    params, prior = _elo_params(args), _prior(args)
    if args.history:
        history = _load(args)
        report = bayes.history_case(history, prior, params, per_game=args.per_game,
                                    uplift=args.uplift)
    else:
        if args.per_game:
            raise CLIInputError("--per-game requires --history")
        if args.games is None or args.wins is None:
            raise CLIInputError("need --games and --wins (or --history)")
        report = bayes.end_to_end_case(_delta(args), args.games, args.wins, prior, params,
                                       uplift=args.uplift)
    if args.format == "json":
        json.dump(report.to_dict(), out, indent=2)
        out.write("\n")
        return EXIT_OK
    rows = [
        ("games", report.games),
        ("wins", report.wins),
        ("win odds w", report.win_odds),
        ("win probability q", report.win_probability),
        ("P(E|I) likelihood p", report.likelihood_innocent),
        ("Bayes factor", report.bayes_factor),
        ("posterior odds I:G", report.posterior_odds_innocence),
        ("P(G|E)", report.p_guilty),
        ("P(I|E)", report.p_innocent),
    ]
    if args.format == "csv":
        rows = [(k, v) for k, v in report.to_dict().items()]
    _emit_table(rows, args.format, args.precise, out)
    return EXIT_OK


def cmd_sweep(args, out) -> int:
    if args.n_values:
        try:
            grid = [float(v) for v in args.n_values.split(",") if v.strip()]
        except ValueError:
            raise CLIInputError(f"--n-values must be comma-separated numbers, got {args.n_values!r}") from None
    else:
        grid = bayes.n_range(args.n_from, args.n_to, args.step)
    rows = bayes.sensitivity_sweep(args.p, grid, args.likelihood_under_guilt)
    xs = [r.n for r in rows]
    ys = [r.p_innocent for r in rows]
    svg = line_plot_svg(xs, ys, title=f"Posterior P(I|E) vs prior odds N (p = {args.p:.4g})",
                        xlabel="N (innocent players per cheater)", ylabel="P(I|E)")
    if args.plot:
        Path(args.plot).write_text(svg, encoding="utf-8")
    if args.format == "svg":
        out.write(svg)
    elif args.format == "json":
        json.dump([{"N": r.n, "p_innocent": r.p_innocent} for r in rows], out, indent=2)
        out.write("\n")
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["N", "p_innocent"])
        for r in rows:
            writer.writerow([_csv_value(r.n), repr(r.p_innocent)])
    else:
        out.write(f"{'N':>10}  P(I|E)\n")
        for r in rows:
            out.write(f"{r.n:>10.6g}  {_fmt(r.p_innocent, args.precise)}\n")
    return EXIT_OK


def _require_seed(args) -> int:
    if args.seed is None:
        raise CLIInputError("--seed is required for stochastic commands")
    return args.seed


def _scan_model(args, history, n):
    if args.model == "per-game":
        if history is None:
            raise CLIInputError("--model per-game requires --history")
        qs = ingest.per_game_probabilities(history, _elo_params(args))[history.counted_mask()]
        qs = np.array([elo.apply_time_forfeit_uplift(q, args.uplift) for q in qs])
        return likelihood.PerGame(qs), float(qs.mean())
    if args.q is not None:
        q = args.q
    elif history is not None:
        q = float(ingest.per_game_probabilities(history, _elo_params(args))[history.counted_mask()].mean())
    else:
        raise CLIInputError("need --q (or --history to derive it)")
    q = elo.apply_time_forfeit_uplift(q, args.uplift)
    if args.model == "tilt":
        return likelihood.TiltModel(q, args.loss_penalty), q
    return likelihood.Uniform(q), q


def cmd_scan(args, out) -> int:
    seed = _require_seed(args)
    history = _load(args) if args.history else None
    if history is not None:
        n = history.games
    elif args.games is not None:
        n = args.games
    else:
        raise CLIInputError("need --history or --games")
    model, q = _scan_model(args, history, n)
    hits = ingest.find_streaks(history, args.window, args.min_wins) if history is not None else []
    window_p = likelihood.binomial_streak_prob(
        likelihood.StreakObservation(args.window, args.min_wins, likelihood.Uniform(q)))
    window_tail = likelihood.binomial_tail(args.window, args.min_wins, q)
    est = simulation.scan_streak_prob_mc(n, model, args.min_wins, args.window, args.trials,
                                         seed, workers=args.workers)
    summary = {
        "games": n,
        "window": args.window,
        "min_wins": args.min_wins,
        "q": q,
        "model": args.model,
        "likelihood_of_this_window": window_p,
        "window_tail_probability": window_tail,
        "chance_of_some_such_window_anywhere": est.estimate,
        "scan_std_error": est.std_error,
        "trials": est.trials,
        "seed": seed,
        "hits": len(hits),
    }
    if args.format == "json":
        json.dump({**summary, "windows": [h._asdict() for h in hits]}, out, indent=2)
        out.write("\n")
        return EXIT_OK
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["start_index", "window", "wins"])
        writer.writerows(hits)
        return EXIT_OK
    for h in hits:
        out.write(f"window at game {h.start_index}: {h.wins}/{h.window} wins\n")
    rows = [(k.replace("_", " "), v) for k, v in summary.items()]
    _emit_table(rows, "text", args.precise, out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    seed = _require_seed(args)
    if args.reps is None or args.reps < 1:
        raise CLIInputError(f"--reps must be >= 1, got {args.reps}")
    if args.jensen:
        est = simulation.jensen_experiment(args.low, args.high, args.games, args.reps, seed,
                                           workers=args.workers)
        rows = [("games", args.games), ("reps", est.trials), ("low", args.low),
                ("high", args.high), ("jensen_ratio_mean", est.estimate),
                ("jensen_ratio_std_error", est.std_error)]
    else:
        if args.q is None:
            if args.delta is None:
                raise CLIInputError("need --q or --delta")
            q = elo.win_probability(args.delta, _elo_params(args))
        else:
            q = args.q
        q = elo.apply_time_forfeit_uplift(q, args.uplift)
        model = (likelihood.TiltModel(q, args.tilt) if args.tilt is not None
                 else likelihood.Uniform(q))
        st = simulation.history_statistics(args.games, model, args.reps, seed,
                                           workers=args.workers)
        rows = [("model", "tilt" if args.tilt is not None else "uniform"), ("q", q),
                ("games", st.games), ("reps", st.reps), ("win_rate", st.win_rate),
                ("win_rate_std_error", st.win_rate_se),
                ("mean_longest_run", st.mean_longest_run),
                ("max_longest_run", st.max_longest_run),
                ("p_win_after_win", st.p_win_after_win),
                ("p_win_after_loss", st.p_win_after_loss)]
    if args.format == "text":
        rows = [(k.replace("_", " "), v) for k, v in rows]
    _emit_table(rows, args.format, args.precise, out)
    return EXIT_OK


def cmd_implied_perf(args, out) -> int:
    if args.score is not None:
        score = args.score
    elif args.points is not None and args.games:
        score = args.points / args.games
    else:
        raise CLIInputError("need --score, or --points with --games")
    rating = elo.implied_performance(score, args.opponent_avg, _elo_params(args))
    rows = [("score_fraction", score), ("opponent_avg", args.opponent_avg),
            ("performance", rating)]
    if args.format == "text":
        shown = repr(rating) if args.precise else f"{rating:.1f}"
        out.write(f"score fraction  {_fmt(score, args.precise)}\n"
                  f"opponent avg    {args.opponent_avg:g}\n"
                  f"performance     {shown}\n")
    else:
        _emit_table(rows, args.format, args.precise, out)
    return EXIT_OK


def _add_elo(p):
    p.add_argument("--elo-base", type=float, default=10.0)
    p.add_argument("--elo-scale", type=float, default=400.0)


def _add_history(p):
    p.add_argument("--history", help="game-history CSV")
    p.add_argument("--default-player-rating", type=float, default=None)
    p.add_argument("--draw-policy", choices=[d.value for d in ingest.DrawPolicy], default=None)


def _add_common(p, formats):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--precise", action="store_true", help="print full precision")


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = _Parser(prog="streak-evidence",
                     description="Bayesian weight of evidence for cheating given a win streak.")
    parser.add_argument("--config", help="key=value file of defaults; flags override it")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {}

    p = subs["evidence"] = sub.add_parser("evidence", help="posterior for an observed streak")
    p.add_argument("--delta", type=float, help="player rating minus mean opponent rating")
    p.add_argument("--player-rating", type=float)
    p.add_argument("--opponent-rating", type=float)
    p.add_argument("--games", type=int)
    p.add_argument("--wins", type=int)
    p.add_argument("--prior-n", type=float, default=10_000.0)
    p.add_argument("--likelihood-under-guilt", type=float, default=1.0)
    p.add_argument("--uplift", type=float, default=0.0,
                   help="time-forfeit uplift: q -> q + uplift*(1-q)")
    p.add_argument("--per-game", action="store_true",
                   help="exact Poisson-binomial likelihood over per-game probabilities")
    _add_history(p)
    _add_elo(p)
    _add_common(p, ["text", "json", "csv"])
    p.set_defaults(func=cmd_evidence)

    p = subs["sweep"] = sub.add_parser("sweep", help="P(I|E) across prior odds N")
    p.add_argument("--p", type=float, required=True, help="likelihood P(E|I)")
    p.add_argument("--n-from", type=float, default=100.0)
    p.add_argument("--n-to", type=float, default=2000.0)
    p.add_argument("--step", type=float, default=100.0)
    p.add_argument("--n-values", help="explicit comma-separated N grid")
    p.add_argument("--likelihood-under-guilt", type=float, default=1.0)
    p.add_argument("--plot", help="also write an SVG plot to this path")
    _add_common(p, ["csv", "text", "json", "svg"])
    p.set_defaults(func=cmd_sweep)

    p = subs["scan"] = sub.add_parser("scan", help="streak windows and history-wide scan probability")
    _add_history(p)
    p.add_argument("--games", type=int, help="history length when no --history is given")
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--min-wins", type=int, required=True)
    p.add_argument("--model", choices=["uniform", "per-game", "tilt"], default="uniform")
    p.add_argument("--q", type=float)
    p.add_argument("--loss-penalty", type=float, default=0.0)
    p.add_argument("--uplift", type=float, default=0.0)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    _add_elo(p)
    _add_common(p, ["text", "json", "csv"])
    p.set_defaults(func=cmd_scan)

    p = subs["simulate"] = sub.add_parser("simulate", help="seeded simulation experiments")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--jensen", action="store_true",
                      help="mean prod(q_i)/mean(q)^m with q_i ~ U(low, high)")
    mode.add_argument("--uniform", action="store_true", help="independent games (default)")
    mode.add_argument("--tilt", type=float, metavar="LOSS_PENALTY",
                      help="Markov tilt model with this loss penalty")
    p.add_argument("--low", type=float, default=0.85)
    p.add_argument("--high", type=float, default=0.9)
    p.add_argument("--games", type=int, default=46)
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--q", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--uplift", type=float, default=0.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    _add_elo(p)
    _add_common(p, ["text", "json", "csv"])
    p.set_defaults(func=cmd_simulate)

    p = subs["implied-perf"] = sub.add_parser("implied-perf", help="performance rating for a score")
    p.add_argument("--score", type=float, help="score fraction in (0, 1)")
    p.add_argument("--points", type=float)
    p.add_argument("--games", type=int)
    p.add_argument("--opponent-avg", type=float, required=True)
    _add_elo(p)
    _add_common(p, ["text", "json", "csv"])
    p.set_defaults(func=cmd_implied_perf)
    return parser, subs


def _apply_config(path: str, command: str, subs: dict) -> None:
    cfg_path = Path(path)
    if not cfg_path.exists():
        raise CLIInputError(f"config file not found: {cfg_path}")
    values = ingest.parse_key_values(cfg_path.read_text(encoding="utf-8"), str(cfg_path))
    sp = subs.get(command)
    if sp is None:
        return
    known = {a.dest: a for a in sp._actions}
    defaults = {}
    for key, raw in values.items():
        action = known.get(key)
        if action is None:
            raise CLIInputError(f"{cfg_path}: unknown key {key!r} for command {command!r}")
        if action.required:
            action.required = False
        if action.nargs == 0:
            defaults[key] = raw.strip().lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = action.type(raw) if action.type else raw
    sp.set_defaults(**defaults)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser, subs = build_parser()
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("--config")
        known, rest = pre.parse_known_args(argv)
        if known.config:
            command = next((a for a in rest if a in subs), None)
            _apply_config(known.config, command, subs)
        args = parser.parse_args(rest)
        return args.func(args, out)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (EvidenceInputError, ValueError) as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, ArithmeticError) as exc:
        print(f"error: numerical: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def run() -> None:
    sys.exit(main())


def capture(argv) -> tuple[int, str]:
    """Run the CLI in-process and return ``(exit_code, stdout)``."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()
