"""finboard command-line interface.

Subcommands: run (single match), tournament (plan execution),
replay (log verification), metrics (analytics over log directories).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import MatchConfig, TournamentPlan
from .match import run_match
from .replay import replay
from .tournament import run_tournament


def _cmd_run(args) -> int:
    config = MatchConfig.load(args.config)
    if args.seed is not None:
        config.seed = args.seed
        config.match_id = f"{config.game}-{config.seed:08x}"
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / f"{config.match_id}.jsonl"
    result = run_match(config, log_path=log_path)
    print(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    return 1 if result.aborted else 0


def _cmd_tournament(args) -> int:
    plan = TournamentPlan.load(args.plan)
    if args.seed is not None:
        plan.seed = args.seed
    results, manifest = run_tournament(plan, args.out, workers=args.workers)
    aborted = sum(1 for r in results if r["aborted"])
    print(
        f"{len(results)} matches -> {args.out} "
        f"({aborted} aborted); manifest: {Path(args.out) / 'manifest.json'}"
    )
    return 0


def _cmd_replay(args) -> int:
    report = replay(args.log)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0 if report.verified else 1


def _cmd_metrics(args) -> int:
    from ..analytics.metrics import compute_metrics
    from ..analytics.logs import load_log_dir
    from ..analytics.reports import emit_reports

    matches = load_log_dir(args.logs)
    metrics = compute_metrics(matches, bucket_bounds=None)
    written = emit_reports(metrics, args.out)
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finboard",
        description="Deterministic financial board-game simulations for agent benchmarking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a single match from a config file")
    p_run.add_argument("--config", required=True, help="match config JSON")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--out", default="out", help="directory for the event log")
    p_run.set_defaults(func=_cmd_run)

    p_tour = sub.add_parser("tournament", help="run every match in a tournament plan")
    p_tour.add_argument("--plan", required=True, help="tournament plan JSON")
    p_tour.add_argument("--seed", type=int, default=None, help="override the plan master seed")
    p_tour.add_argument("--out", default="tournament_out", help="output directory")
    p_tour.add_argument("--workers", type=int, default=1, help="concurrent match processes")
    p_tour.set_defaults(func=_cmd_tournament)

    p_replay = sub.add_parser("replay", help="verify a match log by re-execution")
    p_replay.add_argument("--log", required=True, help="JSONL event log")
    p_replay.set_defaults(func=_cmd_replay)

    p_metrics = sub.add_parser("metrics", help="compute behavioral metrics from logs")
    p_metrics.add_argument("--logs", required=True, help="directory of JSONL logs")
    p_metrics.add_argument("--out", required=True, help="directory for CSV/JSON reports")
    p_metrics.set_defaults(func=_cmd_metrics)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
