"""Tournament execution: seat rotation, per-match seeds, manifest."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..core.events import canonical_json
from ..core.rng import RngStream, derive_seed
from .config import MatchConfig, TournamentPlan, agent_label
from .match import MatchResult, run_match


def plan_matches(plan: TournamentPlan) -> list[dict]:
    """Expand a plan into ordered match entries with deterministic seeds
    and seat assignments.  The focal agent sits at its rotation position;
    the opponent pool fills the rest through a seeded permutation."""
    entries = []
    index = 0
    for repetition in range(plan.repetitions):
        for focal in plan.focal_agents:
            for game in plan.games:
                for rotation in plan.rotations:
                    seed = derive_seed(plan.seed, f"match:{index}")
                    opponents = list(plan.opponents)
                    RngStream(derive_seed(plan.seed, f"seating:{index}")).shuffle(opponents)
                    seats: list[dict] = []
                    pool = iter(opponents)
                    for seat in range(4):
                        seats.append(focal if seat == rotation - 1 else next(pool))
                    config = MatchConfig(
                        game=game,
                        seats=seats,
                        seed=seed,
                        match_id=f"{plan.name}-{index:04d}",
                        k_max=plan.k_max,
                        round_cap=plan.round_caps.get(game),
                        max_action_failures=plan.max_action_failures,
                        memory_window=plan.memory_window,
                        data_paths=plan.data_paths,
                    )
                    entries.append(
                        {
                            "index": index,
                            "game": game,
                            "focal": agent_label(focal),
                            "focal_seat": rotation,
                            "repetition": repetition,
                            "seed": seed,
                            "config": config,
                        }
                    )
                    index += 1
    return entries


def _execute_entry(args: tuple[dict, str, str]) -> dict:
    config_dict, log_path, rel_path = args
    try:
        result = run_match(MatchConfig.from_dict(config_dict), log_path=log_path)
        out = result.to_dict()
        out["log_path"] = rel_path
        return out
    except Exception as exc:  # individual failures never stop the tournament
        return {
            "match_id": config_dict.get("match_id"),
            "game": config_dict.get("game"),
            "winner": None,
            "ranking": [],
            "players": [],
            "rounds": 0,
            "active_turns": 0,
            "forced_decisions": 0,
            "events": 0,
            "log_path": rel_path,
            "aborted": True,
            "diagnostic": f"{type(exc).__name__}: {exc}",
            "seat_labels": [agent_label(s) for s in config_dict.get("seats", [])],
        }


def run_tournament(
    plan: TournamentPlan, out_dir: str | Path, workers: int = 1
) -> tuple[list[dict], dict]:
    """Execute every planned match, write JSONL logs and a manifest.

    Returns (results, manifest).  Per-match seeds derive from the plan seed
    and match index, so a rerun reproduces every log byte for byte.
    """
    out_dir = Path(out_dir)
    logs_dir = out_dir / "logs"
    logs_dir.mkdir(parents=True, exist_ok=True)
    entries = plan_matches(plan)
    jobs = []
    for entry in entries:
        rel = f"logs/{entry['config'].match_id}.jsonl"
        jobs.append((entry["config"].to_dict(), str(out_dir / rel), rel))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_execute_entry, jobs))
    else:
        results = [_execute_entry(job) for job in jobs]

    manifest = {
        "plan": plan.to_dict(),
        "matches": [
            {
                "index": entry["index"],
                "match_id": entry["config"].match_id,
                "game": entry["game"],
                "focal": entry["focal"],
                "focal_seat": entry["focal_seat"],
                "repetition": entry["repetition"],
                "seed": entry["seed"],
                "log": job[2],
                "result": result,
            }
            for entry, job, result in zip(entries, jobs, results)
        ],
    }
    (out_dir / "manifest.json").write_text(canonical_json(manifest) + "\n")
    with (out_dir / "results.json").open("w") as fh:
        json.dump(results, fh, indent=2, sort_keys=True)
    return results, manifest
