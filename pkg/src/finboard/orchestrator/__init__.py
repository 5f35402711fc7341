from .config import GAMES, MatchConfig, ROUND_CAPS, TournamentPlan, agent_label
from .match import MatchResult, build_engine, run_match
from .replay import ReplayReport, replay
from .tournament import plan_matches, run_tournament

__all__ = [
    "GAMES",
    "MatchConfig",
    "MatchResult",
    "ROUND_CAPS",
    "ReplayReport",
    "TournamentPlan",
    "agent_label",
    "build_engine",
    "plan_matches",
    "replay",
    "run_match",
    "run_tournament",
]
