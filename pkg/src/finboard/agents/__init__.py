from .base import Agent
from .baselines import BrokenAgent, PreferActionAgent, RandomAgent, ScriptedAgent

__all__ = [
    "Agent",
    "BrokenAgent",
    "PreferActionAgent",
    "RandomAgent",
    "ScriptedAgent",
]
