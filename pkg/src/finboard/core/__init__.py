from .engine import Applied, DecisionRequest, GameEngine, TurnRecord, TurnRunner
from .events import (
    EventRecord,
    KIND_ACTIVE,
    KIND_FORCED,
    KIND_PASSIVE,
    MatchRecorder,
    canonical_json,
    read_log,
    state_hash64,
)
from .faults import (
    ActionRejected,
    AgentFailure,
    EngineInconsistency,
    FaultPolicy,
    decide_with_retries,
)
from .memory import MemoryBuffer, TurnEntry
from .protocol import (
    ActionCatalog,
    ActionSpec,
    ChoiceSlot,
    Decision,
    DecisionError,
    IntSlot,
    Observation,
    SubsetSlot,
    validate_decision,
)
from .rng import DiceRoll, RngStream, advance_position, derive_seed, roll_dice

__all__ = [
    "ActionCatalog",
    "ActionRejected",
    "ActionSpec",
    "AgentFailure",
    "Applied",
    "ChoiceSlot",
    "Decision",
    "DecisionError",
    "DecisionRequest",
    "DiceRoll",
    "EngineInconsistency",
    "EventRecord",
    "FaultPolicy",
    "GameEngine",
    "IntSlot",
    "KIND_ACTIVE",
    "KIND_FORCED",
    "KIND_PASSIVE",
    "MatchRecorder",
    "MemoryBuffer",
    "Observation",
    "RngStream",
    "SubsetSlot",
    "TurnEntry",
    "TurnRecord",
    "TurnRunner",
    "advance_position",
    "canonical_json",
    "decide_with_retries",
    "derive_seed",
    "read_log",
    "roll_dice",
    "state_hash64",
    "validate_decision",
]
