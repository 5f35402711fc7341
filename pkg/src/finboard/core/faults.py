"""Fault tolerance around agent calls: validation, error feedback, takeover.

Every agent answer goes through format and legality checks.  Failures are
fed back to the agent with the specific error, and after the per-phase
retry budget is exhausted the phase's conservative fallback is applied and
recorded as a system-forced event.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .protocol import ActionCatalog, Decision, DecisionError, ERR_FORMAT, validate_decision

# Fallback rule names an engine may be configured with per phase tag.
RULE_END_TURN = "end_turn"
RULE_ADVANCE_STAGE = "advance_stage"
RULE_DEFAULT_OPTION = "default_option"


class AgentFailure(Exception):
    """An agent call that produced no usable decision (transport, parse...)."""

    def __init__(self, category: str, reason: str):
        super().__init__(reason)
        self.error = DecisionError(category, reason)


class ActionRejected(Exception):
    """A schema-valid decision the engine cannot apply in the current state."""

    def __init__(self, category: str, reason: str):
        super().__init__(reason)
        self.error = DecisionError(category, reason)


class EngineInconsistency(Exception):
    """A catalog-approved action failed to apply: engine bug, match aborts."""


@dataclass
class FaultPolicy:
    """Retry budget and per-phase fallback rule overrides."""

    max_action_failures: int = 5
    fallback_rules: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.max_action_failures < 1:
            raise ValueError("max_action_failures must be >= 1")

    def rule_for(self, phase: str, default: str) -> str:
        return self.fallback_rules.get(phase, default)


def decide_with_retries(
    agent,
    observation,
    catalog: ActionCatalog,
    memory,
    policy: FaultPolicy,
    extra_validate=None,
) -> tuple[Decision, int, bool]:
    """Obtain a valid decision, retrying with error feedback.

    Returns (decision, attempts_used, forced).  `extra_validate` lets the
    engine veto schema-valid decisions that clash with deeper state rules
    (those rejections re-enter the retry loop like any other failure).
    After `policy.max_action_failures` failures the catalog fallback is
    returned with forced=True; the caller records it as system-forced.
    """
    feedback: str | None = None
    attempts = 0
    while attempts < policy.max_action_failures:
        attempts += 1
        obs = observation.with_feedback(feedback) if feedback else observation
        try:
            decision = agent.decide(obs, catalog, memory)
        except AgentFailure as exc:
            feedback = exc.error.feedback()
            continue
        except Exception as exc:  # transport and agent bugs count as failures
            feedback = DecisionError(ERR_FORMAT, f"agent error: {exc}").feedback()
            continue
        error = validate_decision(decision, catalog)
        if error is None and extra_validate is not None:
            error = extra_validate(decision)
        if error is None:
            return decision, attempts, False
        feedback = error.feedback()
    return catalog.fallback, attempts, True
