"""Prompt construction for text-model agents.

Every decision prompt renders five blocks: the static instruction for the
game, the dynamic state snapshot, the phase context that triggered the
decision, the action rules with parameter constraints, and the strict JSON
output schema.  Identifiers must be copied exactly from the prompt, and
retry prompts embed the previous attempt's error verbatim.
"""

from __future__ import annotations

import json

from ..core.memory import TurnEntry
from ..core.protocol import ActionCatalog, ActionSpec, Observation

STATIC_INSTRUCTIONS = {
    "cashflow": (
        "You are playing Cashflow. In the Rat Race, build Passive Income above "
        "Total Expenses to escape to the Fast Track; there, win by buying your "
        "dream or raising Cashflow-Day income by $50,000 over its starting value. "
        "Cash is immediate liquidity. Total Income = Salary + Passive Income; "
        "Monthly Cash Flow = Total Income - Total Expenses. Bank loans add cash "
        "but cost a monthly payment of 10% of the principal. Bankruptcy is "
        "checked at Paycheck when cash and monthly cash flow are both negative. "
        "Borrowing and Rat Race debt actions are not allowed on the Fast Track."
    ),
    "acquire": (
        "You are playing Acquire. Maximize total wealth by placing tiles to "
        "found, grow, and merge hotel chains and by investing in their stock. "
        "Chains of 11 or more tiles are safe and cannot be acquired; merger "
        "bonuses go to the top two holders of the acquired chain; defunct-share "
        "trade counts must be even (two-for-one); stock purchases are limited "
        "by cash, bank supply, and the three-share turn quota."
    ),
    "monopoly": (
        "You are playing Monopoly. Buy properties, complete color groups, build "
        "houses evenly, trade and auction assets, and manage cash so rent and "
        "taxes never bankrupt you. Passing GO pays $200; jail can be left by "
        "paying the $50 fine, using a get-out-of-jail card, or rolling a double. "
        "The winner is the last solvent player."
    ),
}


def _format_slot(name: str, slot) -> str:
    return f"    {name}: {slot.describe()}"


def _format_action(spec: ActionSpec) -> str:
    lines = [f"- {spec.name}: {spec.description}" if spec.description else f"- {spec.name}"]
    for name, slot in spec.slots.items():
        lines.append(_format_slot(name, slot))
    return "\n".join(lines)


def _format_memory(memory: tuple[TurnEntry, ...], limit: int = 5) -> str:
    if not memory:
        return "(no previous turns)"
    lines = []
    for entry in memory[-limit:]:
        actions = ", ".join(
            f"{e.action}" for e in entry.active_actions if e.action
        ) or "none"
        passives = ", ".join(
            str(e.payload.get("type")) for e in entry.passive_events[:6]
        ) or "none"
        lines.append(f"round {entry.round}: actions [{actions}]; events [{passives}]")
    return "\n".join(lines)


def build_prompt(
    observation: Observation,
    catalog: ActionCatalog,
    memory: tuple[TurnEntry, ...] = (),
) -> str:
    """Render the five prompt blocks for one sub-decision."""
    blocks = []
    blocks.append("== Instructions ==\n" + STATIC_INSTRUCTIONS[observation.game])
    state = {
        "public_state": observation.public_state,
        "your_private_state": observation.private_state,
        "recent_history": _format_memory(memory),
    }
    blocks.append(
        "== Current state ==\n" + json.dumps(state, indent=1, sort_keys=True, default=str)
    )
    phase_lines = [
        f"phase: {observation.phase}",
        f"round: {observation.round}, sub-step: {observation.substep}",
        f"you are player {observation.player}",
        f"trigger: {observation.trigger}",
    ]
    if observation.error_feedback:
        phase_lines.append(f"previous attempt failed: {observation.error_feedback}")
    blocks.append("== Phase context ==\n" + "\n".join(phase_lines))
    blocks.append(
        "== Legal actions ==\n" + "\n".join(_format_action(a) for a in catalog.actions)
    )
    blocks.append(
        "== Output ==\n"
        "Return valid JSON only, as one object: "
        '{"action": "ACTION_NAME", "parameters": {...}, "reason": "..."}. '
        "Do not invent actions. Copy identifiers such as property IDs, chain "
        "names, asset IDs, liability IDs, and card names exactly from the prompt."
    )
    return "\n\n".join(blocks)
