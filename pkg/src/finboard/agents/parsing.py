"""Turn raw model text into a Decision, or a categorized parse error.

Total: every input maps to a Decision or a DecisionError, never an
exception.  The first top-level JSON object found in the text is used, so
prose around the object is tolerated.
"""

from __future__ import annotations

import json

from ..core.protocol import (
    ActionCatalog,
    Decision,
    DecisionError,
    ERR_FORMAT,
    ERR_UNKNOWN_ACTION,
)


def extract_json_object(text: str) -> dict | None:
    """Return the first parseable top-level JSON object embedded in text."""
    depth = 0
    start = None
    in_string = False
    escaped = False
    for i, ch in enumerate(text):
        if in_string:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == '"':
                in_string = False
            continue
        if ch == '"':
            in_string = True
        elif ch == "{":
            if depth == 0:
                start = i
            depth += 1
        elif ch == "}":
            if depth > 0:
                depth -= 1
                if depth == 0 and start is not None:
                    try:
                        obj = json.loads(text[start : i + 1])
                    except json.JSONDecodeError:
                        start = None
                        continue
                    if isinstance(obj, dict):
                        return obj
                    start = None
    return None


def parse_decision(raw: str, catalog: ActionCatalog) -> Decision | DecisionError:
    """Map model output onto a Decision against the given catalog."""
    if not isinstance(raw, str) or not raw.strip():
        return DecisionError(ERR_FORMAT, "empty model output")
    obj = extract_json_object(raw)
    if obj is None:
        return DecisionError(ERR_FORMAT, "no JSON object found in the output")
    action = obj.get("action")
    if not isinstance(action, str) or not action:
        return DecisionError(ERR_FORMAT, 'the JSON object lacks an "action" string')
    params = obj.get("parameters", obj.get("params", {}))
    if params is None:
        params = {}
    if not isinstance(params, dict):
        return DecisionError(ERR_FORMAT, "parameters must be a JSON object")
    # Bracketed forms like BID[40] or MORTGAGE[11] are normalized onto the
    # action's first parameter slot.
    if "[" in action and action.endswith("]"):
        name, _, arg = action.partition("[")
        spec = catalog.get(name)
        if spec is None:
            return DecisionError(ERR_UNKNOWN_ACTION, f"unknown action {name!r}")
        arg = arg[:-1]
        if spec.slots:
            slot_name = next(iter(spec.slots))
            try:
                value = json.loads(arg)
            except json.JSONDecodeError:
                value = arg
            params = dict(params)
            params.setdefault(slot_name, value)
        action = name
    reason = obj.get("reason", obj.get("rationale", ""))
    if not isinstance(reason, str):
        reason = str(reason)
    return Decision(action=action, params=params, rationale=reason)
