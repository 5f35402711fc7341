"""Remote text-model agent speaking a chat-style HTTP JSON protocol.

Wire format: POST {model, messages: [{role, content}], temperature} to the
configured endpoint; the first text content of the response is parsed into
a decision.  Transport failures and unparseable replies surface as agent
failures, so the fault-tolerant retry wrapper (not the transport layer)
owns the error feedback loop; the credential is read from an environment
variable named in the config and never stored in match artifacts.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import httpx

from ..core.faults import AgentFailure
from ..core.protocol import Decision, DecisionError, ERR_FORMAT
from .base import Agent
from .parsing import parse_decision
from .prompts import build_prompt

ERR_NETWORK = "network"


@dataclass
class RemoteAgentConfig:
    endpoint: str
    model: str
    timeout: float = 30.0
    retries: int = 1
    backoff: float = 0.5
    temperature: float = 0.0
    credential_env: str = "FINBOARD_API_KEY"
    system_role: str = "system"

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.retries < 0:
            raise ValueError("retries must be >= 0")

    @classmethod
    def from_spec(cls, spec: dict) -> "RemoteAgentConfig":
        return cls(
            endpoint=spec["endpoint"],
            model=spec["model"],
            timeout=spec.get("timeout", 30.0),
            retries=spec.get("retries", 1),
            backoff=spec.get("backoff", 0.5),
            temperature=spec.get("temperature", 0.0),
            credential_env=spec.get("credential_env", "FINBOARD_API_KEY"),
        )


class RemoteAgent(Agent):
    """Plays through a remote chat-completion endpoint."""

    label = "remote"

    def __init__(self, config: RemoteAgentConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self._client = httpx.Client(timeout=config.timeout, transport=transport)

    def close(self) -> None:
        self._client.close()

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        credential = os.environ.get(self.config.credential_env)
        if credential:
            headers["Authorization"] = f"Bearer {credential}"
        return headers

    def _post(self, body: dict) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.config.retries + 1):
            try:
                response = self._client.post(
                    self.config.endpoint, json=body, headers=self._headers()
                )
                response.raise_for_status()
                return response.json()
            except (httpx.HTTPError, ValueError) as exc:
                last_error = exc
                if attempt < self.config.retries and self.config.backoff > 0:
                    import time

                    time.sleep(self.config.backoff * (attempt + 1))
        raise AgentFailure(ERR_NETWORK, f"transport failure: {last_error}")

    @staticmethod
    def _first_text(payload: dict) -> str:
        choices = payload.get("choices")
        if isinstance(choices, list) and choices:
            message = choices[0].get("message", {})
            content = message.get("content")
            if isinstance(content, str):
                return content
            if isinstance(content, list):
                for part in content:
                    if isinstance(part, dict) and isinstance(part.get("text"), str):
                        return part["text"]
        if isinstance(payload.get("content"), str):
            return payload["content"]
        raise AgentFailure(ERR_FORMAT, "response carries no text content")

    def decide(self, observation, catalog, memory) -> Decision:
        prompt = build_prompt(observation, catalog, memory)
        body = {
            "model": self.config.model,
            "messages": [
                {
                    "role": self.config.system_role,
                    "content": "You are playing a financial board game. Follow the rules "
                    "of the current game and use only the legal actions of the "
                    "current phase.",
                },
                {"role": "user", "content": prompt},
            ],
            "temperature": self.config.temperature,
        }
        payload = self._post(body)
        text = self._first_text(payload)
        parsed = parse_decision(text, catalog)
        if isinstance(parsed, DecisionError):
            raise AgentFailure(parsed.category, parsed.reason)
        return parsed
