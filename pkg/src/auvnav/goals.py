"""Language-to-goal bridge: prompt construction, strict goal parsing, and
the scripted / HTTP backends behind one submit() contract.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from importlib import resources

import httpx

from .errors import (BackendRefused, BackendTimeout, EmptyCommand,
                     UnknownCommand)
from .htn import PREDICATE_VOCABULARY, PRIMITIVE_VOCABULARY

GOAL_SCHEMA = {
    "type": "object",
    "required": ["start_state", "end_state", "tasks"],
    "properties": {
        "start_state": {
            "type": "object",
            "required": ["literals", "pose"],
            "properties": {
                "literals": {"type": "array", "items": {"type": "string"}},
                "pose": {"type": "string"},
            },
        },
        "end_state": {
            "type": "object",
            "required": ["literals", "point"],
            "properties": {
                "literals": {"type": "array", "items": {"type": "string"}},
                "point": {"type": "string"},
            },
        },
        "tasks": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["name"],
                "properties": {"name": {"type": "string"},
                               "params": {"type": "object"}},
            },
        },
    },
}


@dataclass(frozen=True)
class MissionGoal:
    """Symbolic mission goal: start/end literal sets plus a task set.

    Pose and point are names ("canyon_start", "canyon_end") resolved
    against the world by the orchestrator.
    """

    start_literals: tuple[str, ...]
    start_pose_name: str
    end_literals: tuple[str, ...]
    goal_point_name: str
    tasks: tuple[tuple[str, dict | None], ...]

    def __post_init__(self):
        names = self.allowed_tasks
        if not names:
            raise ValueError("goal must allow at least one task")
        bad = set(names) - set(PRIMITIVE_VOCABULARY)
        if bad:
            raise ValueError(f"tasks outside the action vocabulary: {sorted(bad)}")
        if not self.end_literals:
            raise ValueError("end_state must be non-empty")

    @property
    def allowed_tasks(self) -> tuple[str, ...]:
        seen = []
        for name, _ in self.tasks:
            if name not in seen:
                seen.append(name)
        return tuple(seen)

    # decompose() consumes allowed_tasks / end_literals directly.


@dataclass(frozen=True)
class PromptContext:
    """Everything the prompt template needs besides the command."""

    actions: tuple[str, ...] = (
        "perception()",
        "turn_left(angle)",
        "turn_right(angle)",
        "move_forward(distance)",
        "check()",
    )
    objects: tuple[str, ...] = ("canyon", "canyon_start", "canyon_end")
    environment: str = ("A planar canyon of known start and end positions; "
                        "the interior is unobserved until sensed.")
    exemplars: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class BackendReply:
    """Exactly one of goal / clarification / malformed is populated."""

    goal: MissionGoal | None = None
    clarification: str | None = None
    malformed: str | None = None

    def __post_init__(self):
        populated = sum(v is not None
                        for v in (self.goal, self.clarification, self.malformed))
        if populated != 1:
            raise ValueError("exactly one reply variant must be populated")

    @property
    def kind(self) -> str:
        if self.goal is not None:
            return "goal"
        if self.clarification is not None:
            return "clarification"
        return "malformed"


def build_prompt(ctx: PromptContext, command: str) -> str:
    """Deterministic prompt: role, action catalog, goal schema, exemplars,
    then the command (JSON-quoted so braces cannot break the schema block)."""
    if not command or not command.strip():
        raise EmptyCommand("command text is empty")
    lines = [
        "You translate an operator command for an autonomous underwater "
        "vehicle into a mission goal.",
        "",
        "Available actions:",
    ]
    lines += [f"  - {sig}" for sig in ctx.actions]
    lines += ["", "Known objects: " + ", ".join(ctx.objects), "",
              "Environment: " + ctx.environment, "",
              "Reply with a single JSON object matching this schema "
              "(no prose), or {\"clarify\": \"question\"} if the command "
              "is ambiguous:", "",
              "BEGIN_SCHEMA",
              json.dumps(GOAL_SCHEMA, indent=2, sort_keys=True),
              "END_SCHEMA", ""]
    for cmd, reply in ctx.exemplars:
        lines += [f"Command: {json.dumps(cmd)}", f"Reply: {reply}", ""]
    lines.append(f"Command: {json.dumps(command)}")
    lines.append("Reply:")
    return "\n".join(lines)


def _valid_goal_dict(data) -> bool:
    if not isinstance(data, dict):
        return False
    try:
        for side in ("start_state", "end_state"):
            part = data[side]
            if not isinstance(part["literals"], list):
                return False
            if not all(isinstance(s, str) for s in part["literals"]):
                return False
        if not isinstance(data["start_state"]["pose"], str):
            return False
        if not isinstance(data["end_state"]["point"], str):
            return False
        tasks = data["tasks"]
        if not isinstance(tasks, list) or not tasks:
            return False
        for t in tasks:
            if not isinstance(t, dict) or not isinstance(t.get("name"), str):
                return False
            if "params" in t and t["params"] is not None and not isinstance(t["params"], dict):
                return False
    except (KeyError, TypeError):
        return False
    return True


def parse_goal(raw: str) -> BackendReply:
    """Total parse of model output: Goal, Clarification, or Malformed."""
    try:
        data = json.loads(raw)
    except (json.JSONDecodeError, TypeError):
        return BackendReply(malformed=str(raw))
    if isinstance(data, dict) and isinstance(data.get("clarify"), str):
        return BackendReply(clarification=data["clarify"])
    if not _valid_goal_dict(data):
        return BackendReply(malformed=str(raw))
    try:
        goal = MissionGoal(
            start_literals=tuple(data["start_state"]["literals"]),
            start_pose_name=data["start_state"]["pose"],
            end_literals=tuple(data["end_state"]["literals"]),
            goal_point_name=data["end_state"]["point"],
            tasks=tuple((t["name"], t.get("params")) for t in data["tasks"]),
        )
    except ValueError:
        return BackendReply(malformed=str(raw))
    return BackendReply(goal=goal)


def serialize_goal(goal: MissionGoal) -> dict:
    """Normalized schema form; round-trips through parse_goal."""
    return {
        "start_state": {"literals": list(goal.start_literals),
                        "pose": goal.start_pose_name},
        "end_state": {"literals": list(goal.end_literals),
                      "point": goal.goal_point_name},
        "tasks": [{"name": name} if params is None
                  else {"name": name, "params": params}
                  for name, params in goal.tasks],
    }


class ScriptedBackend:
    """Exact-match command table; fully deterministic."""

    def __init__(self, table: dict[str, str]):
        self.table = dict(table)

    @classmethod
    def from_file(cls, path) -> "ScriptedBackend":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    @classmethod
    def default(cls) -> "ScriptedBackend":
        text = resources.files("auvnav.data").joinpath(
            "scripted_replies.json").read_text()
        return cls(json.loads(text))

    def complete(self, prompt: str, command: str) -> str:
        if command not in self.table:
            raise UnknownCommand(f"no scripted reply for {command!r}")
        return self.table[command]


class HttpBackend:
    """One chat-completion POST per submit, with retries and a timeout.

    Wire contract: POST {model, messages[], temperature: 0} to `url` with
    a bearer token read from `token_env`; the reply text is taken from
    the first choice.
    """

    def __init__(self, url: str, model: str = "gpt-4",
                 token_env: str = "AUVNAV_API_TOKEN",
                 timeout: float = 30.0, retries: int = 2,
                 max_in_flight: int = 4, transport=None):
        self.url = url
        self.model = model
        self.token_env = token_env
        self.timeout = timeout
        self.retries = retries
        self._gate = threading.Semaphore(max_in_flight)
        self._transport = transport  # injectable for contract tests

    def complete(self, prompt: str, command: str) -> str:
        headers = {}
        token = os.environ.get(self.token_env)
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {"model": self.model,
                "messages": [{"role": "user", "content": prompt}],
                "temperature": 0}
        last_exc: Exception | None = None
        with self._gate:
            for _ in range(self.retries + 1):
                try:
                    with httpx.Client(transport=self._transport,
                                      timeout=self.timeout) as client:
                        resp = client.post(self.url, json=body, headers=headers)
                except (httpx.TimeoutException, httpx.ConnectError) as exc:
                    last_exc = exc
                    continue
                if resp.status_code != 200:
                    raise BackendRefused(f"HTTP {resp.status_code}")
                try:
                    return resp.json()["choices"][0]["message"]["content"]
                except (KeyError, IndexError, json.JSONDecodeError) as exc:
                    raise BackendRefused(f"unparseable completion: {exc}") from exc
        raise BackendTimeout(f"no answer after {self.retries + 1} attempts: {last_exc}")


def submit(backend, ctx: PromptContext, command: str) -> BackendReply:
    """Build the prompt, query the backend, parse whatever comes back."""
    prompt = build_prompt(ctx, command)
    raw = backend.complete(prompt, command)
    return parse_goal(raw)
