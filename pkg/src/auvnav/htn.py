"""Hierarchical task planner: methods decompose compound tasks into the
five primitive actions, constrained by Boolean preconditions and effects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .errors import DomainError, NoDecomposition, PreconditionViolated, UnknownTask

PRIMITIVE_VOCABULARY = ("perception", "turn_left", "turn_right", "move_forward", "check")
PREDICATE_VOCABULARY = ("at_goal", "perception_fresh", "path_clear",
                        "collision_free", "mission_failed")

SymbolicState = frozenset  # of predicate name strings (closed world)


def holds(literal: str, state: SymbolicState) -> bool:
    """Evaluate one literal; a leading '!' negates (closed world)."""
    if literal.startswith("!"):
        return literal[1:] not in state
    return literal in state


@dataclass(frozen=True)
class PrimitiveTask:
    """A grounded logical action with add/delete effects.

    params carries an angle (degrees) or distance (meters) when known;
    None leaves the grounding to the motion planner.
    """

    name: str
    params: dict | None = None
    preconditions: tuple[str, ...] = ()
    add: tuple[str, ...] = ()
    delete: tuple[str, ...] = ()

    def __post_init__(self):
        if set(self.add) & set(self.delete):
            raise DomainError(f"task {self.name}: add and delete sets overlap")
        if self.params:
            angle = self.params.get("angle")
            if angle is not None and not (0.0 < angle <= 180.0):
                raise DomainError(f"task {self.name}: angle {angle} outside (0, 180]")
            distance = self.params.get("distance")
            if distance is not None and distance <= 0.0:
                raise DomainError(f"task {self.name}: distance {distance} <= 0")

    def __hash__(self):
        return hash((self.name, tuple(sorted((self.params or {}).items()))))


@dataclass(frozen=True)
class Method:
    """One way to decompose a compound task."""

    task: str
    name: str
    applicability: tuple[str, ...]
    subtasks: tuple[str, ...]


@dataclass
class Domain:
    """Predicate vocabulary, primitive actions, and decomposition methods."""

    predicates: tuple[str, ...]
    primitives: dict[str, PrimitiveTask]
    methods: dict[str, list[Method]]
    root: str

    def __post_init__(self):
        for name in self.primitives:
            if name not in PRIMITIVE_VOCABULARY:
                raise DomainError(f"primitive {name!r} outside the action vocabulary")
        for prim in self.primitives.values():
            for lit in prim.preconditions + prim.add + prim.delete:
                if lit.lstrip("!") not in self.predicates:
                    raise DomainError(f"unregistered predicate {lit!r}")
        if self.root not in self.methods:
            raise DomainError(f"root task {self.root!r} has no methods")


@dataclass
class TaskPlan:
    """Ordered grounded primitives, executable from the initial state."""

    steps: list[PrimitiveTask] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)


def load_domain(source) -> Domain:
    """Parse a domain from a JSON dict, JSON string, or file path."""
    if isinstance(source, dict):
        data = source
    elif isinstance(source, str) and source.lstrip().startswith("{"):
        data = json.loads(source)
    else:
        with open(source, encoding="utf-8") as fh:
            data = json.load(fh)
    try:
        primitives = {
            name: PrimitiveTask(name=name,
                                preconditions=tuple(spec.get("preconditions", [])),
                                add=tuple(spec.get("add", [])),
                                delete=tuple(spec.get("delete", [])))
            for name, spec in data["primitives"].items()
        }
        methods: dict[str, list[Method]] = {}
        for task, options in data["compound"].items():
            methods[task] = [Method(task=task, name=m["name"],
                                    applicability=tuple(m.get("applicability", [])),
                                    subtasks=tuple(m["subtasks"]))
                             for m in options]
        return Domain(predicates=tuple(data["predicates"]),
                      primitives=primitives, methods=methods,
                      root=data["root"])
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed domain file: {exc}") from exc


def default_domain() -> Domain:
    text = resources.files("auvnav.data").joinpath("canyon_domain.json").read_text()
    return load_domain(json.loads(text))


def apply_task(task: PrimitiveTask, state: SymbolicState) -> SymbolicState:
    """Apply effects if preconditions hold; pure."""
    for lit in task.preconditions:
        if not holds(lit, state):
            raise PreconditionViolated(lit, task.name)
    return frozenset((state - set(task.delete)) | set(task.add))


def validate_plan(plan: TaskPlan, state: SymbolicState) -> tuple[bool, int | None]:
    """Simulate the plan; (True, None) or (False, first failing index)."""
    current = state
    for i, task in enumerate(plan.steps):
        try:
            current = apply_task(task, current)
        except PreconditionViolated:
            return False, i
    return True, None


def decompose(goal, state: SymbolicState, domain: Domain,
              bound: int = 50) -> TaskPlan:
    """Depth-first decomposition with backtracking.

    goal supplies allowed task names and end-state literals (a MissionGoal
    or any object with allowed_tasks / end_literals). Returns the first
    plan whose simulated end state satisfies every end-state literal.
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    allowed = set(goal.allowed_tasks)
    for name in allowed:
        if name not in PRIMITIVE_VOCABULARY:
            raise UnknownTask(f"task {name!r} not in the action vocabulary")
        if name not in domain.primitives:
            raise UnknownTask(f"task {name!r} not declared in the domain")
    end_literals = tuple(goal.end_literals)

    def search(tasks: tuple[str, ...], current: SymbolicState,
               depth: int) -> list[PrimitiveTask] | None:
        if depth > bound:
            return None
        if not tasks:
            return [] if all(holds(lit, current) for lit in end_literals) else None
        head, rest = tasks[0], tasks[1:]
        if head in domain.primitives:
            if head not in allowed:
                return None
            prim = domain.primitives[head]
            try:
                nxt = apply_task(prim, current)
            except PreconditionViolated:
                return None
            tail = search(rest, nxt, depth + 1)
            return None if tail is None else [prim] + tail
        if head not in domain.methods:
            raise UnknownTask(f"task {head!r} unknown to the domain")
        for method in domain.methods[head]:
            if not all(holds(lit, current) for lit in method.applicability):
                continue
            result = search(method.subtasks + rest, current, depth + 1)
            if result is not None:
                return result
        return None

    steps = search((domain.root,), state, 0)
    if steps is None:
        raise NoDecomposition(
            f"no decomposition of {domain.root!r} within bound {bound}")
    plan = TaskPlan(steps=steps)
    ok, _ = validate_plan(plan, state)
    assert ok, "decompose produced an inexecutable plan"
    return plan
