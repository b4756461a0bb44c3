"""Exception hierarchy shared across the planning stack."""


class AuvNavError(Exception):
    """Base class for all package errors."""


# --- simulation ---

class PoseInObstacle(AuvNavError):
    """The vehicle pose lies inside an occupied cell."""


class OutOfBounds(AuvNavError):
    """A query (pose, disc, cell) left the grid."""


class InfeasibleParams(AuvNavError):
    """Map generator parameters cannot produce a valid world."""


# --- belief ---

class DimensionMismatch(AuvNavError):
    """Grid dimensions or resolution disagree."""


# --- HTN ---

class UnknownTask(AuvNavError):
    """A goal references a task name missing from the domain."""


class NoDecomposition(AuvNavError):
    """Backtracking exhausted all methods within the recursion bound."""


class PreconditionViolated(AuvNavError):
    """A primitive task's precondition does not hold.

    Carries the first failing literal in ``literal``.
    """

    def __init__(self, literal: str, task: str = ""):
        self.literal = literal
        self.task = task
        super().__init__(f"precondition {literal!r} does not hold"
                         + (f" for task {task!r}" if task else ""))


class DomainError(AuvNavError):
    """Malformed task domain file."""


# --- motion planning ---

class CollisionOnSweep(AuvNavError):
    """A primitive's swept disc crosses a blocked cell.

    ``point`` is the first blocking (x, y) sample along the sweep.
    """

    def __init__(self, point):
        self.point = point
        super().__init__(f"sweep blocked at {point}")


class NoPath(AuvNavError):
    """A* open set emptied before reaching the goal region."""


class BudgetExhausted(AuvNavError):
    """A* hit its node expansion budget."""


class PrimitiveNotRegistered(AuvNavError):
    """A motion primitive uses a turn/advance outside the registered sets."""


# --- goal bridge ---

class EmptyCommand(AuvNavError):
    """The operator command text is empty."""


class UnknownCommand(AuvNavError):
    """Scripted backend has no reply for this command."""


class BackendTimeout(AuvNavError):
    """HTTP backend did not answer within the retry budget."""


class BackendRefused(AuvNavError):
    """HTTP backend answered with a refusal (non-2xx)."""


# --- orchestrator / logs / config ---

class StaleScan(AuvNavError):
    """A check was asked to judge a scan from a different step."""


class CorruptLine(AuvNavError):
    """A mission log line failed to parse.

    ``line_number`` is 1-based.
    """

    def __init__(self, line_number: int, reason: str = ""):
        self.line_number = line_number
        super().__init__(f"corrupt log line {line_number}"
                         + (f": {reason}" if reason else ""))


class ConfigError(AuvNavError):
    """Mission configuration is invalid or references missing files."""
