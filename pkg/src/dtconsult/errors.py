"""Exception types shared across the package."""
from __future__ import annotations


class DtConsultError(Exception):
    """Base class for all package errors."""


class CatalogError(DtConsultError):
    """Catalog document failed to parse or validate.

    ``location`` points at the offending element, e.g. ``categories[2].questions[5]``.
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class CategoryMatchError(DtConsultError):
    """A free-text category name could not be resolved to exactly one category."""

    def __init__(self, message: str, valid_names: list[str], ambiguous: bool = False):
        self.valid_names = valid_names
        self.ambiguous = ambiguous
        super().__init__(message)


class WorkflowError(DtConsultError):
    """Workflow state machine misuse (wrong phase, bad category, bad ranking)."""


class PhaseError(WorkflowError):
    """Operation called in a phase that does not allow it."""


class StoreError(DtConsultError):
    """Session persistence failure."""


class SessionNotFound(StoreError):
    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"session not found: {session_id}")


class SessionCompleted(StoreError):
    """Write or resume attempted on a completed session."""

    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(
            f"session {session_id} is completed; retrieve its report instead of resuming"
        )


class SequenceConflict(StoreError):
    """Appended message ids do not continue the persisted sequence."""


class CorruptSession(StoreError):
    """Stored session document failed schema validation.

    ``path`` names the offending field, e.g. ``messages[3].role``.
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class LeaseHeld(StoreError):
    """Another turn already holds this session's exclusive lease."""

    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"a turn is already in flight for session {session_id}")


class ProviderError(DtConsultError):
    """LLM or STT provider call failed."""

    def __init__(self, message: str, status: int | None = None, retriable: bool = True):
        self.status = status
        self.retriable = retriable
        super().__init__(message)


class ScriptExhausted(DtConsultError):
    """Scripted test provider received more calls than its script covers."""


class TurnAborted(DtConsultError):
    """The tool loop aborted; session state was rolled back to the pre-turn snapshot."""


class ToolBudgetExceeded(TurnAborted):
    def __init__(self, max_tool_iterations: int):
        self.max_tool_iterations = max_tool_iterations
        super().__init__(
            f"provider kept requesting tools beyond {max_tool_iterations} iterations; turn aborted"
        )


class UnknownToolRepeated(TurnAborted):
    def __init__(self, name: str):
        self.tool_name = name
        super().__init__(f"provider called unknown tool {name!r} twice; turn aborted")


class TranscriptionError(DtConsultError):
    """Audio input rejected or STT provider failed."""


class UnsupportedMediaType(TranscriptionError):
    def __init__(self, media_type: str, allowed: tuple[str, ...]):
        self.media_type = media_type
        super().__init__(
            f"unsupported media type {media_type!r}; accepted: {', '.join(allowed)}"
        )


class PayloadTooLarge(TranscriptionError):
    def __init__(self, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"audio payload of {size} bytes exceeds the {cap}-byte cap")


class ReportError(DtConsultError):
    """Report generation failure."""


class ReportSchemaError(ReportError):
    """Provider output failed report schema validation after the repair attempt."""
