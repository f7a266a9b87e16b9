"""Deterministic interview state machine.

All transitions are pure: they take a state and return a new one, never
mutating in place, so states are safe to snapshot, persist, and move between
threads. The sentinel value rendered to the tool-result channel when a
category runs out of questions is exactly ``All questions completed``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from types import MappingProxyType
from typing import Mapping

from .catalog import Question, QuestionCatalog
from .errors import PhaseError, WorkflowError

SENTINEL_TEXT = "All questions completed"


class Phase(str, Enum):
    AWAITING_PRIORITIES = "awaiting_priorities"
    INTERVIEWING = "interviewing"
    COMPLETED = "completed"


@dataclass(frozen=True)
class WorkflowState:
    phase: Phase = Phase.AWAITING_PRIORITIES
    priority_order: tuple[str, ...] = ()
    active_category: str | None = None
    # next-question index per selected category (count of questions already served)
    cursor: Mapping[str, int] = field(default_factory=dict)
    sentinel_issued: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "cursor", MappingProxyType(dict(self.cursor)))

    def to_dict(self) -> dict:
        return {
            "phase": self.phase.value,
            "priority_order": list(self.priority_order),
            "active_category": self.active_category,
            "cursor": dict(self.cursor),
            "sentinel_issued": sorted(self.sentinel_issued),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "WorkflowState":
        return cls(
            phase=Phase(doc["phase"]),
            priority_order=tuple(doc["priority_order"]),
            active_category=doc["active_category"],
            cursor=dict(doc["cursor"]),
            sentinel_issued=frozenset(doc["sentinel_issued"]),
        )


@dataclass(frozen=True)
class Retrieval:
    """Result of one retrieve_question call: a question or the sentinel."""

    question: Question | None
    state: WorkflowState

    @property
    def is_sentinel(self) -> bool:
        return self.question is None

    @property
    def rendered_text(self) -> str:
        return SENTINEL_TEXT if self.question is None else self.question.text


@dataclass(frozen=True)
class CategoryProgress:
    asked: int
    remaining: int


@dataclass(frozen=True)
class Progress:
    per_category: Mapping[str, CategoryProgress]
    total_asked: int
    total_remaining: int

    def __post_init__(self):
        object.__setattr__(self, "per_category", MappingProxyType(dict(self.per_category)))


def record_priorities(state: WorkflowState, ordered_ids: list[str], catalog: QuestionCatalog) -> WorkflowState:
    """Record the client's ranked category priorities and start interviewing.

    Accepts 1 to all of the catalog's categories; the interview proceeds
    through them in the given order.
    """
    if state.phase is not Phase.AWAITING_PRIORITIES:
        raise PhaseError(f"priorities already recorded (phase={state.phase.value})")
    if not ordered_ids:
        raise WorkflowError("priority ranking is empty")
    known = set(catalog.category_ids())
    seen: set[str] = set()
    for cid in ordered_ids:
        if cid not in known:
            raise WorkflowError(f"unknown category id {cid!r}")
        if cid in seen:
            raise WorkflowError(f"duplicated category id {cid!r} in ranking")
        seen.add(cid)
    return WorkflowState(
        phase=Phase.INTERVIEWING,
        priority_order=tuple(ordered_ids),
        active_category=ordered_ids[0],
        cursor={cid: 0 for cid in ordered_ids},
        sentinel_issued=frozenset(),
    )


def retrieve_question(state: WorkflowState, catalog: QuestionCatalog, category: str) -> Retrieval:
    """Serve the next question of ``category``, or the sentinel once exhausted.

    Questions come back verbatim in catalog order, each exactly once; after
    the last one every further call yields the sentinel. Once every selected
    category has been exhausted and sentineled the phase flips to completed
    (where the sentinel keeps being returned, stable).
    """
    if state.phase is Phase.AWAITING_PRIORITIES:
        raise PhaseError("no priorities recorded yet")
    if category not in state.priority_order:
        selected = ", ".join(state.priority_order)
        raise WorkflowError(
            f"category {category!r} is not in the recorded priorities ({selected})"
        )
    cat = catalog.category(category)
    served = state.cursor[category]
    if served < cat.question_count():
        cursor = dict(state.cursor)
        cursor[category] = served + 1
        new_state = replace(state, active_category=category, cursor=cursor)
        return Retrieval(question=cat.questions[served], state=new_state)

    if state.phase is Phase.COMPLETED:
        return Retrieval(question=None, state=state)

    sentinel_issued = state.sentinel_issued | {category}
    done = all(
        state.cursor[cid] == catalog.category(cid).question_count() and cid in sentinel_issued
        for cid in state.priority_order
    )
    if done:
        new_state = replace(
            state,
            phase=Phase.COMPLETED,
            active_category=None,
            sentinel_issued=sentinel_issued,
        )
    else:
        new_state = replace(state, active_category=category, sentinel_issued=sentinel_issued)
    return Retrieval(question=None, state=new_state)


def progress(state: WorkflowState, catalog: QuestionCatalog) -> Progress:
    """Per-category and total asked/remaining counts, straight from the cursors."""
    if state.phase is Phase.AWAITING_PRIORITIES:
        raise PhaseError("no priorities recorded yet")
    per_category: dict[str, CategoryProgress] = {}
    total_asked = 0
    total_remaining = 0
    for cid in state.priority_order:
        count = catalog.category(cid).question_count()
        asked = state.cursor[cid]
        per_category[cid] = CategoryProgress(asked=asked, remaining=count - asked)
        total_asked += asked
        total_remaining += count - asked
    return Progress(
        per_category=per_category,
        total_asked=total_asked,
        total_remaining=total_remaining,
    )
