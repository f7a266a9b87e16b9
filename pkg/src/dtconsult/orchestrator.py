"""One conversational turn: user text in, committed transcript out.

The loop is transactional. All work happens on copies (a message buffer and
a workflow state value); nothing touches the store until the provider has
produced final assistant text, at which point the whole turn commits in one
``append_messages`` call. Any abort (tool budget, repeated unknown tool,
provider failure) leaves the stored session byte-identical.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .catalog import QuestionCatalog, resolve_category
from .errors import (
    CategoryMatchError,
    SessionCompleted,
    ToolBudgetExceeded,
    UnknownToolRepeated,
    WorkflowError,
)
from .prompts import TOOL_NAME, PromptTemplate, tool_schema
from .providers import ChatProvider, ProviderRequest, ProviderResponse, ToolCall
from .store import Message, Modality, Role, Session, SessionStore, format_timestamp
from .workflow import Phase, WorkflowState, record_priorities, retrieve_question


@dataclass(frozen=True)
class TurnOutcome:
    assistant_text: str
    # every tool call the model made this turn, with the rendered result text
    tool_trace: tuple[tuple[ToolCall, str], ...]
    state: WorkflowState


def _wire_history(messages) -> list[dict]:
    """Replayable wire messages from the persisted transcript.

    Tool results are persisted without their assistant call stubs, so they
    are omitted here; each turn's tool exchange lives only inside that turn.
    """
    wire = []
    for msg in messages:
        if msg.role in (Role.SYSTEM, Role.USER, Role.ASSISTANT):
            wire.append({"role": msg.role.value, "content": msg.content})
    return wire


def _auto_ranking(first: str, catalog: QuestionCatalog) -> list[str]:
    """Ranking implied by the first retrieval when the model skips an explicit one."""
    rest = [cid for cid in catalog.category_ids() if cid != first]
    return [first, *rest]


def _execute_tool_call(
    call: ToolCall,
    state: WorkflowState,
    catalog: QuestionCatalog,
) -> tuple[str, WorkflowState]:
    """Run one retrieve_question call; errors become tool-result text, not aborts."""
    try:
        args = json.loads(call.arguments)
    except ValueError:
        args = None
    if not isinstance(args, dict) or not isinstance(args.get("category"), str):
        ids = ", ".join(catalog.category_ids())
        return (
            "Error: arguments must be a JSON object like "
            f'{{"category": "<domain id>"}}. Valid domain ids: {ids}.',
            state,
        )
    try:
        cid = resolve_category(args["category"], catalog)
    except CategoryMatchError as exc:
        return f"Error: {exc}", state

    if state.phase is Phase.AWAITING_PRIORITIES:
        state = record_priorities(state, _auto_ranking(cid, catalog), catalog)
    try:
        retrieval = retrieve_question(state, catalog, cid)
    except WorkflowError as exc:
        return f"Error: {exc}", state
    return retrieval.rendered_text, retrieval.state


def chat_turn(
    session: Session,
    user_text: str,
    provider: ChatProvider,
    *,
    catalog: QuestionCatalog,
    store: SessionStore,
    template: PromptTemplate,
    model: str,
    temperature: float = 0.2,
    max_tool_iterations: int = 8,
    modality: Modality = Modality.TEXT,
    detected_language: str | None = None,
) -> TurnOutcome:
    """Run one turn of the interview and commit it atomically.

    ``max_tool_iterations`` bounds executed tool rounds (provider responses
    that contain tool calls); the response after the last allowed round must
    be text or the turn aborts.
    """
    if session.status == "completed":
        raise SessionCompleted(session.session_id)
    user_text = user_text.rstrip()
    if not user_text:
        raise ValueError("user_text is empty")

    next_id = session.next_message_id()
    now = lambda: format_timestamp(store.clock())  # noqa: E731
    new_messages: list[Message] = []

    def persist(role: Role, content: str, *, msg_modality: Modality = Modality.TEXT,
                language: str | None = None, tool_call_id: str | None = None) -> None:
        nonlocal next_id
        new_messages.append(Message(
            id=next_id,
            role=role,
            content=content,
            modality=msg_modality,
            timestamp=now(),
            detected_language=language,
            tool_call_id=tool_call_id,
        ))
        next_id += 1

    wire = _wire_history(session.messages)
    if not session.messages:
        system_text = template.system_text(session.profile, catalog)
        persist(Role.SYSTEM, system_text)
        wire.append({"role": "system", "content": system_text})
    persist(Role.USER, user_text, msg_modality=modality, language=detected_language)
    wire.append({"role": "user", "content": user_text})

    tools = (tool_schema(catalog),)
    state = session.state
    trace: list[tuple[ToolCall, str]] = []
    rounds_executed = 0
    unknown_tool_seen = False

    while True:
        response: ProviderResponse = provider.complete(ProviderRequest(
            messages=tuple(wire),
            tools=tools,
            model=model,
            temperature=temperature,
        ))
        if response.text is not None:
            persist(Role.ASSISTANT, response.text.rstrip())
            break

        if rounds_executed >= max_tool_iterations:
            raise ToolBudgetExceeded(max_tool_iterations)
        rounds_executed += 1

        wire.append({
            "role": "assistant",
            "content": None,
            "tool_calls": [
                {
                    "id": call.id,
                    "type": "function",
                    "function": {"name": call.name, "arguments": call.arguments},
                }
                for call in response.tool_calls
            ],
        })
        for call in response.tool_calls:
            if call.name != TOOL_NAME:
                if unknown_tool_seen:
                    raise UnknownToolRepeated(call.name)
                unknown_tool_seen = True
                result = f"Error: unknown tool {call.name!r}; only {TOOL_NAME} is available."
            else:
                result, state = _execute_tool_call(call, state, catalog)
            trace.append((call, result))
            persist(Role.TOOL, result, tool_call_id=call.id)
            wire.append({"role": "tool", "tool_call_id": call.id, "content": result})

    store.append_messages(session.session_id, new_messages, state=state)
    return TurnOutcome(
        assistant_text=new_messages[-1].content,
        tool_trace=tuple(trace),
        state=state,
    )
