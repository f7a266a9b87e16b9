"""Shared test utilities: scripted-provider builders and the sentinel-loop
property runner used by both the unit suite and the acceptance gate."""
from __future__ import annotations

import json

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from dtconsult import (
    ProviderResponse,
    ScriptedChatProvider,
    ToolCall,
    WorkflowState,
    record_priorities,
    retrieve_question,
)
from dtconsult.catalog import QuestionCatalog
from dtconsult.prompts import TOOL_NAME
from dtconsult.workflow import Phase, progress


def text(content: str) -> ProviderResponse:
    return ProviderResponse.from_text(content)


def tool_call(
    category: str | None = None,
    *,
    call_id: str = "call_1",
    name: str = TOOL_NAME,
    raw_args: str | None = None,
) -> ProviderResponse:
    args = raw_args if raw_args is not None else json.dumps({"category": category})
    return ProviderResponse.from_tool_calls(ToolCall(id=call_id, name=name, arguments=args))


def full_coverage_script(catalog: QuestionCatalog, priority_order: list[str]) -> ScriptedChatProvider:
    """Script that retrieves every question of every category, one per turn.

    Each turn is "retrieve -> echo": a tool call for the current category,
    then assistant text. The turn after a category's last question retrieves
    the sentinel and announces the switch.
    """
    responses: list[ProviderResponse] = []
    call_counter = 0
    for cid in priority_order:
        count = catalog.category(cid).question_count()
        for _ in range(count + 1):  # questions plus the sentinel retrieval
            call_counter += 1
            responses.append(tool_call(cid, call_id=f"call_{call_counter}"))
            responses.append(text(f"(asking from {cid})"))
    return ScriptedChatProvider(script=responses)


def turn_count_for(catalog: QuestionCatalog, priority_order: list[str]) -> int:
    return sum(catalog.category(cid).question_count() + 1 for cid in priority_order)


def run_sentinel_loop_property(catalog: QuestionCatalog, max_examples: int) -> None:
    """Property: under any priority subset and retrieval interleaving,
    questions are served exactly once in catalog order, the sentinel appears
    only after exhaustion and then stays stable, cursors only grow, and
    asked+remaining is conserved.

    Each generated case runs a random retrieval prefix, then drains every
    category to completion, then retrieves a few more times past completion.
    """
    all_ids = list(catalog.category_ids())
    counts = {c.id: c.question_count() for c in catalog.categories}
    texts = {c.id: [q.text for q in c.questions] for c in catalog.categories}

    @settings(
        max_examples=max_examples,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
    )
    @given(data=st.data())
    def case(data) -> None:
        k = data.draw(st.integers(min_value=1, max_value=len(all_ids)))
        perm = data.draw(st.permutations(all_ids))
        subset = list(perm)[:k]
        state = record_priorities(WorkflowState(), subset, catalog)
        assert state.phase is Phase.INTERVIEWING

        served: dict[str, list[str]] = {cid: [] for cid in subset}
        sentinels: dict[str, int] = {cid: 0 for cid in subset}

        def step(cid: str) -> None:
            nonlocal state
            before = dict(state.cursor)
            retrieval = retrieve_question(state, catalog, cid)
            after = dict(retrieval.state.cursor)
            if retrieval.is_sentinel:
                # sentinel only after exhaustion; never moves any cursor
                assert before[cid] == counts[cid]
                assert after == before
                sentinels[cid] += 1
            else:
                # next question in catalog order, exactly once
                assert retrieval.question.text == texts[cid][before[cid]]
                assert after[cid] == before[cid] + 1
                served[cid].append(retrieval.question.text)
            for other in subset:
                if other != cid:
                    assert after[other] == before[other]  # cursor isolation
            state = retrieval.state
            snapshot = progress(state, catalog)
            for pcid in subset:
                entry = snapshot.per_category[pcid]
                assert entry.asked + entry.remaining == counts[pcid]
                assert entry.asked == state.cursor[pcid]
            assert snapshot.total_asked + snapshot.total_remaining == sum(
                counts[pcid] for pcid in subset
            )
            # completion exactly when everything is exhausted and sentineled
            done = all(
                state.cursor[pcid] == counts[pcid] and sentinels[pcid] > 0
                for pcid in subset
            )
            assert (state.phase is Phase.COMPLETED) == done

        prefix = data.draw(st.lists(st.sampled_from(subset), min_size=0, max_size=40))
        for cid in prefix:
            step(cid)
        for cid in subset:  # drain to completion
            while state.cursor[cid] < counts[cid] or sentinels[cid] == 0:
                step(cid)
        assert state.phase is Phase.COMPLETED
        for cid in subset:
            assert served[cid] == texts[cid]  # exactly-once, full coverage
        stable = state
        for cid in list(subset)[:3]:  # sentinel stays stable after completion
            retrieval = retrieve_question(state, catalog, cid)
            assert retrieval.is_sentinel
            assert retrieval.state == stable
            state = retrieval.state

    case()
