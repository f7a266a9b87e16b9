"""Manual smoke test against a real chat-completions endpoint.

Run with:  LLM_BASE_URL=... LLM_API_KEY=... LLM_MODEL=... pytest -m live
Skipped (and deselected by default) when the endpoint is not configured.
"""
from __future__ import annotations

import os

import pytest

from dtconsult import HttpChatProvider, chat_turn
from dtconsult.prompts import DEFAULT_TEMPLATE
from dtconsult.store import Role
from dtconsult.workflow import SENTINEL_TEXT, Phase, record_priorities

LIVE_VARS = ("LLM_BASE_URL", "LLM_API_KEY", "LLM_MODEL")

pytestmark = [
    pytest.mark.live,
    pytest.mark.skipif(
        not all(os.environ.get(v) for v in LIVE_VARS),
        reason="live endpoint not configured (set LLM_BASE_URL, LLM_API_KEY, LLM_MODEL)",
    ),
]


def test_one_category_completes_with_verbatim_questions(store, profile, catalog):
    provider = HttpChatProvider(
        base_url=os.environ["LLM_BASE_URL"],
        api_key=os.environ["LLM_API_KEY"],
    )
    model = os.environ["LLM_MODEL"]
    question_texts = {q.text for c in catalog.categories for q in c.questions}

    session = store.create_session(profile, catalog_version=catalog.version)
    state = record_priorities(session.state, ["rnd"], catalog)  # smallest category
    session = store.append_messages(session.session_id, [], state=state)

    answers = iter(
        ["We have a small design team of two engineers.",
         "No, everything is tracked in spreadsheets."] * 40
    )
    session = store.load(session.session_id)
    outcome = chat_turn(
        session, "Hello, I am ready to start. Please ask your questions one at a time.",
        provider, catalog=catalog, store=store, template=DEFAULT_TEMPLATE, model=model,
    )
    for _ in range(30):  # generous cap; rnd has 10 questions plus the sentinel
        session = store.load(session.session_id)
        if session.state.phase is Phase.COMPLETED:
            break
        outcome = chat_turn(
            session, next(answers), provider,
            catalog=catalog, store=store, template=DEFAULT_TEMPLATE, model=model,
        )
        # each turn retrieves at most one catalog question, relayed verbatim
        questions_this_turn = [
            result for _, result in outcome.tool_trace if result in question_texts
        ]
        assert len(questions_this_turn) <= 1
        for question in questions_this_turn:
            assert question in outcome.assistant_text

    final = store.load(session.session_id)
    assert final.state.phase is Phase.COMPLETED
    served = [m.content for m in final.messages if m.role is Role.TOOL]
    assert served.count(SENTINEL_TEXT) >= 1
    asked = [c for c in served if c in question_texts]
    assert sorted(asked) == sorted(q.text for q in catalog.category("rnd").questions)
