from __future__ import annotations

import json

import pytest

from dtconsult import ScriptedChatProvider
from dtconsult.errors import ReportError, ReportSchemaError
from dtconsult.report import (
    Report,
    answered_questions,
    generate_report,
    render_report_markdown,
    render_transcript,
)
from dtconsult.store import Message, Modality, Role
from dtconsult.workflow import SENTINEL_TEXT

from helpers import text

MODEL = "test-model"

VALID_SECTIONS = {
    "current_practices": ["Orders tracked in a spreadsheet"],
    "challenges": ["No live stock visibility"],
    "strategic_goals": ["Move to a barcode-based warehouse"],
}


def build_session(store, profile, contents):
    """contents: list of (role, content) or (role, content, tool_call_id)."""
    session = store.create_session(profile, catalog_version="1.0")
    messages = []
    for i, entry in enumerate(contents, start=1):
        role, content = entry[0], entry[1]
        tool_call_id = entry[2] if len(entry) > 2 else ("c%d" % i if role is Role.TOOL else None)
        messages.append(Message(
            id=i, role=role, content=content, modality=Modality.TEXT,
            timestamp="2025-03-01T09:30:00.000Z", tool_call_id=tool_call_id,
        ))
    return store.append_messages(session.session_id, messages, state=session.state)


def q(catalog, cid, index):
    return catalog.category(cid).questions[index].text


class TestAnsweredQuestions:
    def test_basic_pairing(self, store, profile, catalog):
        session = build_session(store, profile, [
            (Role.SYSTEM, "prompt"),
            (Role.USER, "hello"),
            (Role.TOOL, q(catalog, "supply", 0)),
            (Role.ASSISTANT, "First question..."),
            (Role.USER, "We plan weekly."),
        ])
        pairs = answered_questions(session, catalog)
        assert len(pairs) == 1
        assert pairs[0].question_id == "supply.1"
        assert pairs[0].question_text == q(catalog, "supply", 0)
        assert pairs[0].answer_text == "We plan weekly."

    def test_unanswered_question_excluded(self, store, profile, catalog):
        session = build_session(store, profile, [
            (Role.TOOL, q(catalog, "supply", 0)),
            (Role.USER, "Answer one."),
            (Role.TOOL, q(catalog, "supply", 1)),   # never answered
            (Role.TOOL, q(catalog, "supply", 2)),
            (Role.USER, "Answer three."),
        ])
        pairs = answered_questions(session, catalog)
        assert [p.question_id for p in pairs] == ["supply.1", "supply.3"]

    def test_consecutive_user_messages_joined(self, store, profile, catalog):
        session = build_session(store, profile, [
            (Role.TOOL, q(catalog, "rnd", 0)),
            (Role.USER, "Yes, we have one."),
            (Role.ASSISTANT, "Could you expand?"),
            (Role.USER, "Three engineers."),
        ])
        pairs = answered_questions(session, catalog)
        assert pairs[0].answer_text == "Yes, we have one.\n\nThree engineers."

    def test_sentinel_closes_window(self, store, profile, catalog):
        session = build_session(store, profile, [
            (Role.TOOL, q(catalog, "rnd", 9)),
            (Role.TOOL, SENTINEL_TEXT),
            (Role.USER, "This is not an answer to rnd.10."),
        ])
        assert answered_questions(session, catalog) == []

    def test_error_tool_result_leaves_window_open(self, store, profile, catalog):
        session = build_session(store, profile, [
            (Role.TOOL, q(catalog, "rnd", 0)),
            (Role.TOOL, "Error: unknown tool 'x'; only retrieve_question is available."),
            (Role.USER, "Still answering the question."),
        ])
        pairs = answered_questions(session, catalog)
        assert [p.question_id for p in pairs] == ["rnd.1"]

    def test_user_talk_before_any_question_ignored(self, store, profile, catalog):
        session = build_session(store, profile, [
            (Role.USER, "hello"),
            (Role.ASSISTANT, "hi, rank your priorities"),
            (Role.USER, "supply first"),
        ])
        assert answered_questions(session, catalog) == []


class TestGenerateReport:
    def answered_session(self, store, profile, catalog):
        return build_session(store, profile, [
            (Role.TOOL, q(catalog, "supply", 0)),
            (Role.USER, "We plan weekly on a whiteboard."),
        ])

    def test_valid_first_try(self, store, profile, catalog, frozen_clock):
        session = self.answered_session(store, profile, catalog)
        provider = ScriptedChatProvider(script=[text(json.dumps(VALID_SECTIONS))])
        report = generate_report(
            session, provider, catalog=catalog, model=MODEL, clock=frozen_clock,
        )
        assert report.current_practices == ("Orders tracked in a spreadsheet",)
        assert report.challenges == ("No live stock visibility",)
        assert report.strategic_goals == ("Move to a barcode-based warehouse",)
        assert report.scores is None
        assert report.session_id == session.session_id
        # extraction prompt carries the labelled transcript
        sent = provider.requests[0].messages
        assert sent[0]["role"] == "system"
        assert "Client: We plan weekly on a whiteboard." in sent[1]["content"]
        assert provider.requests[0].tools == ()

    def test_fenced_json_accepted(self, store, profile, catalog):
        session = self.answered_session(store, profile, catalog)
        fenced = "```json\n" + json.dumps(VALID_SECTIONS) + "\n```"
        provider = ScriptedChatProvider(script=[text(fenced)])
        report = generate_report(session, provider, catalog=catalog, model=MODEL)
        assert report.challenges == ("No live stock visibility",)

    def test_repair_after_invalid_reply(self, store, profile, catalog):
        session = self.answered_session(store, profile, catalog)
        provider = ScriptedChatProvider(script=[
            text("Sure! Here are my findings in prose."),
            text(json.dumps(VALID_SECTIONS)),
        ])
        report = generate_report(session, provider, catalog=catalog, model=MODEL)
        assert report.current_practices
        repair = provider.requests[1].messages
        assert repair[-1]["role"] == "user"
        assert "not parseable JSON" in repair[-1]["content"]
        assert repair[-2]["content"] == "Sure! Here are my findings in prose."

    def test_invalid_twice_raises(self, store, profile, catalog):
        session = self.answered_session(store, profile, catalog)
        provider = ScriptedChatProvider(script=[text("prose"), text("more prose")])
        with pytest.raises(ReportSchemaError):
            generate_report(session, provider, catalog=catalog, model=MODEL)
        assert len(provider.requests) == 2  # exactly one repair attempt

    @pytest.mark.parametrize("bad", [
        {"current_practices": ["a"], "challenges": ["b"]},                      # missing key
        {"current_practices": "a", "challenges": [], "strategic_goals": []},   # wrong type
        {"current_practices": [1], "challenges": [], "strategic_goals": []},   # non-string item
        ["not", "an", "object"],
    ])
    def test_schema_violations_need_repair(self, store, profile, catalog, bad):
        session = self.answered_session(store, profile, catalog)
        provider = ScriptedChatProvider(script=[
            text(json.dumps(bad)),
            text(json.dumps(VALID_SECTIONS)),
        ])
        report = generate_report(session, provider, catalog=catalog, model=MODEL)
        assert report.strategic_goals == ("Move to a barcode-based warehouse",)
        assert len(provider.requests) == 2

    def test_no_answered_questions(self, store, profile, catalog):
        session = build_session(store, profile, [(Role.USER, "hello")])
        provider = ScriptedChatProvider(script=[])
        with pytest.raises(ReportError, match="no answered questions"):
            generate_report(session, provider, catalog=catalog, model=MODEL)
        assert provider.requests == []

    def test_empty_sections_allowed(self, store, profile, catalog):
        session = self.answered_session(store, profile, catalog)
        empty = {"current_practices": [], "challenges": [], "strategic_goals": []}
        provider = ScriptedChatProvider(script=[text(json.dumps(empty))])
        report = generate_report(session, provider, catalog=catalog, model=MODEL)
        assert report.current_practices == ()


class TestScoring:
    def scored_session(self, store, profile, catalog):
        return build_session(store, profile, [
            (Role.TOOL, q(catalog, "supply", 0)),
            (Role.USER, "Planning happens weekly in a spreadsheet."),
            (Role.TOOL, q(catalog, "supply", 1)),
            (Role.USER, "Capacity is tracked by the foreman from memory."),
        ])

    def valid_scores(self):
        return {
            "1": {"score": 2, "rationale": "Spreadsheet-based planning."},
            "2": {"score": 1, "rationale": "Memory-based tracking."},
        }

    def test_scores_attached(self, store, profile, catalog):
        session = self.scored_session(store, profile, catalog)
        provider = ScriptedChatProvider(script=[
            text(json.dumps(VALID_SECTIONS)),
            text(json.dumps(self.valid_scores())),
        ])
        report = generate_report(
            session, provider, catalog=catalog, model=MODEL,
            score=True, rubric_text="0 none ... 4 integrated",
        )
        assert [s.score for s in report.scores] == [2, 1]
        assert report.scores[0].question_id == "supply.1"
        assert report.scores[1].rationale == "Memory-based tracking."
        scoring_request = provider.requests[1].messages
        assert "0 none ... 4 integrated" in scoring_request[0]["content"]
        assert "1. Question:" in scoring_request[1]["content"]

    def test_score_out_of_range_needs_repair(self, store, profile, catalog):
        session = self.scored_session(store, profile, catalog)
        bad = self.valid_scores()
        bad["2"]["score"] = 7
        provider = ScriptedChatProvider(script=[
            text(json.dumps(VALID_SECTIONS)),
            text(json.dumps(bad)),
            text(json.dumps(self.valid_scores())),
        ])
        report = generate_report(
            session, provider, catalog=catalog, model=MODEL,
            score=True, rubric_text="rubric",
        )
        assert [s.score for s in report.scores] == [2, 1]
        assert len(provider.requests) == 3

    def test_missing_question_entry_fails_after_repair(self, store, profile, catalog):
        session = self.scored_session(store, profile, catalog)
        partial = {"1": {"score": 2, "rationale": "ok"}}
        provider = ScriptedChatProvider(script=[
            text(json.dumps(VALID_SECTIONS)),
            text(json.dumps(partial)),
            text(json.dumps(partial)),
        ])
        with pytest.raises(ReportSchemaError):
            generate_report(
                session, provider, catalog=catalog, model=MODEL,
                score=True, rubric_text="rubric",
            )

    def test_boolean_score_rejected(self, store, profile, catalog):
        session = self.scored_session(store, profile, catalog)
        bad = self.valid_scores()
        bad["1"]["score"] = True
        provider = ScriptedChatProvider(script=[
            text(json.dumps(VALID_SECTIONS)),
            text(json.dumps(bad)),
            text(json.dumps(self.valid_scores())),
        ])
        report = generate_report(
            session, provider, catalog=catalog, model=MODEL,
            score=True, rubric_text="rubric",
        )
        assert report.scores[0].score == 2

    def test_scoring_without_rubric_rejected(self, store, profile, catalog):
        session = self.scored_session(store, profile, catalog)
        provider = ScriptedChatProvider(script=[text(json.dumps(VALID_SECTIONS))])
        with pytest.raises(ReportError, match="rubric"):
            generate_report(
                session, provider, catalog=catalog, model=MODEL, score=True,
            )


class TestRendering:
    def make_report(self, **kw):
        defaults = dict(
            session_id="s1",
            generated_at="2025-03-01T10:00:00.000Z",
            current_practices=("Spreadsheet planning",),
            challenges=(),
            strategic_goals=("Barcode warehouse",),
            scores=None,
        )
        defaults.update(kw)
        return Report(**defaults)

    def test_markdown_sections(self, store, profile):
        session = store.create_session(profile, catalog_version="1.0")
        md = render_report_markdown(self.make_report(), session)
        assert "## Current Practices" in md
        assert "## Challenges" in md
        assert "## Strategic Goals" in md
        assert "- Spreadsheet planning" in md
        assert "- none identified" in md  # empty challenges
        assert profile.company_name in md
        assert "## Maturity Scores" not in md

    def test_markdown_scores_table(self, store, profile):
        from dtconsult.report import QuestionScore
        session = store.create_session(profile, catalog_version="1.0")
        report = self.make_report(scores=(
            QuestionScore("supply.1", "How | is planning done?", 3, "Uses | an ERP."),
        ))
        md = render_report_markdown(report, session)
        assert "## Maturity Scores" in md
        assert "| 1 | How \\| is planning done? | 3 | Uses \\| an ERP. |" in md

    def test_report_dict_round_trip(self):
        from dtconsult.report import QuestionScore
        report = self.make_report(scores=(QuestionScore("rnd.1", "Q?", 4, "Strong."),))
        assert Report.from_dict(report.to_dict()) == report

    def test_transcript_rendering_skips_system(self, store, profile, catalog):
        session = build_session(store, profile, [
            (Role.SYSTEM, "internal instructions"),
            (Role.USER, "merhaba"),
            (Role.TOOL, q(catalog, "rnd", 0)),
            (Role.ASSISTANT, "Let me ask..."),
        ])
        rendered = render_transcript(session.messages)
        assert "internal instructions" not in rendered
        assert "Client: merhaba" in rendered
        assert "Interview question: " + q(catalog, "rnd", 0) in rendered
        assert "Consultant: Let me ask..." in rendered
