"""Needs-assessment report generation from a finished (or partial) transcript.

Extraction asks the model for a strict JSON object; an invalid reply earns
exactly one repair re-prompt before the attempt fails. Optional maturity
scoring runs as a second extraction over the answered question/answer pairs
with the same validate-repair-fail discipline.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime
from typing import Callable

from .catalog import QuestionCatalog
from .errors import ReportError, ReportSchemaError
from .prompts import REPORT_INSTRUCTION, REPORT_REPAIR_INSTRUCTION, scoring_instruction
from .providers import ChatProvider, ProviderRequest
from .store import Message, Role, Session, format_timestamp, utc_now
from .workflow import SENTINEL_TEXT

_SECTION_KEYS = ("current_practices", "challenges", "strategic_goals")


@dataclass(frozen=True)
class AnsweredQuestion:
    question_id: str
    question_text: str
    answer_text: str


@dataclass(frozen=True)
class QuestionScore:
    question_id: str
    question_text: str
    score: int
    rationale: str


@dataclass(frozen=True)
class Report:
    session_id: str
    generated_at: str
    current_practices: tuple[str, ...]
    challenges: tuple[str, ...]
    strategic_goals: tuple[str, ...]
    scores: tuple[QuestionScore, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "generated_at": self.generated_at,
            "current_practices": list(self.current_practices),
            "challenges": list(self.challenges),
            "strategic_goals": list(self.strategic_goals),
            "scores": None if self.scores is None else [
                {
                    "question_id": s.question_id,
                    "question_text": s.question_text,
                    "score": s.score,
                    "rationale": s.rationale,
                }
                for s in self.scores
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Report":
        scores = doc.get("scores")
        return cls(
            session_id=doc["session_id"],
            generated_at=doc["generated_at"],
            current_practices=tuple(doc["current_practices"]),
            challenges=tuple(doc["challenges"]),
            strategic_goals=tuple(doc["strategic_goals"]),
            scores=None if scores is None else tuple(
                QuestionScore(
                    question_id=s["question_id"],
                    question_text=s["question_text"],
                    score=s["score"],
                    rationale=s["rationale"],
                )
                for s in scores
            ),
        )


def _question_id_for(content: str, catalog: QuestionCatalog) -> str | None:
    """Map a tool-result text back to its catalog question, if it is one."""
    try:
        return catalog.question_by_text(content).id
    except KeyError:
        return None


def answered_questions(session: Session, catalog: QuestionCatalog) -> list[AnsweredQuestion]:
    """Question/answer pairs recovered from the transcript.

    A question counts as answered when at least one user message appears
    between its tool-result and the next question or sentinel tool-result
    (or the end of the transcript). Consecutive user messages in the window
    are joined into one answer.
    """
    pairs: list[AnsweredQuestion] = []
    pending_id: str | None = None
    pending_text: str | None = None
    answer_parts: list[str] = []

    def flush() -> None:
        nonlocal pending_id, pending_text, answer_parts
        if pending_id is not None and answer_parts:
            pairs.append(AnsweredQuestion(
                question_id=pending_id,
                question_text=pending_text or "",
                answer_text="\n\n".join(answer_parts),
            ))
        pending_id, pending_text, answer_parts = None, None, []

    for msg in session.messages:
        if msg.role is Role.TOOL:
            qid = _question_id_for(msg.content, catalog)
            if qid is not None:
                flush()
                pending_id = qid
                pending_text = catalog_question_text(catalog, qid)
            elif msg.content.strip() == SENTINEL_TEXT:
                flush()
            # error tool-results leave the pending question open
        elif msg.role is Role.USER and pending_id is not None:
            answer_parts.append(msg.content)
    flush()
    return pairs


def catalog_question_text(catalog: QuestionCatalog, question_id: str) -> str:
    cid, _, index = question_id.rpartition(".")
    return catalog.category(cid).questions[int(index) - 1].text


def render_transcript(messages: tuple[Message, ...]) -> str:
    """Readable transcript for the extraction prompt; system prompt omitted."""
    labels = {Role.USER: "Client", Role.ASSISTANT: "Consultant", Role.TOOL: "Interview question"}
    lines = []
    for msg in messages:
        if msg.role is Role.SYSTEM:
            continue
        lines.append(f"{labels[msg.role]}: {msg.content}")
    return "\n\n".join(lines)


def _strip_fences(text: str) -> str:
    text = text.strip()
    if text.startswith("```"):
        lines = text.splitlines()
        if lines and lines[0].startswith("```"):
            lines = lines[1:]
        if lines and lines[-1].strip() == "```":
            lines = lines[:-1]
        text = "\n".join(lines).strip()
    return text


def _extract_json(
    provider: ChatProvider,
    messages: list[dict],
    *,
    model: str,
    temperature: float,
    validate: Callable[[object], str | None],
) -> dict:
    """Ask for JSON, validate, re-prompt once on failure, then give up."""
    wire = list(messages)
    for attempt in range(2):
        response = provider.complete(ProviderRequest(
            messages=tuple(wire),
            tools=(),
            model=model,
            temperature=temperature,
        ))
        if response.text is None:
            problem = "the reply was a tool call, not JSON text"
            parsed: object = None
        else:
            try:
                parsed = json.loads(_strip_fences(response.text))
                problem = validate(parsed)
            except ValueError as exc:
                parsed, problem = None, f"the reply was not parseable JSON ({exc})"
        if problem is None:
            assert isinstance(parsed, dict)
            return parsed
        if attempt == 0:
            wire.append({"role": "assistant", "content": response.text or "(tool call)"})
            wire.append({
                "role": "user",
                "content": REPORT_REPAIR_INSTRUCTION.format(problem=problem),
            })
    raise ReportSchemaError(f"model output failed validation after one repair attempt: {problem}")


def _validate_sections(parsed: object) -> str | None:
    if not isinstance(parsed, dict):
        return "the top-level JSON value is not an object"
    for key in _SECTION_KEYS:
        if key not in parsed:
            return f'the key "{key}" is missing'
        value = parsed[key]
        if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            return f'the key "{key}" must be an array of strings'
    return None


def _validate_scores(count: int) -> Callable[[object], str | None]:
    def check(parsed: object) -> str | None:
        if not isinstance(parsed, dict):
            return "the top-level JSON value is not an object"
        for i in range(1, count + 1):
            key = str(i)
            if key not in parsed:
                return f'question "{key}" is missing a score entry'
            entry = parsed[key]
            if not isinstance(entry, dict):
                return f'the entry for question "{key}" is not an object'
            score = entry.get("score")
            if not isinstance(score, int) or isinstance(score, bool) or not 0 <= score <= 4:
                return f'question "{key}" needs an integer "score" between 0 and 4'
            if not isinstance(entry.get("rationale"), str):
                return f'question "{key}" needs a string "rationale"'
        return None
    return check


def generate_report(
    session: Session,
    provider: ChatProvider,
    *,
    catalog: QuestionCatalog,
    model: str,
    temperature: float = 0.0,
    score: bool = False,
    rubric_text: str | None = None,
    clock: Callable[[], datetime] = utc_now,
) -> Report:
    answered = answered_questions(session, catalog)
    if not answered:
        raise ReportError("session has no answered questions yet")

    sections = _extract_json(
        provider,
        [
            {"role": "system", "content": REPORT_INSTRUCTION},
            {"role": "user", "content": render_transcript(session.messages)},
        ],
        model=model,
        temperature=temperature,
        validate=_validate_sections,
    )

    scores: tuple[QuestionScore, ...] | None = None
    if score:
        if rubric_text is None:
            raise ReportError("scoring requested without a rubric")
        numbered = "\n\n".join(
            f"{i}. Question: {a.question_text}\n   Answer: {a.answer_text}"
            for i, a in enumerate(answered, start=1)
        )
        raw_scores = _extract_json(
            provider,
            [
                {"role": "system", "content": scoring_instruction(rubric_text)},
                {"role": "user", "content": numbered},
            ],
            model=model,
            temperature=temperature,
            validate=_validate_scores(len(answered)),
        )
        scores = tuple(
            QuestionScore(
                question_id=a.question_id,
                question_text=a.question_text,
                score=raw_scores[str(i)]["score"],
                rationale=raw_scores[str(i)]["rationale"],
            )
            for i, a in enumerate(answered, start=1)
        )

    return Report(
        session_id=session.session_id,
        generated_at=format_timestamp(clock()),
        current_practices=tuple(sections["current_practices"]),
        challenges=tuple(sections["challenges"]),
        strategic_goals=tuple(sections["strategic_goals"]),
        scores=scores,
    )


def _section_lines(title: str, items: tuple[str, ...]) -> list[str]:
    lines = [f"## {title}", ""]
    if items:
        lines.extend(f"- {item}" for item in items)
    else:
        lines.append("- none identified")
    lines.append("")
    return lines


def render_report_markdown(report: Report, session: Session) -> str:
    profile = session.profile
    lines = [
        "# Digital Transformation Needs Assessment",
        "",
        f"- Company: {profile.company_name}",
        f"- Client: {profile.client_name} ({profile.job_title})",
        f"- Industry: {profile.industry_type}, {profile.industry_size}",
        f"- Session: {report.session_id}",
        f"- Generated: {report.generated_at}",
        "",
    ]
    lines.extend(_section_lines("Current Practices", report.current_practices))
    lines.extend(_section_lines("Challenges", report.challenges))
    lines.extend(_section_lines("Strategic Goals", report.strategic_goals))
    if report.scores is not None:
        lines.extend(["## Maturity Scores", ""])
        lines.append("| # | Question | Score | Rationale |")
        lines.append("|---|----------|-------|-----------|")
        for i, entry in enumerate(report.scores, start=1):
            question = entry.question_text.replace("|", "\\|")
            rationale = entry.rationale.replace("|", "\\|")
            lines.append(f"| {i} | {question} | {entry.score} | {rationale} |")
        lines.append("")
    return "\n".join(lines)
