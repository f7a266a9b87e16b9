"""Prompt and tool-schema construction for the interview loop.

The system prompt is rendered from the active catalog and client profile so
custom catalogs change the advertised domains without code edits. Templates
are versioned; the version travels in provider request metadata so prompt
changes are visible in logs.
"""
from __future__ import annotations

from dataclasses import dataclass

from .catalog import QuestionCatalog
from .store import ClientProfile
from .workflow import SENTINEL_TEXT

TOOL_NAME = "retrieve_question"

_SYSTEM_TEMPLATE = """\
You are an experienced digital transformation consultant conducting a \
structured needs-assessment interview for {company_name}. You are speaking \
with {client_name}, whose job title is {job_title}. The company operates in \
the {industry_type} industry and its size is {industry_size}.

Begin by asking the client to rank the following assessment domains in their \
order of priority: {domain_list}. Once they have answered, work through the \
domains in the order they chose.

To obtain each interview question, call the {tool_name} tool with the domain \
you are currently covering. Ask the client exactly the question text the tool \
returns, without rewording it. After the client answers, call the tool again \
for the next question. When the tool returns "{sentinel}", that domain is \
finished; move on to the next domain in the client's ranking, or wrap up the \
interview if every domain is finished.

Every few questions, briefly tell the client how far along the interview is \
(questions asked and remaining in the current domain). Be patient and \
professional: if an answer is unclear, ask a short follow-up before moving \
on, and never rush the client. Always respond in the language the client \
writes in."""


def domain_list_text(catalog: QuestionCatalog) -> str:
    names = [c.display_name for c in catalog.categories]
    if len(names) == 1:
        return names[0]
    return ", ".join(names[:-1]) + ", and " + names[-1]


def tool_schema(catalog: QuestionCatalog) -> dict:
    """Function-calling schema advertised to the model on every request."""
    ids = ", ".join(catalog.category_ids())
    return {
        "type": "function",
        "function": {
            "name": TOOL_NAME,
            "description": (
                "Fetch the next interview question for an assessment domain. "
                f"Returns the question text, or \"{SENTINEL_TEXT}\" once the "
                "domain has no questions left."
            ),
            "parameters": {
                "type": "object",
                "properties": {
                    "category": {
                        "type": "string",
                        "description": f"Domain to draw the next question from. One of: {ids}.",
                    },
                },
                "required": ["category"],
            },
        },
    }


@dataclass(frozen=True)
class PromptTemplate:
    version: str
    system_template: str = _SYSTEM_TEMPLATE

    def system_text(self, profile: ClientProfile, catalog: QuestionCatalog) -> str:
        return self.system_template.format(
            company_name=profile.company_name,
            client_name=profile.client_name,
            job_title=profile.job_title,
            industry_type=profile.industry_type,
            industry_size=profile.industry_size,
            domain_list=domain_list_text(catalog),
            tool_name=TOOL_NAME,
            sentinel=SENTINEL_TEXT,
        )


DEFAULT_TEMPLATE = PromptTemplate(version="1.0")


REPORT_INSTRUCTION = """\
You are preparing the findings section of a digital transformation \
needs-assessment report. Read the interview transcript in the user message \
and extract the client's situation.

Respond with a single JSON object and nothing else, using exactly these keys:
- "current_practices": array of strings, each one concrete practice the \
client described as currently in place
- "challenges": array of strings, each one problem, gap, or pain point the \
client reported
- "strategic_goals": array of strings, each one goal, plan, or desired \
improvement the client expressed

Use the client's own facts only; do not invent anything. If a key has no \
supporting material in the transcript, use an empty array for it. Do not \
wrap the JSON in markdown fences."""

REPORT_REPAIR_INSTRUCTION = """\
Your previous reply was not valid for machine processing: {problem}

Reply again with only a single JSON object with exactly the keys \
"current_practices", "challenges", and "strategic_goals", each an array of \
strings. No prose, no markdown fences."""


def scoring_instruction(rubric_text: str) -> str:
    return f"""\
You are assessing digital maturity from a needs-assessment interview. For \
each numbered question-and-answer pair below, assign an integer score from 0 \
to 4 using this rubric:

{rubric_text}

Respond with a single JSON object and nothing else: the keys are the question \
numbers as strings, the values are objects with an integer "score" (0-4) and \
a one-sentence string "rationale". Score every listed question. Do not wrap \
the JSON in markdown fences."""
