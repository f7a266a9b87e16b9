"""Question catalog: loading, validation, and category-name resolution.

The catalog is a plug-in document: a JSON file with a version string and an
ordered list of categories, each holding an ordered list of question texts.
Question ids are synthesized as ``<category_id>.<index>`` (1-based) so they
stay stable for persistence and tests.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import CatalogError, CategoryMatchError

DEFAULT_CATALOG_RESOURCE = "default_catalog.json"

_WS = re.compile(r"\s+")


def _norm(name: str) -> str:
    return _WS.sub(" ", name.strip()).lower()


@dataclass(frozen=True)
class Question:
    id: str
    text: str


@dataclass(frozen=True)
class Category:
    id: str
    display_name: str
    aliases: tuple[str, ...]
    questions: tuple[Question, ...]

    def question_count(self) -> int:
        return len(self.questions)


@dataclass(frozen=True)
class QuestionCatalog:
    version: str
    categories: tuple[Category, ...]

    def category_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.categories)

    def category(self, category_id: str) -> Category:
        for c in self.categories:
            if c.id == category_id:
                return c
        raise KeyError(category_id)

    def total_questions(self) -> int:
        return sum(c.question_count() for c in self.categories)

    def question_by_text(self, text: str) -> Question:
        """Look up a question by its exact text.

        Raises ``KeyError`` if absent and ``CatalogError`` if the text is
        ambiguous (possible in custom catalogs with duplicate wording).
        """
        hits = [q for c in self.categories for q in c.questions if q.text == text]
        if not hits:
            raise KeyError(text)
        if len(hits) > 1:
            raise CatalogError(
                f"question text is ambiguous across {len(hits)} entries: {text!r}"
            )
        return hits[0]

    def category_of_question(self, question_id: str) -> Category:
        cid = question_id.rsplit(".", 1)[0]
        return self.category(cid)


def _require(doc: Any, key: str, kind: type, location: str) -> Any:
    if not isinstance(doc, dict):
        raise CatalogError(f"expected an object, got {type(doc).__name__}", location)
    if key not in doc:
        raise CatalogError(f"missing required field {key!r}", location)
    value = doc[key]
    if not isinstance(value, kind):
        raise CatalogError(
            f"field {key!r} must be {kind.__name__}, got {type(value).__name__}", location
        )
    return value


def catalog_from_dict(doc: Any, source: str = "catalog") -> QuestionCatalog:
    """Validate a parsed catalog document and build the immutable catalog.

    Errors name the offending location (``categories[2].questions[5]``).
    """
    version = _require(doc, "version", str, source)
    raw_categories = _require(doc, "categories", list, source)
    if not raw_categories:
        raise CatalogError("catalog has no categories", f"{source}.categories")

    categories: list[Category] = []
    seen_category_ids: set[str] = set()
    seen_question_ids: set[str] = set()
    for i, raw in enumerate(raw_categories):
        loc = f"{source}.categories[{i}]"
        cid = _require(raw, "id", str, loc)
        if not cid.strip():
            raise CatalogError("category id is empty", loc)
        if cid in seen_category_ids:
            raise CatalogError(f"duplicate category id {cid!r}", loc)
        seen_category_ids.add(cid)

        display_name = _require(raw, "display_name", str, loc)
        if not display_name.strip():
            raise CatalogError("display_name is empty", loc)

        raw_aliases = _require(raw, "aliases", list, loc)
        aliases: list[str] = []
        for j, alias in enumerate(raw_aliases):
            if not isinstance(alias, str) or not alias.strip():
                raise CatalogError("alias must be a nonempty string", f"{loc}.aliases[{j}]")
            if alias != alias.lower():
                raise CatalogError(f"alias {alias!r} must be lowercase", f"{loc}.aliases[{j}]")
            aliases.append(alias)

        raw_questions = _require(raw, "questions", list, loc)
        if not raw_questions:
            raise CatalogError("category has no questions", f"{loc}.questions")
        questions: list[Question] = []
        for j, text in enumerate(raw_questions):
            qloc = f"{loc}.questions[{j}]"
            if not isinstance(text, str):
                raise CatalogError("question must be a string", qloc)
            if not text.strip():
                raise CatalogError("question text is empty", qloc)
            qid = f"{cid}.{j + 1}"
            if qid in seen_question_ids:
                raise CatalogError(f"duplicate question id {qid!r}", qloc)
            seen_question_ids.add(qid)
            questions.append(Question(id=qid, text=text))

        categories.append(
            Category(
                id=cid,
                display_name=display_name,
                aliases=tuple(aliases),
                questions=tuple(questions),
            )
        )

    return QuestionCatalog(version=version, categories=tuple(categories))


def load_catalog(path: str | Path) -> QuestionCatalog:
    """Load and validate a catalog JSON file."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read catalog file: {exc}", str(path)) from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"invalid JSON: {exc}", str(path)) from exc
    return catalog_from_dict(doc, source=str(path))


def default_catalog_path() -> Path:
    """Filesystem path of the catalog shipped with the package."""
    return Path(str(resources.files("dtconsult").joinpath("data", DEFAULT_CATALOG_RESOURCE)))


def load_default_catalog() -> QuestionCatalog:
    return load_catalog(default_catalog_path())


def resolve_category(name: str, catalog: QuestionCatalog) -> str:
    """Resolve a free-text category name to its canonical id.

    Matches case-insensitively (whitespace trimmed and collapsed) against each
    category's id, display name, and aliases. Refuses to guess: no match and
    ambiguous matches both raise, listing the valid names.
    """
    needle = _norm(name)
    valid_names = [c.display_name for c in catalog.categories]
    if not needle:
        raise CategoryMatchError(
            f"empty category name; valid categories: {', '.join(valid_names)}",
            valid_names,
        )
    hits: list[str] = []
    for c in catalog.categories:
        candidates = {c.id.lower(), _norm(c.display_name), *c.aliases}
        if needle in candidates:
            hits.append(c.id)
    if not hits:
        raise CategoryMatchError(
            f"unknown category {name!r}; valid categories: {', '.join(valid_names)}",
            valid_names,
        )
    if len(hits) > 1:
        raise CategoryMatchError(
            f"category name {name!r} is ambiguous (matches {', '.join(hits)}); "
            f"valid categories: {', '.join(valid_names)}",
            valid_names,
            ambiguous=True,
        )
    return hits[0]
