"""HTTP service exposing the interview workflow.

All routes except ``GET /health`` require a bearer token. Error bodies are
uniform: ``{"detail": {"code": ..., "message": ...}}``. Turn execution takes
a per-session lease, so two concurrent turns on one session cannot
interleave; the loser gets 409 ``turn_in_flight``.
"""
from __future__ import annotations

import hmac
import json
import os
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterator

from fastapi import Depends, FastAPI, HTTPException, Query, Request, Response
from fastapi.responses import JSONResponse, StreamingResponse
from starlette.concurrency import run_in_threadpool

from .catalog import QuestionCatalog, load_catalog, load_default_catalog, resolve_category
from .errors import (
    CategoryMatchError,
    CorruptSession,
    LeaseHeld,
    PayloadTooLarge,
    PhaseError,
    ProviderError,
    ReportError,
    ReportSchemaError,
    ScriptExhausted,
    SessionCompleted,
    SessionNotFound,
    TranscriptionError,
    TurnAborted,
    UnsupportedMediaType,
    WorkflowError,
)
from .orchestrator import chat_turn
from .prompts import DEFAULT_TEMPLATE, PromptTemplate
from .providers import ChatProvider, HttpChatProvider
from .report import Report, generate_report, render_report_markdown
from .store import ClientProfile, Modality, Session, SessionStore
from .transcription import (
    DEFAULT_MAX_BYTES,
    AudioInput,
    HttpSttProvider,
    SttProvider,
    validate_audio,
)
from .workflow import Phase, progress as workflow_progress, record_priorities


@dataclass(frozen=True)
class ServiceConfig:
    auth_token: str
    data_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000
    catalog_path: str | None = None
    llm_base_url: str = ""
    llm_api_key: str = ""
    llm_model: str = ""
    llm_temperature: float = 0.2
    max_tool_iterations: int = 8
    stt_base_url: str = ""
    stt_api_key: str = ""
    stt_model: str = ""
    rate_limit_per_minute: int = 60
    max_audio_bytes: int = DEFAULT_MAX_BYTES

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None) -> "ServiceConfig":
        env = dict(os.environ if env is None else env)
        token = env.get("DT_AUTH_TOKEN", "")
        if not token:
            raise ValueError("DT_AUTH_TOKEN must be set")
        bind = env.get("DT_BIND", "127.0.0.1:8000")
        host, _, port_text = bind.rpartition(":")
        if not host or not port_text.isdigit():
            raise ValueError(f"DT_BIND must look like host:port, got {bind!r}")
        return cls(
            auth_token=token,
            data_dir=Path(env.get("DT_DATA_DIR", "./dt-data")),
            host=host,
            port=int(port_text),
            catalog_path=env.get("DT_CATALOG") or None,
            llm_base_url=env.get("LLM_BASE_URL", ""),
            llm_api_key=env.get("LLM_API_KEY", ""),
            llm_model=env.get("LLM_MODEL", ""),
            llm_temperature=float(env.get("LLM_TEMPERATURE", "0.2")),
            max_tool_iterations=int(env.get("DT_MAX_TOOL_ITERATIONS", "8")),
            stt_base_url=env.get("STT_BASE_URL", ""),
            stt_api_key=env.get("STT_API_KEY", ""),
            stt_model=env.get("STT_MODEL", ""),
            rate_limit_per_minute=int(env.get("DT_RATE_LIMIT_PER_MINUTE", "60")),
            max_audio_bytes=int(env.get("DT_MAX_AUDIO_BYTES", str(DEFAULT_MAX_BYTES))),
        )


def _error(status: int, code: str, message: str, **extra) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message, **extra})


@dataclass
class RateLimiter:
    """Sliding-window counter per bearer token."""

    per_minute: int
    clock: Callable[[], float] = time.monotonic
    _hits: dict[str, deque] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def check(self, key: str) -> None:
        if self.per_minute <= 0:
            return
        now = self.clock()
        with self._lock:
            window = self._hits.setdefault(key, deque())
            while window and now - window[0] >= 60.0:
                window.popleft()
            if len(window) >= self.per_minute:
                raise _error(429, "rate_limited", "turn rate limit reached; retry shortly")
            window.append(now)


def _message_view(msg) -> dict:
    return msg.to_dict()


def _session_summary(session: Session) -> dict:
    return {
        "session_id": session.session_id,
        "profile": session.profile.to_dict(),
        "catalog_version": session.catalog_version,
        "status": session.status,
        "phase": session.state.phase.value,
        "created_at": session.created_at,
        "updated_at": session.updated_at,
        "message_count": len(session.messages),
    }


def _session_view(session: Session) -> dict:
    view = _session_summary(session)
    view["state"] = session.state.to_dict()
    view["messages"] = [_message_view(m) for m in session.messages]
    return view


def _progress_view(session: Session, catalog: QuestionCatalog) -> dict:
    if session.state.phase is Phase.AWAITING_PRIORITIES:
        return {"phase": session.state.phase.value, "progress": None}
    snapshot = workflow_progress(session.state, catalog)
    per_category = []
    for cid in session.state.priority_order:
        entry = snapshot.per_category[cid]
        per_category.append({
            "id": cid,
            "display_name": catalog.category(cid).display_name,
            "asked": entry.asked,
            "remaining": entry.remaining,
        })
    return {
        "phase": session.state.phase.value,
        "progress": {
            "total_asked": snapshot.total_asked,
            "total_remaining": snapshot.total_remaining,
            "per_category": per_category,
        },
    }


def default_rubric_text() -> str:
    return (resources.files("dtconsult") / "data" / "scoring_rubric.md").read_text(encoding="utf-8")


def _sse_chunks(text: str, size: int = 48) -> Iterator[str]:
    words = text.split(" ")
    buffer = ""
    for word in words:
        candidate = f"{buffer} {word}".strip()
        if len(candidate) >= size:
            yield candidate
            buffer = ""
        else:
            buffer = candidate
    if buffer:
        yield buffer


def create_app(
    config: ServiceConfig,
    *,
    chat_provider: ChatProvider | None = None,
    stt_provider: SttProvider | None = None,
    store: SessionStore | None = None,
    catalog: QuestionCatalog | None = None,
    template: PromptTemplate = DEFAULT_TEMPLATE,
    rate_clock: Callable[[], float] = time.monotonic,
) -> FastAPI:
    if catalog is None:
        catalog = load_catalog(config.catalog_path) if config.catalog_path else load_default_catalog()
    if store is None:
        store = SessionStore(config.data_dir)
    if chat_provider is None and config.llm_base_url:
        chat_provider = HttpChatProvider(config.llm_base_url, config.llm_api_key)
    if stt_provider is None and config.stt_base_url:
        stt_provider = HttpSttProvider(config.stt_base_url, config.stt_api_key, config.stt_model)

    limiter = RateLimiter(per_minute=config.rate_limit_per_minute, clock=rate_clock)
    app = FastAPI(title="dtconsult", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.store = store
    app.state.catalog = catalog

    def require_auth(request: Request) -> str:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not hmac.compare_digest(token, config.auth_token):
            raise _error(401, "unauthorized", "missing or invalid bearer token")
        return token

    def get_session_or_404(session_id: str) -> Session:
        try:
            return store.load(session_id)
        except SessionNotFound:
            raise _error(404, "session_not_found", f"no session with id {session_id!r}")
        except CorruptSession as exc:
            raise _error(500, "corrupt_session", str(exc))

    def get_chat_provider() -> ChatProvider:
        if chat_provider is None:
            raise _error(503, "llm_unconfigured", "no chat provider configured (set LLM_BASE_URL)")
        return chat_provider

    # -- routes ----------------------------------------------------------

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "catalog_version": catalog.version,
            "total_questions": catalog.total_questions(),
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: dict, _token: str = Depends(require_auth)) -> dict:
        fields = ("company_name", "client_name", "industry_type", "industry_size", "job_title")
        missing = [k for k in fields if not isinstance(body.get(k), str) or not body[k].strip()]
        if missing:
            raise _error(
                422, "validation_error",
                f"missing or empty fields: {', '.join(missing)}",
            )
        profile = ClientProfile(**{k: body[k].strip() for k in fields})
        session = store.create_session(profile, catalog_version=catalog.version)
        return _session_view(session)

    @app.get("/sessions")
    def list_sessions(
        company: str | None = None,
        client: str | None = None,
        job_title: str | None = None,
        status: str | None = None,
        _token: str = Depends(require_auth),
    ) -> dict:
        sessions = store.list_sessions(
            company=company, client=client, job_title=job_title, status=status,
        )
        return {"sessions": [_session_summary(s) for s in sessions]}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str, _token: str = Depends(require_auth)) -> dict:
        return _session_view(get_session_or_404(session_id))

    @app.post("/sessions/{session_id}/priorities")
    def set_priorities(session_id: str, body: dict, _token: str = Depends(require_auth)) -> dict:
        session = get_session_or_404(session_id)
        names = body.get("priorities")
        if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
            raise _error(422, "validation_error", '"priorities" must be a non-empty array of strings')
        try:
            ordered = [resolve_category(name, catalog) for name in names]
        except CategoryMatchError as exc:
            raise _error(422, "unknown_category", str(exc))
        try:
            with store.lease(session_id):
                state = record_priorities(session.state, ordered, catalog)
                updated = store.append_messages(session_id, [], state=state)
        except LeaseHeld:
            raise _error(409, "turn_in_flight", "a turn is already in flight for this session")
        except PhaseError as exc:
            raise _error(409, "wrong_phase", str(exc))
        except WorkflowError as exc:
            raise _error(422, "validation_error", str(exc))
        return _progress_view(updated, catalog)

    @app.get("/sessions/{session_id}/progress")
    def get_progress(session_id: str, _token: str = Depends(require_auth)) -> dict:
        return _progress_view(get_session_or_404(session_id), catalog)

    def _run_turn(session: Session, text: str, modality: Modality, language: str | None):
        provider = get_chat_provider()
        try:
            with store.lease(session.session_id):
                outcome = chat_turn(
                    session,
                    text,
                    provider,
                    catalog=catalog,
                    store=store,
                    template=template,
                    model=config.llm_model,
                    temperature=config.llm_temperature,
                    max_tool_iterations=config.max_tool_iterations,
                    modality=modality,
                    detected_language=language,
                )
        except LeaseHeld:
            raise _error(409, "turn_in_flight", "a turn is already in flight for this session")
        except SessionCompleted as exc:
            raise _error(409, "session_completed", str(exc))
        except TurnAborted as exc:
            raise _error(502, "tool_loop_aborted", str(exc))
        except (ProviderError, ScriptExhausted) as exc:
            retriable = getattr(exc, "retriable", False)
            raise _error(502, "provider_error", str(exc), retriable=retriable)
        return outcome

    @app.post("/sessions/{session_id}/turns")
    async def post_turn(
        session_id: str,
        request: Request,
        stream: bool = Query(default=False),
        token: str = Depends(require_auth),
    ) -> Response:
        limiter.check(token)
        session = get_session_or_404(session_id)
        before = session.next_message_id()

        content_type = request.headers.get("content-type", "").split(";", 1)[0].strip().lower()
        if content_type == "application/json":
            try:
                body = json.loads(await request.body())
            except ValueError:
                raise _error(422, "validation_error", "body is not valid JSON")
            if not isinstance(body, dict) or not isinstance(body.get("text"), str):
                raise _error(422, "validation_error", 'JSON body must carry a string "text" field')
            text = body["text"].rstrip()
            if not text:
                raise _error(422, "empty_input", "text is empty")
            language = body.get("language") if isinstance(body.get("language"), str) else None
            modality = Modality.TEXT
        elif content_type == "multipart/form-data":
            if stt_provider is None:
                raise _error(503, "stt_unconfigured", "no transcription provider configured (set STT_BASE_URL)")
            form = await request.form()
            upload = form.get("audio")
            if upload is None or isinstance(upload, str):
                raise _error(422, "validation_error", 'multipart body must carry an "audio" file field')
            data = await upload.read()
            hint = form.get("language")
            audio = AudioInput(
                data=data,
                media_type=upload.content_type or "",
                filename=upload.filename,
                language_hint=hint if isinstance(hint, str) and hint else None,
            )
            try:
                validate_audio(audio, max_bytes=config.max_audio_bytes)
            except UnsupportedMediaType as exc:
                raise _error(422, "unsupported_media_type", str(exc))
            except PayloadTooLarge as exc:
                raise _error(413, "payload_too_large", str(exc))
            try:
                transcript = await run_in_threadpool(stt_provider.transcribe, audio)
            except TranscriptionError as exc:
                raise _error(502, "provider_error", str(exc), retriable=True)
            text = transcript.text.rstrip()
            if not text.strip():
                raise _error(
                    422, "empty_input",
                    f"transcription produced no usable text (got {transcript.text!r})",
                )
            language = transcript.language
            modality = Modality.AUDIO_TRANSCRIBED
        else:
            raise _error(
                422, "validation_error",
                f"unsupported content type {content_type!r}; send JSON or multipart form data",
            )

        outcome = await run_in_threadpool(_run_turn, session, text, modality, language)
        updated = get_session_or_404(session_id)
        payload = {
            "session_id": session_id,
            "assistant_text": outcome.assistant_text,
            "phase": updated.state.phase.value,
            "progress": _progress_view(updated, catalog)["progress"],
            "new_messages": [_message_view(m) for m in updated.messages if m.id >= before],
        }
        if not stream:
            return JSONResponse(payload)

        def event_stream() -> Iterator[str]:
            for chunk in _sse_chunks(outcome.assistant_text):
                yield f"event: delta\ndata: {json.dumps({'text': chunk}, ensure_ascii=False)}\n\n"
            yield f"event: done\ndata: {json.dumps(payload, ensure_ascii=False)}\n\n"

        return StreamingResponse(event_stream(), media_type="text/event-stream")

    @app.post("/sessions/{session_id}/report")
    def post_report(
        session_id: str,
        score: bool = Query(default=False),
        _token: str = Depends(require_auth),
    ) -> dict:
        session = get_session_or_404(session_id)
        provider = get_chat_provider()
        try:
            report = generate_report(
                session,
                provider,
                catalog=catalog,
                model=config.llm_model,
                temperature=0.0,
                score=score,
                rubric_text=default_rubric_text() if score else None,
                clock=store.clock,
            )
        except ReportSchemaError as exc:
            raise _error(502, "report_schema_invalid", str(exc))
        except ReportError as exc:
            raise _error(422, "no_answered_questions", str(exc))
        except (ProviderError, ScriptExhausted) as exc:
            retriable = getattr(exc, "retriable", False)
            raise _error(502, "provider_error", str(exc), retriable=retriable)
        doc = {
            "report": report.to_dict(),
            "markdown": render_report_markdown(report, session),
        }
        store.save_report(session_id, doc)
        return doc

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str, _token: str = Depends(require_auth)) -> dict:
        get_session_or_404(session_id)
        doc = store.load_report(session_id)
        if doc is None:
            raise _error(404, "report_not_found", "no report has been generated for this session")
        return doc

    return app
