"""Self-hosted, LLM-mediated structured interview service for digital
transformation needs assessment.

The package splits into a deterministic core (catalog, workflow, store) that
never touches the network, and an integration layer (providers, orchestrator,
transcription, report, service) that drives a chat-completions model through
the interview with a single question-retrieval tool.
"""
from .catalog import (
    Category,
    Question,
    QuestionCatalog,
    load_catalog,
    load_default_catalog,
    resolve_category,
)
from .orchestrator import TurnOutcome, chat_turn
from .providers import (
    ChatProvider,
    HttpChatProvider,
    ProviderRequest,
    ProviderResponse,
    ScriptedChatProvider,
    ToolCall,
)
from .report import Report, answered_questions, generate_report, render_report_markdown
from .service import ServiceConfig, create_app
from .store import ClientProfile, Message, Modality, Role, Session, SessionStore
from .transcription import AudioInput, HttpSttProvider, StaticSttProvider, Transcript
from .workflow import (
    SENTINEL_TEXT,
    Phase,
    Progress,
    Retrieval,
    WorkflowState,
    progress,
    record_priorities,
    retrieve_question,
)

__version__ = "0.1.0"

__all__ = [
    "AudioInput",
    "Category",
    "ChatProvider",
    "ClientProfile",
    "HttpChatProvider",
    "HttpSttProvider",
    "Message",
    "Modality",
    "Phase",
    "Progress",
    "ProviderRequest",
    "ProviderResponse",
    "Question",
    "QuestionCatalog",
    "Report",
    "Retrieval",
    "Role",
    "SENTINEL_TEXT",
    "ScriptedChatProvider",
    "ServiceConfig",
    "Session",
    "SessionStore",
    "StaticSttProvider",
    "ToolCall",
    "Transcript",
    "TurnOutcome",
    "WorkflowState",
    "answered_questions",
    "chat_turn",
    "create_app",
    "generate_report",
    "load_catalog",
    "load_default_catalog",
    "progress",
    "record_priorities",
    "render_report_markdown",
    "resolve_category",
    "retrieve_question",
    "__version__",
]
