"""Speech-to-text for voice turns.

Audio bytes pass through to the transcription backend and are never
persisted; only the returned transcript enters the session. Uploads are
gated by a media-type allow-list and a size cap before any network call.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import httpx

from .errors import PayloadTooLarge, TranscriptionError, UnsupportedMediaType

# normalized content-type -> filename extension for the upload
ALLOWED_MEDIA_TYPES = {
    "audio/webm": "webm",
    "audio/ogg": "ogg",
    "audio/wav": "wav",
    "audio/x-wav": "wav",
    "audio/wave": "wav",
    "audio/mpeg": "mp3",
    "audio/mp3": "mp3",
    "audio/mp4": "m4a",
    "audio/m4a": "m4a",
    "audio/x-m4a": "m4a",
}

DEFAULT_MAX_BYTES = 25 * 1024 * 1024


def normalize_media_type(content_type: str) -> str:
    # strip parameters such as ";codecs=opus"
    return content_type.split(";", 1)[0].strip().lower()


@dataclass(frozen=True)
class AudioInput:
    data: bytes
    media_type: str
    filename: str | None = None
    language_hint: str | None = None


@dataclass(frozen=True)
class Transcript:
    text: str
    language: str | None = None


def validate_audio(audio: AudioInput, *, max_bytes: int = DEFAULT_MAX_BYTES) -> str:
    """Check type and size; returns the normalized media type."""
    media_type = normalize_media_type(audio.media_type)
    if media_type not in ALLOWED_MEDIA_TYPES:
        raise UnsupportedMediaType(media_type, allowed=sorted(ALLOWED_MEDIA_TYPES))
    if len(audio.data) > max_bytes:
        raise PayloadTooLarge(size=len(audio.data), cap=max_bytes)
    return media_type


class SttProvider(Protocol):
    def transcribe(self, audio: AudioInput) -> Transcript: ...


class HttpSttProvider:
    """Multipart upload to a transcriptions endpoint returning ``{"text": ...}``."""

    def __init__(
        self,
        base_url: str,
        api_key: str,
        model: str,
        *,
        timeout: float = 120.0,
        client: httpx.Client | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key
        self.model = model
        self._client = client or httpx.Client(timeout=timeout)

    def transcribe(self, audio: AudioInput) -> Transcript:
        media_type = normalize_media_type(audio.media_type)
        filename = audio.filename or f"audio.{ALLOWED_MEDIA_TYPES.get(media_type, 'bin')}"
        files = {"file": (filename, audio.data, media_type)}
        data = {"model": self.model}
        if audio.language_hint:
            data["language"] = audio.language_hint
        try:
            response = self._client.post(
                f"{self.base_url}/audio/transcriptions",
                files=files,
                data=data,
                headers={"Authorization": f"Bearer {self.api_key}"},
            )
        except httpx.HTTPError as exc:
            raise TranscriptionError(f"transcription transport failure: {exc}") from exc
        if response.status_code >= 400:
            raise TranscriptionError(
                f"transcription backend returned HTTP {response.status_code}: {response.text[:200]}"
            )
        try:
            body = response.json()
        except ValueError as exc:
            raise TranscriptionError("transcription backend returned non-JSON body") from exc
        text = body.get("text")
        if not isinstance(text, str):
            raise TranscriptionError('transcription payload lacks a string "text" field')
        language = body.get("language")
        return Transcript(
            text=text,
            language=language if isinstance(language, str) else audio.language_hint,
        )


@dataclass
class StaticSttProvider:
    """Offline fake: returns a fixed transcript, echoing any language hint."""

    text: str
    language: str | None = None

    def transcribe(self, audio: AudioInput) -> Transcript:
        return Transcript(
            text=self.text,
            language=self.language or audio.language_hint,
        )
