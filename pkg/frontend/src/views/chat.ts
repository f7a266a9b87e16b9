import { ApiError } from "../api.js";
import { Recorder, recordingSupported } from "../audio.js";
import { t } from "../i18n.js";
import type { ChatState } from "../state.js";
import type { Phase, ProgressView, TurnResponse } from "../types.js";

export interface ChatActions {
  sendText(text: string): Promise<TurnResponse>;
  sendAudio(audio: Blob): Promise<TurnResponse>;
  setPriorities(names: string[]): Promise<ProgressView>;
}

export interface ChatHandle {
  render(): void;
  sendTyped(text: string): Promise<void>;
  sendVoice(audio: Blob): Promise<void>;
  submitPriorities(raw: string): Promise<void>;
}

export function renderChatView(
  container: HTMLElement,
  state: ChatState,
  actions: ChatActions,
  onPhaseChange: (phase: Phase) => void = () => {},
): ChatHandle {
  container.innerHTML = "";
  const root = document.createElement("div");
  root.className = "chat-view";

  const progressPanel = document.createElement("div");
  progressPanel.className = "progress-panel";
  const prioritiesBox = document.createElement("div");
  prioritiesBox.className = "priorities-box";
  const transcript = document.createElement("div");
  transcript.className = "transcript";
  const banner = document.createElement("div");
  banner.className = "banner hidden";
  const retryButton = document.createElement("button");
  retryButton.className = "retry";
  retryButton.textContent = t("chat.retry");

  const composer = document.createElement("div");
  composer.className = "composer";
  const input = document.createElement("textarea");
  input.placeholder = t("chat.placeholder");
  const sendButton = document.createElement("button");
  sendButton.className = "send";
  sendButton.textContent = t("chat.send");
  const micButton = document.createElement("button");
  micButton.className = "mic";
  micButton.textContent = t("chat.record");
  composer.appendChild(input);
  composer.appendChild(sendButton);
  composer.appendChild(micButton);

  root.appendChild(progressPanel);
  root.appendChild(prioritiesBox);
  root.appendChild(transcript);
  root.appendChild(banner);
  root.appendChild(composer);
  container.appendChild(root);

  // -- priorities --------------------------------------------------------

  const prioritiesInput = document.createElement("input");
  prioritiesInput.type = "text";
  prioritiesInput.placeholder = t("chat.priorities.placeholder");
  const prioritiesButton = document.createElement("button");
  prioritiesButton.textContent = t("chat.priorities.set");
  {
    const hint = document.createElement("p");
    hint.textContent = t("chat.priorities.hint");
    prioritiesBox.appendChild(hint);
    prioritiesBox.appendChild(prioritiesInput);
    prioritiesBox.appendChild(prioritiesButton);
  }

  async function submitPriorities(raw: string): Promise<void> {
    const names = raw.split(",").map((part) => part.trim()).filter(Boolean);
    if (names.length === 0) return;
    try {
      const view = await actions.setPriorities(names);
      state.applyProgress(view.phase, view.progress);
      hideBanner();
    } catch (err) {
      showError(err);
    }
    render();
  }

  prioritiesButton.addEventListener("click", () => void submitPriorities(prioritiesInput.value));

  // -- banners -----------------------------------------------------------

  function hideBanner(): void {
    banner.classList.add("hidden");
  }

  function showInfo(text: string): void {
    banner.innerHTML = "";
    banner.className = "banner info";
    banner.textContent = text;
  }

  function showError(err: unknown): void {
    banner.innerHTML = "";
    banner.className = "banner error";
    const label = document.createElement("span");
    if (err instanceof ApiError && err.code === "turn_in_flight") {
      label.textContent = t("chat.turn_in_flight");
    } else if (err instanceof ApiError) {
      label.textContent = `${t("chat.turn_failed")} ${err.message}`;
    } else {
      label.textContent = t("error.generic");
    }
    banner.appendChild(label);
    if (state.failed) banner.appendChild(retryButton);
  }

  // -- turns -------------------------------------------------------------

  async function runTurn(kind: "text" | "voice", text: string, audio: Blob | null): Promise<void> {
    if (state.busy || state.completed) return;
    state.beginTurn(kind, text);
    hideBanner();
    render();
    try {
      const response = kind === "text"
        ? await actions.sendText(text)
        : await actions.sendAudio(audio!);
      state.commit(response);
      onPhaseChange(state.phase);
    } catch (err) {
      const retriable = err instanceof ApiError ? err.retriable || err.status === 409 : false;
      state.fail({ kind, text, audio, retriable });
      showError(err);
    }
    render();
  }

  async function sendTyped(text: string): Promise<void> {
    const trimmed = text.trim();
    if (!trimmed) return;
    input.value = "";
    await runTurn("text", trimmed, null);
  }

  function sendVoice(audio: Blob): Promise<void> {
    return runTurn("voice", "…", audio);
  }

  sendButton.addEventListener("click", () => void sendTyped(input.value));
  input.addEventListener("keydown", (event) => {
    if (event.key === "Enter" && !event.shiftKey) {
      event.preventDefault();
      void sendTyped(input.value);
    }
  });
  retryButton.addEventListener("click", () => {
    const failed = state.failed;
    if (!failed) return;
    state.failed = null;
    void runTurn(failed.kind, failed.text, failed.audio);
  });

  // -- microphone --------------------------------------------------------

  const recorder = new Recorder();
  if (!recordingSupported()) {
    micButton.disabled = true;
    micButton.title = t("chat.mic_unavailable");
  } else {
    micButton.addEventListener("mousedown", () => {
      void recorder.start().then(() => {
        micButton.textContent = t("chat.recording");
      });
    });
    micButton.addEventListener("mouseup", () => {
      if (!recorder.active) return;
      micButton.textContent = t("chat.record");
      void recorder.stop().then((audio) => sendVoice(audio));
    });
  }

  // -- rendering ---------------------------------------------------------

  function renderProgress(): void {
    progressPanel.innerHTML = "";
    const snapshot = state.progress;
    if (!snapshot) return;
    const label = document.createElement("span");
    label.className = "progress-label";
    const total = snapshot.total_asked + snapshot.total_remaining;
    label.textContent = `${t("progress.label")}: ${snapshot.total_asked}/${total}`;
    progressPanel.appendChild(label);
    for (const category of snapshot.per_category) {
      const row = document.createElement("div");
      row.className = "progress-row";
      row.dataset.category = category.id;
      const name = document.createElement("span");
      name.textContent = category.display_name;
      const count = document.createElement("span");
      count.className = "count";
      const size = category.asked + category.remaining;
      count.textContent = `${category.asked}/${size}`;
      const bar = document.createElement("div");
      bar.className = "bar";
      const fill = document.createElement("div");
      fill.className = "fill";
      fill.style.width = size ? `${(category.asked / size) * 100}%` : "0%";
      bar.appendChild(fill);
      row.appendChild(name);
      row.appendChild(count);
      row.appendChild(bar);
      progressPanel.appendChild(row);
    }
  }

  function render(): void {
    renderProgress();
    prioritiesBox.classList.toggle("hidden", state.phase !== "awaiting_priorities");

    transcript.innerHTML = "";
    for (const bubble of state.bubbles) {
      const element = document.createElement("div");
      element.className = `msg ${bubble.role}`;
      if (bubble.pending) element.classList.add("pending");
      if (bubble.voice) {
        const tag = document.createElement("span");
        tag.className = "voice-tag";
        tag.textContent = t("chat.voice_note");
        element.appendChild(tag);
      }
      const body = document.createElement("span");
      body.textContent = bubble.text;
      element.appendChild(body);
      transcript.appendChild(element);
    }
    transcript.scrollTop = transcript.scrollHeight;

    const locked = state.busy || state.completed;
    input.disabled = locked;
    sendButton.disabled = locked;
    micButton.disabled = locked || !recordingSupported();
    if (state.completed) showInfo(t("chat.completed"));
  }

  render();
  return { render, sendTyped, sendVoice, submitPriorities };
}
