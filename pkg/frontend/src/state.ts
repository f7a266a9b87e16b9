import type { Message, Phase, ProgressSnapshot, SessionView, TurnResponse } from "./types.js";

// One chat bubble as rendered. Optimistic entries exist only until the
// server confirms or rejects the turn.
export interface Bubble {
  key: string;
  role: "user" | "assistant";
  text: string;
  voice: boolean;
  pending: boolean;
}

export function bubblesFromMessages(messages: Message[]): Bubble[] {
  const bubbles: Bubble[] = [];
  for (const message of messages) {
    if (message.role !== "user" && message.role !== "assistant") continue; // system/tool stay internal
    bubbles.push({
      key: `m${message.id}`,
      role: message.role,
      text: message.content,
      voice: message.modality === "audio_transcribed",
      pending: false,
    });
  }
  return bubbles;
}

export interface FailedTurn {
  kind: "text" | "voice";
  text: string;
  audio: Blob | null;
  retriable: boolean;
}

/** Holds everything the chat view renders. One turn in flight at a time:
 *  `busy` gates the send controls, the backend's 409 stays authoritative. */
export class ChatState {
  sessionId = "";
  phase: Phase = "awaiting_priorities";
  progress: ProgressSnapshot | null = null;
  bubbles: Bubble[] = [];
  busy = false;
  failed: FailedTurn | null = null;
  private optimisticSeq = 0;

  loadSession(view: SessionView): void {
    this.sessionId = view.session_id;
    this.phase = view.phase;
    this.bubbles = bubblesFromMessages(view.messages);
    this.busy = false;
    this.failed = null;
  }

  get completed(): boolean {
    return this.phase === "completed";
  }

  /** Render the user's turn immediately; rolled back if the turn fails. */
  beginTurn(kind: "text" | "voice", text: string): void {
    if (this.busy) throw new Error("a turn is already in flight");
    this.busy = true;
    this.failed = null;
    this.optimisticSeq += 1;
    this.bubbles.push({
      key: `p${this.optimisticSeq}`,
      role: "user",
      text,
      voice: kind === "voice",
      pending: true,
    });
  }

  commit(response: TurnResponse): void {
    this.bubbles = this.bubbles.filter((b) => !b.pending);
    this.bubbles.push(...bubblesFromMessages(response.new_messages));
    this.phase = response.phase;
    this.progress = response.progress;
    this.busy = false;
  }

  fail(turn: FailedTurn): void {
    this.bubbles = this.bubbles.filter((b) => !b.pending);
    this.failed = turn;
    this.busy = false;
  }

  applyProgress(phase: Phase, progress: ProgressSnapshot | null): void {
    this.phase = phase;
    this.progress = progress;
  }
}
