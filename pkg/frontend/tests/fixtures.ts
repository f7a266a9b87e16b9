import type {
  ClientProfile,
  Message,
  ProgressSnapshot,
  SessionView,
  TurnResponse,
} from "../src/types.js";

export const PROFILE: ClientProfile = {
  company_name: "Detay Metal",
  client_name: "Ada Aksoy",
  industry_type: "metal fabrication",
  industry_size: "35 employees",
  job_title: "Operations Manager",
};

let nextId = 1;

export function message(overrides: Partial<Message> = {}): Message {
  return {
    id: nextId++,
    role: "assistant",
    content: "Hello there.",
    modality: "text",
    timestamp: "2025-03-01T09:30:00.000Z",
    detected_language: null,
    tool_call_id: null,
    ...overrides,
  };
}

export function resetIds(): void {
  nextId = 1;
}

export function sessionView(overrides: Partial<SessionView> = {}): SessionView {
  return {
    session_id: "abc123",
    profile: PROFILE,
    catalog_version: "1.0",
    status: "active",
    phase: "awaiting_priorities",
    created_at: "2025-03-01T09:30:00.000Z",
    updated_at: "2025-03-01T09:30:00.000Z",
    message_count: 0,
    state: {},
    messages: [],
    ...overrides,
  };
}

export function progressSnapshot(asked = 3): ProgressSnapshot {
  return {
    total_asked: asked,
    total_remaining: 12 - asked,
    per_category: [
      { id: "corporate_governance", display_name: "Corporate Governance", asked, remaining: 12 - asked },
    ],
  };
}

export function turnResponse(overrides: Partial<TurnResponse> = {}): TurnResponse {
  return {
    session_id: "abc123",
    assistant_text: "Understood.",
    phase: "interviewing",
    progress: progressSnapshot(),
    new_messages: [],
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export function errorResponse(
  status: number,
  code: string,
  msg = "nope",
  extra: Record<string, unknown> = {},
): Response {
  return jsonResponse({ detail: { code, message: msg, ...extra } }, status);
}

/** A promise whose resolution the test controls. */
export function deferred<T>(): { promise: Promise<T>; resolve: (v: T) => void; reject: (e: unknown) => void } {
  let resolve!: (v: T) => void;
  let reject!: (e: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}
