import type {
  ClientProfile,
  HealthInfo,
  ProgressView,
  ReportDoc,
  SessionSummary,
  SessionView,
  TurnResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly retriable: boolean = false,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export interface SessionFilters {
  company?: string;
  client?: string;
  job_title?: string;
  status?: string;
}

type Fetch = typeof fetch;

/** Thin client for the interview service. The token lives only in this
 *  object; nothing is ever written to storage. */
export class ApiClient {
  private readonly fetchImpl: Fetch;

  constructor(
    private readonly baseUrl: string,
    private readonly token: string,
    fetchImpl?: Fetch,
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? fetch.bind(globalThis);
  }

  private async request<T>(path: string, init: RequestInit = {}): Promise<T> {
    const headers = new Headers(init.headers);
    headers.set("Authorization", `Bearer ${this.token}`);
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, { ...init, headers });
    } catch {
      throw new ApiError(0, "network_error", "could not reach the server", true);
    }
    if (!response.ok) {
      let code = "http_error";
      let message = `${response.status}`;
      let retriable = response.status >= 500;
      try {
        const body = await response.json();
        const detail = body?.detail ?? {};
        code = detail.code ?? code;
        message = detail.message ?? message;
        if (typeof detail.retriable === "boolean") retriable = detail.retriable;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, code, message, retriable);
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthInfo> {
    return this.request<HealthInfo>("/health");
  }

  createSession(profile: ClientProfile): Promise<SessionView> {
    return this.request<SessionView>("/sessions", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(profile),
    });
  }

  async listSessions(filters: SessionFilters = {}): Promise<SessionSummary[]> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filters)) {
      if (value) params.set(key, value);
    }
    const query = params.toString();
    const body = await this.request<{ sessions: SessionSummary[] }>(
      `/sessions${query ? `?${query}` : ""}`,
    );
    return body.sessions;
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${sessionId}`);
  }

  setPriorities(sessionId: string, priorities: string[]): Promise<ProgressView> {
    return this.request<ProgressView>(`/sessions/${sessionId}/priorities`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ priorities }),
    });
  }

  getProgress(sessionId: string): Promise<ProgressView> {
    return this.request<ProgressView>(`/sessions/${sessionId}/progress`);
  }

  postTurn(sessionId: string, text: string): Promise<TurnResponse> {
    return this.request<TurnResponse>(`/sessions/${sessionId}/turns`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
  }

  postAudioTurn(sessionId: string, audio: Blob, language?: string): Promise<TurnResponse> {
    const form = new FormData();
    const clip = new File([audio], "clip.webm", { type: audio.type || "audio/webm" });
    form.append("audio", clip);
    if (language) form.append("language", language);
    return this.request<TurnResponse>(`/sessions/${sessionId}/turns`, {
      method: "POST",
      body: form,
    });
  }

  generateReport(sessionId: string, score = false): Promise<ReportDoc> {
    return this.request<ReportDoc>(
      `/sessions/${sessionId}/report${score ? "?score=true" : ""}`,
      { method: "POST" },
    );
  }

  getReport(sessionId: string): Promise<ReportDoc> {
    return this.request<ReportDoc>(`/sessions/${sessionId}/report`);
  }
}
