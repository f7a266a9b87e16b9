import { beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { errorResponse, jsonResponse, PROFILE, sessionView } from "./fixtures.js";

describe("ApiClient", () => {
  beforeEach(() => {
    localStorage.clear();
    sessionStorage.clear();
  });

  it("sends the bearer token on every request", async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ sessions: [] }));
    const api = new ApiClient("http://example.test/", "tok-123", fetchMock);
    await api.listSessions();
    const [url, init] = fetchMock.mock.calls[0] as unknown as [string, RequestInit];
    expect(url).toBe("http://example.test/sessions");
    expect((init.headers as Headers).get("Authorization")).toBe("Bearer tok-123");
  });

  it("keeps the token in memory only", async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ sessions: [] }));
    const api = new ApiClient("http://example.test", "super-secret", fetchMock);
    await api.listSessions();
    expect(localStorage.length).toBe(0);
    expect(sessionStorage.length).toBe(0);
  });

  it("creates a session from a profile", async () => {
    const fetchMock = vi.fn(async (_url: string, init?: RequestInit) => {
      expect(JSON.parse(init!.body as string)).toEqual(PROFILE);
      return jsonResponse(sessionView(), 201);
    });
    const api = new ApiClient("http://example.test", "t", fetchMock);
    const created = await api.createSession(PROFILE);
    expect(created.session_id).toBe("abc123");
  });

  it("builds list filters as query parameters", async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ sessions: [] }));
    const api = new ApiClient("http://example.test", "t", fetchMock);
    await api.listSessions({ company: "Detay Metal", status: "active" });
    const url = fetchMock.mock.calls[0][0] as unknown as string;
    expect(url).toBe("http://example.test/sessions?company=Detay+Metal&status=active");
  });

  it("parses the error envelope into ApiError", async () => {
    const fetchMock = vi.fn(async () =>
      errorResponse(409, "turn_in_flight", "another turn is running"),
    );
    const api = new ApiClient("http://example.test", "t", fetchMock);
    const failure = await api.postTurn("abc", "hi").catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(409);
    expect(failure.code).toBe("turn_in_flight");
    expect(failure.message).toBe("another turn is running");
  });

  it("carries the retriable flag from 502 bodies", async () => {
    const fetchMock = vi.fn(async () =>
      errorResponse(502, "provider_error", "upstream busy", { retriable: true }),
    );
    const api = new ApiClient("http://example.test", "t", fetchMock);
    const failure = await api.postTurn("abc", "hi").catch((e) => e);
    expect(failure.retriable).toBe(true);
  });

  it("maps transport failures to a retriable ApiError", async () => {
    const fetchMock = vi.fn(async () => {
      throw new TypeError("fetch failed");
    });
    const api = new ApiClient("http://example.test", "t", fetchMock);
    const failure = await api.health().catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(0);
    expect(failure.retriable).toBe(true);
  });

  it("posts audio as multipart with the language field", async () => {
    let form: FormData | null = null;
    const fetchMock = vi.fn(async (_url: string, init?: RequestInit) => {
      form = init!.body as FormData;
      return jsonResponse({
        session_id: "abc", assistant_text: "ok", phase: "interviewing",
        progress: null, new_messages: [],
      });
    });
    const api = new ApiClient("http://example.test", "t", fetchMock);
    const blob = new Blob([new Uint8Array([1, 2, 3])], { type: "audio/webm" });
    const response = await api.postAudioTurn("abc", blob, "tr");
    expect(response.assistant_text).toBe("ok");
    const clip = form!.get("audio");
    expect(clip).toBeInstanceOf(Blob);
    expect((clip as File).name).toBe("clip.webm");
    expect(form!.get("language")).toBe("tr");
  });

  it("requests scored reports through the query flag", async () => {
    const fetchMock = vi.fn(async () => jsonResponse({ report: {}, markdown: "" }));
    const api = new ApiClient("http://example.test", "t", fetchMock);
    await api.generateReport("abc", true);
    expect(fetchMock.mock.calls[0][0]).toBe("http://example.test/sessions/abc/report?score=true");
    await api.generateReport("abc");
    expect(fetchMock.mock.calls[1][0]).toBe("http://example.test/sessions/abc/report");
  });
});
