import { ApiClient } from "./api.js";
import { t } from "./i18n.js";
import { ChatState } from "./state.js";
import type { Phase, SessionView } from "./types.js";
import { renderChatView } from "./views/chat.js";
import { renderProfileForm } from "./views/profile.js";
import { renderReportView } from "./views/report.js";
import { renderSessionList } from "./views/sessions.js";

type Tab = "sessions" | "new" | "chat" | "report";

// Everything the app knows lives here, in memory. Closing the tab forgets
// the token; there is deliberately no localStorage involvement.
interface App {
  api: ApiClient;
  session: SessionView | null;
  chat: ChatState;
}

function renderTabs(nav: HTMLElement, app: App, active: Tab, show: (tab: Tab) => void): void {
  nav.innerHTML = "";
  const tabs: Array<[Tab, string, boolean]> = [
    ["sessions", t("nav.sessions"), true],
    ["new", t("nav.new"), true],
    ["chat", t("nav.chat"), app.session !== null],
    ["report", t("nav.report"), app.session !== null && app.chat.completed],
  ];
  for (const [tab, label, enabled] of tabs) {
    const button = document.createElement("button");
    button.textContent = label;
    button.className = tab === active ? "tab active" : "tab";
    button.disabled = !enabled;
    button.addEventListener("click", () => show(tab));
    nav.appendChild(button);
  }
}

export function startApp(root: HTMLElement, api: ApiClient, session: SessionView | null = null): void {
  root.innerHTML = "";
  const nav = document.createElement("nav");
  const view = document.createElement("main");
  root.appendChild(nav);
  root.appendChild(view);

  const app: App = { api, session, chat: new ChatState() };
  if (session) app.chat.loadSession(session);

  async function openSession(sessionId: string): Promise<void> {
    app.session = await api.getSession(sessionId);
    app.chat.loadSession(app.session);
    const progress = await api.getProgress(sessionId);
    app.chat.applyProgress(progress.phase, progress.progress);
    show("chat");
  }

  function onPhaseChange(_phase: Phase): void {
    renderTabs(nav, app, "chat", show);
  }

  function show(tab: Tab): void {
    renderTabs(nav, app, tab, show);
    if (tab === "sessions") {
      renderSessionList(view, (filters) => api.listSessions(filters), (id) => void openSession(id));
    } else if (tab === "new") {
      renderProfileForm(view, (profile) => api.createSession(profile), (created) => {
        app.session = created;
        app.chat.loadSession(created);
        show("chat");
      });
    } else if (tab === "chat" && app.session) {
      const sid = app.session.session_id;
      renderChatView(view, app.chat, {
        sendText: (text) => api.postTurn(sid, text),
        sendAudio: (audio) => api.postAudioTurn(sid, audio),
        setPriorities: (names) => api.setPriorities(sid, names),
      }, onPhaseChange);
    } else if (tab === "report" && app.session) {
      const sid = app.session.session_id;
      renderReportView(view, () => api.getReport(sid), (score) => api.generateReport(sid, score));
    }
  }

  show(app.session ? "chat" : "sessions");
}

function renderLogin(root: HTMLElement): void {
  root.innerHTML = "";
  const form = document.createElement("form");
  form.className = "login";
  const heading = document.createElement("h1");
  heading.textContent = t("app.title");
  const serverInput = document.createElement("input");
  serverInput.type = "url";
  serverInput.placeholder = t("login.server");
  serverInput.value = window.location.origin;
  const tokenInput = document.createElement("input");
  tokenInput.type = "password";
  tokenInput.placeholder = t("login.token");
  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = t("login.connect");
  const banner = document.createElement("div");
  banner.className = "banner hidden";
  form.appendChild(heading);
  form.appendChild(banner);
  form.appendChild(serverInput);
  form.appendChild(tokenInput);
  form.appendChild(button);
  root.appendChild(form);

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const api = new ApiClient(serverInput.value.trim(), tokenInput.value);
    button.disabled = true;
    try {
      await api.health();
      await api.listSessions(); // proves the token, not just reachability
      startApp(root, api);
    } catch {
      banner.textContent = t("login.failed");
      banner.className = "banner error";
      button.disabled = false;
    }
  });
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  renderLogin(document.getElementById("app")!);
}
