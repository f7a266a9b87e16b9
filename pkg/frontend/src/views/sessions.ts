import type { SessionFilters } from "../api.js";
import { t } from "../i18n.js";
import type { SessionSummary } from "../types.js";

export function renderSessionList(
  container: HTMLElement,
  load: (filters: SessionFilters) => Promise<SessionSummary[]>,
  onOpen: (sessionId: string) => void,
): { refresh: () => Promise<void> } {
  container.innerHTML = "";

  const bar = document.createElement("div");
  bar.className = "filter-bar";
  const companyInput = document.createElement("input");
  companyInput.type = "search";
  companyInput.placeholder = t("sessions.filter.company");
  const statusSelect = document.createElement("select");
  for (const [value, label] of [
    ["", t("sessions.filter.status")],
    ["active", t("sessions.status.active")],
    ["completed", t("sessions.status.completed")],
  ]) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = label;
    statusSelect.appendChild(option);
  }
  bar.appendChild(companyInput);
  bar.appendChild(statusSelect);
  container.appendChild(bar);

  const list = document.createElement("div");
  list.className = "session-list";
  container.appendChild(list);

  async function refresh(): Promise<void> {
    const filters: SessionFilters = {};
    if (companyInput.value.trim()) filters.company = companyInput.value.trim();
    if (statusSelect.value) filters.status = statusSelect.value;
    const sessions = await load(filters);

    list.innerHTML = "";
    if (sessions.length === 0) {
      const empty = document.createElement("p");
      empty.className = "empty-state";
      empty.textContent = t("sessions.empty");
      list.appendChild(empty);
      return;
    }
    for (const session of sessions) {
      const row = document.createElement("div");
      row.className = "session-row";
      const who = document.createElement("span");
      who.className = "who";
      who.textContent = `${session.profile.company_name} / ${session.profile.client_name}`;
      const status = document.createElement("span");
      status.className = `status ${session.status}`;
      status.textContent = t(`sessions.status.${session.status}`);
      const when = document.createElement("span");
      when.className = "when";
      when.textContent = session.updated_at;
      const open = document.createElement("button");
      open.textContent = t("sessions.open");
      open.addEventListener("click", () => onOpen(session.session_id));
      row.appendChild(who);
      row.appendChild(status);
      row.appendChild(when);
      row.appendChild(open);
      list.appendChild(row);
    }
  }

  companyInput.addEventListener("change", () => void refresh());
  statusSelect.addEventListener("change", () => void refresh());
  void refresh();
  return { refresh };
}
