import { ApiError } from "../api.js";
import { t } from "../i18n.js";
import type { Report, ReportDoc } from "../types.js";

const SECTIONS: Array<[keyof Report, string]> = [
  ["current_practices", "report.current_practices"],
  ["challenges", "report.challenges"],
  ["strategic_goals", "report.strategic_goals"],
];

function renderReport(target: HTMLElement, report: Report): void {
  target.innerHTML = "";
  for (const [field, labelKey] of SECTIONS) {
    const heading = document.createElement("h3");
    heading.textContent = t(labelKey);
    target.appendChild(heading);
    const items = report[field] as string[];
    const list = document.createElement("ul");
    list.className = `report-section ${field}`;
    if (items.length === 0) {
      const entry = document.createElement("li");
      entry.className = "empty";
      entry.textContent = t("report.empty_section");
      list.appendChild(entry);
    }
    for (const item of items) {
      const entry = document.createElement("li");
      entry.textContent = item;
      list.appendChild(entry);
    }
    target.appendChild(list);
  }

  if (report.scores && report.scores.length > 0) {
    const heading = document.createElement("h3");
    heading.textContent = t("report.scores");
    target.appendChild(heading);
    const table = document.createElement("table");
    table.className = "scores";
    for (const score of report.scores) {
      const row = document.createElement("tr");
      const question = document.createElement("td");
      question.textContent = score.question_text;
      const value = document.createElement("td");
      value.className = "score";
      value.textContent = `${score.score}/4`;
      const rationale = document.createElement("td");
      rationale.textContent = score.rationale;
      row.appendChild(question);
      row.appendChild(value);
      row.appendChild(rationale);
      table.appendChild(row);
    }
    target.appendChild(table);
  }
}

export function renderReportView(
  container: HTMLElement,
  load: () => Promise<ReportDoc>,
  generate: (score: boolean) => Promise<ReportDoc>,
): { ready: Promise<void> } {
  container.innerHTML = "";
  const root = document.createElement("div");
  root.className = "report-view";
  const heading = document.createElement("h2");
  heading.textContent = t("report.heading");
  const banner = document.createElement("div");
  banner.className = "banner hidden";
  const body = document.createElement("div");
  body.className = "report-body";
  root.appendChild(heading);
  root.appendChild(banner);
  root.appendChild(body);
  container.appendChild(root);

  function showError(err: unknown): void {
    banner.className = "banner error";
    banner.textContent = err instanceof ApiError ? err.message : t("error.generic");
  }

  function offerGenerate(): void {
    body.innerHTML = "";
    const note = document.createElement("p");
    note.textContent = t("report.none");
    body.appendChild(note);
    for (const [withScores, labelKey] of [
      [false, "report.generate"],
      [true, "report.generate_scored"],
    ] as Array<[boolean, string]>) {
      const button = document.createElement("button");
      button.className = withScores ? "generate scored" : "generate";
      button.textContent = t(labelKey);
      button.addEventListener("click", async () => {
        button.disabled = true;
        try {
          const doc = await generate(withScores);
          banner.className = "banner hidden";
          renderReport(body, doc.report);
        } catch (err) {
          showError(err);
          button.disabled = false;
        }
      });
      body.appendChild(button);
    }
  }

  const ready = (async () => {
    try {
      const doc = await load();
      renderReport(body, doc.report);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        offerGenerate();
      } else {
        showError(err);
      }
    }
  })();

  return { ready };
}
