import { ApiError } from "../api.js";
import { t } from "../i18n.js";
import type { ClientProfile, SessionView } from "../types.js";

const FIELDS: Array<keyof ClientProfile> = [
  "company_name",
  "client_name",
  "industry_type",
  "industry_size",
  "job_title",
];

export function renderProfileForm(
  container: HTMLElement,
  submit: (profile: ClientProfile) => Promise<SessionView>,
  onCreated: (session: SessionView) => void,
): void {
  container.innerHTML = "";
  const form = document.createElement("form");
  form.className = "profile-form";

  const heading = document.createElement("h2");
  heading.textContent = t("profile.heading");
  form.appendChild(heading);

  const banner = document.createElement("div");
  banner.className = "banner hidden";
  form.appendChild(banner);

  const inputs = new Map<keyof ClientProfile, HTMLInputElement>();
  const errors = new Map<keyof ClientProfile, HTMLElement>();
  for (const field of FIELDS) {
    const label = document.createElement("label");
    label.textContent = t(`profile.${field}`);
    const input = document.createElement("input");
    input.name = field;
    input.type = "text";
    label.appendChild(input);
    const error = document.createElement("span");
    error.className = "field-error hidden";
    label.appendChild(error);
    form.appendChild(label);
    inputs.set(field, input);
    errors.set(field, error);
  }

  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = t("profile.start");
  form.appendChild(button);

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    banner.classList.add("hidden");

    // inline validation first; nothing leaves the browser on a bad form
    let valid = true;
    const profile = {} as ClientProfile;
    for (const field of FIELDS) {
      const value = inputs.get(field)!.value.trim();
      const error = errors.get(field)!;
      if (!value) {
        error.textContent = t("profile.required");
        error.classList.remove("hidden");
        valid = false;
      } else {
        error.classList.add("hidden");
        profile[field] = value;
      }
    }
    if (!valid) return;

    button.disabled = true;
    try {
      onCreated(await submit(profile));
    } catch (err) {
      banner.textContent = err instanceof ApiError && err.status === 401
        ? t("error.unauthorized")
        : err instanceof ApiError ? err.message : t("error.generic");
      banner.classList.remove("hidden");
    } finally {
      button.disabled = false;
    }
  });

  container.appendChild(form);
}
