import { afterEach, describe, expect, it } from "vitest";

import { getLocale, setLocale, t } from "../src/i18n.js";

describe("locale layer", () => {
  afterEach(() => setLocale("en"));

  it("defaults to English", () => {
    expect(getLocale()).toBe("en");
    expect(t("chat.send")).toBe("Send");
  });

  it("switches the chrome language", () => {
    setLocale("tr");
    expect(t("chat.send")).toBe("Gönder");
    expect(t("report.heading")).toBe("Bulgular");
  });

  it("falls back to the key for unknown strings", () => {
    expect(t("no.such.key")).toBe("no.such.key");
  });
});
