import { describe, expect, it, vi } from "vitest";

import type { Client } from "../src/api.js";
import { ApiError } from "../src/api.js";
import { App } from "../src/app.js";
import type { Snapshot } from "../src/types.js";
import { fig2Snapshot } from "./fixtures.js";

function appWith(snapshot: Snapshot, overrides: Partial<Client> = {}) {
  document.body.innerHTML = '<div id="root"></div>';
  const client = {
    snapshot: vi.fn(async () => snapshot),
    advance: vi.fn(async () => ({ phase: "coreference" })),
    ...overrides,
  } as unknown as Client;
  const root = document.getElementById("root")!;
  return { app: App.attach(client, "s1", root), root, client };
}

describe("App", () => {
  it("renders every pane from the snapshot", async () => {
    const { app, root } = appWith(fig2Snapshot());
    await app.refresh();
    expect(root.querySelector(".phase-chip")?.textContent).toBe("temporal");
    expect(root.querySelectorAll(".text-pane .mention")).toHaveLength(4);
    expect(root.querySelectorAll("g.node")).toHaveLength(4);
    expect(root.querySelector(".pane-title")?.textContent).toContain("collided");
    expect(root.querySelector(".nav-next-task")?.textContent).toContain("Next Task");
  });

  it("prompts phase-complete when Next Unhandled finds nothing", async () => {
    const { app, root } = appWith(fig2Snapshot({ current_unit: null }));
    await app.refresh();
    (root.querySelector(".nav-unhandled") as HTMLButtonElement).click();
    const dialog = root.querySelector('[data-pane="dialog"]')!;
    expect(dialog.classList.contains("hidden")).toBe(false);
    expect(dialog.textContent).toContain("complete");
  });

  it("surfaces blocked advances verbatim with the blocking items", async () => {
    const { app, root } = appWith(fig2Snapshot(), {
      advance: vi.fn(async () => {
        throw new ApiError(409, "BlockedAdvanceError", "cannot leave temporal phase", [
          "pair (e1, e3) is unannotated",
        ]);
      }),
    });
    await app.refresh();
    (root.querySelector(".nav-next-task") as HTMLButtonElement).click();
    await vi.waitFor(() => {
      const error = root.querySelector('[data-pane="error"]')!;
      expect(error.classList.contains("hidden")).toBe(false);
      expect(error.textContent).toContain("cannot leave temporal phase");
      expect(error.textContent).toContain("pair (e1, e3) is unannotated");
    });
  });

  it("shows Done? on the last task", async () => {
    const { app, root } = appWith(fig2Snapshot({ phase: "causal", current_unit: null }));
    await app.refresh();
    expect(root.querySelector(".nav-next-task")?.textContent).toBe("Done?");
  });
});
