import { describe, expect, it } from "vitest";

import {
  activeUnit,
  freshView,
  moveCursor,
  pickNode,
  toggleCheck,
  unitList,
} from "../src/state.js";
import { fig2Snapshot } from "./fixtures.js";

describe("freshView", () => {
  it("drops per-action selection but keeps guideline edits", () => {
    const view = freshView(fig2Snapshot());
    view.pending.add("e2");
    view.selectedPair = ["e1", "e3"];
    view.guidelines.temporal = "my own wording";
    view.guidelinesOpen = true;
    const rebuilt = freshView(fig2Snapshot(), view);
    expect(rebuilt.pending.size).toBe(0);
    expect(rebuilt.selectedPair).toBeNull();
    expect(rebuilt.guidelines.temporal).toBe("my own wording");
    expect(rebuilt.guidelinesOpen).toBe(true);
  });
});

describe("unitList", () => {
  it("enumerates all canonical pairs in the temporal phase", () => {
    const units = unitList(fig2Snapshot());
    expect(units).toHaveLength(6); // C(4,2)
    expect(units[0]).toEqual({ kind: "pair", a: "e1", b: "e2" });
    expect(units[5]).toEqual({ kind: "pair", a: "e3", b: "e4" });
  });

  it("lists clusters in the causal phase", () => {
    const snapshot = fig2Snapshot({
      phase: "causal",
      graph: {
        ...fig2Snapshot().graph,
        clusters: [
          { id: "c1", members: ["e1", "e2"], representative: "e1" },
          { id: "c2", members: ["e3"], representative: "e3" },
        ],
      },
    });
    expect(unitList(snapshot).map((u) => (u.kind === "causal" ? u.focal : ""))).toEqual([
      "c1",
      "c2",
    ]);
  });
});

describe("pickNode", () => {
  it("builds the pair in text order regardless of click order", () => {
    const view = freshView(fig2Snapshot());
    pickNode(view, "e3");
    expect(view.pickedNode).toBe("e3");
    expect(view.selectedPair).toBeNull();
    pickNode(view, "e1");
    expect(view.selectedPair).toEqual(["e1", "e3"]);
    expect(view.pickedNode).toBeNull();
  });

  it("ignores a repeated click on the same node", () => {
    const view = freshView(fig2Snapshot());
    pickNode(view, "e2");
    pickNode(view, "e2");
    expect(view.pickedNode).toBe("e2");
    expect(view.selectedPair).toBeNull();
  });

  it("does nothing outside the temporal phase", () => {
    const view = freshView(fig2Snapshot({ phase: "coreference" }));
    pickNode(view, "e1");
    pickNode(view, "e2");
    expect(view.selectedPair).toBeNull();
  });
});

describe("activeUnit", () => {
  it("prefers the graph-selected pair over the server unit", () => {
    const view = freshView(fig2Snapshot());
    expect(activeUnit(view)).toEqual({ kind: "pair", a: "e2", b: "e3" });
    pickNode(view, "e1");
    pickNode(view, "e4");
    expect(activeUnit(view)).toEqual({ kind: "pair", a: "e1", b: "e4" });
  });

  it("follows the cursor during Prev/Next navigation", () => {
    const view = freshView(fig2Snapshot());
    moveCursor(view, 1); // from (e2,e3) at index 3 to index 4
    expect(activeUnit(view)).toEqual({ kind: "pair", a: "e2", b: "e4" });
    moveCursor(view, -2);
    expect(activeUnit(view)).toEqual({ kind: "pair", a: "e1", b: "e4" });
  });

  it("clamps the cursor at both ends", () => {
    const view = freshView(fig2Snapshot());
    moveCursor(view, -100);
    expect(activeUnit(view)).toEqual({ kind: "pair", a: "e1", b: "e2" });
    moveCursor(view, 100);
    expect(activeUnit(view)).toEqual({ kind: "pair", a: "e3", b: "e4" });
  });
});

describe("toggleCheck", () => {
  it("flips membership", () => {
    const view = freshView(fig2Snapshot({ phase: "coreference" }));
    toggleCheck(view, "e2");
    expect(view.pending.has("e2")).toBe(true);
    toggleCheck(view, "e2");
    expect(view.pending.has("e2")).toBe(false);
  });
});
