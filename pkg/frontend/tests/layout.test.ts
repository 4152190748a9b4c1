import { describe, expect, it } from "vitest";

import { arcPath, layoutNodes, MARGIN, NODE_GAP } from "../src/layout.js";
import { fig2Snapshot } from "./fixtures.js";

describe("layoutNodes", () => {
  it("is deterministic and ordered left-to-right by text order", () => {
    const one = layoutNodes(fig2Snapshot());
    const two = layoutNodes(fig2Snapshot());
    expect(one).toEqual(two);
    expect(one.map((p) => p.id)).toEqual(["e1", "e2", "e3", "e4"]);
    for (let i = 1; i < one.length; i++) {
      expect(one[i].x - one[i - 1].x).toBe(NODE_GAP);
    }
    expect(one[0].x).toBe(MARGIN);
  });

  it("skips excluded mentions", () => {
    const snapshot = fig2Snapshot();
    snapshot.graph.nodes[1].status = "excluded";
    expect(layoutNodes(snapshot).map((p) => p.id)).toEqual(["e1", "e3", "e4"]);
  });
});

describe("arcPath", () => {
  it("is symmetric in its endpoints", () => {
    const [a, , c] = layoutNodes(fig2Snapshot());
    expect(arcPath(a, c)).toBe(arcPath(c, a));
  });

  it("lifts farther pairs higher", () => {
    const [a, b, , d] = layoutNodes(fig2Snapshot());
    const near = arcPath(a, b);
    const far = arcPath(a, d);
    const controlY = (path: string) => Number(path.split(" ")[5]);
    expect(controlY(far)).toBeLessThan(controlY(near)); // smaller y = higher arc
  });
});
