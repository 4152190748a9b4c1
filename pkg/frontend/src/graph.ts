/** SVG relation-graph renderer.
 *
 * Edge styling carries provenance: direct relations solid, inferred dashed,
 * the unit under scrutiny red, conflicted pairs emphasized. In the causal
 * phase non-causal edges fade and CAUSE edges stand out.
 */

import { arcPath, layoutBox, layoutNodes } from "./layout.js";
import type { ViewState } from "./state.js";
import { activeUnit } from "./state.js";
import type { RelationEdge, Unit } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphCallbacks {
  onNodeClick(nodeId: string): void;
  onConflictPairClick?(a: string, b: string): void;
}

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS(SVG_NS, tag);
}

function scrutinizedPair(unit: Unit | null): [string, string] | null {
  if (unit && unit.kind === "pair") return [unit.a, unit.b];
  return null;
}

function edgeClass(edge: RelationEdge, view: ViewState, conflicted: Set<string>): string {
  const classes = ["edge", edge.provenance];
  const unit = activeUnit(view);
  const pair = scrutinizedPair(unit);
  if (pair && pair[0] === edge.a && pair[1] === edge.b) classes.push("scrutinized");
  if (conflicted.has(`${edge.a}|${edge.b}`)) classes.push("conflicted");
  if (view.snapshot.phase === "causal") classes.push("faded");
  if (view.snapshot.phase === "coreference" && edge.label !== "EQUAL") classes.push("faded");
  return classes.join(" ");
}

export function renderGraph(
  svg: SVGSVGElement,
  view: ViewState,
  callbacks: GraphCallbacks,
): void {
  const snapshot = view.snapshot;
  svg.innerHTML = "";
  const points = layoutNodes(snapshot);
  const box = layoutBox(points.length);
  svg.setAttribute("viewBox", `0 0 ${box.width} ${box.height}`);
  svg.setAttribute("width", String(box.width));
  svg.setAttribute("height", String(box.height));
  const position = new Map(points.map((p) => [p.id, p]));
  const conflicted = new Set(
    snapshot.conflicts.map((c) => `${c.pair.a}|${c.pair.b}`),
  );

  const unit = activeUnit(view);
  const pair = scrutinizedPair(unit);

  // temporal/coreference edges
  for (const edge of snapshot.graph.edges) {
    const from = position.get(edge.a);
    const to = position.get(edge.b);
    if (!from || !to) continue;
    const path = svgEl("path");
    path.setAttribute("d", arcPath(from, to));
    path.setAttribute("class", edgeClass(edge, view, conflicted));
    path.setAttribute("data-edge", `${edge.a}|${edge.b}`);
    path.setAttribute("data-label", edge.label);
    path.setAttribute("data-provenance", edge.provenance);
    svg.appendChild(path);

    const labelText = svgEl("text");
    const mid = (from.x + to.x) / 2;
    const span = Math.abs(to.x - from.x) / box.gap;
    labelText.setAttribute("x", String(mid));
    labelText.setAttribute("y", String(from.y - 22 - span * 14));
    labelText.setAttribute("class", `edge-label ${edge.provenance}`);
    labelText.textContent = edge.label.toLowerCase();
    svg.appendChild(labelText);

    if (conflicted.has(`${edge.a}|${edge.b}`) && callbacks.onConflictPairClick) {
      path.addEventListener("click", () => callbacks.onConflictPairClick!(edge.a, edge.b));
    }
  }

  // the pair being scrutinized, even when still unannotated
  if (pair) {
    const from = position.get(pair[0]);
    const to = position.get(pair[1]);
    if (from && to) {
      const focus = svgEl("path");
      focus.setAttribute("d", arcPath(from, to));
      focus.setAttribute("class", "edge scrutinized-overlay");
      focus.setAttribute("data-focus-pair", `${pair[0]}|${pair[1]}`);
      svg.appendChild(focus);
    }
  }

  // causal edges between cluster representatives
  for (const causal of snapshot.graph.causal_edges) {
    const from = position.get(causal.cause_rep);
    const to = position.get(causal.effect_rep);
    if (!from || !to) continue;
    const path = svgEl("path");
    path.setAttribute("d", arcPath(from, to));
    path.setAttribute("class", "edge cause");
    path.setAttribute("data-cause", `${causal.cause}|${causal.effect}`);
    svg.appendChild(path);
    const marker = svgEl("text");
    marker.setAttribute("x", String((from.x + to.x) / 2));
    marker.setAttribute("y", String(from.y + 26));
    marker.setAttribute("class", "edge-label cause");
    marker.textContent = "cause";
    svg.appendChild(marker);
  }

  const highlight = highlightRoles(view, unit);
  for (const point of points) {
    const node = snapshot.graph.nodes.find((n) => n.id === point.id)!;
    const group = svgEl("g");
    group.setAttribute("class", nodeClass(node.id, view, highlight));
    group.setAttribute("data-node", node.id);
    const circle = svgEl("circle");
    circle.setAttribute("cx", String(point.x));
    circle.setAttribute("cy", String(point.y));
    circle.setAttribute("r", "13");
    group.appendChild(circle);
    const label = svgEl("text");
    label.setAttribute("x", String(point.x));
    label.setAttribute("y", String(point.y + 32));
    label.setAttribute("class", "node-label");
    label.textContent = `${node.surface} (${node.order_index + 1})`;
    group.appendChild(label);
    group.addEventListener("click", () => callbacks.onNodeClick(node.id));
    svg.appendChild(group);
  }
}

function highlightRoles(view: ViewState, unit: Unit | null): Map<string, string> {
  const roles = new Map<string, string>();
  if (!unit) return roles;
  if (unit.kind === "pair") {
    roles.set(unit.a, "green");
    roles.set(unit.b, "red");
  } else if (unit.kind === "coref") {
    roles.set(unit.focal, "green");
    for (const c of unit.candidates) roles.set(c, "red");
  } else if (unit.kind === "causal") {
    const clusters = new Map(view.snapshot.graph.clusters.map((c) => [c.id, c]));
    const focal = clusters.get(unit.focal);
    if (focal) for (const m of focal.members) roles.set(m, "green");
    for (const cid of unit.candidates) {
      const cluster = clusters.get(cid);
      if (cluster) for (const m of cluster.members) roles.set(m, "red");
    }
  } else {
    roles.set(unit.mention, "green");
  }
  return roles;
}

function nodeClass(nodeId: string, view: ViewState, roles: Map<string, string>): string {
  const classes = ["node"];
  const role = roles.get(nodeId);
  if (role) classes.push(role);
  if (view.pickedNode === nodeId) classes.push("picked");
  return classes.join(" ");
}
