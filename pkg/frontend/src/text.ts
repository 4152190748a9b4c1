/** Document pane: raw text with mention spans and temporal-entity highlights. */

import type { ViewState } from "./state.js";
import { activeUnit } from "./state.js";
import type { Snapshot, Unit } from "./types.js";

interface Span {
  start: number;
  end: number;
  classes: string[];
  mentionId?: string;
  title?: string;
}

function mentionRole(id: string, view: ViewState): string | null {
  const unit: Unit | null = activeUnit(view);
  if (!unit) return null;
  if (unit.kind === "pair") {
    if (unit.a === id) return "focal-a";
    if (unit.b === id) return "focal-b";
  } else if (unit.kind === "coref") {
    if (unit.focal === id) return "focal-a";
    if (unit.candidates.includes(id)) return "focal-b";
  } else if (unit.kind === "causal") {
    const clusters = new Map(view.snapshot.graph.clusters.map((c) => [c.id, c]));
    if (clusters.get(unit.focal)?.members.includes(id)) return "focal-a";
    for (const cid of unit.candidates) {
      if (clusters.get(cid)?.members.includes(id)) return "focal-b";
    }
  } else if (unit.kind === "selection" && unit.mention === id) {
    return "focal-a";
  }
  return null;
}

function collectSpans(snapshot: Snapshot, view: ViewState): Span[] {
  const spans: Span[] = [];
  for (const entity of snapshot.temporal_entities) {
    spans.push({ start: entity.start, end: entity.end, classes: ["temporal-entity"] });
  }
  for (const mention of snapshot.graph.nodes) {
    const classes = ["mention", mention.status];
    const role = mentionRole(mention.id, view);
    if (role) classes.push(role);
    spans.push({
      start: mention.start,
      end: mention.end,
      classes,
      mentionId: mention.id,
      title: `${mention.id} (${mention.status})`,
    });
  }
  return spans.sort((x, y) => x.start - y.start || y.end - x.end);
}

/** Rebuild the text pane; overlapping spans beyond the first are dropped. */
export function renderText(
  container: HTMLElement,
  view: ViewState,
  onMentionClick: (mentionId: string) => void,
): void {
  const snapshot = view.snapshot;
  container.innerHTML = "";
  let offset = 0;
  for (const span of collectSpans(snapshot, view)) {
    if (span.start < offset) continue;
    if (span.start > offset) {
      container.appendChild(document.createTextNode(snapshot.text.slice(offset, span.start)));
    }
    const el = document.createElement("span");
    el.className = span.classes.join(" ");
    el.textContent = snapshot.text.slice(span.start, span.end);
    if (span.title) el.title = span.title;
    if (span.mentionId) {
      el.dataset.mention = span.mentionId;
      el.addEventListener("click", () => onMentionClick(span.mentionId!));
    }
    container.appendChild(el);
    offset = span.end;
  }
  if (offset < snapshot.text.length) {
    container.appendChild(document.createTextNode(snapshot.text.slice(offset)));
  }
}
