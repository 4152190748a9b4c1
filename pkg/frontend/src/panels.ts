/** Phase panes, navigation bar, conflict banner, and guideline panel. */

import type { ViewState } from "./state.js";
import { activeUnit, unitList } from "./state.js";
import type { ConflictView, Snapshot, TemporalLabel, Unit } from "./types.js";

export interface Handlers {
  setStatus(mention: string, status: "included" | "excluded"): void;
  annotate(a: string, b: string, label: TemporalLabel): void;
  submitCoref(focal: string, members: string[]): void;
  submitCausal(focal: string, causes: string[]): void;
  toggleCheck(id: string): void;
  moveUnit(delta: number): void;
  nextUnhandled(): void;
  advance(): void;
  revert(): void;
  exportNow(): void;
  toggleGuidelines(): void;
  editGuidelines(text: string): void;
  jumpToPair(a: string, b: string): void;
}

const LABEL_OPTIONS: { label: TemporalLabel; caption: string }[] = [
  { label: "BEFORE", caption: "before" },
  { label: "AFTER", caption: "after" },
  { label: "EQUAL", caption: "equal" },
  { label: "VAGUE", caption: "uncertain" },
];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(caption: string, className: string, onClick: () => void): HTMLButtonElement {
  const b = el("button", className, caption);
  b.type = "button";
  b.addEventListener("click", onClick);
  return b;
}

function surfaceOf(snapshot: Snapshot, mentionId: string): string {
  return snapshot.graph.nodes.find((n) => n.id === mentionId)?.surface ?? mentionId;
}

function clusterCaption(snapshot: Snapshot, clusterId: string): string {
  const cluster = snapshot.graph.clusters.find((c) => c.id === clusterId);
  if (!cluster) return clusterId;
  return cluster.members.map((m) => surfaceOf(snapshot, m)).join(" / ");
}

export function renderStatus(container: HTMLElement, snapshot: Snapshot): void {
  const t = snapshot.progress.temporal;
  container.innerHTML = "";
  container.appendChild(el("span", "phase-chip", snapshot.phase));
  container.appendChild(
    el(
      "span",
      "progress-line",
      `pairs ${t.resolved}/${t.total} (direct ${t.direct}, auto ${t.inferred}) · ` +
        `clusters ${snapshot.progress.coreference.clusters} · ` +
        `cause links ${snapshot.progress.causal.links}` +
        (t.conflicts ? ` · ${t.conflicts} conflict(s)` : ""),
    ),
  );
}

export function renderControls(
  container: HTMLElement,
  view: ViewState,
  handlers: Handlers,
): void {
  container.innerHTML = "";
  const snapshot = view.snapshot;
  const unit = activeUnit(view);

  if (snapshot.phase === "done") {
    container.appendChild(el("p", "pane-title", "Annotation complete."));
    container.appendChild(button("Export JSON", "primary export-button", handlers.exportNow));
    container.appendChild(el("pre", "export-output"));
    return;
  }

  if (unit === null) {
    const note = el("p", "pane-done", "No more items in this step.");
    container.appendChild(note);
    return;
  }

  switch (unit.kind) {
    case "selection":
      renderSelectionPane(container, snapshot, unit, handlers);
      break;
    case "pair":
      renderTemporalPane(container, snapshot, unit, handlers);
      break;
    case "coref":
      renderChecklistPane(container, view, handlers, {
        title: "Which of the highlighted mentions refer to the same event as",
        focalCaption: surfaceOf(snapshot, unit.focal),
        items: unit.candidates.map((c) => ({ id: c, caption: surfaceOf(snapshot, c) })),
        submit: (checked) => handlers.submitCoref(unit.focal, checked),
        submitCaption: "Form cluster",
        emptyCaption: "No co-occurring mentions.",
      });
      break;
    case "causal":
      renderChecklistPane(container, view, handlers, {
        title: "Which of the preceding events caused",
        focalCaption: clusterCaption(snapshot, unit.focal),
        items: unit.candidates.map((c) => ({
          id: c,
          caption: clusterCaption(snapshot, c),
        })),
        submit: (checked) => handlers.submitCausal(unit.focal, checked),
        submitCaption: "Record causes",
        emptyCaption: "No preceding events.",
      });
      break;
  }
}

function renderSelectionPane(
  container: HTMLElement,
  snapshot: Snapshot,
  unit: Extract<Unit, { kind: "selection" }>,
  handlers: Handlers,
): void {
  const mention = snapshot.graph.nodes.find((n) => n.id === unit.mention);
  container.appendChild(
    el("p", "pane-title", `Is "${mention?.surface ?? unit.mention}" an actual, anchorable event?`),
  );
  const row = el("div", "button-row");
  row.appendChild(button("Event", "include-button", () => handlers.setStatus(unit.mention, "included")));
  row.appendChild(button("No event", "exclude-button", () => handlers.setStatus(unit.mention, "excluded")));
  container.appendChild(row);
}

function renderTemporalPane(
  container: HTMLElement,
  snapshot: Snapshot,
  unit: Extract<Unit, { kind: "pair" }>,
  handlers: Handlers,
): void {
  const a = surfaceOf(snapshot, unit.a);
  const b = surfaceOf(snapshot, unit.b);
  container.appendChild(el("p", "pane-title", `Which started first: "${a}" or "${b}"?`));
  const existing = snapshot.graph.edges.find((e) => e.a === unit.a && e.b === unit.b);
  if (existing) {
    container.appendChild(
      el("p", "pane-note", `currently ${existing.label.toLowerCase()} (${existing.provenance})`),
    );
  }
  const form = el("div", "radio-row");
  let chosen: TemporalLabel | null = existing?.label ?? null;
  for (const option of LABEL_OPTIONS) {
    const wrap = el("label", "radio-option");
    const radio = document.createElement("input");
    radio.type = "radio";
    radio.name = "temporal-label";
    radio.value = option.label;
    radio.checked = option.label === chosen;
    radio.addEventListener("change", () => {
      chosen = option.label;
    });
    wrap.appendChild(radio);
    wrap.appendChild(document.createTextNode(` ${a} ${option.caption} ${b}`));
    form.appendChild(wrap);
  }
  container.appendChild(form);
  container.appendChild(
    button("Annotate", "primary annotate-button", () => {
      if (chosen) handlers.annotate(unit.a, unit.b, chosen);
    }),
  );
}

interface ChecklistSpec {
  title: string;
  focalCaption: string;
  items: { id: string; caption: string }[];
  submit(checked: string[]): void;
  submitCaption: string;
  emptyCaption: string;
}

function renderChecklistPane(
  container: HTMLElement,
  view: ViewState,
  handlers: Handlers,
  spec: ChecklistSpec,
): void {
  container.appendChild(el("p", "pane-title", `${spec.title} "${spec.focalCaption}"?`));
  if (spec.items.length === 0) {
    container.appendChild(el("p", "pane-note", spec.emptyCaption));
  }
  const list = el("div", "checkbox-list");
  for (const item of spec.items) {
    const wrap = el("label", "checkbox-option");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.value = item.id;
    box.checked = view.pending.has(item.id);
    box.dataset.candidate = item.id;
    box.addEventListener("change", () => handlers.toggleCheck(item.id));
    wrap.appendChild(box);
    wrap.appendChild(document.createTextNode(` ${item.caption}`));
    list.appendChild(wrap);
  }
  container.appendChild(list);
  container.appendChild(
    button(spec.submitCaption, "primary submit-checklist", () =>
      spec.submit(spec.items.filter((i) => view.pending.has(i.id)).map((i) => i.id)),
    ),
  );
}

export function renderConflicts(
  container: HTMLElement,
  snapshot: Snapshot,
  onJump: (a: string, b: string) => void,
): void {
  container.innerHTML = "";
  if (snapshot.conflicts.length === 0) {
    container.classList.add("hidden");
    return;
  }
  container.classList.remove("hidden");
  container.appendChild(
    el("p", "banner-title", `${snapshot.conflicts.length} conflict(s) to resolve`),
  );
  for (const conflict of snapshot.conflicts) {
    container.appendChild(conflictRow(snapshot, conflict, onJump));
  }
}

function conflictRow(
  snapshot: Snapshot,
  conflict: ConflictView,
  onJump: (a: string, b: string) => void,
): HTMLElement {
  const row = el("div", "conflict-row");
  const pathText = conflict.path.map((id) => surfaceOf(snapshot, id)).join(" → ");
  row.appendChild(
    el(
      "span",
      "conflict-text",
      `${surfaceOf(snapshot, conflict.pair.a)}–${surfaceOf(snapshot, conflict.pair.b)} ` +
        `is ${conflict.stored_label.toLowerCase()}, but the path ${pathText} ` +
        `implies ${conflict.composed_label.toLowerCase()}`,
    ),
  );
  row.appendChild(
    button("Review", "conflict-jump", () => onJump(conflict.pair.a, conflict.pair.b)),
  );
  return row;
}

export function renderNav(container: HTMLElement, view: ViewState, handlers: Handlers): void {
  container.innerHTML = "";
  const snapshot = view.snapshot;
  const units = unitList(snapshot);
  container.appendChild(button("◀ Prev", "nav-prev", () => handlers.moveUnit(-1)));
  container.appendChild(button("Next ▶", "nav-next", () => handlers.moveUnit(1)));
  if (snapshot.phase !== "done") {
    container.appendChild(
      button("Next Unhandled", "nav-unhandled primary", handlers.nextUnhandled),
    );
  }
  container.appendChild(button("◀ Prev Task", "nav-prev-task", handlers.revert));
  const lastTask = snapshot.phase === "causal";
  if (snapshot.phase !== "done") {
    container.appendChild(
      button(lastTask ? "Done?" : "Next Task ▶", "nav-next-task", handlers.advance),
    );
  }
  container.appendChild(
    button("Guidelines", "nav-guidelines", handlers.toggleGuidelines),
  );
  if (units.length > 0) {
    container.appendChild(el("span", "nav-count", `${units.length} item(s) in this step`));
  }
}

export function renderGuidelines(
  container: HTMLElement,
  view: ViewState,
  handlers: Handlers,
): void {
  container.innerHTML = "";
  if (!view.guidelinesOpen) {
    container.classList.add("hidden");
    return;
  }
  container.classList.remove("hidden");
  const phase = view.snapshot.phase;
  container.appendChild(el("p", "banner-title", `${phase} guidelines (editable)`));
  const area = document.createElement("textarea");
  area.className = "guideline-text";
  area.value = view.guidelines[phase] ?? "";
  area.addEventListener("change", () => handlers.editGuidelines(area.value));
  container.appendChild(area);
}
