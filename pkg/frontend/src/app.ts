/** Controller wiring the service client to the panes.
 *
 * Strictly pessimistic: every committed action round-trips to the service and
 * the whole view is rebuilt from the returned snapshot. The client never
 * derives a relation on its own.
 */

import { ApiError, Client } from "./api.js";
import { renderGraph } from "./graph.js";
import {
  Handlers,
  renderConflicts,
  renderControls,
  renderGuidelines,
  renderNav,
  renderStatus,
} from "./panels.js";
import { freshView, moveCursor, pickNode, toggleCheck, ViewState } from "./state.js";
import { renderText } from "./text.js";
import type { TemporalLabel } from "./types.js";

interface Mount {
  status: HTMLElement;
  text: HTMLElement;
  graph: SVGSVGElement;
  controls: HTMLElement;
  conflicts: HTMLElement;
  nav: HTMLElement;
  guidelines: HTMLElement;
  error: HTMLElement;
  dialog: HTMLElement;
}

export class App {
  private view: ViewState | null = null;

  constructor(
    private readonly client: Client,
    private readonly sessionId: string,
    private readonly mount: Mount,
  ) {}

  static attach(client: Client, sessionId: string, root: HTMLElement): App {
    root.innerHTML = `
      <div class="status-bar" data-pane="status"></div>
      <div class="error-bar hidden" data-pane="error"></div>
      <div class="conflict-banner hidden" data-pane="conflicts"></div>
      <div class="dialog hidden" data-pane="dialog"></div>
      <div class="main-row">
        <div class="text-pane" data-pane="text"></div>
        <div class="side-pane">
          <svg class="graph-pane" data-pane="graph"></svg>
          <div class="controls-pane" data-pane="controls"></div>
        </div>
      </div>
      <div class="nav-bar" data-pane="nav"></div>
      <div class="guideline-panel hidden" data-pane="guidelines"></div>
    `;
    const pane = (name: string) => root.querySelector(`[data-pane="${name}"]`) as HTMLElement;
    const mount: Mount = {
      status: pane("status"),
      text: pane("text"),
      graph: root.querySelector('[data-pane="graph"]') as unknown as SVGSVGElement,
      controls: pane("controls"),
      conflicts: pane("conflicts"),
      nav: pane("nav"),
      guidelines: pane("guidelines"),
      error: pane("error"),
      dialog: pane("dialog"),
    };
    return new App(client, sessionId, mount);
  }

  async refresh(): Promise<void> {
    const snapshot = await this.client.snapshot(this.sessionId);
    this.view = freshView(snapshot, this.view ?? undefined);
    this.render();
  }

  currentView(): ViewState {
    if (!this.view) throw new Error("app not refreshed yet");
    return this.view;
  }

  private render(): void {
    const view = this.currentView();
    renderStatus(this.mount.status, view.snapshot);
    renderText(this.mount.text, view, (mention) => this.onNodeClick(mention));
    renderGraph(this.mount.graph, view, {
      onNodeClick: (node) => this.onNodeClick(node),
      onConflictPairClick: (a, b) => this.jumpToPair(a, b),
    });
    renderControls(this.mount.controls, view, this.handlers);
    renderConflicts(this.mount.conflicts, view.snapshot, (a, b) => this.jumpToPair(a, b));
    renderNav(this.mount.nav, view, this.handlers);
    renderGuidelines(this.mount.guidelines, view, this.handlers);
  }

  private showError(error: unknown): void {
    const box = this.mount.error;
    box.classList.remove("hidden");
    box.innerHTML = "";
    const message = error instanceof Error ? error.message : String(error);
    const head = document.createElement("p");
    head.className = "error-message";
    head.textContent = message;
    box.appendChild(head);
    if (error instanceof ApiError && error.blockingItems.length > 0) {
      const list = document.createElement("ul");
      list.className = "blocking-items";
      for (const item of error.blockingItems) {
        const li = document.createElement("li");
        li.textContent = item;
        list.appendChild(li);
      }
      box.appendChild(list);
    }
  }

  private clearError(): void {
    this.mount.error.classList.add("hidden");
    this.mount.error.innerHTML = "";
  }

  /** Run a service call, then rebuild the view from a fresh snapshot. */
  private async commit(action: () => Promise<unknown>): Promise<void> {
    this.clearError();
    try {
      await action();
    } catch (error) {
      this.showError(error);
    }
    await this.refresh();
  }

  private onNodeClick(nodeId: string): void {
    const view = this.currentView();
    pickNode(view, nodeId);
    this.render();
  }

  private jumpToPair(a: string, b: string): void {
    const view = this.currentView();
    if (view.snapshot.phase !== "temporal") return;
    view.selectedPair = [a, b];
    view.pickedNode = null;
    view.cursor = -1;
    this.render();
  }

  private confirmMove(message: string): Promise<boolean> {
    const dialog = this.mount.dialog;
    dialog.classList.remove("hidden");
    dialog.innerHTML = "";
    const text = document.createElement("p");
    text.className = "dialog-text";
    text.textContent = message;
    dialog.appendChild(text);
    return new Promise((resolve) => {
      const close = (answer: boolean) => {
        dialog.classList.add("hidden");
        dialog.innerHTML = "";
        resolve(answer);
      };
      const yes = document.createElement("button");
      yes.textContent = "Move mention";
      yes.className = "dialog-confirm";
      yes.addEventListener("click", () => close(true));
      const no = document.createElement("button");
      no.textContent = "Cancel";
      no.className = "dialog-cancel";
      no.addEventListener("click", () => close(false));
      dialog.appendChild(yes);
      dialog.appendChild(no);
    });
  }

  private readonly handlers: Handlers = {
    setStatus: (mention, status) =>
      void this.commit(() => this.client.setMentionStatus(this.sessionId, mention, status)),

    annotate: (a, b, label: TemporalLabel) =>
      void this.commit(() => this.client.annotateTemporal(this.sessionId, a, b, label)),

    submitCoref: (focal, members) => void this.submitCoref(focal, members),

    submitCausal: (focal, causes) =>
      void this.commit(() => this.client.recordCauses(this.sessionId, focal, causes)),

    toggleCheck: (id) => {
      toggleCheck(this.currentView(), id);
      this.render();
    },

    moveUnit: (delta) => {
      moveCursor(this.currentView(), delta);
      this.render();
    },

    nextUnhandled: () => {
      const view = this.currentView();
      view.cursor = -1;
      view.selectedPair = null;
      view.pickedNode = null;
      if (view.snapshot.current_unit === null && view.snapshot.phase !== "done") {
        this.showPhaseComplete();
        return;
      }
      this.render();
    },

    advance: () => void this.commit(() => this.client.advance(this.sessionId)),
    revert: () => void this.commit(() => this.client.revert(this.sessionId)),

    exportNow: () => void this.exportNow(),

    toggleGuidelines: () => {
      const view = this.currentView();
      view.guidelinesOpen = !view.guidelinesOpen;
      this.render();
    },

    editGuidelines: (text) => {
      const view = this.currentView();
      view.guidelines[view.snapshot.phase] = text;
    },

    jumpToPair: (a, b) => this.jumpToPair(a, b),
  };

  private showPhaseComplete(): void {
    const dialog = this.mount.dialog;
    dialog.classList.remove("hidden");
    dialog.innerHTML = "";
    const text = document.createElement("p");
    text.className = "dialog-text phase-complete";
    text.textContent = "This step is complete - use Next Task to continue.";
    dialog.appendChild(text);
    const ok = document.createElement("button");
    ok.textContent = "OK";
    ok.addEventListener("click", () => {
      dialog.classList.add("hidden");
      dialog.innerHTML = "";
    });
    dialog.appendChild(ok);
  }

  private async submitCoref(focal: string, members: string[]): Promise<void> {
    this.clearError();
    try {
      const result = await this.client.formCluster(this.sessionId, focal, members);
      if (!result.applied && result.membership_conflict) {
        const moves = result.membership_conflict.moves
          .map((m) => `${m.mention} (currently in ${m.from_cluster})`)
          .join(", ");
        const confirmed = await this.confirmMove(
          `Already clustered elsewhere: ${moves}. Move to the new cluster?`,
        );
        if (confirmed) {
          await this.client.formCluster(this.sessionId, focal, members, true);
        }
      }
    } catch (error) {
      this.showError(error);
    }
    await this.refresh();
  }

  private async exportNow(): Promise<void> {
    this.clearError();
    try {
      const exported = await this.client.exportAnnotation(this.sessionId);
      const output = this.mount.controls.querySelector(".export-output");
      if (output) output.textContent = JSON.stringify(exported, null, 2);
    } catch (error) {
      this.showError(error);
    }
  }
}
