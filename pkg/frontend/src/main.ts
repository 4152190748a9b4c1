/** Entry point: session picker, then the annotation workspace. */

import { Client } from "./api.js";
import { App } from "./app.js";

const SAMPLE_DOCUMENT = {
  doc_id: "sample-traffic",
  text:
    "A major accident happened on the highway this morning when two trucks " +
    "collided near the bridge, causing serious damage to both vehicles. " +
    "Emergency services responded within minutes.",
  mentions: [
    { id: "e1", start: 8, end: 16, surface: "accident", status: "included" },
    { id: "e2", start: 70, end: 78, surface: "collided", status: "included" },
    { id: "e3", start: 112, end: 118, surface: "damage", status: "included" },
    { id: "e4", start: 156, end: 165, surface: "responded", status: "included" },
  ],
};

async function openSession(client: Client, sessionId: string): Promise<void> {
  const root = document.getElementById("app");
  const start = document.getElementById("start");
  if (!root || !start) throw new Error("missing #app/#start containers");
  start.classList.add("hidden");
  root.classList.remove("hidden");
  const app = App.attach(client, sessionId, root);
  await app.refresh();
  const url = new URL(window.location.href);
  url.searchParams.set("session", sessionId);
  window.history.replaceState(null, "", url.toString());
}

function startScreen(client: Client): void {
  const form = document.getElementById("start-form");
  if (!form) return;
  form.innerHTML = `
    <h1>Event relation annotation</h1>
    <label>Annotator id <input id="annotator-id" value="annotator" /></label>
    <label>Document JSON
      <textarea id="doc-json" rows="10" spellcheck="false"></textarea>
    </label>
    <div class="button-row">
      <button id="load-sample" type="button">Load sample</button>
      <button id="start-session" type="button" class="primary">Start session</button>
    </div>
    <p id="start-error" class="error-message"></p>
  `;
  const docArea = document.getElementById("doc-json") as HTMLTextAreaElement;
  const annotator = document.getElementById("annotator-id") as HTMLInputElement;
  const errorLine = document.getElementById("start-error")!;

  document.getElementById("load-sample")!.addEventListener("click", () => {
    docArea.value = JSON.stringify(SAMPLE_DOCUMENT, null, 2);
  });
  document.getElementById("start-session")!.addEventListener("click", async () => {
    errorLine.textContent = "";
    try {
      const doc = JSON.parse(docArea.value);
      const { doc_id } = await client.ingestDocument(doc);
      const { session_id } = await client.createSession(doc_id, annotator.value || "annotator");
      await openSession(client, session_id);
    } catch (error) {
      errorLine.textContent = error instanceof Error ? error.message : String(error);
    }
  });
}

export async function boot(base = ""): Promise<void> {
  const client = new Client(base);
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session");
  if (sessionId) {
    await openSession(client, sessionId);
  } else {
    startScreen(client);
  }
}

if (typeof document !== "undefined" && document.getElementById("start-form")) {
  void boot();
}
