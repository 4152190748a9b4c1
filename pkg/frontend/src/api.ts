/** Typed client for the annotation service; every method is one endpoint. */

import type {
  CorefResult,
  NextResponse,
  Snapshot,
  TemporalLabel,
  TemporalResult,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly blockingItems: string[];

  constructor(status: number, code: string, message: string, blockingItems: string[] = []) {
    super(message);
    this.status = status;
    this.code = code;
    this.blockingItems = blockingItems;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(
      response.status,
      body.code ?? `HTTP${response.status}`,
      body.message ?? response.statusText,
      body.blocking_items ?? [],
    );
  }
  return body as T;
}

export class Client {
  constructor(private readonly base: string = "") {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  ingestDocument(doc: unknown): Promise<{ doc_id: string; mentions: number }> {
    return request(this.url("/documents"), { method: "POST", body: JSON.stringify(doc) });
  }

  createSession(docId: string, annotatorId: string): Promise<{ session_id: string; phase: string }> {
    return request(this.url("/sessions"), {
      method: "POST",
      body: JSON.stringify({ doc_id: docId, annotator_id: annotatorId }),
    });
  }

  snapshot(sessionId: string): Promise<Snapshot> {
    return request(this.url(`/sessions/${sessionId}/snapshot`));
  }

  next(sessionId: string): Promise<NextResponse> {
    return request(this.url(`/sessions/${sessionId}/next`));
  }

  setMentionStatus(sessionId: string, mentionId: string, status: "included" | "excluded") {
    return request(this.url(`/sessions/${sessionId}/selection`), {
      method: "POST",
      body: JSON.stringify({ mention_id: mentionId, status }),
    });
  }

  annotateTemporal(sessionId: string, a: string, b: string, label: TemporalLabel): Promise<TemporalResult> {
    return request(this.url(`/sessions/${sessionId}/temporal`), {
      method: "POST",
      body: JSON.stringify({ a, b, label }),
    });
  }

  formCluster(sessionId: string, focal: string, members: string[], confirm = false): Promise<CorefResult> {
    return request(this.url(`/sessions/${sessionId}/coref`), {
      method: "POST",
      body: JSON.stringify({ focal, members, confirm }),
    });
  }

  recordCauses(sessionId: string, focal: string, causes: string[]) {
    return request(this.url(`/sessions/${sessionId}/causal`), {
      method: "POST",
      body: JSON.stringify({ focal, causes }),
    });
  }

  advance(sessionId: string): Promise<{ phase: string }> {
    return request(this.url(`/sessions/${sessionId}/advance`), { method: "POST" });
  }

  revert(sessionId: string): Promise<{ phase: string }> {
    return request(this.url(`/sessions/${sessionId}/revert`), { method: "POST" });
  }

  exportAnnotation(sessionId: string): Promise<unknown> {
    return request(this.url(`/sessions/${sessionId}/export`));
  }
}
