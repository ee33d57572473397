/** Typed client for the session service; raises ApiError with the
 *  server's error_code so callers can branch on the protocol contract. */

import type { ApiErrorBody, BatchPayload, MapDocument, SessionCreated } from "./types.js";

export class ApiError extends Error {
  readonly code: string;

  constructor(code: string, message: string) {
    super(message);
    this.code = code;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!resp.ok) {
    let body: ApiErrorBody | null = null;
    try {
      body = (await resp.json()) as ApiErrorBody;
    } catch {
      // non-JSON failure: fall through to a generic error
    }
    throw new ApiError(body?.error_code ?? "http_error",
                       body?.message ?? `${resp.status} ${resp.statusText}`);
  }
  return (await resp.json()) as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  createSession(root: string, seed?: number): Promise<SessionCreated> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      body: JSON.stringify(seed === undefined ? { root } : { root, seed }),
    });
  }

  getMap(sessionId: string): Promise<MapDocument> {
    return request(`${this.base}/sessions/${sessionId}`);
  }

  requestSuggestions(sessionId: string, nodeId: number): Promise<BatchPayload> {
    return request(`${this.base}/sessions/${sessionId}/suggestions`, {
      method: "POST",
      body: JSON.stringify({ node_id: nodeId }),
    });
  }

  resolveAccept(sessionId: string, concept: string): Promise<{ map: MapDocument }> {
    return request(`${this.base}/sessions/${sessionId}/resolve`, {
      method: "POST",
      body: JSON.stringify({ accept: concept }),
    });
  }

  resolveDismiss(sessionId: string): Promise<{ map: MapDocument }> {
    return request(`${this.base}/sessions/${sessionId}/resolve`, {
      method: "POST",
      body: JSON.stringify({ dismiss: true }),
    });
  }

  manualAdd(sessionId: string, text: string, attachTo: number): Promise<{ map: MapDocument; node_id: number }> {
    return request(`${this.base}/sessions/${sessionId}/edits`, {
      method: "POST",
      body: JSON.stringify({ action: "manual_add", text, attach_to: attachTo }),
    });
  }

  addLink(sessionId: string, a: number, b: number): Promise<{ map: MapDocument }> {
    return request(`${this.base}/sessions/${sessionId}/edits`, {
      method: "POST",
      body: JSON.stringify({ action: "link_add", a, b }),
    });
  }

  removeNode(sessionId: string, nodeId: number): Promise<{ map: MapDocument }> {
    return request(`${this.base}/sessions/${sessionId}/edits`, {
      method: "POST",
      body: JSON.stringify({ action: "remove_node", node_id: nodeId }),
    });
  }

  removeLink(sessionId: string, a: number, b: number): Promise<{ map: MapDocument }> {
    return request(`${this.base}/sessions/${sessionId}/edits`, {
      method: "POST",
      body: JSON.stringify({ action: "remove_link", a, b }),
    });
  }

  move(sessionId: string, nodeId: number, x: number, y: number): Promise<{ map: MapDocument }> {
    return request(`${this.base}/sessions/${sessionId}/edits`, {
      method: "POST",
      body: JSON.stringify({ action: "move", node_id: nodeId, x, y }),
    });
  }

  autocomplete(q: string, limit = 8): Promise<{ labels: string[] }> {
    const params = new URLSearchParams({ q, limit: String(limit) });
    return request(`${this.base}/autocomplete?${params}`);
  }

  /** Raw export body: downloaded and compared verbatim, never re-serialized. */
  async exportRaw(sessionId: string): Promise<string> {
    const resp = await fetch(`${this.base}/sessions/${sessionId}/export`);
    if (!resp.ok) {
      throw new ApiError("http_error", `${resp.status} ${resp.statusText}`);
    }
    return resp.text();
  }
}
