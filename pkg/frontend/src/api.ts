// Thin typed client over the session HTTP API. All state changes go through
// postAction; reads never mutate. A 409 on writes signals a stale revision
// (the caller should refetch and retry).

import type { ActionDiff, DataPayload, OverlapPayload, ScoresPayload, StatePayload } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export class SessionClient {
  constructor(public baseUrl: string, public sessionId: string = "") {}

  static async create(
    baseUrl: string,
    csvText: string,
    labelColumn = "class",
    normalize = true,
  ): Promise<SessionClient> {
    const response = await fetch(`${baseUrl}/session`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ csv_text: csvText, label_column: labelColumn, normalize }),
    });
    const body = await parseOrThrow<{ session_id: string }>(response);
    return new SessionClient(baseUrl, body.session_id);
  }

  private url(path: string): string {
    return `${this.baseUrl}/session/${this.sessionId}${path}`;
  }

  async state(): Promise<StatePayload> {
    return parseOrThrow(await fetch(this.url("/state")));
  }

  async data(normalized?: boolean): Promise<DataPayload> {
    const query = normalized === undefined ? "" : `?normalized=${normalized}`;
    return parseOrThrow(await fetch(this.url(`/data${query}`)));
  }

  async scores(): Promise<ScoresPayload> {
    return parseOrThrow(await fetch(this.url("/scores")));
  }

  async overlap(): Promise<OverlapPayload> {
    return parseOrThrow(await fetch(this.url("/overlap")));
  }

  async exportWhat<T = Record<string, unknown>>(what: string): Promise<T> {
    return parseOrThrow(await fetch(this.url(`/export?what=${what}`)));
  }

  async postAction(
    type: string,
    params: Record<string, unknown> = {},
    revision?: number,
  ): Promise<ActionDiff> {
    const response = await fetch(this.url("/action"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ type, revision: revision ?? null, params }),
    });
    const body = await parseOrThrow<{ diff: ActionDiff; revision: number }>(response);
    return { ...body.diff, revision: body.revision };
  }
}
