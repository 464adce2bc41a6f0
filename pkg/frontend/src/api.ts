// Thin typed client for the correction service. One method, one request.

import type {
  AcceptResponse,
  CorrectionDraft,
  EngineInfo,
  SessionResponse,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    body = null;
  }
  if (!response.ok) {
    const detail =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : response.statusText;
    throw new ApiError(response.status, detail);
  }
  return body as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  engines(): Promise<{ engines: EngineInfo[] }> {
    return request(`${this.base}/api/engines`);
  }

  createSession(engine: string, sourceText: string): Promise<SessionResponse> {
    return request(`${this.base}/api/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ engine, source_text: sourceText }),
    });
  }

  getSession(sessionId: number): Promise<SessionResponse> {
    return request(`${this.base}/api/sessions/${sessionId}`);
  }

  correct(sessionId: number, draft: CorrectionDraft): Promise<SessionResponse> {
    return request(`${this.base}/api/sessions/${sessionId}/corrections`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ position: draft.position, word: draft.word }),
    });
  }

  accept(sessionId: number): Promise<AcceptResponse> {
    return request(`${this.base}/api/sessions/${sessionId}/accept`, {
      method: "POST",
    });
  }
}
