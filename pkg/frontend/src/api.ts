// Thin client for the session service; all UI traffic goes through here.

import type { CreateSessionResponse, UtteranceResponse } from "./types.js";

export class ServiceError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") {
          detail = body.detail;
        }
      } catch {
        // keep the status text
      }
      throw new ServiceError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  createSession(): Promise<CreateSessionResponse> {
    return this.request<CreateSessionResponse>("/sessions", { method: "POST" });
  }

  sendUtterance(sessionId: string, text: string): Promise<UtteranceResponse> {
    return this.request<UtteranceResponse>(
      `/sessions/${encodeURIComponent(sessionId)}/utterances`,
      { method: "POST", body: JSON.stringify({ text }) },
    );
  }
}
