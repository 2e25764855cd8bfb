/** Thin typed client for the mission service endpoints. */

import type { CommandResponse, MissionStatus, PlanDoc } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public detail: unknown) {
    super(`HTTP ${status}: ${JSON.stringify(detail)}`);
  }
}

type Fetch = typeof fetch;

export class MissionApi {
  constructor(private baseUrl: string = "", private fetchImpl: Fetch = fetch) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers: body !== undefined ? { "Content-Type": "application/json" } : undefined,
      body: body !== undefined ? JSON.stringify(body) : undefined,
    });
    const payload = await res.json().catch(() => null);
    if (!res.ok) throw new ApiError(res.status, payload?.detail ?? payload);
    return payload as T;
  }

  submitCommand(text: string): Promise<CommandResponse> {
    return this.request("POST", "/commands", { text });
  }

  start(missionId: string): Promise<{ mission_id: string; status: string }> {
    return this.request("POST", `/missions/${missionId}/start`);
  }

  abort(missionId: string): Promise<{ mission_id: string; status: string }> {
    return this.request("POST", `/missions/${missionId}/abort`);
  }

  replan(missionId: string): Promise<{ mission_id: string; plan: PlanDoc; replans_used: number }> {
    return this.request("POST", `/missions/${missionId}/replan`);
  }

  mission(missionId: string): Promise<MissionStatus> {
    return this.request("GET", `/missions/${missionId}`);
  }

  /** Open the NDJSON telemetry stream and invoke onLine per complete line. */
  async stream(onLine: (raw: string) => void): Promise<void> {
    const res = await this.fetchImpl(this.baseUrl + "/telemetry/stream");
    if (!res.ok || !res.body) throw new ApiError(res.status, "stream unavailable");
    const reader = res.body.getReader();
    const decoder = new TextDecoder();
    let pending = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      pending += decoder.decode(value, { stream: true });
      const lines = pending.split("\n");
      pending = lines.pop() ?? "";
      for (const line of lines) onLine(line);
    }
    if (pending.trim()) onLine(pending);
  }
}
