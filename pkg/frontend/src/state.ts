/**
 * Console state: connection, the active plan, a bounded time-ordered
 * telemetry buffer, the event feed, and the replan counter.
 *
 * Every number displayed by the console originates here, and everything here
 * originates from the API or the stream — the client does no planning or
 * control math of its own.
 */

import type { PlanDoc, StreamLine, TelemetrySample } from "./types.js";

export type Connection = "disconnected" | "connecting" | "streaming" | "ended";

export interface EventEntry {
  seq: number;
  text: string;
}

const DEFAULT_BUFFER_LIMIT = 5000;

export class ConsoleState {
  connection: Connection = "disconnected";
  missionId: string | null = null;
  missionStatus: string | null = null;
  plan: PlanDoc | null = null;
  replansUsed = 0;
  events: EventEntry[] = [];
  readonly bufferLimit: number;
  private buffer: TelemetrySample[] = [];

  constructor(bufferLimit: number = DEFAULT_BUFFER_LIMIT) {
    if (bufferLimit < 1) throw new Error("buffer limit must be >= 1");
    this.bufferLimit = bufferLimit;
  }

  /** Immutable snapshot of the telemetry buffer (time-ordered, oldest first). */
  get telemetry(): readonly TelemetrySample[] {
    return this.buffer;
  }

  get latest(): TelemetrySample | null {
    return this.buffer.length ? this.buffer[this.buffer.length - 1] : null;
  }

  /** Append one sample, keeping time order and evicting oldest-first. */
  pushSample(sample: TelemetrySample): void {
    const last = this.latest;
    if (last && sample.t <= last.t) {
      return; // out-of-order or duplicate: the stream is authoritative, drop it
    }
    this.buffer.push(sample);
    if (this.buffer.length > this.bufferLimit) {
      this.buffer.splice(0, this.buffer.length - this.bufferLimit);
    }
  }

  /** Fold one parsed stream line into the state. */
  apply(line: StreamLine): void {
    switch (line.kind) {
      case "plan":
        this.missionId = line.mission_id;
        this.plan = line.plan;
        this.connection = "streaming";
        break;
      case "sample": {
        const { kind: _kind, ...sample } = line;
        this.pushSample(sample);
        break;
      }
      case "log":
        this.events.push({ seq: line.seq, text: formatLogLine(line) });
        break;
      case "end":
        this.missionStatus = line.status;
        this.replansUsed = line.replans_used;
        this.connection = "ended";
        break;
    }
  }

  reset(): void {
    this.connection = "disconnected";
    this.missionId = null;
    this.missionStatus = null;
    this.plan = null;
    this.replansUsed = 0;
    this.events = [];
    this.buffer = [];
  }
}

function formatLogLine(line: { [key: string]: unknown }): string {
  const parts: string[] = [];
  for (const key of ["directive", "event", "action", "step", "detail", "reason"]) {
    if (line[key] !== undefined && line[key] !== "") parts.push(`${key}=${line[key]}`);
  }
  return parts.join(" ");
}

/** Parse one NDJSON stream line; returns null for blank or malformed lines. */
export function parseStreamLine(raw: string): StreamLine | null {
  const trimmed = raw.trim();
  if (!trimmed) return null;
  try {
    const obj = JSON.parse(trimmed);
    if (obj && typeof obj.kind === "string") return obj as StreamLine;
    return null;
  } catch {
    return null;
  }
}
