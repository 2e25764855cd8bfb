/** Wire types for the mission service HTTP/stream API. */

export interface PlanStep {
  action: string;
  args: Record<string, string>;
  params: Record<string, unknown>;
}

export interface PlanDoc {
  id: string;
  source: string;
  steps: PlanStep[];
}

/** One telemetry record: [x, y, z, yaw] quadruples throughout. */
export type Quad = [number, number, number, number];

export interface TelemetrySample {
  t: number;
  ref: Quad;
  pose: Quad;
  u: Quad;
  error: Quad;
  norm_error: Quad;
}

/** NDJSON stream lines pushed by GET /telemetry/stream. */
export type StreamLine =
  | { kind: "plan"; mission_id: string; plan: PlanDoc }
  | { kind: "log"; seq: number; [key: string]: unknown }
  | ({ kind: "sample" } & TelemetrySample)
  | { kind: "end"; mission_id: string; status: string; replans_used: number };

export interface CommandResponse {
  mission_id: string;
  plan: PlanDoc;
  gen_time_s: number;
}

export interface MissionStatus {
  mission_id: string;
  status: string;
  replans_used: number;
  report?: {
    psr: number;
    exesr: number;
    steps_total: number;
    steps_succeeded: number;
    replans_used: number;
    duration_s: number;
    final_error: Quad | null;
  };
}
