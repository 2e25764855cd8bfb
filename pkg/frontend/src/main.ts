/**
 * Operator console wiring: command entry with a plan-approval gate, live
 * top-down and depth plots fed by the telemetry stream, a replan control with
 * budget handling, and the mission report readout.
 */

import { MissionApi, ApiError } from "./api.js";
import { ConsoleState, parseStreamLine } from "./state.js";
import { circleOutline, depthSeries, extent, xyReference, xyTrace, XY } from "./plots.js";

const api = new MissionApi("");
const state = new ConsoleState();

// Cage geometry for the overlay; mirrors the served sim_cage environment.
const PEN = { cx: 0, cy: 0, radius: 2.5 };

const $ = (id: string) => document.getElementById(id)!;

function setBanner(text: string, isError = false): void {
  const el = $("banner");
  el.textContent = text;
  el.className = isError ? "banner error" : "banner";
}

function renderPlan(): void {
  const list = $("plan-steps");
  list.innerHTML = "";
  if (!state.plan) return;
  for (const step of state.plan.steps) {
    const li = document.createElement("li");
    const params = Object.entries(step.params)
      .map(([k, v]) => `${k}=${v}`)
      .join(" ");
    li.textContent = `${step.action} ${step.args["area"] ?? ""} ${params}`.trim();
    list.appendChild(li);
  }
}

function drawSeries(canvas: HTMLCanvasElement, series: { pts: XY[]; style: string }[]): void {
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const box = extent(series.map((s) => s.pts));
  const sx = (x: number) => ((x - box.xmin) / (box.xmax - box.xmin)) * canvas.width;
  const sy = (y: number) => canvas.height - ((y - box.ymin) / (box.ymax - box.ymin)) * canvas.height;
  for (const { pts, style } of series) {
    if (!pts.length) continue;
    ctx.strokeStyle = style;
    ctx.beginPath();
    ctx.moveTo(sx(pts[0].x), sy(pts[0].y));
    for (const p of pts.slice(1)) ctx.lineTo(sx(p.x), sy(p.y));
    ctx.stroke();
  }
}

function redraw(): void {
  const samples = state.telemetry;
  drawSeries($("xy-plot") as HTMLCanvasElement, [
    { pts: circleOutline(PEN), style: "#888" },
    { pts: xyReference(samples), style: "#2a7" },
    { pts: xyTrace(samples), style: "#06c" },
  ]);
  const depth = depthSeries(samples);
  drawSeries($("depth-plot") as HTMLCanvasElement, [
    { pts: depth.reference, style: "#2a7" },
    { pts: depth.measured, style: "#06c" },
  ]);
  $("status").textContent =
    `${state.missionId ?? "-"} | ${state.missionStatus ?? state.connection} | ` +
    `replans: ${state.replansUsed} | samples: ${samples.length}`;
  $("events").textContent = state.events.slice(-12).map((e) => e.text).join("\n");
}

async function followStream(): Promise<void> {
  state.connection = "connecting";
  try {
    await api.stream((raw) => {
      const line = parseStreamLine(raw);
      if (line) {
        state.apply(line);
        redraw();
      }
    });
  } catch (err) {
    setBanner(`stream dropped: ${err}`, true);
  }
}

async function onSubmit(): Promise<void> {
  const text = ($("command") as HTMLInputElement).value.trim();
  if (!text) return;
  try {
    const res = await api.submitCommand(text);
    state.reset();
    state.missionId = res.mission_id;
    state.plan = res.plan;
    renderPlan();
    setBanner(`plan ready (${res.plan.steps.length} steps) — approve to run`);
    ($("approve") as HTMLButtonElement).disabled = false;
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      setBanner("a mission is already active", true);
    } else if (err instanceof ApiError && err.status === 422) {
      setBanner(`command rejected: ${JSON.stringify(err.detail)}`, true);
    } else {
      setBanner(`transport error: ${err}`, true);
    }
  }
}

async function onApprove(): Promise<void> {
  if (!state.missionId) return;
  ($("approve") as HTMLButtonElement).disabled = true;
  try {
    await api.start(state.missionId);
    setBanner("mission running");
    await followStream();
    setBanner(`mission ${state.missionStatus}`);
  } catch (err) {
    setBanner(`start failed: ${err}`, true);
  }
}

async function onReplan(): Promise<void> {
  if (!state.missionId) return;
  try {
    const res = await api.replan(state.missionId);
    state.plan = res.plan;
    state.replansUsed = res.replans_used;
    renderPlan();
    redraw();
    setBanner(`replanned (${res.replans_used} used)`);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      setBanner("replan budget exhausted — mission is terminal", true);
    } else {
      setBanner(`replan failed: ${err}`, true);
    }
  }
}

export function wireUp(): void {
  $("submit").addEventListener("click", () => void onSubmit());
  $("approve").addEventListener("click", () => void onApprove());
  $("replan").addEventListener("click", () => void onReplan());
  ($("approve") as HTMLButtonElement).disabled = true;
  redraw();
}

if (typeof document !== "undefined" && document.getElementById("submit")) {
  wireUp();
}
