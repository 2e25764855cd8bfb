/**
 * Plot-series builders: pure transforms from streamed telemetry into drawable
 * point lists. No control or planning math — references come from the stream.
 */

import type { TelemetrySample } from "./types.js";

export interface XY {
  x: number;
  y: number;
}

export interface PenOutline {
  cx: number;
  cy: number;
  radius: number;
}

/** Top-down trace of the vehicle path. */
export function xyTrace(samples: readonly TelemetrySample[]): XY[] {
  return samples.map((s) => ({ x: s.pose[0], y: s.pose[1] }));
}

/** Top-down trace of the streamed reference. */
export function xyReference(samples: readonly TelemetrySample[]): XY[] {
  return samples.map((s) => ({ x: s.ref[0], y: s.ref[1] }));
}

/** Circle polyline for a pen outline or standoff ring overlay. */
export function circleOutline(pen: PenOutline, segments = 72): XY[] {
  const pts: XY[] = [];
  for (let k = 0; k <= segments; k++) {
    const a = (2 * Math.PI * k) / segments;
    pts.push({ x: pen.cx + pen.radius * Math.cos(a), y: pen.cy + pen.radius * Math.sin(a) });
  }
  return pts;
}

/** Depth-vs-time series: measured depth plus the streamed step reference. */
export function depthSeries(samples: readonly TelemetrySample[]): {
  measured: XY[];
  reference: XY[];
} {
  return {
    measured: samples.map((s) => ({ x: s.t, y: s.pose[2] })),
    reference: samples.map((s) => ({ x: s.t, y: s.ref[2] })),
  };
}

/** Position-error magnitude sparkline. */
export function errorSparkline(samples: readonly TelemetrySample[]): XY[] {
  return samples.map((s) => ({
    x: s.t,
    y: Math.hypot(s.error[0], s.error[1], s.error[2]),
  }));
}

/** Extent of a set of series, padded, for axis scaling. */
export function extent(series: XY[][], pad = 0.5): { xmin: number; xmax: number; ymin: number; ymax: number } {
  let xmin = Infinity, xmax = -Infinity, ymin = Infinity, ymax = -Infinity;
  for (const pts of series) {
    for (const p of pts) {
      if (p.x < xmin) xmin = p.x;
      if (p.x > xmax) xmax = p.x;
      if (p.y < ymin) ymin = p.y;
      if (p.y > ymax) ymax = p.y;
    }
  }
  if (!isFinite(xmin)) return { xmin: -1, xmax: 1, ymin: -1, ymax: 1 };
  return { xmin: xmin - pad, xmax: xmax + pad, ymin: ymin - pad, ymax: ymax + pad };
}
