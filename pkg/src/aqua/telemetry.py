"""Telemetry records, tracking-error normalization, quadratic path cost, and
mission summary statistics, with deterministic CSV/JSONL serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, asdict
from pathlib import Path

CSV_COLUMNS = (
    "t",
    "ref_x", "ref_y", "ref_z", "ref_yaw",
    "x", "y", "z", "yaw",
    "ux", "uy", "uz", "uw",
    "ex", "ey", "ez", "eyaw",
    "nx", "ny", "nz", "nyaw",
)

AXES = ("x", "y", "z", "yaw")


@dataclass(frozen=True)
class TelemetrySample:
    """One control-rate record: reference pose, actual pose, command, raw error,
    and per-axis normalized error n = |e(t)| / |e(0)|."""
    t: float
    ref: tuple[float, float, float, float]    # x, y, z, yaw
    pose: tuple[float, float, float, float]
    u: tuple[float, float, float, float]      # v_x, v_y, v_z, omega
    error: tuple[float, float, float, float]
    norm_error: tuple[float, float, float, float]

    def row(self):
        return (self.t, *self.ref, *self.pose, *self.u, *self.error, *self.norm_error)


@dataclass(frozen=True)
class CostParams:
    """Quadratic stage cost L = ||e||^2 + lam_u * ||u||^2."""
    lam_u: float = 0.0
    label: str = "quadratic"

    def __post_init__(self):
        if self.lam_u < 0:
            raise ValueError("control weight must be non-negative")


@dataclass(frozen=True)
class MissionReport:
    mission_id: str
    psr: float          # plan success rate over attempted commands
    exesr: float        # executed-step success rate over dispatched steps
    steps_total: int
    steps_succeeded: int
    replans_used: int
    duration_s: float
    final_error: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if not (0.0 <= self.psr <= 1.0 and 0.0 <= self.exesr <= 1.0):
            raise ValueError("rates must lie in [0, 1]")


def compute_errors(refs, poses, wrap_yaw=None):
    """Raw and normalized tracking errors for aligned reference/pose sequences.

    Returns (errors, norm_errors, unnormalized_axes). Axes whose initial error
    is zero cannot be normalized; their normalized value is carried as the raw
    magnitude and the axis index is reported in unnormalized_axes.
    """
    if len(refs) != len(poses) or not refs:
        raise ValueError("need equal, non-empty reference and pose sequences")
    errors = []
    for r, p in zip(refs, poses):
        e = [ri - pi for ri, pi in zip(r, p)]
        if wrap_yaw is not None:
            e[3] = wrap_yaw(e[3])
        errors.append(tuple(e))
    e0 = errors[0]
    unnormalized = tuple(i for i in range(4) if abs(e0[i]) < 1e-12)
    norm = []
    for e in errors:
        norm.append(tuple(
            abs(e[i]) if i in unnormalized else abs(e[i]) / abs(e0[i])
            for i in range(4)
        ))
    return errors, norm, unnormalized


def path_cost(errors, controls, dt, params: CostParams = CostParams()):
    """Accumulated cost J = sum_k (||e_k||^2 + lam_u ||u_k||^2) * dt.

    Additive over concatenation: path_cost(a+b) == path_cost(a) + path_cost(b)
    for the same dt.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if len(errors) != len(controls):
        raise ValueError("errors and controls must align")
    total = 0.0
    for e, u in zip(errors, controls):
        total += (sum(v * v for v in e) + params.lam_u * sum(v * v for v in u)) * dt
    return total


def rmse(errors):
    """Per-axis root-mean-square error over a sequence of 4-tuples."""
    if not errors:
        raise ValueError("empty error sequence")
    n = len(errors)
    return tuple(math.sqrt(sum(e[i] ** 2 for e in errors) / n) for i in range(4))


def summarize(samples):
    """Per-axis RMSE plus final raw/normalized error for a telemetry log."""
    if not samples:
        raise ValueError("empty telemetry log")
    errs = [s.error for s in samples]
    return {
        "n_samples": len(samples),
        "t_final": samples[-1].t,
        "rmse": dict(zip(AXES, rmse(errs))),
        "final_error": dict(zip(AXES, samples[-1].error)),
        "final_norm_error": dict(zip(AXES, samples[-1].norm_error)),
    }


# --------------------------------------------------------------------- I/O

def telemetry_to_csv(samples) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in samples:
        w.writerow([repr(float(v)) for v in s.row()])
    return buf.getvalue()


def telemetry_from_csv(text: str):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError(f"expected header {CSV_COLUMNS}")
    out = []
    for r in rows[1:]:
        v = [float(c) for c in r]
        out.append(TelemetrySample(
            t=v[0], ref=tuple(v[1:5]), pose=tuple(v[5:9]),
            u=tuple(v[9:13]), error=tuple(v[13:17]), norm_error=tuple(v[17:21]),
        ))
    return out


def save_telemetry(samples, path):
    Path(path).write_text(telemetry_to_csv(samples))


def load_telemetry(path):
    return telemetry_from_csv(Path(path).read_text())


def report_to_json(report: MissionReport) -> str:
    d = asdict(report)
    if d["final_error"] is not None:
        d["final_error"] = list(d["final_error"])
    return json.dumps(d, sort_keys=True)


def report_from_json(text: str) -> MissionReport:
    d = json.loads(text)
    fe = d.get("final_error")
    return MissionReport(
        mission_id=d["mission_id"], psr=d["psr"], exesr=d["exesr"],
        steps_total=d["steps_total"], steps_succeeded=d["steps_succeeded"],
        replans_used=d["replans_used"], duration_s=d["duration_s"],
        final_error=tuple(fe) if fe is not None else None,
    )
