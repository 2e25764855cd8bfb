"""Reference trajectory generators: helical descent, zig-zag depth profile,
net-standoff waypoint rings, and straight lines.

Inspection headings always face the pen axis so the camera views the net.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

from .vehicle import Pen, wrap_angle


@dataclass(frozen=True)
class Waypoint:
    x: float
    y: float
    z: float
    yaw: float = 0.0
    t: float | None = None

    def __post_init__(self):
        vals = (self.x, self.y, self.z, self.yaw)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite waypoint: {vals}")


@dataclass(frozen=True)
class Trajectory:
    waypoints: tuple[Waypoint, ...]
    kind: str = "line"  # helix | zigzag | standoff_rings | line

    def __post_init__(self):
        if not self.waypoints:
            raise ValueError("trajectory must be non-empty")
        times = [w.t for w in self.waypoints if w.t is not None]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("waypoint timestamps must be strictly increasing")

    def __len__(self):
        return len(self.waypoints)

    def reversed(self):
        wps = tuple(Waypoint(w.x, w.y, w.z, w.yaw) for w in reversed(self.waypoints))
        return Trajectory(wps, kind=self.kind)


@dataclass(frozen=True)
class HelixParams:
    r: float
    omega: float          # rad/s around the axis
    z0: float             # start depth
    v_z: float            # descent rate; positive descends
    center: tuple[float, float] = (0.0, 0.0)
    t_end: float = 1.0

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("helix radius must be positive")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")


@dataclass(frozen=True)
class ZigZagParams:
    levels: tuple[float, ...]       # depths (m), visited in order
    dwell_s: float                  # hold per level
    lateral: tuple[float, float] = (0.0, 0.0)  # station-keeping xy
    t_end: float | None = None      # defaults to len(levels)*dwell_s

    def __post_init__(self):
        if len(self.levels) < 2:
            raise ValueError("zig-zag needs at least two levels")
        if self.dwell_s <= 0:
            raise ValueError("dwell must be positive")

    @property
    def duration(self):
        return self.t_end if self.t_end is not None else len(self.levels) * self.dwell_s

    def level_at(self, t):
        idx = min(int(t // self.dwell_s), len(self.levels) - 1)
        return self.levels[max(idx, 0)]


class StandoffInsideNet(Exception):
    pass


# ------------------------------------------------------------------- helix

def helix_point(p: HelixParams, t: float) -> Waypoint:
    """Point on the helix at time t; heading faces the axis."""
    if not (0.0 <= t <= p.t_end + 1e-12):
        raise ValueError(f"t={t} outside [0, {p.t_end}]")
    phase = p.omega * t
    x = p.center[0] + p.r * math.cos(phase)
    y = p.center[1] + p.r * math.sin(phase)
    z = p.z0 - p.v_z * t
    return Waypoint(x=x, y=y, z=z, yaw=wrap_angle(phase + math.pi), t=t)


def gen_helix(p: HelixParams, sample_dt: float = 0.5) -> Trajectory:
    """Sample the helix at t = 0, dt, ..., t_end (endpoint always included)."""
    if sample_dt <= 0:
        raise ValueError("sample_dt must be positive")
    n = int(round(p.t_end / sample_dt))
    times = [i * sample_dt for i in range(n + 1) if i * sample_dt <= p.t_end + 1e-9]
    if times[-1] < p.t_end - 1e-9:
        times.append(p.t_end)
    return Trajectory(tuple(helix_point(p, t) for t in times), kind="helix")


def helix_for_pen(pen: Pen, standoff_m: float, omega: float = 0.1, duration_s: float = 350.0,
                  sample_dt: float = 0.5) -> Trajectory:
    """Top-to-bottom helical descent at a fixed standoff from a cylinder pen."""
    if standoff_m <= 0:
        raise StandoffInsideNet("standoff must be positive")
    params = HelixParams(
        r=pen.radius + standoff_m,
        omega=omega,
        z0=pen.top,
        v_z=pen.height / duration_s,
        center=(pen.center[0], pen.center[1]),
        t_end=duration_s,
    )
    return gen_helix(params, sample_dt)


# ------------------------------------------------------------------ zig-zag

def gen_zigzag(p: ZigZagParams) -> Trajectory:
    """Step-profile depth reference: hold level_i for dwell_s, then step."""
    x, y = p.lateral
    wps = []
    for i, level in enumerate(p.levels):
        wps.append(Waypoint(x=x, y=y, z=level, yaw=0.0, t=i * p.dwell_s))
    if p.duration > (len(p.levels) - 1) * p.dwell_s:
        wps.append(Waypoint(x=x, y=y, z=p.levels[-1], yaw=0.0, t=p.duration))
    return Trajectory(tuple(wps), kind="zigzag")


# ------------------------------------------------------------ standoff rings

def _cylinder_ring(pen, radius, z, points_per_ring):
    wps = []
    for k in range(points_per_ring):
        ang = 2.0 * math.pi * k / points_per_ring
        wps.append(Waypoint(
            x=pen.center[0] + radius * math.cos(ang),
            y=pen.center[1] + radius * math.sin(ang),
            z=z,
            yaw=wrap_angle(ang + math.pi),
        ))
    return wps


def _box_ring(pen, standoff_m, z, points_per_ring):
    """Points on the rounded-rectangle offset curve (exact standoff distance)."""
    hx = pen.width / 2.0
    hy = pen.length / 2.0
    cx, cy = pen.center[0], pen.center[1]
    r = standoff_m
    # Perimeter = straight sides + four quarter arcs.
    per = 2 * (2 * hx) + 2 * (2 * hy) + 2 * math.pi * r
    wps = []
    for k in range(points_per_ring):
        # Walk the curve counter-clockwise starting mid right side.
        x = y = yaw = 0.0
        d = per * k / points_per_ring
        if d < hy:  # right side, upward from middle
            x, y = hx + r, d
            yaw = math.pi
        elif (d := d - hy) < math.pi * r / 2:  # top-right arc
            a = d / r
            x, y = hx + r * math.cos(a), hy + r * math.sin(a)
            yaw = wrap_angle(math.atan2(hy - y, hx - x))
        elif (d := d - math.pi * r / 2) < 2 * hx:  # top side
            x, y = hx - d, hy + r
            yaw = -math.pi / 2
        elif (d := d - 2 * hx) < math.pi * r / 2:  # top-left arc
            a = math.pi / 2 + d / r
            x, y = -hx + r * math.cos(a), hy + r * math.sin(a)
            yaw = wrap_angle(math.atan2(hy - y, -hx - x))
        elif (d := d - math.pi * r / 2) < 2 * hy:  # left side
            x, y = -hx - r, hy - d
            yaw = 0.0
        elif (d := d - 2 * hy) < math.pi * r / 2:  # bottom-left arc
            a = math.pi + d / r
            x, y = -hx + r * math.cos(a), -hy + r * math.sin(a)
            yaw = wrap_angle(math.atan2(-hy - y, -hx - x))
        elif (d := d - math.pi * r / 2) < 2 * hx:  # bottom side
            x, y = -hx + d, -hy - r
            yaw = math.pi / 2
        elif (d := d - 2 * hx) < math.pi * r / 2:  # bottom-right arc
            a = 3 * math.pi / 2 + d / r
            x, y = hx + r * math.cos(a), -hy + r * math.sin(a)
            yaw = wrap_angle(math.atan2(-hy - y, hx - x))
        else:  # right side, lower half back to middle
            d = d - math.pi * r / 2
            x, y = hx + r, -hy + d
            yaw = math.pi
        wps.append(Waypoint(x=cx + x, y=cy + y, z=z, yaw=yaw))
    return wps


def gen_standoff_waypoints(pen: Pen, standoff_m: float, vertical_spacing_m: float = 1.0,
                           points_per_ring: int = 16) -> Trajectory:
    """Stacked rings at a fixed distance from the net, top to bottom."""
    if standoff_m <= 0:
        raise StandoffInsideNet("standoff must be positive")
    if vertical_spacing_m <= 0:
        raise ValueError("vertical spacing must be positive")
    levels = []
    z = pen.top
    while z > pen.bottom + 1e-9:
        levels.append(z)
        z -= vertical_spacing_m
    levels.append(pen.bottom)
    wps = []
    for z in levels:
        if pen.shape == "cylinder":
            wps.extend(_cylinder_ring(pen, pen.radius + standoff_m, z, points_per_ring))
        else:
            wps.extend(_box_ring(pen, standoff_m, z, points_per_ring))
    return Trajectory(tuple(wps), kind="standoff_rings")


# --------------------------------------------------------------------- lines

def gen_line(start, end, yaw_end=0.0):
    """Two-point move-to reference (the controller does the interpolation)."""
    return Trajectory((
        Waypoint(*start, yaw=yaw_end),
        Waypoint(*end, yaw=yaw_end),
    ), kind="line")


# ------------------------------------------------------------------ CSV I/O

CSV_COLUMNS = ("t", "x", "y", "z", "yaw")


def trajectory_to_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for wp in traj.waypoints:
        w.writerow(["" if wp.t is None else repr(wp.t), repr(wp.x), repr(wp.y), repr(wp.z), repr(wp.yaw)])
    return buf.getvalue()


def trajectory_from_csv(text: str, kind: str = "line") -> Trajectory:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ValueError(f"expected header {CSV_COLUMNS}")
    wps = tuple(
        Waypoint(t=float(r[0]) if r[0] else None, x=float(r[1]), y=float(r[2]),
                 z=float(r[3]), yaw=float(r[4]))
        for r in rows[1:]
    )
    return Trajectory(wps, kind=kind)


def save_trajectory(traj, path):
    Path(path).write_text(trajectory_to_csv(traj))


def load_trajectory(path, kind="line"):
    return trajectory_from_csv(Path(path).read_text(), kind=kind)
