"""Discrete-time kinematic ROV plant and net-pen environment geometry.

Forward-Euler stepping of either a holonomic (independent x/y/z velocities) or a
unicycle (forward speed + yaw rate) velocity model, with an optional constant
current. z is negative below the surface. Roll and pitch are passively
stable and copied through unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import yaml


def wrap_angle(a):
    """Wrap to (-pi, pi]."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


@dataclass(frozen=True)
class VehicleState:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    roll: float = 0.0
    pitch: float = 0.0
    yaw: float = 0.0

    def __post_init__(self):
        vals = (self.x, self.y, self.z, self.roll, self.pitch, self.yaw)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite vehicle state: {vals}")

    @property
    def position(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class ControlInput:
    mode: str = "holonomic"  # or "unicycle"
    v_x: float = 0.0
    v_y: float = 0.0
    v_z: float = 0.0
    omega: float = 0.0
    v: float = 0.0  # forward speed, unicycle mode only


@dataclass(frozen=True)
class Pen:
    id: str
    center: tuple[float, float, float]
    width: float   # cylinder: diameter; box: x extent
    height: float  # vertical extent
    shape: str = "cylinder"
    length: float = 0.0  # box only: y extent (0 = planar net)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("pen width and height must be positive")

    @property
    def radius(self):
        return self.width / 2.0

    @property
    def top(self):
        return self.center[2] + self.height / 2.0

    @property
    def bottom(self):
        return self.center[2] - self.height / 2.0


@dataclass(frozen=True)
class Region:
    id: str
    min_corner: tuple[float, float, float]
    max_corner: tuple[float, float, float]

    def contains(self, p):
        return all(lo <= c <= hi for lo, c, hi in zip(self.min_corner, p, self.max_corner))


@dataclass(frozen=True)
class EnvModel:
    pens: tuple[Pen, ...]
    current: tuple[float, float, float] = (0.0, 0.0, 0.0)
    regions: tuple[Region, ...] = ()

    def pen(self, pen_id=None):
        if pen_id is None:
            return self.pens[0]
        for p in self.pens:
            if p.id == pen_id:
                return p
        raise KeyError(pen_id)


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.1
    v_max: float = 1.0
    vz_max: float = 0.5
    omega_max: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.dt <= 1.0):
            raise ValueError("dt must be in (0, 1]")
        if min(self.v_max, self.vz_max, self.omega_max) <= 0:
            raise ValueError("velocity limits must be positive")


@dataclass(frozen=True)
class Observation:
    t: float
    pose: VehicleState
    net_distance_m: float
    in_region: str | None = None


def _clamp(v, limit):
    return max(-limit, min(limit, v))


def saturate(u: ControlInput, cfg: SimConfig) -> ControlInput:
    if u.mode == "unicycle":
        return replace(u, v=_clamp(u.v, cfg.v_max), v_z=_clamp(u.v_z, cfg.vz_max),
                       omega=_clamp(u.omega, cfg.omega_max))
    return replace(u, v_x=_clamp(u.v_x, cfg.v_max), v_y=_clamp(u.v_y, cfg.v_max),
                   v_z=_clamp(u.v_z, cfg.vz_max), omega=_clamp(u.omega, cfg.omega_max))


def step_dynamics(s: VehicleState, u: ControlInput, cfg: SimConfig, env: EnvModel) -> VehicleState:
    """One explicit Euler step; inputs are saturated to the config limits first."""
    fields = (u.v_x, u.v_y, u.v_z, u.omega, u.v)
    if not all(math.isfinite(v) for v in fields):
        raise ValueError(f"non-finite control input: {fields}")
    u = saturate(u, cfg)
    cx, cy, cz = env.current
    dt = cfg.dt
    if u.mode == "unicycle":
        vx = u.v * math.cos(s.yaw)
        vy = u.v * math.sin(s.yaw)
    elif u.mode == "holonomic":
        vx, vy = u.v_x, u.v_y
    else:
        raise ValueError(f"unknown control mode {u.mode!r}")
    return VehicleState(
        x=s.x + dt * (vx + cx),
        y=s.y + dt * (vy + cy),
        z=s.z + dt * (u.v_z + cz),
        roll=s.roll,
        pitch=s.pitch,
        yaw=wrap_angle(s.yaw + dt * u.omega),
    )


def net_distance(s: VehicleState, env: EnvModel) -> float:
    """Euclidean distance (m) to the nearest pen surface."""
    return min(pen_distance(s.position, p) for p in env.pens)


def pen_distance(p, pen: Pen) -> float:
    x, y, z = p
    cx, cy, cz = pen.center
    if pen.shape == "cylinder":
        rho = math.hypot(x - cx, y - cy)
        dz_out = max(abs(z - cz) - pen.height / 2.0, 0.0)
        return math.hypot(abs(rho - pen.radius), dz_out)
    if pen.shape == "box":
        # Distance to the surface of an axis-aligned box (possibly planar).
        hx, hy, hz = pen.width / 2.0, pen.length / 2.0, pen.height / 2.0
        qx, qy, qz = abs(x - cx) - hx, abs(y - cy) - hy, abs(z - cz) - hz
        outside = math.sqrt(max(qx, 0.0) ** 2 + max(qy, 0.0) ** 2 + max(qz, 0.0) ** 2)
        inside = min(max(qx, qy, qz), 0.0)
        return abs(outside + inside)
    raise ValueError(f"unknown pen shape {pen.shape!r}")


def observe(s: VehicleState, env: EnvModel, t: float) -> Observation:
    in_region = None
    for r in env.regions:
        if r.contains(s.position):
            in_region = r.id
            break
    return Observation(t=t, pose=s, net_distance_m=net_distance(s, env), in_region=in_region)


# ------------------------------------------------------------- env file I/O

def load_env(path) -> EnvModel:
    """Read an environment file (YAML: pens, current, regions)."""
    data = yaml.safe_load(Path(path).read_text())
    pens = tuple(
        Pen(
            id=p["id"],
            center=tuple(float(c) for c in p["center"]),
            width=float(p["width"]),
            height=float(p["height"]),
            shape=p.get("shape", "cylinder"),
            length=float(p.get("length", 0.0)),
        )
        for p in data["pens"]
    )
    regions = tuple(
        Region(r["id"], tuple(float(c) for c in r["min"]), tuple(float(c) for c in r["max"]))
        for r in data.get("regions", ())
    )
    current = tuple(float(c) for c in data.get("current", (0.0, 0.0, 0.0)))
    return EnvModel(pens=pens, current=current, regions=regions)
