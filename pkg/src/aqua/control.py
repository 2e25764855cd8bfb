"""PID guidance: pose errors, per-axis PID law, move-to regulation, and
waypoint-sequence tracking.

The controller commands world-frame velocities (holonomic plant). A small
adapter converts those into forward-speed/heading commands for unicycle runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .vehicle import ControlInput, wrap_angle

AXES = ("x", "y", "z", "yaw")


@dataclass(frozen=True)
class AxisGains:
    kp: float = 0.0
    ki: float = 0.0
    kd: float = 0.0

    def __post_init__(self):
        if min(self.kp, self.ki, self.kd) < 0:
            raise ValueError("gains must be non-negative")


@dataclass(frozen=True)
class PidGains:
    x: AxisGains = AxisGains(0.5, 0.05, 0.1)
    y: AxisGains = AxisGains(0.5, 0.05, 0.1)
    z: AxisGains = AxisGains(0.5, 0.05, 0.1)
    yaw: AxisGains = AxisGains(1.0, 0.0, 0.2)
    integral_limit: float = 2.0

    def axis(self, name):
        return getattr(self, name)


@dataclass(frozen=True)
class PidState:
    integral: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    prev_error: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    initialized: bool = False


@dataclass(frozen=True)
class PoseError:
    e_x: float
    e_y: float
    e_z: float
    e_yaw: float

    def as_tuple(self):
        return (self.e_x, self.e_y, self.e_z, self.e_yaw)

    @property
    def position_norm(self):
        return math.sqrt(self.e_x ** 2 + self.e_y ** 2 + self.e_z ** 2)


@dataclass(frozen=True)
class TargetPose:
    x: float
    y: float
    z: float
    yaw: float = 0.0


# Arrival thresholds for move_to.
ACCEPT_RADIUS_M = 0.2
YAW_TOL_RAD = 0.1


def pose_error(s, target) -> PoseError:
    """Componentwise target - state; yaw wrapped to (-pi, pi]."""
    return PoseError(
        e_x=target.x - s.x,
        e_y=target.y - s.y,
        e_z=target.z - s.z,
        e_yaw=wrap_angle(target.yaw - s.yaw),
    )


def pid_step(gains: PidGains, pid: PidState, e: PoseError, dt: float):
    """One PID update over all four axes; returns (holonomic command, new state).

    Integral: I <- clamp(I + e*dt). Derivative on error, zero at first call.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    errors = e.as_tuple()
    if not all(math.isfinite(v) for v in errors):
        raise ValueError(f"non-finite pose error: {errors}")
    lim = gains.integral_limit
    integral = tuple(max(-lim, min(lim, i + ev * dt)) for i, ev in zip(pid.integral, errors))
    out = []
    for name, ev, i, prev in zip(AXES, errors, integral, pid.prev_error):
        g = gains.axis(name)
        de = 0.0 if not pid.initialized else (ev - prev) / dt
        out.append(g.kp * ev + g.ki * i + g.kd * de)
    u = ControlInput(mode="holonomic", v_x=out[0], v_y=out[1], v_z=out[2], omega=out[3])
    return u, PidState(integral=integral, prev_error=errors, initialized=True)


def arrived(e: PoseError, accept_radius_m=ACCEPT_RADIUS_M, yaw_tol_rad=YAW_TOL_RAD):
    return e.position_norm < accept_radius_m and abs(e.e_yaw) < yaw_tol_rad


def guidance_move_to(s, target: TargetPose, gains: PidGains, pid: PidState, dt: float):
    """Setpoint regulation toward a fixed pose. Returns (u, pid', arrived?)."""
    e = pose_error(s, target)
    u, pid = pid_step(gains, pid, e, dt)
    return u, pid, arrived(e)


@dataclass(frozen=True)
class TrackerState:
    cursor: int = 0
    accept_radius_m: float = ACCEPT_RADIUS_M
    done: bool = False


class EmptyTrajectory(Exception):
    pass


def track_waypoints(s, traj, tracker: TrackerState, gains: PidGains, pid: PidState, dt: float):
    """Chase the current waypoint; advance the cursor inside the accept radius.

    The yaw setpoint is each waypoint's stored heading. Returns
    (u, tracker', pid').
    """
    if not traj.waypoints:
        raise EmptyTrajectory("trajectory has no waypoints")
    cursor = min(tracker.cursor, len(traj.waypoints) - 1)
    wp = traj.waypoints[cursor]
    e = pose_error(s, TargetPose(wp.x, wp.y, wp.z, wp.yaw))
    while e.position_norm < tracker.accept_radius_m and cursor < len(traj.waypoints) - 1:
        cursor += 1
        wp = traj.waypoints[cursor]
        e = pose_error(s, TargetPose(wp.x, wp.y, wp.z, wp.yaw))
    done = tracker.done or (
        cursor == len(traj.waypoints) - 1 and e.position_norm < tracker.accept_radius_m
    )
    u, pid = pid_step(gains, pid, e, dt)
    return u, TrackerState(cursor=cursor, accept_radius_m=tracker.accept_radius_m, done=done), pid


def unicycle_adapter(u: ControlInput, s, gains: PidGains, dt: float, heading_pid_state: float = 0.0):
    """Convert a holonomic command into (forward speed, heading-rate) form.

    Forward speed is the commanded horizontal speed; the heading setpoint is
    the commanded velocity direction, regulated by the yaw-axis PID's
    proportional term.
    """
    speed = math.hypot(u.v_x, u.v_y)
    if speed < 1e-9:
        return ControlInput(mode="unicycle", v=0.0, v_z=u.v_z, omega=u.omega)
    heading = math.atan2(u.v_y, u.v_x)
    heading_err = wrap_angle(heading - s.yaw)
    omega = gains.yaw.kp * heading_err
    # Only drive forward when roughly facing the commanded direction.
    v = speed * max(0.0, math.cos(heading_err))
    return ControlInput(mode="unicycle", v=v, v_z=u.v_z, omega=omega)
