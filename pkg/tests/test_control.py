"""PID guidance and waypoint tracking tests."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aqua.control import (
    AxisGains,
    PidGains,
    PidState,
    PoseError,
    TargetPose,
    TrackerState,
    arrived,
    guidance_move_to,
    pid_step,
    pose_error,
    track_waypoints,
    unicycle_adapter,
)
from aqua.trajectory import Trajectory, Waypoint
from aqua.vehicle import ControlInput, VehicleState


def p_only(kp, axis="x"):
    """Gains with one proportional axis and everything else zeroed."""
    zero = AxisGains(0.0, 0.0, 0.0)
    axes = {name: zero for name in ("x", "y", "z", "yaw")}
    axes[axis] = AxisGains(kp, 0.0, 0.0)
    return PidGains(x=axes["x"], y=axes["y"], z=axes["z"], yaw=axes["yaw"])


def test_pose_error_componentwise():
    e = pose_error(VehicleState(x=1.0, y=2.0, z=-3.0, yaw=0.0),
                   TargetPose(x=4.0, y=0.0, z=-1.0, yaw=0.5))
    assert e.as_tuple() == pytest.approx((3.0, -2.0, 2.0, 0.5))


def test_pose_error_yaw_wraps_short_way():
    e = pose_error(VehicleState(yaw=-3.0), TargetPose(0.0, 0.0, 0.0, yaw=3.0))
    assert e.e_yaw == pytest.approx(6.0 - 2.0 * math.pi, abs=1e-12)
    assert abs(e.e_yaw) < math.pi


def test_pi_output_sequence():
    # kp=1, ki=0.1, constant unit error, dt=0.1: u = 1.01, 1.02, 1.03, ...
    gains = p_only(1.0)
    gains = PidGains(x=AxisGains(1.0, 0.1, 0.0), y=gains.y, z=gains.z, yaw=gains.yaw)
    pid = PidState()
    e = PoseError(1.0, 0.0, 0.0, 0.0)
    outs = []
    for _ in range(3):
        u, pid = pid_step(gains, pid, e, dt=0.1)
        outs.append(u.v_x)
    assert outs == pytest.approx([1.01, 1.02, 1.03], abs=1e-12)


def test_scalar_contraction_exact():
    # Closed loop x <- x + u*dt with u = kp*e gives |e'| = |1 - kp*dt| |e|.
    kp, dt = 0.7, 0.1
    gains = p_only(kp)
    pid = PidState()
    x, target = 0.0, 5.0
    e_prev = abs(target - x)
    for _ in range(200):
        e = PoseError(target - x, 0.0, 0.0, 0.0)
        u, pid = pid_step(gains, pid, e, dt)
        x += u.v_x * dt
        e_now = abs(target - x)
        assert e_now == pytest.approx(abs(1.0 - kp * dt) * e_prev, rel=1e-12)
        e_prev = e_now


@given(kp=st.floats(0.05, 9.0), dt=st.floats(0.01, 0.2), e0=st.floats(-50.0, 50.0))
@settings(max_examples=150, deadline=None)
def test_scalar_contraction_property(kp, dt, e0):
    gains = p_only(kp)
    pid = PidState()
    u, _ = pid_step(gains, pid, PoseError(e0, 0.0, 0.0, 0.0), dt)
    e1 = e0 - u.v_x * dt
    assert abs(e1) == pytest.approx(abs(1.0 - kp * dt) * abs(e0), rel=1e-12, abs=1e-12)


def test_yaw_wrap_invariance():
    # Shifting both the state and target yaw by 2*pi leaves the command unchanged.
    gains = PidGains()
    for shift in (0.0, 2.0 * math.pi, -4.0 * math.pi):
        e = pose_error(VehicleState(yaw=2.5 + shift), TargetPose(0.0, 0.0, 0.0, yaw=-2.5 + shift))
        u, _ = pid_step(gains, PidState(), e, dt=0.1)
        if shift == 0.0:
            base = u.omega
        else:
            assert u.omega == pytest.approx(base, abs=1e-12)


def test_integral_antiwindup_clamped():
    gains = PidGains(x=AxisGains(0.0, 1.0, 0.0), y=AxisGains(0, 0, 0),
                     z=AxisGains(0, 0, 0), yaw=AxisGains(0, 0, 0), integral_limit=2.0)
    pid = PidState()
    e = PoseError(10.0, 0.0, 0.0, 0.0)
    for _ in range(100):
        u, pid = pid_step(gains, pid, e, dt=0.1)
    assert pid.integral[0] == pytest.approx(2.0)
    assert u.v_x == pytest.approx(2.0)  # ki * clamped integral


def test_derivative_zero_on_first_call():
    gains = PidGains(x=AxisGains(0.0, 0.0, 5.0), y=AxisGains(0, 0, 0),
                     z=AxisGains(0, 0, 0), yaw=AxisGains(0, 0, 0))
    u, pid = pid_step(gains, PidState(), PoseError(3.0, 0, 0, 0), dt=0.1)
    assert u.v_x == pytest.approx(0.0, abs=1e-12)
    u, _ = pid_step(gains, pid, PoseError(2.0, 0, 0, 0), dt=0.1)
    assert u.v_x == pytest.approx(5.0 * (2.0 - 3.0) / 0.1)


def test_pid_rejects_bad_inputs():
    with pytest.raises(ValueError):
        pid_step(PidGains(), PidState(), PoseError(0, 0, 0, 0), dt=0.0)
    with pytest.raises(ValueError):
        pid_step(PidGains(), PidState(), PoseError(float("nan"), 0, 0, 0), dt=0.1)
    with pytest.raises(ValueError):
        AxisGains(-1.0, 0.0, 0.0)


def test_arrived_thresholds():
    assert arrived(PoseError(0.05, 0.05, 0.05, 0.01))
    assert not arrived(PoseError(0.3, 0.0, 0.0, 0.0))
    assert not arrived(PoseError(0.0, 0.0, 0.0, 0.2))


def test_guidance_move_to_converges():
    gains = PidGains()
    pid = PidState()
    s = VehicleState(x=-10.0, y=-7.0, z=-10.0, yaw=0.0)
    target = TargetPose(-3.5, -3.5, 0.0, yaw=0.5)
    dt = 0.1
    ok = False
    for _ in range(5000):
        u, pid, ok = guidance_move_to(s, target, gains, pid, dt)
        if ok:
            break
        s = VehicleState(x=s.x + u.v_x * dt, y=s.y + u.v_y * dt,
                         z=s.z + u.v_z * dt, yaw=s.yaw + u.omega * dt)
    assert ok
    e = pose_error(s, target)
    assert e.position_norm < 0.2 and abs(e.e_yaw) < 0.1


# ------------------------------------------------------------------- tracker

LINE = Trajectory(tuple(Waypoint(float(i), 0.0, 0.0) for i in range(5)), kind="line")


def test_tracker_cursor_monotone_and_completes():
    gains = PidGains()
    pid = PidState()
    tracker = TrackerState()
    s = VehicleState()
    dt = 0.1
    last = 0
    for _ in range(2000):
        u, tracker, pid = track_waypoints(s, LINE, tracker, gains, pid, dt)
        assert tracker.cursor >= last
        last = tracker.cursor
        if tracker.done:
            break
        s = VehicleState(x=s.x + u.v_x * dt, y=s.y + u.v_y * dt,
                         z=s.z + u.v_z * dt, yaw=s.yaw + u.omega * dt)
    assert tracker.done
    end = LINE.waypoints[-1]
    assert math.hypot(s.x - end.x, s.y - end.y) < tracker.accept_radius_m


def test_tracker_done_only_within_radius_of_last():
    tracker = TrackerState()
    s = VehicleState(x=10.0)  # past the last waypoint, but outside the radius in y
    s = VehicleState(x=4.0, y=1.0)
    _, tracker, _ = track_waypoints(s, LINE, tracker, PidGains(), PidState(), 0.1)
    assert not tracker.done


def test_tracker_skips_waypoints_already_inside_radius():
    dense = Trajectory(tuple(Waypoint(i * 0.01, 0.0, 0.0) for i in range(20)), kind="line")
    _, tracker, _ = track_waypoints(VehicleState(), dense, TrackerState(), PidGains(), PidState(), 0.1)
    assert tracker.cursor == len(dense.waypoints) - 1
    assert tracker.done


def test_unicycle_adapter_gates_on_heading():
    gains = PidGains()
    # Commanded motion straight behind the vehicle: no forward speed yet.
    u = unicycle_adapter(ControlInput(v_x=-1.0), VehicleState(yaw=0.0), gains, 0.1)
    assert u.mode == "unicycle"
    assert u.v == pytest.approx(0.0, abs=1e-12)
    assert u.omega != 0.0
    # Aligned: full speed, no turn.
    u = unicycle_adapter(ControlInput(v_x=0.8), VehicleState(yaw=0.0), gains, 0.1)
    assert u.v == pytest.approx(0.8)
    assert u.omega == pytest.approx(0.0, abs=1e-12)
