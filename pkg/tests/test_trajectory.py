"""Reference trajectory generator tests."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aqua.trajectory import (
    CSV_COLUMNS,
    HelixParams,
    StandoffInsideNet,
    Trajectory,
    Waypoint,
    ZigZagParams,
    gen_helix,
    gen_line,
    gen_standoff_waypoints,
    gen_zigzag,
    helix_for_pen,
    helix_point,
    trajectory_from_csv,
    trajectory_to_csv,
)
from aqua.vehicle import Pen, pen_distance, wrap_angle

CAGE = Pen(id="cage-1", shape="cylinder", center=(0.0, 0.0, -2.5), width=5.0, height=5.0)
POOL = Pen(id="pool-net", shape="box", center=(0.0, 0.0, -1.675), width=2.13, height=3.35, length=0.0)

HELIX = HelixParams(r=3.5, omega=0.1, z0=0.0, v_z=5.0 / 350.0, t_end=350.0)


def test_helix_point_parametric_form():
    wp = helix_point(HELIX, 0.0)
    assert (wp.x, wp.y, wp.z) == pytest.approx((3.5, 0.0, 0.0))
    t = 100.0
    wp = helix_point(HELIX, t)
    assert wp.x == pytest.approx(3.5 * math.cos(0.1 * t), abs=1e-12)
    assert wp.y == pytest.approx(3.5 * math.sin(0.1 * t), abs=1e-12)
    assert wp.z == pytest.approx(-5.0 / 350.0 * t, abs=1e-12)


def test_helix_radial_exactness():
    traj = gen_helix(HELIX, sample_dt=0.5)
    for wp in traj.waypoints:
        assert math.hypot(wp.x, wp.y) == pytest.approx(3.5, abs=1e-9)


def test_helix_sample_count_inclusive():
    traj = gen_helix(HelixParams(r=1.0, omega=0.1, z0=0.0, v_z=0.1, t_end=10.0), sample_dt=1.0)
    assert len(traj) == 11
    assert traj.waypoints[0].t == 0.0
    assert traj.waypoints[-1].t == pytest.approx(10.0)


def test_helix_endpoint_included_for_nonmultiple_dt():
    traj = gen_helix(HelixParams(r=1.0, omega=0.1, z0=0.0, v_z=0.1, t_end=1.0), sample_dt=0.3)
    assert traj.waypoints[-1].t == pytest.approx(1.0)


def test_helix_yaw_faces_axis():
    for t in (0.0, 37.0, 200.0, 350.0):
        wp = helix_point(HELIX, t)
        inward = math.atan2(-wp.y, -wp.x)
        assert wrap_angle(wp.yaw - inward) == pytest.approx(0.0, abs=1e-9)


def test_helix_for_pen_descends_full_height():
    traj = helix_for_pen(CAGE, standoff_m=1.0, duration_s=350.0)
    assert traj.waypoints[0].z == pytest.approx(0.0)
    assert traj.waypoints[-1].z == pytest.approx(-5.0)
    for wp in traj.waypoints:
        assert math.hypot(wp.x, wp.y) == pytest.approx(3.5, abs=1e-9)


@given(
    r=st.floats(0.5, 10.0), omega=st.floats(0.01, 1.0),
    t=st.floats(0.0, 100.0), cx=st.floats(-5, 5), cy=st.floats(-5, 5),
)
@settings(max_examples=200, deadline=None)
def test_helix_radius_property(r, omega, t, cx, cy):
    p = HelixParams(r=r, omega=omega, z0=0.0, v_z=0.01, center=(cx, cy), t_end=100.0)
    wp = helix_point(p, t)
    assert math.hypot(wp.x - cx, wp.y - cy) == pytest.approx(r, abs=1e-9)


# ------------------------------------------------------------------- zig-zag

def test_zigzag_level_schedule():
    p = ZigZagParams(levels=(-1.25, 0.25, -1.25, 0.25, -1.25), dwell_s=100.0)
    assert p.duration == pytest.approx(500.0)
    assert p.level_at(0.0) == -1.25
    assert p.level_at(99.9) == -1.25
    assert p.level_at(100.0) == 0.25
    assert p.level_at(450.0) == -1.25
    assert p.level_at(499.9) == -1.25


def test_gen_zigzag_step_profile():
    p = ZigZagParams(levels=(-1.25, 0.25, -1.25), dwell_s=100.0, t_end=500.0)
    traj = gen_zigzag(p)
    assert traj.kind == "zigzag"
    zs = [wp.z for wp in traj.waypoints]
    ts = [wp.t for wp in traj.waypoints]
    assert zs == [-1.25, 0.25, -1.25, -1.25]
    assert ts == [0.0, 100.0, 200.0, 500.0]


def test_zigzag_validation():
    with pytest.raises(ValueError):
        ZigZagParams(levels=(-1.0,), dwell_s=10.0)
    with pytest.raises(ValueError):
        ZigZagParams(levels=(-1.0, 0.0), dwell_s=0.0)


# ------------------------------------------------------------------ standoff

def test_standoff_rings_cylinder_exact():
    traj = gen_standoff_waypoints(CAGE, standoff_m=1.0, vertical_spacing_m=1.0, points_per_ring=16)
    assert traj.kind == "standoff_rings"
    levels = sorted({wp.z for wp in traj.waypoints}, reverse=True)
    assert levels == pytest.approx([0.0, -1.0, -2.0, -3.0, -4.0, -5.0])
    assert len(traj) == 6 * 16
    for wp in traj.waypoints:
        assert pen_distance((wp.x, wp.y, wp.z), CAGE) == pytest.approx(1.0, abs=1e-6)


def test_standoff_rings_box_exact():
    traj = gen_standoff_waypoints(POOL, standoff_m=0.5, vertical_spacing_m=1.0, points_per_ring=24)
    for wp in traj.waypoints:
        assert pen_distance((wp.x, wp.y, wp.z), POOL) == pytest.approx(0.5, abs=1e-6)


def test_standoff_yaw_faces_net_cylinder():
    traj = gen_standoff_waypoints(CAGE, standoff_m=1.0, points_per_ring=8)
    for wp in traj.waypoints:
        inward = math.atan2(-wp.y, -wp.x)
        assert wrap_angle(wp.yaw - inward) == pytest.approx(0.0, abs=1e-9)


def test_standoff_rejects_nonpositive():
    with pytest.raises(StandoffInsideNet):
        gen_standoff_waypoints(CAGE, standoff_m=0.0)
    with pytest.raises(StandoffInsideNet):
        helix_for_pen(CAGE, standoff_m=-1.0)


# ---------------------------------------------------------------- validation

def test_trajectory_rejects_empty_and_unsorted_times():
    with pytest.raises(ValueError):
        Trajectory(())
    with pytest.raises(ValueError):
        Trajectory((Waypoint(0, 0, 0, t=1.0), Waypoint(1, 0, 0, t=0.5)))
    with pytest.raises(ValueError):
        Waypoint(float("nan"), 0.0, 0.0)


def test_gen_line_endpoints():
    traj = gen_line((0.0, 0.0, 0.0), (-3.5, -3.5, 0.0), yaw_end=0.5)
    assert len(traj) == 2
    assert traj.waypoints[-1].yaw == 0.5


def test_reversed_trajectory():
    traj = gen_helix(HelixParams(r=1.0, omega=0.1, z0=0.0, v_z=0.1, t_end=10.0), sample_dt=1.0)
    rev = traj.reversed()
    assert rev.waypoints[0].z == pytest.approx(traj.waypoints[-1].z)
    assert all(wp.t is None for wp in rev.waypoints)


# ------------------------------------------------------------------- CSV I/O

def test_csv_round_trip_byte_stable():
    traj = gen_helix(HELIX, sample_dt=10.0)
    text = trajectory_to_csv(traj)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    back = trajectory_from_csv(text, kind="helix")
    assert trajectory_to_csv(back) == text
    assert back.waypoints == traj.waypoints


def test_csv_rejects_bad_header():
    with pytest.raises(ValueError):
        trajectory_from_csv("a,b,c\n1,2,3\n")
