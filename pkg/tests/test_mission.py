"""End-to-end mission runner, scenario, and benchmark tests."""

import math
from pathlib import Path

import pytest

from aqua.config import ConfigError, MissionConfig, default_config, dump_config, load_config
from aqua.control import TargetPose
from aqua.mission import (
    format_benchmark_table,
    mission_id_for,
    run_benchmark,
    run_mission,
    run_move_to,
    run_scenario,
    run_track,
    write_mission_outputs,
)
from aqua.telemetry import telemetry_to_csv
from aqua.trajectory import Trajectory, Waypoint
from aqua.vehicle import VehicleState, load_env

DATA = Path(__file__).resolve().parents[1] / "src" / "aqua" / "data"

SPIRAL_CMD = "Inspect the entire net cage using a spiral method at a 3-meter distance."


# -------------------------------------------------------------------- config

def test_default_config_files_exist():
    cfg = default_config()
    assert cfg.env_path.exists()
    assert cfg.domain_path.exists()


def test_load_preset_configs():
    for name in ("case1_move_to.yaml", "case2_inspect.yaml", "pool_zigzag.yaml"):
        cfg = load_config(DATA / name)
        assert cfg.scenario is not None
        assert cfg.env_path.exists()


def test_load_config_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("env: does_not_exist.env\n")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_dump_config_round_trips(tmp_path):
    cfg = load_config(DATA / "case1_move_to.yaml")
    text = dump_config(cfg)
    p = tmp_path / "dumped.yaml"
    p.write_text(text)
    cfg2 = load_config(p)
    assert cfg2.sim == cfg.sim
    assert cfg2.gains == cfg.gains
    assert cfg2.planner == cfg.planner
    assert dump_config(cfg2) == text


def test_unknown_planner_rejected():
    with pytest.raises(ConfigError):
        MissionConfig(env_path=DATA / "sim_cage.env",
                      domain_path=DATA / "aquachat_inspection.pddl", planner="oracle")


# --------------------------------------------------------------- run_mission

def test_spiral_mission_completes_with_helix_segment():
    res = run_mission(SPIRAL_CMD)
    assert res.ok
    assert res.report.psr == 1.0 and res.report.exesr == 1.0
    assert [s.action for s in res.plan.steps] == ["move_to", "inspect", "capture", "report"]
    # The inspect leg holds a 3 m standoff: radius 2.5 + 3.0 = 5.5 m.
    radii = [math.hypot(s.ref[0], s.ref[1]) for s in res.samples]
    assert max(radii) == pytest.approx(5.5, abs=0.05)
    helix_pts = [r for r in radii if abs(r - 5.5) < 0.05]
    assert len(helix_pts) > 1000


def test_unstructured_command_fails_in_report_not_crash():
    res = run_mission("Can you check for holes in the net?")
    assert not res.ok
    assert res.report.psr == 0.0
    assert res.report.exesr == 0.0
    assert res.samples == []


def test_mission_determinism_byte_identical():
    a = run_mission(SPIRAL_CMD)
    b = run_mission(SPIRAL_CMD)
    assert telemetry_to_csv(a.samples) == telemetry_to_csv(b.samples)
    assert a.mission_id == b.mission_id


def test_mission_telemetry_time_monotone():
    res = run_mission(SPIRAL_CMD)
    ts = [s.t for s in res.samples]
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_corner_mission_completes():
    res = run_mission("Move to the bottom-right corner of the net cage and capture an image.")
    assert res.ok
    # Final pose near the bottom-right staging point: x = 2.5 + 1.0, z = -5.
    last = res.samples[-1]
    assert last.pose[2] == pytest.approx(-5.0, abs=0.3)


def test_mission_outputs_written(tmp_path):
    res = run_mission(SPIRAL_CMD)
    files = write_mission_outputs(res, tmp_path)
    assert files["telemetry"].exists()
    assert files["report"].exists()
    assert files["events"].exists()
    assert files["events"].read_text().count('"directive"') >= len(res.plan.steps)


def test_mission_id_deterministic():
    assert mission_id_for("abc", 0) == mission_id_for("abc", 0)
    assert mission_id_for("abc", 0) != mission_id_for("abc", 1)


# ----------------------------------------------------------------- scenarios

def test_case1_scenario_converges():
    samples, summ = run_scenario(load_config(DATA / "case1_move_to.yaml"))
    assert summ["converged"]
    e = summ["final_error"]
    assert math.hypot(e["x"], e["y"], e["z"]) < 0.1
    assert abs(e["yaw"]) < 0.05
    assert all(v < 0.05 for v in summ["final_norm_error"].values())
    assert summ["t_final"] <= 850.0


def test_case2_scenario_radial_and_depth():
    samples, summ = run_scenario(load_config(DATA / "case2_inspect.yaml"))
    assert summ["done"]
    quarter_t = (math.pi / 2) / 0.1
    radial = [abs(math.hypot(s.pose[0], s.pose[1]) - 3.5)
              for s in samples if s.t > quarter_t]
    assert max(radial) < 0.3
    z_err = [s.pose[2] - (-5.0 / 350.0 * s.t) for s in samples]
    assert math.sqrt(sum(v * v for v in z_err) / len(z_err)) < 0.3


def test_zigzag_scenario_band():
    samples, summ = run_scenario(load_config(DATA / "pool_zigzag.yaml"))
    transitions = [0.0, 100.0, 200.0, 300.0, 400.0]
    for s in samples:
        if any(tr <= s.t < tr + 20.0 for tr in transitions):
            continue
        assert abs(s.error[2]) <= 0.25, f"depth outside band at t={s.t}"


def test_scenario_requires_section():
    with pytest.raises(ConfigError):
        run_scenario(default_config())


# ------------------------------------------------------------------ low-level

def test_run_move_to_timeout_reports_not_converged():
    env = load_env(DATA / "sim_cage.env")
    cfg = default_config()
    samples, s, ok = run_move_to(env, cfg.sim, cfg.gains, VehicleState(x=50.0),
                                 TargetPose(0.0, 0.0, 0.0), t_max_s=2.0)
    assert not ok
    assert len(samples) == 20


def test_run_track_untimed_uses_pursuit():
    env = load_env(DATA / "sim_cage.env")
    cfg = default_config()
    traj = Trajectory(tuple(Waypoint(float(i), 0.0, 0.0) for i in range(4)), kind="line")
    samples, s, done = run_track(env, cfg.sim, cfg.gains, VehicleState(), traj, t_max_s=200.0)
    assert done
    assert abs(s.x - 3.0) < 0.25


# ----------------------------------------------------------------- benchmark

def test_benchmark_rule_split():
    rows = run_benchmark(DATA / "benchmark_suite.yaml")
    for r in rows:
        want = 100.0 if r["expected"] == "structured" else 0.0
        assert r["psr_pct"] == want
        assert r["exesr_pct"] == want


def test_benchmark_rule_latency_under_1ms():
    rows = run_benchmark(DATA / "benchmark_suite.yaml")
    assert all(r["mean_gen_time_s"] < 0.001 for r in rows)


def test_benchmark_llm_mock_all_pass(tmp_path, monkeypatch):
    from aqua.planners import write_suite_fixtures
    cfg = default_config()
    env = load_env(cfg.env_path)
    from aqua.mission import _planner_context
    write_suite_fixtures(_planner_context(env), tmp_path)
    monkeypatch.setenv("AQUA_LLM_MOCK", str(tmp_path))
    cfg2 = MissionConfig(env_path=cfg.env_path, domain_path=cfg.domain_path, planner="llm-mock")
    rows = run_benchmark(DATA / "benchmark_suite.yaml", cfg2)
    assert all(r["psr_pct"] == 100.0 for r in rows)


def test_benchmark_table_format():
    rows = run_benchmark(DATA / "benchmark_suite.yaml")
    table = format_benchmark_table(rows)
    assert "PSR%" in table.splitlines()[0]
    assert len(table.splitlines()) == 11
