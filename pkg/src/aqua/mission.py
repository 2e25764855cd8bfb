"""Mission runner: wires planner, validator, executor state machine, trajectory
generation, PID guidance, and the simulated vehicle into end-to-end missions,
plus canned scenario runs and the planner benchmark harness.
"""

from __future__ import annotations

import hashlib
import math
import os
import time
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .config import ConfigError, MissionConfig, ScenarioSpec, default_config
from .control import (
    PidGains,
    PidState,
    TargetPose,
    TrackerState,
    pid_step,
    pose_error,
    track_waypoints,
)
from .executor import (
    ACTION_DEADLINES_S,
    Dispatch,
    Done,
    EventKind,
    ExecutionEvent,
    Failed,
    MissionLog,
    Phase,
    RequestReplan,
    complete_replan,
    start_mission,
    step_mission,
)
from .plan_lang import parse_domain, validate_plan
from .plan_lang.canonical import initial_state
from .planners import (
    Command,
    FixtureBackend,
    HttpBackend,
    NetPen,
    PlannerContext,
    llm_plan,
    rule_based_plan,
)
from .telemetry import MissionReport, TelemetrySample, report_to_json, save_telemetry, summarize
from .trajectory import (
    HelixParams,
    Trajectory,
    Waypoint,
    ZigZagParams,
    gen_helix,
    gen_standoff_waypoints,
    helix_for_pen,
)
from .vehicle import (
    ControlInput,
    EnvModel,
    SimConfig,
    VehicleState,
    load_env,
    saturate,
    step_dynamics,
    wrap_angle,
)

DEFAULT_STANDOFF_M = 1.0

# Timed tracking starts on the reference, so initial errors are ~0 and
# normalization falls back to raw magnitudes.
_UNIT_BASIS = (None, None, None, None)


# --------------------------------------------------------- telemetry plumbing

def _norm_basis(e0):
    """Per-axis normalization divisors; zero-initial axes fall back to raw."""
    return tuple(abs(v) if abs(v) > 1e-12 else None for v in e0)


def _norm(e, basis):
    return tuple(abs(v) if b is None else abs(v) / b for v, b in zip(e, basis))


def _sample(t, ref, s, u, e, basis):
    return TelemetrySample(
        t=t,
        ref=(ref.x, ref.y, ref.z, ref.yaw),
        pose=(s.x, s.y, s.z, s.yaw),
        u=(u.v_x, u.v_y, u.v_z, u.omega),
        error=e.as_tuple(),
        norm_error=_norm(e.as_tuple(), basis),
    )


# ----------------------------------------------------------- motion primitives

def run_move_to(env, sim, gains, start, target: TargetPose, *, t_max_s,
                tol_pos_m=0.1, tol_yaw_rad=0.05, norm_tol=0.05, t0=0.0):
    """Regulate toward a fixed pose until tolerance or timeout.

    Convergence requires position norm < tol_pos_m, |yaw error| < tol_yaw_rad,
    and every normalizable axis below norm_tol of its initial error.
    Returns (samples, final_state, converged).
    """
    s, pid = start, PidState()
    basis = _norm_basis(pose_error(s, target).as_tuple())
    samples = []
    ticks = int(round(t_max_s / sim.dt))
    converged = False
    for k in range(ticks):
        e = pose_error(s, target)
        n = _norm(e.as_tuple(), basis)
        if (e.position_norm < tol_pos_m and abs(e.e_yaw) < tol_yaw_rad
                and max(n) < norm_tol):
            converged = True
            samples.append(_sample(t0 + k * sim.dt, target, s,
                                   ControlInput(mode="holonomic"), e, basis))
            break
        u, pid = pid_step(gains, pid, e, sim.dt)
        u = saturate(u, sim)
        samples.append(_sample(t0 + k * sim.dt, target, s, u, e, basis))
        s = step_dynamics(s, u, sim, env)
    return samples, s, converged


def _interp_ref(traj, t):
    """Linear interpolation of a timestamped trajectory; returns (ref, ff_vel)."""
    wps = traj.waypoints
    if t <= wps[0].t:
        w = wps[0]
        return TargetPose(w.x, w.y, w.z, w.yaw), (0.0, 0.0, 0.0, 0.0)
    for a, b in zip(wps, wps[1:]):
        if t <= b.t:
            span = b.t - a.t
            f = (t - a.t) / span
            dyaw = wrap_angle(b.yaw - a.yaw)
            ref = TargetPose(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y),
                             a.z + f * (b.z - a.z), wrap_angle(a.yaw + f * dyaw))
            ff = ((b.x - a.x) / span, (b.y - a.y) / span, (b.z - a.z) / span, dyaw / span)
            return ref, ff
    w = wps[-1]
    return TargetPose(w.x, w.y, w.z, w.yaw), (0.0, 0.0, 0.0, 0.0)


def run_track_timed(env, sim, gains, start, traj: Trajectory, *, t0=0.0):
    """Follow a timestamped trajectory in real time: PID feedback on the
    interpolated reference plus reference-velocity feedforward."""
    s, pid = start, PidState()
    samples = []
    duration = traj.waypoints[-1].t
    ticks = int(round(duration / sim.dt))
    for k in range(ticks):
        t = k * sim.dt
        ref, ff = _interp_ref(traj, t)
        e = pose_error(s, ref)
        u, pid = pid_step(gains, pid, e, sim.dt)
        u = ControlInput(mode="holonomic", v_x=u.v_x + ff[0], v_y=u.v_y + ff[1],
                         v_z=u.v_z + ff[2], omega=u.omega + ff[3])
        u = saturate(u, sim)
        samples.append(_sample(t0 + t, ref, s, u, e, _UNIT_BASIS))
        s = step_dynamics(s, u, sim, env)
    return samples, s, True


def run_track(env, sim, gains, start, traj: Trajectory, *, t_max_s, t0=0.0):
    """Follow a waypoint trajectory; timestamped paths run on their own clock
    with feedforward, untimed ones are carrot-chased by proximity.

    Returns (samples, final_state, done).
    """
    if all(w.t is not None for w in traj.waypoints) and len(traj) > 1:
        return run_track_timed(env, sim, gains, start, traj, t0=t0)
    s, pid, tracker = start, PidState(), TrackerState()
    wp0 = traj.waypoints[0]
    basis = _norm_basis(pose_error(s, TargetPose(wp0.x, wp0.y, wp0.z, wp0.yaw)).as_tuple())
    samples = []
    ticks = int(round(t_max_s / sim.dt))
    for k in range(ticks):
        u, tracker, pid = track_waypoints(s, traj, tracker, gains, pid, sim.dt)
        u = saturate(u, sim)
        wp = traj.waypoints[tracker.cursor]
        ref = TargetPose(wp.x, wp.y, wp.z, wp.yaw)
        e = pose_error(s, ref)
        samples.append(_sample(t0 + k * sim.dt, ref, s, u, e, basis))
        if tracker.done:
            return samples, s, True
        s = step_dynamics(s, u, sim, env)
    return samples, s, tracker.done


def run_depth_profile(env, sim, gains, start, profile: ZigZagParams, *, t0=0.0):
    """Track a stepped depth reference while station-keeping in xy."""
    s, pid = start, PidState()
    lx, ly = profile.lateral
    e0 = pose_error(s, TargetPose(lx, ly, profile.levels[0], 0.0)).as_tuple()
    basis = _norm_basis(e0)
    samples = []
    ticks = int(round(profile.duration / sim.dt))
    for k in range(ticks):
        t = k * sim.dt
        ref = TargetPose(lx, ly, profile.level_at(t), 0.0)
        e = pose_error(s, ref)
        u, pid = pid_step(gains, pid, e, sim.dt)
        u = saturate(u, sim)
        samples.append(_sample(t0 + t, ref, s, u, e, basis))
        s = step_dynamics(s, u, sim, env)
    return samples, s, True


# -------------------------------------------------------- step -> motion maps

def _facing(cx, cy, x, y):
    return math.atan2(cy - y, cx - x)


def _pen_halfwidth(pen):
    return pen.radius if pen.shape == "cylinder" else pen.width / 2.0


def _resolve_move_target(pen, params) -> TargetPose:
    if all(k in params for k in ("x", "y", "z")):
        return TargetPose(float(params["x"]), float(params["y"]), float(params["z"]),
                          float(params.get("yaw", 0.0)))
    st = float(params.get("standoff_m", DEFAULT_STANDOFF_M))
    cx, cy, _ = pen.center
    offset = _pen_halfwidth(pen) + st
    corner = params.get("corner")
    if corner:
        vert, _, horiz = str(corner).partition("_")
        x = cx + (offset if horiz != "left" else -offset)
        z = pen.top if vert == "top" else pen.bottom
        return TargetPose(x, cy, z, _facing(cx, cy, x, cy))
    # Default staging pose: beside the pen at the surface, camera facing it.
    x = cx + offset
    return TargetPose(x, cy, pen.top, _facing(cx, cy, x, cy))


def _ring(pen, standoff_m, level, omega=0.1, sample_dt=0.5):
    """One closed loop around the pen at a fixed depth."""
    if pen.shape == "cylinder":
        p = HelixParams(r=pen.radius + standoff_m, omega=omega, z0=level, v_z=0.0,
                        center=(pen.center[0], pen.center[1]),
                        t_end=2.0 * math.pi / omega)
        return gen_helix(p, sample_dt)
    rings = gen_standoff_waypoints(pen, standoff_m, vertical_spacing_m=2 * pen.height)
    wps = tuple(w for w in rings.waypoints if abs(w.z - level) < 1e-9) or rings.waypoints
    return Trajectory(wps, kind="standoff_rings")


def _inspect_trajectory(pen, params, current: VehicleState) -> Trajectory:
    method = params.get("method", "spiral")
    st = float(params.get("standoff_m", DEFAULT_STANDOFF_M))
    if method == "spiral" and pen.shape == "cylinder":
        omega = float(params.get("omega", 0.1))
        if "vertical_spacing_m" in params:
            v_z = float(params["vertical_spacing_m"]) * omega / (2.0 * math.pi)
            duration = pen.height / v_z
        else:
            duration = float(params.get("duration_s", 350.0))
        return helix_for_pen(pen, st, omega=omega, duration_s=duration)
    if method == "spiral":  # box net: descending standoff rings
        return gen_standoff_waypoints(pen, st)
    if method == "stationary":
        return Trajectory((Waypoint(current.x, current.y, current.z, current.yaw),),
                          kind="line")
    if method == "edge":
        level = pen.top if str(params.get("section", "top_edge")).startswith("top") else pen.bottom
        return _ring(pen, st, level)
    # Side / unknown methods: one loop at mid-depth covers any lateral section.
    return _ring(pen, st, (pen.top + pen.bottom) / 2.0)


# ----------------------------------------------------------------- run_mission

@dataclass
class MissionResult:
    mission_id: str
    phase: str
    report: MissionReport
    plan: object = None
    samples: list = field(default_factory=list)
    events: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    output_files: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.phase == Phase.DONE.value


def _planner_context(env: EnvModel) -> PlannerContext:
    pens = tuple(NetPen(id=p.id, center=p.center, width=p.width, height=p.height,
                        shape=p.shape) for p in env.pens)
    return PlannerContext(pens=pens)


def _make_plan(command, cfg, ctx):
    cmd = Command(text=command)
    if cfg.planner == "rule":
        return rule_based_plan(cmd, ctx)
    if cfg.planner == "llm-mock":
        fixture_dir = os.environ.get("AQUA_LLM_MOCK")
        if not fixture_dir:
            raise ConfigError("planner=llm-mock requires AQUA_LLM_MOCK to point at a fixture dir")
        return llm_plan(cmd, ctx, FixtureBackend(fixture_dir))
    url = os.environ.get("AQUA_LLM_URL")
    if not url:
        raise ConfigError("planner=llm requires AQUA_LLM_URL")
    return llm_plan(cmd, ctx, HttpBackend(url, key=os.environ.get("AQUA_LLM_KEY")))


def _failed_result(mission_id, reason, diagnostics=(), plan=None):
    report = MissionReport(mission_id=mission_id, psr=0.0, exesr=0.0, steps_total=0,
                           steps_succeeded=0, replans_used=0, duration_s=0.0)
    return MissionResult(mission_id=mission_id, phase=Phase.FAILED.value, report=report,
                         plan=plan, diagnostics=[reason, *diagnostics])


def mission_id_for(command: str, seed: int = 0) -> str:
    digest = hashlib.sha256(f"{seed}:{command}".encode()).hexdigest()[:8]
    return f"m-{digest}"


def run_mission(command: str, cfg: MissionConfig | None = None, *,
                write_outputs: bool = False) -> MissionResult:
    """Full pipeline: plan, validate, then execute with simulated motion.

    Planner and validation failures surface in the result, not as exceptions.
    """
    cfg = cfg or default_config()
    mid = mission_id_for(command, cfg.sim.seed)
    env = load_env(cfg.env_path)
    domain = parse_domain(Path(cfg.domain_path).read_text())
    try:
        pr = _make_plan(command, cfg, _planner_context(env))
    except Exception as exc:
        return _failed_result(mid, f"planner error: {exc}")
    if pr.status != "success":
        return _failed_result(mid, f"planner {pr.status}", pr.diagnostics)

    regions = tuple(p.id for p in env.pens)
    world = initial_state(regions=regions)
    vr = validate_plan(pr.plan, domain, world)
    if not vr.ok:
        return _failed_result(mid, f"plan invalid at step {vr.failing_step}", plan=pr.plan)

    log = MissionLog()
    ms = start_mission(pr.plan, domain, world)
    pen = env.pens[0]
    s = VehicleState(x=pen.center[0] + _pen_halfwidth(pen) + 5.0, y=pen.center[1],
                     z=0.0, yaw=0.0)
    samples: list[TelemetrySample] = []
    t = 0.0
    dispatched = succeeded = 0
    ms, directive = step_mission(ms, None, domain, cfg.policy)
    while True:
        log.directive(directive)
        if isinstance(directive, Done):
            phase = Phase.DONE
            break
        if isinstance(directive, Failed):
            phase = Phase.FAILED
            break
        if isinstance(directive, RequestReplan):
            # Re-plan from the same command; splice the fresh tail in.
            pr2 = _make_plan(command, cfg, _planner_context(env))
            if pr2.status != "success":
                phase = Phase.FAILED
                break
            ms = complete_replan(ms, pr2.plan, domain)
            ms, directive = step_mission(ms, None, domain, cfg.policy)
            continue
        assert isinstance(directive, Dispatch)
        dispatched += 1
        step = directive.step
        deadline = directive.deadline_s
        area = step.args.get("area", regions[0])
        step_pen = next((p for p in env.pens if p.id == area), pen)
        if step.action == "move_to":
            target = _resolve_move_target(step_pen, step.params)
            leg, s, ok = run_move_to(env, cfg.sim, cfg.gains, s, target,
                                     t_max_s=deadline, t0=t,
                                     tol_pos_m=0.2, tol_yaw_rad=0.1, norm_tol=1.0)
        elif step.action == "inspect":
            traj = _inspect_trajectory(step_pen, step.params, s)
            leg, s, ok = run_track(env, cfg.sim, cfg.gains, s, traj,
                                   t_max_s=deadline, t0=t)
        else:  # capture / report: instantaneous bookkeeping actions
            leg, ok = [], True
        samples.extend(leg)
        t += len(leg) * cfg.sim.dt
        kind = EventKind.ACTION_SUCCEEDED if ok else EventKind.ACTION_FAILED
        ev = ExecutionEvent(kind=kind, step=directive.step_index, detail=step.action)
        log.event(ev)
        succeeded += 1 if ok else 0
        ms, directive = step_mission(ms, ev, domain, cfg.policy)

    final_err = samples[-1].error if samples else None
    report = MissionReport(
        mission_id=mid, psr=1.0,
        exesr=(succeeded / dispatched) if dispatched else 1.0,
        steps_total=dispatched, steps_succeeded=succeeded,
        replans_used=ms.replans_used, duration_s=t, final_error=final_err,
    )
    result = MissionResult(mission_id=mid, phase=phase.value, report=report,
                           plan=pr.plan, samples=samples, events=list(log.records))
    if write_outputs:
        result.output_files = write_mission_outputs(result, cfg.output_dir)
    return result


def write_mission_outputs(result: MissionResult, output_dir) -> dict:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {}
    tele = out / f"{result.mission_id}_telemetry.csv"
    save_telemetry(result.samples, tele)
    files["telemetry"] = tele
    rep = out / f"{result.mission_id}_report.json"
    rep.write_text(report_to_json(result.report) + "\n")
    files["report"] = rep
    import json as _json
    ev = out / f"{result.mission_id}_events.jsonl"
    ev.write_text("".join(_json.dumps(r, sort_keys=True) + "\n" for r in result.events))
    files["events"] = ev
    return files


# ------------------------------------------------------------------ scenarios

def run_scenario(cfg: MissionConfig):
    """Run the preset experiment described by cfg.scenario.

    Returns (samples, summary_dict).
    """
    if cfg.scenario is None:
        raise ConfigError("config has no scenario section")
    env = load_env(cfg.env_path)
    p = cfg.scenario.params
    if cfg.scenario.kind == "move_to":
        start = VehicleState(*[float(v) for v in p["start"][:3]], yaw=float(p["start"][3]))
        tx, ty, tz, tyaw = (float(v) for v in p["target"])
        samples, s, ok = run_move_to(
            env, cfg.sim, cfg.gains, start, TargetPose(tx, ty, tz, tyaw),
            t_max_s=float(p.get("t_max_s", 850.0)),
            tol_pos_m=float(p.get("tol_pos_m", 0.1)),
            tol_yaw_rad=float(p.get("tol_yaw_rad", 0.05)),
            norm_tol=float(p.get("norm_tol", 0.05)),
        )
        extra = {"converged": ok}
    elif cfg.scenario.kind == "helix":
        pen = env.pens[0]
        traj = helix_for_pen(
            pen, float(p.get("standoff_m", DEFAULT_STANDOFF_M)),
            omega=float(p.get("omega", 0.1)),
            duration_s=float(p.get("duration_s", 350.0)),
            sample_dt=float(p.get("sample_dt", 0.5)),
        )
        wp0 = traj.waypoints[0]
        start = VehicleState(x=wp0.x, y=wp0.y, z=wp0.z, yaw=wp0.yaw)
        samples, s, ok = run_track(env, cfg.sim, cfg.gains, start, traj,
                                   t_max_s=2.0 * float(p.get("duration_s", 350.0)))
        extra = {"done": ok, "radius_m": pen.radius + float(p.get("standoff_m", DEFAULT_STANDOFF_M))}
    elif cfg.scenario.kind == "zigzag":
        zz = ZigZagParams(
            levels=tuple(float(v) for v in p["levels"]),
            dwell_s=float(p.get("dwell_s", 100.0)),
            lateral=tuple(float(v) for v in p.get("lateral", (0.0, 0.0))),
            t_end=float(p["t_end"]) if "t_end" in p else None,
        )
        start = VehicleState(x=zz.lateral[0], y=zz.lateral[1], z=zz.levels[0])
        samples, s, ok = run_depth_profile(env, cfg.sim, cfg.gains, start, zz)
        extra = {"done": ok, "profile": zz}
    else:  # pragma: no cover - ScenarioSpec already validates kind
        raise ConfigError(f"unknown scenario {cfg.scenario.kind!r}")
    summary = summarize(samples)
    summary.update(extra)
    return samples, summary


# ------------------------------------------------------------------ benchmark

def load_suite(path):
    raw = yaml.safe_load(Path(path).read_text())
    prompts = [(d["text"], d["expected"]) for d in raw["prompts"]]
    trials = int(raw.get("trials", 1))
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    return prompts, trials


def run_benchmark(suite_path, cfg: MissionConfig | None = None):
    """Per-prompt PSR / EXESR / mean generation time for the configured planner.

    EXESR here is symbolic: a validated plan executed with fault-free motion.
    """
    cfg = cfg or default_config()
    env = load_env(cfg.env_path)
    domain = parse_domain(Path(cfg.domain_path).read_text())
    ctx = _planner_context(env)
    world = initial_state(regions=tuple(p.id for p in env.pens))
    prompts, trials = load_suite(suite_path)
    rows = []
    for text, expected in prompts:
        times, successes = [], 0
        for _ in range(trials):
            pr = _make_plan(text, cfg, ctx)
            times.append(pr.gen_time_s)
            if pr.status == "success" and validate_plan(pr.plan, domain, world).ok:
                successes += 1
        psr = 100.0 * successes / trials
        rows.append({
            "prompt": text,
            "expected": expected,
            "psr_pct": psr,
            "exesr_pct": psr,  # fault-free symbolic execution of every valid plan
            "mean_gen_time_s": sum(times) / len(times),
        })
    return rows


def format_benchmark_table(rows) -> str:
    lines = [f"{'Prompt':<64} {'PSR%':>6} {'EXESR%':>7} {'gen_time_s':>11}"]
    for r in rows:
        prompt = (r["prompt"][:61] + "...") if len(r["prompt"]) > 64 else r["prompt"]
        lines.append(f"{prompt:<64} {r['psr_pct']:>6.1f} {r['exesr_pct']:>7.1f} "
                     f"{r['mean_gen_time_s']:>11.6f}")
    return "\n".join(lines)
