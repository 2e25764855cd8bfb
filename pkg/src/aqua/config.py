"""Mission configuration: YAML-backed settings for the environment, planner
choice, simulation limits, controller gains, replan policy, and optional
scenario preset, with a canonical dump for reproducibility."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .control import AxisGains, PidGains
from .executor import ReplanPolicy
from .vehicle import SimConfig

PLANNERS = ("rule", "llm", "llm-mock")

_DATA = Path(__file__).resolve().parent / "data"


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class ScenarioSpec:
    """Optional preset describing a canned experiment run."""
    kind: str                      # move_to | helix | zigzag
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("move_to", "helix", "zigzag"):
            raise ConfigError(f"unknown scenario kind {self.kind!r}")


@dataclass(frozen=True)
class MissionConfig:
    env_path: Path
    domain_path: Path
    planner: str = "rule"
    sim: SimConfig = SimConfig()
    gains: PidGains = PidGains()
    policy: ReplanPolicy = ReplanPolicy()
    output_dir: Path = Path("out")
    scenario: ScenarioSpec | None = None

    def __post_init__(self):
        if self.planner not in PLANNERS:
            raise ConfigError(f"planner must be one of {PLANNERS}, got {self.planner!r}")


def default_config(output_dir="out") -> MissionConfig:
    return MissionConfig(
        env_path=_DATA / "sim_cage.env",
        domain_path=_DATA / "aquachat_inspection.pddl",
        output_dir=Path(output_dir),
    )


def _axis(d, name, default: AxisGains) -> AxisGains:
    a = d.get(name, {})
    return AxisGains(
        kp=float(a.get("kp", default.kp)),
        ki=float(a.get("ki", default.ki)),
        kd=float(a.get("kd", default.kd)),
    )


def _gains_from_dict(d) -> PidGains:
    base = PidGains()
    return PidGains(
        x=_axis(d, "x", base.x),
        y=_axis(d, "y", base.y),
        z=_axis(d, "z", base.z),
        yaw=_axis(d, "yaw", base.yaw),
        integral_limit=float(d.get("integral_limit", base.integral_limit)),
    )


def load_config(path) -> MissionConfig:
    """Load a mission config; relative file references resolve beside the file,
    falling back to the packaged data directory."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text()) or {}
    except FileNotFoundError as exc:
        raise ConfigError(str(exc)) from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")

    def resolve(name, default):
        if name not in raw:
            return default
        p = Path(raw[name])
        for cand in (p, path.parent / p, _DATA / p):
            if cand.exists():
                return cand
        raise ConfigError(f"{path}: referenced file not found: {raw[name]}")

    sim_d = raw.get("sim", {})
    base = SimConfig()
    sim = SimConfig(
        dt=float(sim_d.get("dt", base.dt)),
        v_max=float(sim_d.get("v_max", base.v_max)),
        vz_max=float(sim_d.get("vz_max", base.vz_max)),
        omega_max=float(sim_d.get("omega_max", base.omega_max)),
        seed=int(sim_d.get("seed", base.seed)),
    )
    pol_d = raw.get("policy", {})
    pol = ReplanPolicy(
        max_replans=int(pol_d.get("max_replans", ReplanPolicy().max_replans)),
        on_action_failure=pol_d.get("on_action_failure", ReplanPolicy().on_action_failure),
    )
    scen = None
    if "scenario" in raw:
        s = raw["scenario"]
        scen = ScenarioSpec(kind=s["kind"], params=dict(s.get("params", {})))
    return MissionConfig(
        env_path=resolve("env", _DATA / "sim_cage.env"),
        domain_path=resolve("domain", _DATA / "aquachat_inspection.pddl"),
        planner=raw.get("planner", "rule"),
        sim=sim,
        gains=_gains_from_dict(raw.get("gains", {})),
        policy=pol,
        output_dir=Path(raw.get("output_dir", "out")),
        scenario=scen,
    )


def dump_config(cfg: MissionConfig) -> str:
    """Canonical YAML rendering of every effective setting."""
    d = {
        "env": str(cfg.env_path),
        "domain": str(cfg.domain_path),
        "planner": cfg.planner,
        "sim": {
            "dt": cfg.sim.dt, "v_max": cfg.sim.v_max, "vz_max": cfg.sim.vz_max,
            "omega_max": cfg.sim.omega_max, "seed": cfg.sim.seed,
        },
        "gains": {
            **{
                name: {"kp": g.kp, "ki": g.ki, "kd": g.kd}
                for name, g in (("x", cfg.gains.x), ("y", cfg.gains.y),
                                ("z", cfg.gains.z), ("yaw", cfg.gains.yaw))
            },
            "integral_limit": cfg.gains.integral_limit,
        },
        "policy": {
            "max_replans": cfg.policy.max_replans,
            "on_action_failure": cfg.policy.on_action_failure,
        },
        "output_dir": str(cfg.output_dir),
    }
    if cfg.scenario is not None:
        d["scenario"] = {"kind": cfg.scenario.kind, "params": dict(cfg.scenario.params)}
    return yaml.safe_dump(d, sort_keys=True, default_flow_style=False)
