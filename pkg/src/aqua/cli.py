"""Command-line entry point: plan, run, bench, repl, serve, config dump."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .config import ConfigError, default_config, dump_config, load_config
from .mission import (
    _make_plan,
    _planner_context,
    format_benchmark_table,
    run_benchmark,
    run_mission,
    run_scenario,
)
from .plan_lang import plan_to_dict, serialize_plan
from .vehicle import load_env

_SUITE = Path(__file__).resolve().parent / "data" / "benchmark_suite.yaml"


def _config_from(args):
    cfg = load_config(args.config) if getattr(args, "config", None) else default_config()
    if getattr(args, "seed", None) is not None:
        cfg = dataclasses.replace(cfg, sim=dataclasses.replace(cfg.sim, seed=args.seed))
    if getattr(args, "planner", None):
        cfg = dataclasses.replace(cfg, planner=args.planner)
    return cfg


def cmd_plan(args):
    cfg = _config_from(args)
    env = load_env(cfg.env_path)
    pr = _make_plan(args.command, cfg, _planner_context(env))
    if pr.status != "success":
        print(f"planner {pr.status}:", *pr.diagnostics, sep="\n  ", file=sys.stderr)
        return 1
    if args.json:
        print(json.dumps(plan_to_dict(pr.plan), indent=2, sort_keys=True))
    else:
        print(serialize_plan(pr.plan), end="")
    return 0


def cmd_run(args):
    cfg = _config_from(args)
    if cfg.scenario is not None and not args.command:
        samples, summary = run_scenario(cfg)
        print(json.dumps({k: v for k, v in summary.items()
                          if k not in ("profile",)}, indent=2, default=str))
        return 0
    if not args.command:
        print("error: give a command text or a config with a scenario section",
              file=sys.stderr)
        return 2
    res = run_mission(args.command, cfg, write_outputs=True)
    print(f"mission {res.mission_id}: {res.phase}")
    for name, path in res.output_files.items():
        print(f"  {name}: {path}")
    if not res.ok:
        for d in res.diagnostics:
            print(f"  {d}", file=sys.stderr)
    return 0 if res.ok else 1


def cmd_bench(args):
    cfg = _config_from(args)
    rows = run_benchmark(args.suite or _SUITE, cfg)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        print(format_benchmark_table(rows))
    return 0


def cmd_repl(args):
    cfg = _config_from(args)
    env = load_env(cfg.env_path)
    last_result = None
    last_command = None
    print("aqua repl — enter an inspection command; :status, :replan, :quit")
    while True:
        try:
            line = input("aqua> ").strip()
        except (EOFError, KeyboardInterrupt):
            print()
            return 0
        if not line:
            continue
        if line == ":quit":
            return 0
        if line == ":status":
            if last_result is None:
                print("no mission run yet")
            else:
                r = last_result.report
                print(f"{last_result.mission_id}: {last_result.phase}, "
                      f"steps {r.steps_succeeded}/{r.steps_total}, "
                      f"replans {r.replans_used}, duration {r.duration_s:.1f} s")
            continue
        if line == ":replan":
            if last_command is None:
                print("nothing to replan")
                continue
            print("re-planning and re-running the previous command")
            last_result = run_mission(last_command, cfg, write_outputs=True)
            print(f"{last_result.mission_id}: {last_result.phase}")
            continue
        pr = _make_plan(line, cfg, _planner_context(env))
        if pr.status != "success":
            print(f"rejected ({pr.status}):")
            for d in pr.diagnostics:
                print(f"  {d}")
            continue
        print(serialize_plan(pr.plan), end="")
        answer = input("run this plan? [y/N/edit] ").strip().lower()
        if answer == "edit":
            print("enter a new command instead")
            continue
        if answer != "y":
            print("aborted")
            continue
        last_command = line
        last_result = run_mission(line, cfg, write_outputs=True)
        print(f"{last_result.mission_id}: {last_result.phase} "
              f"(telemetry: {last_result.output_files.get('telemetry')})")


def cmd_serve(args):
    from .service import serve

    serve(_config_from(args), bind=args.bind)
    return 0


def cmd_config_dump(args):
    print(dump_config(_config_from(args)), end="")
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(prog="aqua", description="net-pen inspection mission stack")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, command_arg=False, command_optional=False):
        p.add_argument("--config", help="mission config YAML")
        p.add_argument("--seed", type=int, help="override the sim seed")
        p.add_argument("--planner", choices=("rule", "llm", "llm-mock"))
        if command_arg:
            if command_optional:
                p.add_argument("command", nargs="?", default=None, help="inspection command text")
            else:
                p.add_argument("command", help="inspection command text")

    p = sub.add_parser("plan", help="print the plan for a command")
    common(p, command_arg=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("run", help="plan and execute a mission (or a config scenario)")
    common(p, command_arg=True, command_optional=True)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("bench", help="run the planner benchmark suite")
    common(p)
    p.add_argument("--suite", help="suite YAML (defaults to the shipped 10 prompts)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("repl", help="interactive command loop")
    common(p)
    p.set_defaults(fn=cmd_repl)

    p = sub.add_parser("serve", help="run the HTTP/stream service")
    common(p)
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("config", help="configuration utilities")
    csub = p.add_subparsers(dest="config_cmd", required=True)
    pd = csub.add_parser("dump", help="print the effective configuration")
    common(pd)
    pd.set_defaults(fn=cmd_config_dump)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
