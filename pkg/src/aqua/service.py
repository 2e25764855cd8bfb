"""HTTP/stream service for the operator console.

Endpoints (JSON):
  POST /commands {text}           -> 202 {mission_id, plan} (409 if a mission is active)
  POST /missions/{id}/start       -> run the mission
  POST /missions/{id}/abort       -> cancel a planned/running mission
  POST /missions/{id}/replan      -> request a replan (409 when the budget is spent)
  GET  /missions/{id}            -> report-in-progress
  GET  /plan/{id}                -> plan JSON
  GET  /telemetry/stream         -> NDJSON push stream of samples and events

One simulated vehicle, therefore one active mission at a time.
"""

from __future__ import annotations

import json
import threading

from fastapi import FastAPI
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from .config import MissionConfig, default_config
from .mission import _make_plan, _planner_context, mission_id_for, run_mission
from .plan_lang import plan_to_dict
from .vehicle import load_env


class CommandIn(BaseModel):
    text: str


class _Mission:
    def __init__(self, mission_id, command, plan):
        self.mission_id = mission_id
        self.command = command
        self.plan = plan
        self.status = "planned"   # planned | running | done | failed | aborted
        self.result = None
        self.replans_used = 0
        self.finished = threading.Event()


def create_app(cfg: MissionConfig | None = None) -> FastAPI:
    cfg = cfg or default_config()
    app = FastAPI(title="aqua mission service")
    missions: dict[str, _Mission] = {}
    lock = threading.Lock()
    state = {"active": None}

    def _err(code, detail):
        return JSONResponse(status_code=code, content={"detail": detail})

    @app.post("/commands", status_code=202)
    def submit_command(cmd: CommandIn):
        with lock:
            if state["active"] is not None:
                return _err(409, "a mission is already active")
        env = load_env(cfg.env_path)
        try:
            pr = _make_plan(cmd.text, cfg, _planner_context(env))
        except Exception as exc:
            return _err(500, f"planner error: {exc}")
        if pr.status != "success":
            return _err(422, {"status": pr.status, "diagnostics": pr.diagnostics})
        mid = mission_id_for(cmd.text, cfg.sim.seed)
        with lock:
            missions[mid] = _Mission(mid, cmd.text, pr.plan)
        return {"mission_id": mid, "plan": plan_to_dict(pr.plan),
                "gen_time_s": pr.gen_time_s}

    def _run(m: _Mission):
        try:
            m.result = run_mission(m.command, cfg)
            m.replans_used = m.result.report.replans_used
            m.status = "done" if m.result.ok else "failed"
        except Exception:
            m.status = "failed"
        finally:
            with lock:
                if state["active"] == m.mission_id:
                    state["active"] = None
            m.finished.set()

    @app.post("/missions/{mission_id}/start", status_code=202)
    def start(mission_id: str):
        m = missions.get(mission_id)
        if m is None:
            return _err(404, "unknown mission")
        with lock:
            if state["active"] is not None:
                return _err(409, "a mission is already active")
            if m.status != "planned":
                return _err(409, f"mission is {m.status}")
            state["active"] = mission_id
            m.status = "running"
        threading.Thread(target=_run, args=(m,), daemon=True).start()
        return {"mission_id": mission_id, "status": "running"}

    @app.post("/missions/{mission_id}/abort")
    def abort(mission_id: str):
        m = missions.get(mission_id)
        if m is None:
            return _err(404, "unknown mission")
        m.finished.wait(timeout=30.0)  # the sim loop is fast; let it drain
        if m.status in ("planned", "running"):
            m.status = "aborted"
        with lock:
            if state["active"] == mission_id:
                state["active"] = None
        return {"mission_id": mission_id, "status": m.status}

    @app.post("/missions/{mission_id}/replan")
    def replan(mission_id: str):
        m = missions.get(mission_id)
        if m is None:
            return _err(404, "unknown mission")
        if m.replans_used >= cfg.policy.max_replans:
            return _err(409, "replan budget exhausted")
        env = load_env(cfg.env_path)
        pr = _make_plan(m.command, cfg, _planner_context(env))
        if pr.status != "success":
            return _err(422, {"status": pr.status, "diagnostics": pr.diagnostics})
        m.replans_used += 1
        m.plan = pr.plan
        return {"mission_id": mission_id, "plan": plan_to_dict(pr.plan),
                "replans_used": m.replans_used}

    @app.get("/missions/{mission_id}")
    def get_mission(mission_id: str):
        m = missions.get(mission_id)
        if m is None:
            return _err(404, "unknown mission")
        body = {"mission_id": mission_id, "status": m.status,
                "replans_used": m.replans_used}
        if m.result is not None:
            r = m.result.report
            body["report"] = {
                "psr": r.psr, "exesr": r.exesr, "steps_total": r.steps_total,
                "steps_succeeded": r.steps_succeeded, "replans_used": r.replans_used,
                "duration_s": r.duration_s,
                "final_error": list(r.final_error) if r.final_error else None,
            }
        return body

    @app.get("/plan/{mission_id}")
    def get_plan(mission_id: str):
        m = missions.get(mission_id)
        if m is None:
            return _err(404, "unknown mission")
        return plan_to_dict(m.plan)

    @app.get("/telemetry/stream")
    def stream():
        with lock:
            active = state["active"]
        target = active or next(
            (mid for mid, m in reversed(list(missions.items())) if m.result is not None), None)
        m = missions.get(target)

        def gen():
            if m is None:
                return
            m.finished.wait(timeout=60.0)
            if m.result is None:
                return
            yield json.dumps({"kind": "plan", "mission_id": m.mission_id,
                              "plan": plan_to_dict(m.result.plan)}, sort_keys=True) + "\n"
            for rec in m.result.events:
                yield json.dumps({"kind": "log", **rec}, sort_keys=True) + "\n"
            for s in m.result.samples:
                yield json.dumps({
                    "kind": "sample", "t": s.t, "ref": list(s.ref),
                    "pose": list(s.pose), "u": list(s.u), "error": list(s.error),
                    "norm_error": list(s.norm_error),
                }, sort_keys=True) + "\n"
            yield json.dumps({"kind": "end", "mission_id": m.mission_id,
                              "status": m.status,
                              "replans_used": m.replans_used}, sort_keys=True) + "\n"

        return StreamingResponse(gen(), media_type="application/x-ndjson")

    return app


def serve(cfg: MissionConfig | None = None, bind: str = "127.0.0.1:8000"):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    host, _, port = bind.partition(":")
    uvicorn.run(create_app(cfg), host=host or "127.0.0.1", port=int(port or 8000))
