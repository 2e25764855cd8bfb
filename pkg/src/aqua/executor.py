"""Mid-level task manager: a precondition-checked mission state machine.

The executor owns the symbolic world. It dispatches plan steps to the motion
layer only when their ground preconditions hold, applies effects on success,
and raises event-triggered replanning (feedback_received + replan_needed)
on failure, bounded by the replan budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum

from .plan_lang import (
    Plan,
    Predicate,
    WorldState,
    apply_effects as _apply_effects,
    bindings_for,
    check_preconditions as _check_preconditions,
    validate_plan,
)


class Phase(Enum):
    IDLE = "Idle"
    PLANNING = "Planning"
    EXECUTING = "Executing"
    REPLANNING = "Replanning"
    DONE = "Done"
    FAILED = "Failed"


class EventKind(Enum):
    ACTION_STARTED = "ActionStarted"
    ACTION_SUCCEEDED = "ActionSucceeded"
    ACTION_FAILED = "ActionFailed"
    FEEDBACK_RECEIVED = "FeedbackReceived"


# Deadline (s) per action; expiry is reported by the motion layer as ActionFailed.
ACTION_DEADLINES_S = {"move_to": 900.0, "inspect": 1200.0, "capture": 10.0, "report": 5.0}


@dataclass(frozen=True)
class ExecutionEvent:
    kind: EventKind
    step: int
    detail: str = ""
    observed: object | None = None


@dataclass(frozen=True)
class ReplanPolicy:
    max_replans: int = 2
    on_precondition_failure: str = "replan"  # or "abort"
    on_action_failure: str = "retry_once_then_replan"  # or "replan"

    def __post_init__(self):
        if self.max_replans < 0:
            raise ValueError("max_replans must be >= 0")


@dataclass(frozen=True)
class MissionState:
    world: WorldState
    plan: Plan
    cursor: int = 0
    replans_used: int = 0
    phase: Phase = Phase.IDLE
    retried_step: int | None = None  # step index already retried once


# ------------------------------------------------------------------ directives

@dataclass(frozen=True)
class Dispatch:
    step: object  # PlanStep
    step_index: int
    deadline_s: float


@dataclass(frozen=True)
class RequestReplan:
    reason: str


@dataclass(frozen=True)
class Done:
    pass


@dataclass(frozen=True)
class Failed:
    reason: str


@dataclass(frozen=True)
class Continue:
    """Nothing to do yet; keep executing the in-flight action."""


class IllegalTransition(Exception):
    def __init__(self, phase, kind):
        super().__init__(f"event {kind} is illegal in phase {phase.value}")


class InvalidReplacementPlan(Exception):
    def __init__(self, report):
        self.report = report
        super().__init__(f"replacement plan fails validation at step {report.failing_step}: "
                         f"{[str(l) for l in report.unsatisfied]}")


# ---------------------------------------------------------------- operations

def check_preconditions(world, action, bindings):
    return _check_preconditions(world, action, bindings)


def apply_effects(world, action, bindings):
    return _apply_effects(world, action, bindings)


def start_mission(plan: Plan, domain, world: WorldState) -> MissionState:
    """Apply the domain's `plan` action (if enabled) and enter Executing."""
    plan_action = domain.actions.get("plan")
    if plan_action is not None:
        ok, _ = _check_preconditions(world, plan_action, {})
        if ok:
            world = _apply_effects(world, plan_action, {})
    return MissionState(world=world, plan=plan, phase=Phase.EXECUTING)


def with_fact(ms: MissionState, fact: Predicate) -> MissionState:
    return replace(ms, world=frozenset(set(ms.world) | {fact}))


def assert_trajectory_generated(ms: MissionState, area, rov="rov") -> MissionState:
    """Called by the mission runner once the trajectory module produced a path."""
    return with_fact(ms, Predicate("trajectory_generated", (rov, area)))


def peek_next_step(ms: MissionState):
    if ms.cursor < len(ms.plan.steps):
        return ms.plan.steps[ms.cursor]
    return None


def _to_replanning(ms, reason, policy):
    if ms.replans_used >= policy.max_replans:
        return replace(ms, phase=Phase.FAILED), Failed("replan budget exhausted")
    world = set(ms.world)
    world.add(Predicate("feedback_received"))
    world.add(Predicate("replan_needed"))
    ms = replace(ms, world=frozenset(world), phase=Phase.REPLANNING)
    return ms, RequestReplan(reason)


def _dispatch_or_replan(ms, domain, policy):
    if ms.cursor >= len(ms.plan.steps):
        world = frozenset(set(ms.world) | {Predicate("plan_executed")})
        return replace(ms, world=world, phase=Phase.DONE), Done()
    step = ms.plan.steps[ms.cursor]
    action = domain.actions[step.action]
    bindings = bindings_for(domain, action, step.args)
    ok, unsatisfied = _check_preconditions(ms.world, action, bindings)
    if ok:
        return ms, Dispatch(step, ms.cursor, ACTION_DEADLINES_S.get(step.action, 60.0))
    reason = f"preconditions unmet for step {ms.cursor} ({step.action}): " + \
             ", ".join(str(l) for l in unsatisfied)
    if policy.on_precondition_failure == "abort":
        return replace(ms, phase=Phase.FAILED), Failed(reason)
    return _to_replanning(ms, reason, policy)


def step_mission(ms: MissionState, event: ExecutionEvent | None, domain, policy: ReplanPolicy):
    """Advance the state machine; deterministic in (ms, event, policy).

    With event=None: answer "what should run next" (Dispatch / Done / replan).
    """
    if ms.phase in (Phase.DONE, Phase.FAILED):
        raise IllegalTransition(ms.phase, event.kind if event else None)

    if event is None:
        if ms.phase == Phase.REPLANNING:
            return ms, RequestReplan("awaiting replacement plan")
        return _dispatch_or_replan(ms, domain, policy)

    if event.step >= len(ms.plan.steps):
        raise IllegalTransition(ms.phase, event.kind)

    if event.kind in (EventKind.ACTION_STARTED, EventKind.FEEDBACK_RECEIVED):
        if ms.phase != Phase.EXECUTING:
            raise IllegalTransition(ms.phase, event.kind)
        return ms, Continue()

    if event.kind == EventKind.ACTION_SUCCEEDED:
        if ms.phase != Phase.EXECUTING or event.step != ms.cursor:
            raise IllegalTransition(ms.phase, event.kind)
        step = ms.plan.steps[ms.cursor]
        action = domain.actions[step.action]
        bindings = bindings_for(domain, action, step.args)
        world = _apply_effects(ms.world, action, bindings)
        ms = replace(ms, world=world, cursor=ms.cursor + 1, retried_step=None)
        return _dispatch_or_replan(ms, domain, policy)

    if event.kind == EventKind.ACTION_FAILED:
        if ms.phase != Phase.EXECUTING:
            raise IllegalTransition(ms.phase, event.kind)
        step = ms.plan.steps[event.step]
        if policy.on_action_failure == "retry_once_then_replan" and ms.retried_step != event.step:
            ms = replace(ms, retried_step=event.step)
            return ms, Dispatch(step, event.step, ACTION_DEADLINES_S.get(step.action, 60.0))
        return _to_replanning(ms, f"step {event.step} ({step.action}) failed: {event.detail}", policy)

    raise IllegalTransition(ms.phase, event.kind)


def complete_replan(ms: MissionState, new_plan: Plan, domain) -> MissionState:
    """Splice a replacement plan in at the cursor and resume executing."""
    if ms.phase != Phase.REPLANNING:
        raise IllegalTransition(ms.phase, None)
    replan_action = domain.actions.get("replan")
    world = set(ms.world)
    if replan_action is not None:
        ok, _ = _check_preconditions(frozenset(world), replan_action, {})
        if ok:
            world = set(_apply_effects(frozenset(world), replan_action, {}))
    world.discard(Predicate("feedback_received"))
    world.discard(Predicate("replan_needed"))
    world = frozenset(world)

    # Validate as at plan time: inspection trajectories are promised.
    val_world = set(world)
    for fact in world:
        if fact.name == "region_detected":
            val_world.add(Predicate("trajectory_generated", ("rov",) + fact.args))
    report = validate_plan(new_plan, domain, frozenset(val_world))
    if not report.ok:
        raise InvalidReplacementPlan(report)

    spliced = Plan(ms.plan.steps[:ms.cursor] + tuple(new_plan.steps), id=ms.plan.id, source=new_plan.source)
    return replace(ms, plan=spliced, world=world, phase=Phase.EXECUTING,
                   replans_used=ms.replans_used + 1, retried_step=None)


# ------------------------------------------------------------------ event log

class MissionLog:
    """Append-only JSONL log of events and directives with sequence numbers."""

    def __init__(self, path=None):
        self.path = path
        self.seq = 0
        self.records = []
        self._fh = open(path, "a") if path else None

    def append(self, kind, payload):
        rec = {"seq": self.seq, "kind": kind, **payload}
        self.seq += 1
        self.records.append(rec)
        if self._fh:
            self._fh.write(json.dumps(rec, sort_keys=True) + "\n")
            self._fh.flush()
        return rec

    def event(self, ev: ExecutionEvent):
        return self.append("event", {"event": ev.kind.value, "step": ev.step, "detail": ev.detail})

    def directive(self, d):
        name = type(d).__name__
        payload = {"directive": name}
        if isinstance(d, Dispatch):
            payload.update(step=d.step_index, action=d.step.action, deadline_s=d.deadline_s)
        elif isinstance(d, (RequestReplan, Failed)):
            payload.update(reason=d.reason)
        return self.append("directive", payload)

    def close(self):
        if self._fh:
            self._fh.close()
            self._fh = None
