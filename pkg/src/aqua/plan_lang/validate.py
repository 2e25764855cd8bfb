"""Symbolic forward simulation of plans against a domain.

Steps are checked in order under closed-world semantics: every positive
precondition atom must be present and every negated one absent; effects then
add positive atoms and delete negated ones. Validation stops at the first
failing step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .domain import DomainSpec, Predicate, WorldState
from .errors import UnboundObject, UnknownAction

# Object substituted for an unbound parameter of this type; there is exactly
# one vehicle in a mission.
DEFAULT_OBJECTS = {"ROV": "rov"}


@dataclass
class ValidationReport:
    ok: bool
    failing_step: int | None = None
    unsatisfied: list = field(default_factory=list)
    final_state: WorldState = frozenset()


def _is_subtype(domain, ty, ancestor):
    seen = set()
    while ty is not None and ty not in seen:
        if ty == ancestor:
            return True
        seen.add(ty)
        ty = domain.types.get(ty)
    return False


def bindings_for(domain: DomainSpec, action, step_args):
    """Map an ActionSpec's parameters to concrete objects.

    Step args are keyed by the bare variable name (``area`` for ``?area``).
    Parameters left unbound fall back to the per-type default object.
    """
    bindings = {}
    for var, ty in action.params:
        key = var.lstrip("?")
        if key in step_args:
            bindings[var] = step_args[key]
            continue
        default = None
        for base, obj in DEFAULT_OBJECTS.items():
            if ty is not None and _is_subtype(domain, ty, base):
                default = obj
        if default is None:
            raise UnboundObject(var, action.name)
        bindings[var] = default
    return bindings


def check_preconditions(world: WorldState, action, bindings):
    """Return (ok, unsatisfied literals) for ground preconditions of `action`."""
    unsatisfied = []
    for lit in action.preconditions:
        fact = lit.ground(bindings)
        holds = fact in world
        if holds == lit.negated:
            unsatisfied.append(lit if not lit.args else type(lit)(lit.name, fact.args, lit.negated))
    return not unsatisfied, unsatisfied


def apply_effects(world: WorldState, action, bindings) -> WorldState:
    """World after the action's ground effects; the input set is untouched."""
    adds = {lit.ground(bindings) for lit in action.effects if not lit.negated}
    dels = {lit.ground(bindings) for lit in action.effects if lit.negated}
    return frozenset((set(world) - dels) | adds)


def validate_plan(plan, domain: DomainSpec, s0: WorldState) -> ValidationReport:
    """Symbolically execute `plan` from `s0`, stopping at the first failure."""
    world = frozenset(s0)
    for i, step in enumerate(plan.steps):
        if step.action not in domain.actions:
            raise UnknownAction(step.action)
        action = domain.actions[step.action]
        bindings = bindings_for(domain, action, step.args)
        ok, unsatisfied = check_preconditions(world, action, bindings)
        if not ok:
            return ValidationReport(ok=False, failing_step=i, unsatisfied=unsatisfied, final_state=world)
        world = apply_effects(world, action, bindings)
    return ValidationReport(ok=True, final_state=world)


def ground(name, *args):
    """Convenience constructor for a ground fact."""
    return Predicate(name, tuple(args))
