"""The plan exchange format.

A plan is an ordered list of symbolic steps. Two equivalent encodings exist:
a line-oriented text form (one step per line, `#` comments, `@id`/`@source`
directives) and a flat JSON-able dict `{id, source, steps: [...]}` used on
the wire. Serialization is canonical: args and params are emitted in sorted
key order, so structurally equal plans serialize identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MissingRequiredParam, PlanSyntaxError, UnknownAction

PLAN_ACTIONS = ("move_to", "inspect", "capture", "report")

# Keys that bind objects (PDDL action arguments) rather than scalar parameters.
ARG_KEYS = frozenset({"rov", "area"})

# Params a step must carry to be executable at all.
REQUIRED_PARAMS = {"inspect": ("method",)}

PLAN_SOURCES = ("rule_based", "llm", "manual")


@dataclass(frozen=True)
class PlanStep:
    action: str
    args: dict[str, str] = field(default_factory=dict)
    params: dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.action not in PLAN_ACTIONS:
            raise UnknownAction(self.action)
        for key in REQUIRED_PARAMS.get(self.action, ()):
            if key not in self.params:
                raise MissingRequiredParam(self.action, key)

    def __eq__(self, other):
        if not isinstance(other, PlanStep):
            return NotImplemented
        return (self.action, self.args, self.params) == (other.action, other.args, other.params)

    def __hash__(self):
        return hash((self.action, tuple(sorted(self.args.items())), tuple(sorted(self.params.items()))))


@dataclass(frozen=True)
class Plan:
    steps: tuple[PlanStep, ...]
    id: str = "plan"
    source: str = "manual"

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a plan must contain at least one step")
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self):
        return len(self.steps)


def _parse_value(text):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            continue
    return text


def _format_value(value):
    text = repr(value) if isinstance(value, float) else str(value)
    if any(c.isspace() for c in text) or "=" in text:
        raise ValueError(f"value {text!r} cannot be serialized in the line format")
    return text


def parse_plan(text):
    """Parse the line-oriented plan exchange format into a Plan."""
    plan_id = "plan"
    source = "manual"
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "@id":
            if len(tokens) != 2:
                raise PlanSyntaxError("@id takes exactly one value", lineno)
            plan_id = tokens[1]
            continue
        if head == "@source":
            if len(tokens) != 2 or tokens[1] not in PLAN_SOURCES:
                raise PlanSyntaxError(f"@source must be one of {PLAN_SOURCES}", lineno)
            source = tokens[1]
            continue
        if head not in PLAN_ACTIONS:
            raise UnknownAction(head)
        args, params = {}, {}
        for tok in tokens[1:]:
            if "=" not in tok:
                raise PlanSyntaxError(f"expected key=value, got {tok!r}", lineno)
            key, _, val = tok.partition("=")
            if key in ARG_KEYS:
                args[key] = val
            else:
                params[key] = _parse_value(val)
        steps.append(PlanStep(head, args, params))
    if not steps:
        raise PlanSyntaxError("plan text contains no steps")
    return Plan(tuple(steps), id=plan_id, source=source)


def serialize_plan(plan):
    """Canonical text form: directives first, then one step per line, keys sorted."""
    lines = [f"@id {plan.id}", f"@source {plan.source}"]
    for step in plan.steps:
        parts = [step.action]
        parts += [f"{k}={_format_value(v)}" for k, v in sorted(step.args.items())]
        parts += [f"{k}={_format_value(v)}" for k, v in sorted(step.params.items())]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def plan_to_dict(plan):
    return {
        "id": plan.id,
        "source": plan.source,
        "steps": [{"action": s.action, "args": dict(s.args), "params": dict(s.params)} for s in plan.steps],
    }


def plan_from_dict(obj):
    try:
        steps = tuple(
            PlanStep(s["action"], dict(s.get("args", {})), dict(s.get("params", {})))
            for s in obj["steps"]
        )
        return Plan(steps, id=obj.get("id", "plan"), source=obj.get("source", "manual"))
    except (KeyError, TypeError) as exc:
        raise PlanSyntaxError(f"malformed plan object: {exc}") from exc
