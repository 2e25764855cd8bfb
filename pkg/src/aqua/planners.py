"""Turn natural-language inspection commands into symbolic plans.

Two backends: a deterministic rule-based planner (regex templates over a
fixed command grammar) and a completion-service adapter (prompt builder +
response parser). The completion service is reached over HTTP or replaced by
a fixture-backed mock; neither is required for the rule path.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from .plan_lang import (
    Plan,
    PlanStep,
    PlanLangError,
    parse_plan,
    plan_from_dict,
    serialize_plan,
)

DEFAULT_ROV_NAME = "rov"


# --------------------------------------------------------------------- types

@dataclass(frozen=True)
class Command:
    text: str
    issued_at: float = 0.0

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("command text is empty")


@dataclass(frozen=True)
class NetPen:
    id: str
    center: tuple[float, float, float]
    width: float
    height: float
    shape: str = "cylinder"  # or "box"


@dataclass(frozen=True)
class RovSpec:
    max_speed_mps: float = 1.0
    max_vz_mps: float = 0.5
    max_yaw_rate_rps: float = 0.5
    camera: bool = True


@dataclass(frozen=True)
class PlannerContext:
    pens: tuple[NetPen, ...]
    rov: RovSpec = RovSpec()
    constraints: tuple[str, ...] = ()
    known_regions: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.pens:
            raise ValueError("planner context needs at least one net pen")
        if min(self.rov.max_speed_mps, self.rov.max_vz_mps, self.rov.max_yaw_rate_rps) <= 0:
            raise ValueError("ROV speed limits must be positive")
        if not self.known_regions:
            object.__setattr__(self, "known_regions", tuple(p.id for p in self.pens))


@dataclass
class PlannerResult:
    status: str  # success | rejected | parse_failure
    plan: Plan | None = None
    gen_time_s: float = 0.0
    diagnostics: list[str] = field(default_factory=list)

    def __post_init__(self):
        if (self.status == "success") != (self.plan is not None and len(self.plan) > 0):
            raise ValueError("status=success requires a non-empty plan (and vice versa)")


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_text: str
    schema_hint: str


# --------------------------------------------------------- rule-based planner

_DIST = r"(?P<dist>\d+(?:\.\d+)?)"
_CORNER = r"(?P<corner>top|bottom)[- ](?P<side>left|right)"
_SIDE = r"(?P<cardinal>north(?:ern)?|south(?:ern)?|east(?:ern)?|west(?:ern)?)"
_EDGE = r"(?P<edge>top|bottom)"


def _region(ctx):
    return ctx.known_regions[0]


def _step_move(ctx, **params):
    return PlanStep("move_to", {"area": _region(ctx)}, dict(params))


def _plan_spiral(ctx, m):
    return (
        _step_move(ctx, target="base"),
        PlanStep("inspect", {"area": _region(ctx)},
                 {"method": "spiral", "standoff_m": float(m.group("dist"))}),
        PlanStep("capture", {"area": _region(ctx)}),
        PlanStep("report", {"area": _region(ctx)}),
    )


def _plan_corner_capture(ctx, m):
    corner = f"{m.group('corner')}_{m.group('side')}"
    return (
        _step_move(ctx, corner=corner),
        PlanStep("inspect", {"area": _region(ctx)}, {"method": "stationary", "corner": corner}),
        PlanStep("capture", {"area": _region(ctx)}),
    )


def _plan_edge_detect(ctx, m):
    return (
        _step_move(ctx, target="base"),
        PlanStep("inspect", {"area": _region(ctx)}, {"method": "edge", "section": f"{m.group('edge')}_edge"}),
        PlanStep("capture", {"area": _region(ctx)}),
        PlanStep("report", {"area": _region(ctx)}),
    )


def _plan_side_inspect(ctx, m):
    side = m.group("cardinal").rstrip("ern") if m.group("cardinal").endswith("ern") else m.group("cardinal")
    side = {"north": "north", "south": "south", "east": "east", "west": "west"}.get(side, side)
    return (
        _step_move(ctx, target="base"),
        PlanStep("inspect", {"area": _region(ctx)}, {"method": "side", "section": side, "detail": "high"}),
        PlanStep("capture", {"area": _region(ctx)}),
        PlanStep("report", {"area": _region(ctx)}),
    )


def _plan_vertical_sweep(ctx, m):
    spacing = float(m.group("spacing")) if m.group("spacing") else 1.0
    return (
        _step_move(ctx, target="base"),
        PlanStep("inspect", {"area": _region(ctx)},
                 {"method": "spiral", "direction": "top_to_bottom", "vertical_spacing_m": spacing}),
        PlanStep("capture", {"area": _region(ctx)}),
        PlanStep("report", {"area": _region(ctx)}),
    )


# The published grammar: verb x region x method x distance templates. Matched
# case-insensitively against the whole (whitespace-normalized) command.
RULE_TEMPLATES = (
    ("spiral_inspect",
     rf"inspect the (?:entire|whole) net cage using a spiral method at a {_DIST}[- ]meter distance",
     _plan_spiral),
    ("corner_capture",
     rf"(?:move|go) to the {_CORNER} corner of the net cage and (?:capture|take) an? (?:image|photo|picture)",
     _plan_corner_capture),
    ("edge_defect_detect",
     rf"detect net defects along the {_EDGE} edge of the cage",
     _plan_edge_detect),
    ("side_inspect",
     rf"perform a detailed inspection of the {_SIDE} side of the net",
     _plan_side_inspect),
    ("vertical_sweep",
     r"inspect the net cage from top to bottom and capture images at every "
     r"(?:meter|(?P<spacing>\d+(?:\.\d+)?) meters?)",
     _plan_vertical_sweep),
)

_COMPILED = tuple((name, re.compile(rx + r"\s*[.!]?$", re.IGNORECASE), build)
                  for name, rx, build in RULE_TEMPLATES)


def _normalize(text):
    return re.sub(r"\s+", " ", text.strip())


def rule_based_plan(cmd: Command, ctx: PlannerContext) -> PlannerResult:
    """Deterministic template matching; unmatched commands are rejected."""
    t0 = time.perf_counter()
    text = _normalize(cmd.text)
    for name, rx, build in _COMPILED:
        m = rx.match(text)
        if m:
            plan = Plan(build(ctx, m), id=f"rule-{name}", source="rule_based")
            return PlannerResult("success", plan, time.perf_counter() - t0, [f"template: {name}"])
    return PlannerResult("rejected", None, time.perf_counter() - t0,
                         ["no rule template matched; structured commands follow the "
                          "verb/region/method/distance grammar"])


# ------------------------------------------------------------- prompt builder

SCHEMA_HINT = """\
Reply with the plan inside a fenced code block. One step per line:
<action> <key=value> ...
Actions: move_to, inspect, capture, report.
Object keys: area (region id). Scalar keys carry units in their suffix
(_m meters, _s seconds, _rad radians), e.g.:
```
move_to area=cage-1
inspect area=cage-1 method=spiral standoff_m=3.0
report area=cage-1
```"""

SYSTEM_TEXT = (
    "You are the mission planner of an underwater inspection ROV operating "
    "around aquaculture net pens. Translate the operator's command into a "
    "short symbolic plan. Use only the allowed actions and respect every "
    "constraint verbatim."
)


def build_prompt(cmd: Command, ctx: PlannerContext) -> PromptBundle:
    """Deterministic prompt: environment, vehicle spec, constraints, command, schema."""
    lines = ["## Environment"]
    for pen in ctx.pens:
        lines.append(
            f"- net pen {pen.id}: shape: {pen.shape}, width: {pen.width:g} m, "
            f"height: {pen.height:g} m, center: ({pen.center[0]:g}, {pen.center[1]:g}, {pen.center[2]:g}) m"
        )
    lines.append(f"- known regions: {', '.join(ctx.known_regions)}")
    lines += [
        "",
        "## ROV specification",
        f"- max horizontal speed: {ctx.rov.max_speed_mps:g} m/s",
        f"- max vertical speed: {ctx.rov.max_vz_mps:g} m/s",
        f"- max yaw rate: {ctx.rov.max_yaw_rate_rps:g} rad/s",
        f"- camera: {'yes' if ctx.rov.camera else 'no'}",
        "",
        "## Constraints",
    ]
    if ctx.constraints:
        lines += [f"- {c}" for c in ctx.constraints]
    else:
        lines.append("- none")
    lines += ["", "## Command", cmd.text.strip(), "", "## Output format", SCHEMA_HINT]
    return PromptBundle(SYSTEM_TEXT, "\n".join(lines), SCHEMA_HINT)


# ----------------------------------------------------------- response parsing

_FENCE_RE = re.compile(r"```[a-zA-Z0-9_-]*\n(.*?)```", re.DOTALL)


def _first_json_object(text):
    start = text.find("{")
    while start != -1:
        depth = 0
        for i in range(start, len(text)):
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
                if depth == 0:
                    candidate = text[start:i + 1]
                    try:
                        return json.loads(candidate)
                    except json.JSONDecodeError:
                        break
        start = text.find("{", start + 1)
    return None


def parse_llm_response(text: str) -> PlannerResult:
    """Extract the first plan block from possibly chatty completion text."""
    t0 = time.perf_counter()
    for block in _FENCE_RE.findall(text):
        stripped = block.strip()
        try:
            if stripped.startswith("{"):
                plan = plan_from_dict(json.loads(stripped))
            else:
                plan = parse_plan(stripped)
            plan = Plan(plan.steps, id=plan.id, source="llm")
            return PlannerResult("success", plan, time.perf_counter() - t0)
        except (PlanLangError, json.JSONDecodeError) as exc:
            return PlannerResult("parse_failure", None, time.perf_counter() - t0, [str(exc)])
    obj = _first_json_object(text)
    if obj is not None and "steps" in obj:
        try:
            plan = plan_from_dict(obj)
            plan = Plan(plan.steps, id=plan.id, source="llm")
            return PlannerResult("success", plan, time.perf_counter() - t0)
        except PlanLangError as exc:
            return PlannerResult("parse_failure", None, time.perf_counter() - t0, [str(exc)])
    return PlannerResult("parse_failure", None, time.perf_counter() - t0,
                         ["no plan block found in response"])


# ---------------------------------------------------------------- backends

class BackendUnavailable(Exception):
    pass


class MockFixtureMissing(Exception):
    pass


def prompt_hash(bundle: PromptBundle) -> str:
    h = hashlib.sha256()
    h.update(bundle.system_text.encode())
    h.update(b"\x00")
    h.update(bundle.user_text.encode())
    return h.hexdigest()[:16]


class FixtureBackend:
    """Serves canned completions from one file per prompt hash."""

    def __init__(self, fixture_dir):
        self.dir = Path(fixture_dir)

    def complete(self, bundle: PromptBundle) -> str:
        path = self.dir / f"{prompt_hash(bundle)}.txt"
        if not path.exists():
            raise MockFixtureMissing(f"no fixture for prompt hash {path.stem} in {self.dir}")
        return path.read_text()


def write_fixture(fixture_dir, bundle: PromptBundle, completion_text: str) -> Path:
    path = Path(fixture_dir) / f"{prompt_hash(bundle)}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(completion_text)
    return path


class HttpBackend:
    """POSTs {system_text, user_text, max_tokens, temperature} to a JSON endpoint."""

    def __init__(self, url=None, api_key=None, max_tokens=1024, temperature=0.0, timeout_s=60.0):
        self.url = url or os.environ.get("AQUA_LLM_URL")
        self.api_key = api_key or os.environ.get("AQUA_LLM_KEY")
        self.max_tokens = max_tokens
        self.temperature = temperature
        self.timeout_s = timeout_s
        if not self.url:
            raise BackendUnavailable("no completion endpoint configured (AQUA_LLM_URL)")

    def complete(self, bundle: PromptBundle) -> str:
        import requests

        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        resp = requests.post(
            self.url,
            json={
                "system_text": bundle.system_text,
                "user_text": bundle.user_text,
                "max_tokens": self.max_tokens,
                "temperature": self.temperature,
            },
            headers=headers,
            timeout=self.timeout_s,
        )
        resp.raise_for_status()
        return resp.json()["text"]


def default_backend():
    """Fixture mock when AQUA_LLM_MOCK is set, otherwise the HTTP endpoint."""
    mock_dir = os.environ.get("AQUA_LLM_MOCK")
    if mock_dir:
        return FixtureBackend(mock_dir)
    return HttpBackend()


def canned_completions():
    """Built-in completion texts for the benchmark prompts (keyed by command)."""
    import yaml
    from importlib import resources

    text = resources.files("aqua.data").joinpath("mock_completions.yaml").read_text()
    return yaml.safe_load(text)


def write_suite_fixtures(ctx: PlannerContext, fixture_dir, completions=None):
    """Populate a fixture dir with canned answers for every known prompt."""
    completions = completions or canned_completions()
    paths = {}
    for prompt_text, completion in completions.items():
        bundle = build_prompt(Command(prompt_text), ctx)
        paths[prompt_text] = write_fixture(fixture_dir, bundle, completion)
    return paths


def llm_plan(cmd: Command, ctx: PlannerContext, backend, retries: int = 3) -> PlannerResult:
    """build_prompt -> completion -> parse; transport failures are retried."""
    t0 = time.perf_counter()
    bundle = build_prompt(cmd, ctx)
    last_exc = None
    for _ in range(max(1, retries)):
        try:
            text = backend.complete(bundle)
            break
        except MockFixtureMissing:
            raise
        except Exception as exc:  # transport-level failure
            last_exc = exc
    else:
        raise BackendUnavailable(f"completion backend failed after {retries} attempts: {last_exc}")
    result = parse_llm_response(text)
    result.gen_time_s = time.perf_counter() - t0
    return result
