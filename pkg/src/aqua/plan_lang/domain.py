"""Domain model for the STRIPS-with-typing subset used by the inspection stack.

A domain declares object types, predicate signatures, and action schemas with
conjunctive (possibly negated) preconditions and add/delete effects. World
states are finite sets of ground predicates under closed-world semantics.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    ContradictoryEffect,
    DomainSyntaxError,
    DuplicateAction,
    UnboundVariable,
    UndeclaredPredicate,
)
from .sexpr import Symbol, parse_sexpr

PREDICATE_NAME_RE = re.compile(r"^[a-z][a-z0-9_]*$")
SUPPORTED_REQUIREMENTS = {":strips", ":typing"}


@dataclass(frozen=True, order=True)
class Predicate:
    """A ground Boolean fact, e.g. inspected(cage-1)."""

    name: str
    args: tuple[str, ...] = ()

    def __str__(self):
        if not self.args:
            return f"({self.name})"
        return f"({self.name} {' '.join(self.args)})"


@dataclass(frozen=True)
class Literal:
    """A (possibly negated) predicate atom over variables and/or constants."""

    name: str
    args: tuple[str, ...] = ()
    negated: bool = False

    def ground(self, bindings):
        """Substitute variables (tokens starting with '?') using `bindings`."""
        return Predicate(self.name, tuple(bindings.get(a, a) if a.startswith("?") else a for a in self.args))

    def __str__(self):
        inner = f"({self.name}{''.join(' ' + a for a in self.args)})"
        return f"(not {inner})" if self.negated else inner


WorldState = frozenset  # of Predicate


@dataclass(frozen=True)
class ActionSpec:
    name: str
    params: tuple[tuple[str, str], ...]  # (variable, type) pairs
    preconditions: tuple[Literal, ...]
    effects: tuple[Literal, ...]  # negated literal = delete


@dataclass
class DomainSpec:
    name: str
    types: dict[str, str | None] = field(default_factory=dict)  # type -> parent
    predicates: dict[str, tuple[str, ...]] = field(default_factory=dict)  # name -> param types
    actions: dict[str, ActionSpec] = field(default_factory=dict)

    def action(self, name):
        return self.actions[name]


def _pos(node):
    if isinstance(node, Symbol):
        return node.line, node.col
    return None, None


def _parse_typed_list(items):
    """Parse PDDL `a b - T c - U` notation into (name, type|None) pairs."""
    out = []
    pending = []
    i = 0
    while i < len(items):
        tok = str(items[i])
        if tok == "-":
            if i + 1 >= len(items):
                raise DomainSyntaxError("dangling '-' in typed list", *_pos(items[i]))
            ty = str(items[i + 1])
            out.extend((name, ty) for name in pending)
            pending = []
            i += 2
        else:
            pending.append(tok)
            i += 1
    out.extend((name, None) for name in pending)
    return out


def _parse_literal(form, negated=False):
    if not isinstance(form, list) or not form:
        raise DomainSyntaxError("expected a predicate atom", *_pos(form))
    head = str(form[0])
    if head == "not":
        if len(form) != 2 or negated:
            raise DomainSyntaxError("malformed (not ...) form", *_pos(form[0]))
        return _parse_literal(form[1], negated=True)
    return Literal(head, tuple(str(a) for a in form[1:]), negated=negated)


def _parse_conjunction(form):
    """A single atom, (not atom), or (and ...) of those."""
    if isinstance(form, list) and form and str(form[0]) == "and":
        lits = []
        for sub in form[1:]:
            lits.append(_parse_literal(sub))
        return tuple(lits)
    return (_parse_literal(form),)


def _check_literals(lits, action_name, params, predicates):
    param_vars = {v for v, _ in params}
    for lit in lits:
        if lit.name not in predicates:
            raise UndeclaredPredicate(lit.name, where=f"action {action_name!r}")
        if len(lit.args) != len(predicates[lit.name]):
            raise DomainSyntaxError(
                f"predicate {lit.name!r} used with arity {len(lit.args)}, "
                f"declared {len(predicates[lit.name])}"
            )
        for a in lit.args:
            if a.startswith("?") and a not in param_vars:
                raise UnboundVariable(a, action_name)


def _parse_action(form, predicates):
    if len(form) < 2:
        raise DomainSyntaxError("(:action ...) needs a name", *_pos(form[0]))
    name = str(form[1])
    sections = {}
    i = 2
    while i < len(form):
        key = str(form[i])
        if not key.startswith(":") or i + 1 >= len(form):
            raise DomainSyntaxError(f"malformed action section near {key!r}", *_pos(form[i]))
        sections[key] = form[i + 1]
        i += 2
    params = tuple(_parse_typed_list(sections.get(":parameters", [])))
    pre = _parse_conjunction(sections[":precondition"]) if ":precondition" in sections else ()
    eff = _parse_conjunction(sections[":effect"]) if ":effect" in sections else ()
    _check_literals(pre, name, params, predicates)
    _check_literals(eff, name, params, predicates)
    adds = {(l.name, l.args) for l in eff if not l.negated}
    dels = {(l.name, l.args) for l in eff if l.negated}
    both = adds & dels
    if both:
        nm, args = sorted(both)[0]
        raise ContradictoryEffect(name, Literal(nm, args))
    return ActionSpec(name, params, pre, eff)


def parse_domain(text):
    """Parse a domain file into a DomainSpec.

    Only the :strips and :typing requirement flags are accepted; anything
    else is rejected rather than silently ignored.
    """
    form = parse_sexpr(text)
    if not (isinstance(form, list) and len(form) >= 2 and str(form[0]) == "define"):
        raise DomainSyntaxError("expected (define (domain ...) ...)", *_pos(form[0] if form else None))
    head = form[1]
    if not (isinstance(head, list) and len(head) == 2 and str(head[0]) == "domain"):
        raise DomainSyntaxError("expected (domain <name>) after define")
    spec = DomainSpec(name=str(head[1]))

    action_forms = []
    for section in form[2:]:
        if not isinstance(section, list) or not section:
            raise DomainSyntaxError("unexpected bare token in domain body", *_pos(section))
        key = str(section[0])
        if key == ":requirements":
            for flag in section[1:]:
                if str(flag) not in SUPPORTED_REQUIREMENTS:
                    raise DomainSyntaxError(f"unsupported requirement {str(flag)!r}", *_pos(flag))
        elif key == ":types":
            for ty, parent in _parse_typed_list(section[1:]):
                spec.types[ty] = parent
        elif key == ":predicates":
            for decl in section[1:]:
                if not isinstance(decl, list) or not decl:
                    raise DomainSyntaxError("malformed predicate declaration", *_pos(decl))
                name = str(decl[0])
                if not PREDICATE_NAME_RE.match(name):
                    raise DomainSyntaxError(f"invalid predicate name {name!r}", *_pos(decl[0]))
                if name in spec.predicates:
                    raise DomainSyntaxError(f"duplicate predicate declaration {name!r}", *_pos(decl[0]))
                typed = _parse_typed_list(decl[1:])
                spec.predicates[name] = tuple(ty or "object" for _, ty in typed)
        elif key == ":action":
            action_forms.append(section)
        else:
            raise DomainSyntaxError(f"unknown domain section {key!r}", *_pos(section[0]))

    for aform in action_forms:
        action = _parse_action(aform, spec.predicates)
        if action.name in spec.actions:
            raise DuplicateAction(action.name)
        spec.actions[action.name] = action
    return spec
