"""Symbolic plan language: domain parsing, plan exchange format, validation."""

from .domain import ActionSpec, DomainSpec, Literal, Predicate, WorldState, parse_domain
from .errors import (
    ContradictoryEffect,
    DomainSyntaxError,
    DuplicateAction,
    MissingRequiredParam,
    PlanLangError,
    PlanSyntaxError,
    UnboundObject,
    UnboundVariable,
    UndeclaredPredicate,
    UnknownAction,
)
from .plans import (
    ARG_KEYS,
    PLAN_ACTIONS,
    Plan,
    PlanStep,
    parse_plan,
    plan_from_dict,
    plan_to_dict,
    serialize_plan,
)
from .validate import (
    ValidationReport,
    apply_effects,
    bindings_for,
    check_preconditions,
    ground,
    validate_plan,
)
from .canonical import canonical_domain, canonical_domain_text, initial_state

__all__ = [
    "ActionSpec", "DomainSpec", "Literal", "Predicate", "WorldState", "parse_domain",
    "ContradictoryEffect", "DomainSyntaxError", "DuplicateAction", "MissingRequiredParam",
    "PlanLangError", "PlanSyntaxError", "UnboundObject", "UnboundVariable",
    "UndeclaredPredicate", "UnknownAction",
    "ARG_KEYS", "PLAN_ACTIONS", "Plan", "PlanStep", "parse_plan", "plan_from_dict",
    "plan_to_dict", "serialize_plan",
    "ValidationReport", "apply_effects", "bindings_for", "check_preconditions",
    "ground", "validate_plan",
    "canonical_domain", "canonical_domain_text", "initial_state",
]
