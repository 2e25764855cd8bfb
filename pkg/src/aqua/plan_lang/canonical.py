"""Loader for the canonical inspection domain shipped with the package."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .domain import Predicate
from .validate import validate_plan  # noqa: F401  (re-exported for convenience)
from . import domain as _domain

CANONICAL_DOMAIN_FILE = "aquachat_inspection.pddl"


def canonical_domain_text():
    return resources.files("aqua.data").joinpath(CANONICAL_DOMAIN_FILE).read_text()


@lru_cache(maxsize=1)
def canonical_domain():
    return _domain.parse_domain(canonical_domain_text())


def initial_state(regions=("cage-1",), rov="rov", trajectories_promised=True):
    """Mission-start world: systems up, plan slot filled, regions known.

    ``trajectories_promised`` pre-asserts trajectory_generated for every
    region, which is how plans are validated at planning time (the motion
    layer generates inspection trajectories on demand during execution).
    """
    facts = {
        Predicate("system_ready"),
        Predicate("plan_ready"),
        Predicate("environment_stable"),
    }
    for r in regions:
        facts.add(Predicate("region_detected", (r,)))
        if trajectories_promised:
            facts.add(Predicate("trajectory_generated", (rov, r)))
    return frozenset(facts)
