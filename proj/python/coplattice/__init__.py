"""Cops and robbers on the integer lattice Z^n."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    BoundedDirection,
    ContractViolation,
    IllegalMove,
    SpecError,
    interception_predicate,
    l1_distance,
    shell_index,
)

__all__ = [
    "BoundedDirection",
    "ContractViolation",
    "IllegalMove",
    "SpecError",
    "Session",
    "analytic_density",
    "classify",
    "contains",
    "estimate_density",
    "find_cop_in_cone",
    "interception_predicate",
    "l1_distance",
    "preset",
    "shell_index",
    "simulate",
]


def _spec(spec, dim=2):
    # Accepts a preset name, a spec dict, or a JSON string.
    if isinstance(spec, dict):
        return json.dumps(spec)
    if isinstance(spec, str) and not spec.lstrip().startswith("{"):
        return _core.preset(spec, dim)
    return spec


def preset(name, dim=2):
    return json.loads(_core.preset(name, dim))


def contains(spec, point, dim=2):
    return _core.contains(_spec(spec, dim), list(point))


def classify(spec, dim=2):
    return json.loads(_core.classify(_spec(spec, dim)))


def find_cop_in_cone(spec, direction, apex, min_shell, exclude=(), dim=2):
    return tuple(_core.find_cop_in_cone(_spec(spec, dim), direction, list(apex), min_shell,
                                        [list(p) for p in exclude]))


def analytic_density(spec, dim=2):
    d = _core.analytic_density(_spec(spec, dim))
    return None if d is None else Fraction(*d)


def estimate_density(spec, m_max, dim=2):
    """Rows (m, Fraction) plus a truncation flag."""
    rows, truncated = _core.estimate_density(_spec(spec, dim), m_max)
    return [(m, Fraction(c, t)) for m, c, t in rows], truncated


def simulate(spec, start, policy="greedy", max_turns=10_000, seed=0, check_invariants=False, dim=2):
    status, turn, bound, ndjson = _core.simulate(_spec(spec, dim), list(start), policy, max_turns, seed,
                                                 check_invariants)
    trace = [json.loads(line) for line in ndjson.splitlines()]
    return {"status": status, "turn": turn, "bound": bound, "trace": trace}


class Session:
    """Wire-protocol session manager; requests and replies are dicts."""

    def __init__(self, idle_timeout_secs=1800):
        self._mgr = _core.SessionManager(idle_timeout_secs)

    def request(self, **req):
        return json.loads(self._mgr.handle(json.dumps(req)))
