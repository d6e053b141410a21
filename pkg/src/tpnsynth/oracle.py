"""Brute-force reference checker used as an independent oracle.

Evaluates formulas by enumerating unit-step paths directly over the
semantics, never touching the reachability graph or the product fixpoints
of the main checker. Exponential; intended for nets within the documented
limits (roughly: 6 places, 6 transitions, interval bounds up to 10).

Unbounded operator intervals are handled by capping accumulated time at
the operator's saturation point and pruning a path once it revisits a
(state, capped time) pair it has already seen: for existential untils a
cycle cannot create progress, and for universal untils a reachable cycle
avoiding the target is itself a refuting path.
"""

from __future__ import annotations

import sys

from .errors import OracleError
from .petri import INF, ConcreteNet
from .semantics import Delay, initial_state, successors
from .tctl import (
    AU,
    EU,
    Formula,
    Implies,
    Not,
    Prop,
    compile_gmec,
    desugar,
    max_finite_bound,
)


def brute_force_check(
    n: ConcreteNet, phi: Formula, horizon: int, leadsto: str = "ag"
) -> bool:
    """True iff the initial state satisfies the formula.

    ``horizon`` must cover every finite bound in the formula, otherwise the
    evaluation could silently truncate and an OracleError is raised instead.
    """
    needed = max_finite_bound(phi) + 1
    if horizon < needed:
        raise OracleError(
            f"horizon {horizon} too small to decide: formula needs {needed}"
        )
    core = desugar(phi, leadsto)
    if sys.getrecursionlimit() < 100_000:
        sys.setrecursionlimit(100_000)  # path DFS depth is states x horizon
    return _holds(n, initial_state(n), core)


def _holds(n: ConcreteNet, state, phi) -> bool:
    if isinstance(phi, Prop):
        return compile_gmec(n, phi.gmec)(state.marking)
    if isinstance(phi, Not):
        return not _holds(n, state, phi.sub)
    if isinstance(phi, Implies):
        return (not _holds(n, state, phi.left)) or _holds(n, state, phi.right)
    if isinstance(phi, EU):
        return _exists_until(n, state, phi)
    if isinstance(phi, AU):
        return _all_until(n, state, phi)
    raise OracleError(f"not in core form: {phi!r}")


def _saturation(iv) -> int:
    hi = iv.int_high()
    if hi == INF:
        return max(iv.int_low(), 0) + 1
    return max(hi + 1, 1)


def _exists_until(n: ConcreteNet, start, phi: EU) -> bool:
    cap = _saturation(phi.interval)
    in_interval = lambda t: phi.interval.contains(t) or (
        t >= cap and phi.interval.int_high() == INF
    )

    def walk(state, t, seen):
        if in_interval(t) and _holds(n, state, phi.right):
            return True
        if not _holds(n, state, phi.left):
            return False
        key = (state, min(t, cap))
        if key in seen:
            return False  # looping without reaching the target
        seen = seen | {key}
        for label, nxt in successors(n, state):
            t2 = t + (label.amount if isinstance(label, Delay) else 0)
            if walk(nxt, t2, seen):
                return True
        return False

    return walk(start, 0, frozenset())


def _all_until(n: ConcreteNet, start, phi: AU) -> bool:
    cap = _saturation(phi.interval)
    in_interval = lambda t: phi.interval.contains(t) or (
        t >= cap and phi.interval.int_high() == INF
    )

    def walk(state, t, seen):
        if in_interval(t) and _holds(n, state, phi.right):
            return True
        if not _holds(n, state, phi.left):
            return False
        key = (state, min(t, cap))
        if key in seen:
            return False  # a maximal path may loop here forever
        seen = seen | {key}
        succ = successors(n, state)
        if not succ:
            return False  # finite maximal path without the target
        for label, nxt in succ:
            t2 = t + (label.amount if isinstance(label, Delay) else 0)
            if not walk(nxt, t2, seen):
                return False
        return True

    return walk(start, 0, frozenset())
