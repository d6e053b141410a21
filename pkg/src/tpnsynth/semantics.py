"""Integer-time operational semantics: states, time elapse, firing.

A state pairs a marking with a clock function that assigns a dynamic
interval (remaining low, remaining high) to every enabled transition.
Successor generation emits unit delays only; a delay of d is the d-fold
composition of unit steps, which reaches exactly the same states because
elapse is additive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import PreconditionError, TimeOverrunError
from .petri import INF, ConcreteNet, Marking, TimeInterval, _enabled_idx, fire_marking


@dataclass(frozen=True)
class State:
    """Marking plus per-transition dynamic intervals.

    ``clocks`` is aligned with the net's transition order; disabled
    transitions hold None.
    """

    marking: Marking
    clocks: tuple  # tuple[Optional[TimeInterval], ...]

    def clock(self, net: ConcreteNet, t: str) -> Optional[TimeInterval]:
        return self.clocks[net.transition_index[t]]


@dataclass(frozen=True)
class Delay:
    amount: int = 1

    def __post_init__(self):
        if not isinstance(self.amount, int) or self.amount < 1:
            raise PreconditionError("delay labels require amount >= 1")

    def __str__(self):
        return f"d{self.amount}"


@dataclass(frozen=True)
class Fire:
    transition: str

    def __str__(self):
        return self.transition


StepLabel = Union[Delay, Fire]


def initial_state(n: ConcreteNet) -> State:
    m = n.initial
    clocks = tuple(
        n.intervals[i] if _enabled_idx(n, m, i) else None for i in range(len(n.transitions))
    )
    return State(m, clocks)


def max_elapse(n: ConcreteNet, s: State):
    """Largest admissible delay: the minimum remaining upper bound over
    enabled transitions, inf when nothing constrains time."""
    best = INF
    for c in s.clocks:
        if c is not None and c.high < best:
            best = c.high
    return best


def elapse(n: ConcreteNet, s: State, d: int) -> State:
    if not isinstance(d, int) or d < 1:
        raise PreconditionError(f"delay must be a positive integer, got {d!r}")
    if d > max_elapse(n, s):
        raise TimeOverrunError(f"delay {d} exceeds max elapse {max_elapse(n, s)}")
    clocks = tuple(
        None if c is None else TimeInterval(max(0, c.low - d), c.high - d if c.high != INF else INF)
        for c in s.clocks
    )
    return State(s.marking, clocks)


def fireable_set(n: ConcreteNet, s: State) -> set:
    """Enabled transitions whose remaining lower bound has reached zero."""
    return {n.transitions[i] for i, c in enumerate(s.clocks) if c is not None and c.low == 0}


def _fireable_idx(s: State):
    return [i for i, c in enumerate(s.clocks) if c is not None and c.low == 0]


def _fire_idx(n: ConcreteNet, s: State, ti: int) -> State:
    m, m2 = s.marking, fire_marking(n, s.marking, ti)
    clocks = []
    for i in range(len(n.transitions)):
        if not _enabled_idx(n, m2, i):
            clocks.append(None)
        elif i == ti or not _enabled_idx(n, m, i):
            clocks.append(n.intervals[i])  # newly enabled: reset to static
        else:
            clocks.append(s.clocks[i])  # persistent: keep elapsed progress
    return State(m2, tuple(clocks))


def fire(n: ConcreteNet, s: State, t: str) -> State:
    ti = n.transition_index[t]
    c = s.clocks[ti]
    if c is None or c.low != 0:
        raise PreconditionError(f"transition {t!r} is not fireable")
    return _fire_idx(n, s, ti)


def successors(n: ConcreteNet, s: State):
    """Fire successors in transition order, then a unit delay if time may
    elapse. Ordering is part of the contract (graph building relies on it)."""
    out = [(Fire(n.transitions[i]), _fire_idx(n, s, i)) for i in _fireable_idx(s)]
    if max_elapse(n, s) >= 1:
        out.append((Delay(1), elapse(n, s, 1)))
    return out


def apply_label(n: ConcreteNet, s: State, label: StepLabel) -> State:
    if isinstance(label, Delay):
        return elapse(n, s, label.amount)
    return fire(n, s, label.transition)


def replay(n: ConcreteNet, labels) -> list:
    """States visited when running ``labels`` from the initial state,
    including the initial state itself."""
    s = initial_state(n)
    trace = [s]
    for lab in labels:
        s = apply_label(n, s, lab)
        trace.append(s)
    return trace
