"""Core data model: nets with read and logical inhibitor arcs, parametric
firing intervals, linear parameter domains, and instantiation.

Conventions used throughout the package:

* a marking is a plain tuple of token counts aligned with ``net.places``;
* weight vectors (pre/post/read/inhibit) are dense tuples over the place
  list, one per transition, in the order of ``net.transitions``;
* an inhibitor weight of 0 means "no inhibitor arc on this place"; where
  the weight w is positive the transition is blocked once the place holds
  w or more tokens;
* parameters take natural-number values only, while constraint
  coefficients and bounds may be rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import DomainError, IllFormedIntervalError, InputError, PreconditionError

INF = math.inf

Marking = tuple  # tuple[int, ...] aligned with Net.places
Valuation = Mapping[str, int]

RELATIONS = ("<", "<=", "=", ">=", ">")


@dataclass(frozen=True)
class TimeInterval:
    """An interval of natural time points, right endpoint possibly infinite.

    Unbounded intervals are always right-open; finite endpoints default to
    closed on both sides.
    """

    low: int
    high: Union[int, float]
    left_closed: bool = True
    right_closed: bool = True

    def __post_init__(self):
        if not isinstance(self.low, int) or self.low < 0:
            raise InputError(f"interval low bound must be a natural number, got {self.low!r}")
        if self.high == INF:
            object.__setattr__(self, "right_closed", False)
        elif not isinstance(self.high, int) or self.high < 0:
            raise InputError(f"interval high bound must be a natural number or inf, got {self.high!r}")
        elif self.low > self.high:
            raise IllFormedIntervalError(f"interval low {self.low} exceeds high {self.high}")

    @property
    def unbounded(self) -> bool:
        return self.high == INF

    def int_low(self) -> int:
        """Smallest integer contained in the interval."""
        return self.low if self.left_closed else self.low + 1

    def int_high(self) -> Union[int, float]:
        """Largest integer contained, inf when unbounded."""
        if self.unbounded:
            return INF
        return self.high if self.right_closed else self.high - 1

    def contains(self, x: int) -> bool:
        return self.int_low() <= x and x <= self.int_high()

    def is_empty(self) -> bool:
        return not self.unbounded and self.int_low() > self.int_high()

    def __str__(self):
        lo = "[" if self.left_closed else "("
        hi = "]" if self.right_closed else ")"
        high = "inf" if self.unbounded else str(self.high)
        return f"{lo}{self.low},{high}{hi}"


@dataclass(frozen=True)
class ParamExpr:
    """A literal natural number or a single parameter name."""

    value: Optional[int] = None
    param: Optional[str] = None

    def __post_init__(self):
        if (self.value is None) == (self.param is None):
            raise InputError("ParamExpr must carry exactly one of a literal or a parameter")
        if self.value is not None and (not isinstance(self.value, int) or self.value < 0):
            raise InputError(f"literal bound must be a natural number, got {self.value!r}")

    @classmethod
    def lit(cls, n: int) -> "ParamExpr":
        return cls(value=n)

    @classmethod
    def var(cls, name: str) -> "ParamExpr":
        return cls(param=name)

    def evaluate(self, v: Valuation) -> int:
        if self.value is not None:
            return self.value
        if self.param not in v:
            raise InputError(f"valuation missing parameter {self.param!r}")
        return v[self.param]

    def __str__(self):
        return str(self.value) if self.value is not None else self.param


@dataclass(frozen=True)
class ParamInterval:
    """Parametric firing interval; ``high=None`` means unbounded."""

    low: ParamExpr
    high: Optional[ParamExpr]

    @classmethod
    def make(cls, low, high) -> "ParamInterval":
        """Build from ints, parameter names, or None/inf for the high end."""
        return cls(_as_expr(low), None if high is None or high == INF else _as_expr(high))

    def evaluate(self, v: Valuation) -> TimeInterval:
        lo = self.low.evaluate(v)
        if self.high is None:
            return TimeInterval(lo, INF)
        hi = self.high.evaluate(v)
        if lo > hi:
            raise IllFormedIntervalError(f"interval [{self.low},{self.high}] evaluates to [{lo},{hi}]")
        return TimeInterval(lo, hi)

    def referenced_params(self) -> set:
        out = set()
        for e in (self.low, self.high):
            if e is not None and e.param is not None:
                out.add(e.param)
        return out

    def __str__(self):
        return f"[{self.low},{self.high if self.high is not None else 'inf'}]"


def _as_expr(x) -> ParamExpr:
    if isinstance(x, ParamExpr):
        return x
    if isinstance(x, int):
        return ParamExpr.lit(x)
    if isinstance(x, str):
        return ParamExpr.var(x)
    raise InputError(f"cannot interpret {x!r} as an interval bound")


@dataclass(frozen=True)
class LinearConstraint:
    """Σ a_i·λ_i ∼ b with rational coefficients and one of <,<=,=,>=,>."""

    coeffs: tuple  # tuple[(param, Fraction), ...]
    rel: str
    bound: Fraction

    @classmethod
    def make(cls, coeffs: Mapping[str, object], rel: str, bound) -> "LinearConstraint":
        if rel not in RELATIONS:
            raise InputError(f"unknown relation {rel!r}")
        items = tuple((p, Fraction(c)) for p, c in coeffs.items())
        return cls(items, rel, Fraction(bound))

    def evaluate(self, v: Valuation) -> bool:
        total = Fraction(0)
        for p, c in self.coeffs:
            if p not in v:
                raise InputError(f"valuation missing parameter {p!r}")
            total += c * v[p]
        if self.rel == "<":
            return total < self.bound
        if self.rel == "<=":
            return total <= self.bound
        if self.rel == "=":
            return total == self.bound
        if self.rel == ">=":
            return total >= self.bound
        return total > self.bound

    def params(self) -> set:
        return {p for p, _ in self.coeffs}

    def __str__(self):
        terms = " + ".join(f"{c}*{p}" for p, c in self.coeffs) or "0"
        return f"{terms} {self.rel} {self.bound}"


@dataclass(frozen=True)
class ParamDomain:
    """Conjunction of linear constraints; empty means unconstrained."""

    constraints: tuple = ()

    def contains(self, v: Valuation) -> bool:
        return all(c.evaluate(v) for c in self.constraints)

    def params(self) -> set:
        out = set()
        for c in self.constraints:
            out |= c.params()
        return out


@dataclass(frozen=True)
class Net:
    """A parametric net: places, transitions, four arc functions, initial
    marking, parametric intervals, and a parameter domain."""

    places: tuple
    transitions: tuple
    parameters: tuple
    pre: tuple
    post: tuple
    read: tuple
    inhibit: tuple
    initial: Marking
    intervals: tuple  # ParamInterval per transition
    domain: ParamDomain = field(default_factory=ParamDomain)

    @cached_property
    def place_index(self):
        return {p: i for i, p in enumerate(self.places)}

    @cached_property
    def transition_index(self):
        return {t: i for i, t in enumerate(self.transitions)}

    def marking(self, tokens: Mapping[str, int]) -> Marking:
        """Dense marking tuple from a sparse place->count mapping."""
        for p in tokens:
            if p not in self.place_index:
                raise InputError(f"unknown place {p!r}")
        return tuple(tokens.get(p, 0) for p in self.places)

    def marking_dict(self, m: Marking) -> dict:
        return {p: m[i] for i, p in enumerate(self.places)}


@dataclass(frozen=True)
class ConcreteNet(Net):
    """A net whose intervals are concrete TimeIntervals; parameters and
    domain are empty."""


def _dense(weights: Optional[Mapping[str, int]], places, what: str, trans: str):
    weights = weights or {}
    for p, w in weights.items():
        if p not in places:
            raise InputError(f"transition {trans!r}: {what} arc references unknown place {p!r}")
        if not isinstance(w, int) or w < 0:
            raise InputError(f"transition {trans!r}: {what} weight for {p!r} must be a natural number")
    return tuple(weights.get(p, 0) for p in places)


def make_net(
    places: Sequence,
    transitions: Mapping[str, Mapping],
    parameters: Iterable[str] = (),
    constraints: Iterable[LinearConstraint] = (),
) -> Net:
    """Convenience constructor from sparse arc dictionaries.

    ``places`` is a sequence of (name, initial_tokens); ``transitions`` maps
    each name to a dict with optional keys pre/post/read/inhibit (sparse
    place->weight maps) and ``interval`` as a (low, high) pair where bounds
    are ints, parameter names, or None/inf for an unbounded high end.
    """
    place_names = tuple(p for p, _ in places)
    if len(set(place_names)) != len(place_names):
        raise InputError("duplicate place name")
    names = tuple(transitions.keys())
    if set(place_names) & set(names):
        raise InputError("place and transition names must be disjoint")
    pre, post, read, inhibit, ivals = [], [], [], [], []
    for t, spec in transitions.items():
        pre.append(_dense(spec.get("pre"), place_names, "pre", t))
        post.append(_dense(spec.get("post"), place_names, "post", t))
        read.append(_dense(spec.get("read"), place_names, "read", t))
        inhibit.append(_dense(spec.get("inhibit"), place_names, "inhibit", t))
        lo, hi = spec.get("interval", (0, None))
        ivals.append(ParamInterval.make(lo, hi))
    net = Net(
        places=place_names,
        transitions=names,
        parameters=tuple(parameters),
        pre=tuple(pre),
        post=tuple(post),
        read=tuple(read),
        inhibit=tuple(inhibit),
        initial=tuple(tok for _, tok in places),
        intervals=tuple(ivals),
        domain=ParamDomain(tuple(constraints)),
    )
    diags = validate_net(net)
    if diags:
        raise InputError("; ".join(diags))
    return net



# ---------------------------------------------------------------------------
# Operations


def eval_constraint(c: LinearConstraint, v: Valuation) -> bool:
    return c.evaluate(v)


def domain_contains(d: ParamDomain, v: Valuation) -> bool:
    return d.contains(v)


def instantiate(n: Net, v: Valuation) -> ConcreteNet:
    """Evaluate every parametric interval at ``v``; structure is unchanged."""
    for p in n.parameters:
        if p not in v:
            raise InputError(f"valuation missing parameter {p!r}")
    if not domain_contains(n.domain, v):
        raise DomainError(f"valuation {dict(v)} violates the parameter domain")
    return ConcreteNet(
        places=n.places,
        transitions=n.transitions,
        parameters=(),
        pre=n.pre,
        post=n.post,
        read=n.read,
        inhibit=n.inhibit,
        initial=n.initial,
        intervals=tuple(j.evaluate(v) for j in n.intervals),
        domain=ParamDomain(),
    )


def _enabled_idx(n: Net, m: Marking, ti: int) -> bool:
    pre, read, inh = n.pre[ti], n.read[ti], n.inhibit[ti]
    for i in range(len(m)):
        if m[i] < pre[i] or m[i] < read[i]:
            return False
        w = inh[i]
        if w and m[i] >= w:
            return False
    return True


def enabled_set(n: Net, m: Marking) -> set:
    """Transitions enabled at m: m >= pre, m >= read, and every inhibitor
    place strictly below its threshold."""
    if len(m) != len(n.places):
        raise InputError("marking length does not match place count")
    return {t for i, t in enumerate(n.transitions) if _enabled_idx(n, m, i)}


def fire_marking(n: Net, m: Marking, ti: int) -> Marking:
    pre, post = n.pre[ti], n.post[ti]
    return tuple(m[i] - pre[i] + post[i] for i in range(len(m)))


def newly_enabled_set(n: Net, m: Marking, fired: str) -> set:
    """Transitions whose enabling is created by firing ``fired`` from m:
    enabled at the successor marking and either equal to the fired
    transition or not enabled at m."""
    if fired not in n.transition_index:
        raise InputError(f"unknown transition {fired!r}")
    fi = n.transition_index[fired]
    if not _enabled_idx(n, m, fi):
        raise PreconditionError(f"transition {fired!r} is not enabled at {m}")
    m2 = fire_marking(n, m, fi)
    out = set()
    for i, t in enumerate(n.transitions):
        if _enabled_idx(n, m2, i) and (i == fi or not _enabled_idx(n, m, i)):
            out.add(t)
    return out


def validate_net(n: Net) -> list:
    """Structural diagnostics; an empty list means the net is well formed."""
    diags = []
    np, nt = len(n.places), len(n.transitions)
    if len(set(n.places)) != np:
        diags.append("duplicate place name")
    if len(set(n.transitions)) != nt:
        diags.append("duplicate transition name")
    if len(set(n.parameters)) != len(n.parameters):
        diags.append("duplicate parameter name")
    if len(n.initial) != np:
        diags.append("initial marking length does not match place count")
    elif any((not isinstance(x, int)) or x < 0 for x in n.initial):
        diags.append("initial marking has a negative or non-integer count")
    for what, vecs in (("pre", n.pre), ("post", n.post), ("read", n.read), ("inhibit", n.inhibit)):
        if len(vecs) != nt:
            diags.append(f"{what} vector count does not match transition count")
            continue
        for t, vec in zip(n.transitions, vecs):
            if len(vec) != np:
                diags.append(f"transition {t!r}: incomplete {what} weight vector")
            elif any((not isinstance(w, int)) or w < 0 for w in vec):
                diags.append(f"transition {t!r}: negative {what} weight")
    if len(n.intervals) != nt:
        diags.append("interval count does not match transition count")
    else:
        declared = set(n.parameters)
        for t, ival in zip(n.transitions, n.intervals):
            if isinstance(ival, ParamInterval):
                for p in ival.referenced_params():
                    if p not in declared:
                        diags.append(f"transition {t!r}: unknown parameter {p!r} in interval")
                lo, hi = ival.low, ival.high
                if lo.value is not None and hi is not None and hi.value is not None and lo.value > hi.value:
                    diags.append(f"transition {t!r}: interval low exceeds high")
            elif isinstance(ival, TimeInterval):
                if not isinstance(n, ConcreteNet):
                    diags.append(f"transition {t!r}: concrete interval in a parametric net")
            else:
                diags.append(f"transition {t!r}: bad interval object")
    declared = set(n.parameters)
    for c in n.domain.constraints:
        for p in c.params():
            if p not in declared:
                diags.append(f"domain constraint references unknown parameter {p!r}")
    return diags
