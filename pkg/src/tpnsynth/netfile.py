"""Line-oriented text format for nets (.tpnet).

    # comment
    net <name>
    place <name> [initial-tokens]
    param <name>
    domain <coef>*<param> [+|- ...] <rel> <bound>
    trans <name> [pre <arcs>] [post <arcs>] [read <arcs>] [inhibit <arcs>]
                 interval [<lo>,<hi>]

Arcs are place names with an optional ``*weight``; interval bounds are
naturals or parameter names, the high bound may be ``inf``. Missing arc
lists default to none, a missing domain to the empty constraint set. The
full grammar lives in docs/formats.md.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import InputError, NetSyntaxError
from .petri import LinearConstraint, Net, TimeInterval, make_net

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_ARC = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)(?:\*(\d+))?$")
_INTERVAL = re.compile(r"\[([A-Za-z0-9_]+),([A-Za-z0-9_]+)[\]\)]$")
_SECTIONS = ("pre", "post", "read", "inhibit", "interval")


def parse_net(text: str) -> Net:
    name = None
    places, params, constraints = [], [], []
    transitions = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head, rest = words[0], words[1:]
        if head == "net":
            if len(rest) != 1:
                raise NetSyntaxError("net takes exactly one name", lineno)
            name = rest[0]
        elif head == "place":
            if not rest or not _NAME.match(rest[0]):
                raise NetSyntaxError("place needs a name", lineno)
            tokens = 0
            if len(rest) == 2:
                if not rest[1].isdigit():
                    raise NetSyntaxError("initial tokens must be a natural number", lineno)
                tokens = int(rest[1])
            elif len(rest) > 2:
                raise NetSyntaxError("too many fields for place", lineno)
            if any(p == rest[0] for p, _ in places):
                raise NetSyntaxError(f"duplicate place {rest[0]!r}", lineno)
            places.append((rest[0], tokens))
        elif head == "param":
            if len(rest) != 1 or not _NAME.match(rest[0]):
                raise NetSyntaxError("param needs a single name", lineno)
            if rest[0] in params:
                raise NetSyntaxError(f"duplicate parameter {rest[0]!r}", lineno)
            params.append(rest[0])
        elif head == "domain":
            constraints.append(_parse_constraint(" ".join(rest), lineno))
        elif head == "trans":
            if not rest or not _NAME.match(rest[0]):
                raise NetSyntaxError("trans needs a name", lineno)
            tname = rest[0]
            if tname in transitions:
                raise NetSyntaxError(f"duplicate transition {tname!r}", lineno)
            transitions[tname] = _parse_transition(rest[1:], lineno)
        else:
            raise NetSyntaxError(f"unknown directive {head!r}", lineno)
    if not places:
        raise NetSyntaxError("a net needs at least one place", 1)
    if not transitions:
        raise NetSyntaxError("a net needs at least one transition", 1)
    try:
        net = make_net(places, transitions, parameters=params, constraints=constraints)
    except InputError as exc:
        raise InputError(f"invalid net{f' {name!r}' if name else ''}: {exc}")
    return net


def parse_net_file(path) -> Net:
    with open(path) as fh:
        return parse_net(fh.read())


def _parse_transition(words, lineno):
    spec = {"pre": {}, "post": {}, "read": {}, "inhibit": {}}
    interval = None
    section = None
    i = 0
    while i < len(words):
        w = words[i]
        if w in _SECTIONS:
            section = w
            if w == "interval":
                i += 1
                if i >= len(words):
                    raise NetSyntaxError("interval needs a [lo,hi] bound pair", lineno)
                interval = _parse_interval(words[i], lineno)
                section = None
            i += 1
            continue
        if section is None:
            raise NetSyntaxError(f"unexpected token {w!r} in transition", lineno)
        m = _ARC.match(w)
        if not m:
            raise NetSyntaxError(f"bad arc {w!r}", lineno)
        place, weight = m.group(1), int(m.group(2) or 1)
        if weight < 1:
            raise NetSyntaxError(f"arc weight must be positive in {w!r}", lineno)
        if place in spec[section]:
            raise NetSyntaxError(f"duplicate {section} arc for {place!r}", lineno)
        spec[section][place] = weight
        i += 1
    if interval is None:
        raise NetSyntaxError("transition is missing its interval", lineno)
    spec["interval"] = interval
    return spec


def _parse_interval(tok, lineno):
    m = _INTERVAL.match(tok)
    if not m:
        raise NetSyntaxError(f"bad interval {tok!r}, expected [lo,hi]", lineno)
    lo, hi = m.group(1), m.group(2)
    low = int(lo) if lo.isdigit() else lo
    if hi == "inf":
        high = None
    else:
        high = int(hi) if hi.isdigit() else hi
    return (low, high)


def _parse_constraint(text, lineno) -> LinearConstraint:
    m = re.match(r"(.+?)(<=|>=|=|<|>)(.+)$", text)
    if not m:
        raise NetSyntaxError("domain constraint needs a comparison", lineno)
    lhs, rel, rhs = m.group(1).strip(), m.group(2), m.group(3).strip()
    try:
        bound = Fraction(rhs)
    except (ValueError, ZeroDivisionError):
        raise NetSyntaxError(f"bad constraint bound {rhs!r}", lineno)
    coeffs = {}
    for sign, term in re.findall(r"([+-]?)\s*([^+-]+)", lhs):
        term = term.strip()
        if not term:
            continue
        factor = Fraction(-1 if sign == "-" else 1)
        if "*" in term:
            coef, _, pname = term.partition("*")
            try:
                factor *= Fraction(coef.strip())
            except (ValueError, ZeroDivisionError):
                raise NetSyntaxError(f"bad coefficient {coef!r}", lineno)
            pname = pname.strip()
        else:
            pname = term
        if not _NAME.match(pname):
            raise NetSyntaxError(f"bad parameter name {pname!r} in constraint", lineno)
        coeffs[pname] = coeffs.get(pname, Fraction(0)) + factor
    if not coeffs:
        raise NetSyntaxError("constraint has no parameter terms", lineno)
    return LinearConstraint.make(coeffs, rel, bound)


def serialize_net(n: Net, name: str = None) -> str:
    """Canonical text rendering; parse_net(serialize_net(n)) == n."""
    out = []
    if name:
        out.append(f"net {name}")
    for p, tokens in zip(n.places, n.initial):
        out.append(f"place {p} {tokens}")
    for p in n.parameters:
        out.append(f"param {p}")
    for c in n.domain.constraints:
        terms = []
        for i, (p, coef) in enumerate(c.coeffs):
            mag = coef if (coef >= 0 or i == 0) else -coef
            prefix = "" if i == 0 else (" + " if coef >= 0 else " - ")
            coef_txt = "" if mag == 1 else f"{mag}*"
            terms.append(f"{prefix}{coef_txt}{p}")
        out.append(f"domain {''.join(terms)} {c.rel} {c.bound}")
    for i, t in enumerate(n.transitions):
        parts = [f"trans {t}"]
        for what, vecs in (("pre", n.pre), ("post", n.post), ("read", n.read), ("inhibit", n.inhibit)):
            arcs = [
                f"{p}" if w == 1 else f"{p}*{w}"
                for p, w in zip(n.places, vecs[i])
                if w > 0
            ]
            if arcs:
                parts.append(f"{what} {' '.join(arcs)}")
        parts.append(f"interval {_format_interval(n.intervals[i])}")
        out.append(" ".join(parts))
    return "\n".join(out) + "\n"


def _format_interval(ival) -> str:
    if isinstance(ival, TimeInterval):
        hi = "inf)" if ival.unbounded else f"{ival.high}]"
        return f"[{ival.low},{hi}"
    lo = str(ival.low)
    hi = "inf)" if ival.high is None else f"{ival.high}]"
    return f"[{lo},{hi}"
