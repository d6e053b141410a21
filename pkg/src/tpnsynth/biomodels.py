"""Observer constructions and the circadian-clock case study.

Observers are net-to-net transformations that restrict, force, or witness
behavior without otherwise changing the observed dynamics: a permanently
marked place wired to an inhibitor arc disables a transition; a flag place
fed by a transition's postset makes its firing visible to token-count
formulas; timed chains force light-schedule perturbations.

The clock model is a documented reconstruction of the simplified
mammalian circadian clock (three boolean components: light L, gene G,
protein complex PC) assembled from prose descriptions; the arc-level
choices and their provenance are listed in docs/model_notes.md and in the
shipped model file. Places P_X0/P_X1 encode component X being 0/1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import InputError
from .petri import LinearConstraint, Net, TimeInterval, make_net

Bound = Union[int, str]  # literal delay or parameter name


# ---------------------------------------------------------------------------
# Observer specifications


@dataclass(frozen=True)
class InhibitTransition:
    """Permanently disable a transition via a marked inhibitor place."""

    transition: str


@dataclass(frozen=True)
class EventFlag:
    """Make firings of a transition observable as M(p_O_<t>) > 0.

    The flag place also inhibits its transition so the flag saturates at
    one token and the net stays 1-safe.
    """

    transition: str


@dataclass(frozen=True)
class LightDuration:
    """Replace the light-off switch by a fresh one with a set duration."""

    duration: Bound
    switch_off: str = "t_off"
    light_on: str = "P_L1"
    light_off: str = "P_L0"


@dataclass(frozen=True)
class NightLight:
    """Three-phase perturbation of one night: dark for tau1, forced light
    for tau2, dark again for tau3, then dawn is forced and the schedule
    resumes. The natural light-on switch is inhibited while any night
    phase is active, so the perturbed night is fully observer-driven.

    When ``night_length`` is set, the domain gains tau1+tau2+tau3 = night.
    """

    tau1: Bound
    tau2: Bound
    tau3: Bound
    night_length: Optional[int] = 12
    switch_on: str = "t_on"
    light_on: str = "P_L1"
    light_off: str = "P_L0"


@dataclass(frozen=True)
class JetLag:
    """After ``normal`` time units of nominal behavior, hold the light on
    for ``extended`` units (the off switch is inhibited and the release
    forces the light back off), then resume."""

    normal: int = 24
    extended: int = 30
    switch_off: str = "t_off"
    light_on: str = "P_L1"
    light_off: str = "P_L0"


@dataclass(frozen=True)
class KnockOut:
    """Permanently disable each listed transition."""

    transitions: tuple


ObserverSpec = Union[InhibitTransition, EventFlag, LightDuration, NightLight, JetLag, KnockOut]


def flag_place(transition: str) -> str:
    return f"p_O_{transition}"


def inhibitor_place(transition: str) -> str:
    return f"p_inh_{transition}"


def _net_spec(n: Net):
    places = list(zip(n.places, n.initial))
    transitions = {}
    for i, t in enumerate(n.transitions):
        spec = {}
        for what, vecs in (("pre", n.pre), ("post", n.post), ("read", n.read), ("inhibit", n.inhibit)):
            arcs = {p: w for p, w in zip(n.places, vecs[i]) if w > 0}
            if arcs:
                spec[what] = arcs
        ival = n.intervals[i]
        if isinstance(ival, TimeInterval):
            lo, hi = ival.low, (None if ival.unbounded else ival.high)
        else:
            lo = ival.low.value if ival.low.param is None else ival.low.param
            if ival.high is None:
                hi = None
            else:
                hi = ival.high.value if ival.high.param is None else ival.high.param
        spec["interval"] = (lo, hi)
        transitions[t] = spec
    return places, transitions, list(n.parameters), list(n.domain.constraints)


def _fresh(name: str, taken) -> str:
    if name in taken:
        raise InputError(f"observer name {name!r} collides with an existing name")
    taken.add(name)
    return name


def _as_param(bound: Bound, params: list):
    if isinstance(bound, str) and bound not in params:
        params.append(bound)
    return bound


def apply_observer(n: Net, spec: ObserverSpec) -> Net:
    places, transitions, params, constraints = _net_spec(n)
    taken = set(n.places) | set(n.transitions)

    def inhibit(t: str):
        if t not in transitions:
            raise InputError(f"unknown transition {t!r}")
        p = _fresh(inhibitor_place(t), taken)
        places.append((p, 1))
        transitions[t].setdefault("inhibit", {})[p] = 1

    if isinstance(spec, InhibitTransition):
        inhibit(spec.transition)
    elif isinstance(spec, KnockOut):
        for t in spec.transitions:
            inhibit(t)
    elif isinstance(spec, EventFlag):
        t = spec.transition
        if t not in transitions:
            raise InputError(f"unknown transition {t!r}")
        p = _fresh(flag_place(t), taken)
        places.append((p, 0))
        transitions[t].setdefault("post", {})[p] = 1
        transitions[t].setdefault("inhibit", {})[p] = 1
    elif isinstance(spec, LightDuration):
        inhibit(spec.switch_off)
        t_star = _fresh("t_star", taken)
        d = _as_param(spec.duration, params)
        transitions[t_star] = {
            "pre": {spec.light_on: 1},
            "post": {spec.light_off: 1},
            "interval": (d, d),
        }
    elif isinstance(spec, NightLight):
        if spec.switch_on not in transitions:
            raise InputError(f"unknown transition {spec.switch_on!r}")
        names = [_fresh(p, taken) for p in ("p_night_wait", "p_night_lit", "p_night_late", "p_night_done")]
        places.extend([(names[0], 1), (names[1], 0), (names[2], 0), (names[3], 0)])
        inh = transitions[spec.switch_on].setdefault("inhibit", {})
        for phase in names[:3]:
            inh[phase] = 1  # the natural dawn is blocked while the observer runs
        t1 = _as_param(spec.tau1, params)
        t2 = _as_param(spec.tau2, params)
        t3 = _as_param(spec.tau3, params)
        transitions[_fresh("o_force_on", taken)] = {
            "pre": {names[0]: 1, spec.light_off: 1},
            "post": {names[1]: 1, spec.light_on: 1},
            "interval": (t1, t1),
        }
        transitions[_fresh("o_force_off", taken)] = {
            "pre": {names[1]: 1, spec.light_on: 1},
            "post": {names[2]: 1, spec.light_off: 1},
            "interval": (t2, t2),
        }
        # night ends: dawn is forced and the inhibition token set drains
        transitions[_fresh("o_night_end", taken)] = {
            "pre": {names[2]: 1, spec.light_off: 1},
            "post": {names[3]: 1, spec.light_on: 1},
            "interval": (t3, t3),
        }
        if spec.night_length is not None:
            lit = sum(x for x in (spec.tau1, spec.tau2, spec.tau3) if isinstance(x, int))
            sym = [x for x in (spec.tau1, spec.tau2, spec.tau3) if isinstance(x, str)]
            if sym:
                constraints.append(
                    LinearConstraint.make({p: 1 for p in sym}, "=", Fraction(spec.night_length - lit))
                )
            elif lit != spec.night_length:
                raise InputError(
                    f"night phases sum to {lit}, expected {spec.night_length}"
                )
    elif isinstance(spec, JetLag):
        for p in (spec.light_on, spec.light_off):
            if not any(q == p for q, _ in places):
                raise InputError(f"unknown place {p!r}")
        names = [_fresh(p, taken) for p in ("p_jl_wait", "p_jl_hold", "p_jl_done")]
        places.extend([(names[0], 1), (names[1], 0), (names[2], 0)])
        transitions[_fresh("o_jl_start", taken)] = {
            "pre": {names[0]: 1},
            "post": {names[1]: 1},
            "interval": (spec.normal, spec.normal),
        }
        if spec.switch_off not in transitions:
            raise InputError(f"unknown transition {spec.switch_off!r}")
        transitions[spec.switch_off].setdefault("inhibit", {})[names[1]] = 1
        transitions[_fresh("o_jl_release", taken)] = {
            "pre": {names[1]: 1, spec.light_on: 1},
            "post": {names[2]: 1, spec.light_off: 1},
            "interval": (spec.extended, spec.extended),
        }
    else:
        raise InputError(f"unknown observer spec {spec!r}")
    return make_net(places, transitions, parameters=params, constraints=constraints)


def apply_observers(n: Net, specs) -> Net:
    for spec in specs:
        n = apply_observer(n, spec)
    return n


# ---------------------------------------------------------------------------
# Circadian clock reconstruction


@dataclass(frozen=True)
class ClockConfig:
    """Delays (literal or parameter name) and initial component states for
    the reconstructed clock. Defaults give the nominal 12h/12h light cycle.

    Delay knobs, one per transition:
      tau_on   darkness duration (switch-on delay of t_on)
      tau_off  light duration (switch-off delay of t_off)
      tau_01   dark-phase complex formation, PC 0 to 1 (t_c)
      tau_10   complex decay, PC 1 to 0 (t_f)
      tau_b    light-induced gene activation (t_b)
      tau_g    complex-mediated gene shutdown (t_g)
      tau_a    gene-complex interaction decay, PC 1 to 0 (t_a)
    """

    light_start: str = "on"
    gene_start: int = 0
    protein_start: int = 0
    tau_on: Bound = 12
    tau_off: Bound = 12
    tau_01: Bound = 6
    tau_10: Bound = 6
    tau_b: Bound = 0
    tau_g: Bound = 1
    tau_a: Bound = 7
    day_length: Optional[int] = 24  # constrains tau_on + tau_off when both parametric
    gene_delay_min: Optional[int] = 1  # constrains tau_g when parametric
    extra_constraints: tuple = ()

    def __post_init__(self):
        if self.light_start not in ("on", "off"):
            raise InputError("light_start must be 'on' or 'off'")
        if self.gene_start not in (0, 1) or self.protein_start not in (0, 1):
            raise InputError("component starts must be 0 or 1")


def build_circadian_clock(cfg: ClockConfig = ClockConfig()) -> Net:
    """Three coupled boolean components; see the module docstring for the
    provenance caveats. 1-safe by construction under any delays."""
    params: list = []
    for bound in (cfg.tau_on, cfg.tau_off, cfg.tau_01, cfg.tau_10, cfg.tau_b, cfg.tau_g, cfg.tau_a):
        _as_param(bound, params)
    constraints = list(cfg.extra_constraints)
    if (
        cfg.day_length is not None
        and isinstance(cfg.tau_on, str)
        and isinstance(cfg.tau_off, str)
    ):
        constraints.append(
            LinearConstraint.make({cfg.tau_on: 1, cfg.tau_off: 1}, "=", cfg.day_length)
        )
    if cfg.gene_delay_min is not None and isinstance(cfg.tau_g, str):
        constraints.append(LinearConstraint.make({cfg.tau_g: 1}, ">=", cfg.gene_delay_min))
    light_on = 1 if cfg.light_start == "on" else 0
    places = [
        ("P_L0", 1 - light_on),
        ("P_L1", light_on),
        ("P_G0", 1 - cfg.gene_start),
        ("P_G1", cfg.gene_start),
        ("P_PC0", 1 - cfg.protein_start),
        ("P_PC1", cfg.protein_start),
    ]
    transitions = {
        # light oscillator
        "t_on": {"pre": {"P_L0": 1}, "post": {"P_L1": 1}, "interval": (cfg.tau_on, cfg.tau_on)},
        "t_off": {"pre": {"P_L1": 1}, "post": {"P_L0": 1}, "interval": (cfg.tau_off, cfg.tau_off)},
        # dark-phase complex formation; the forming complex shuts the gene down
        "t_c": {
            "pre": {"P_PC0": 1, "P_G1": 1},
            "post": {"P_PC1": 1, "P_G0": 1},
            "read": {"P_L0": 1},
            "interval": (cfg.tau_01, cfg.tau_01),
        },
        # spontaneous complex decay
        "t_f": {"pre": {"P_PC1": 1}, "post": {"P_PC0": 1}, "interval": (cfg.tau_10, cfg.tau_10)},
        # light-induced gene activation
        "t_b": {
            "pre": {"P_G0": 1},
            "post": {"P_G1": 1},
            "read": {"P_L1": 1},
            "interval": (cfg.tau_b, cfg.tau_b),
        },
        # redundant complex-mediated gene shutdown
        "t_g": {
            "pre": {"P_G1": 1},
            "post": {"P_G0": 1},
            "read": {"P_PC1": 1},
            "interval": (cfg.tau_g, cfg.tau_g),
        },
        # complex decay through interaction with the active gene
        "t_a": {
            "pre": {"P_PC1": 1},
            "post": {"P_PC0": 1},
            "read": {"P_G1": 1},
            "interval": (cfg.tau_a, cfg.tau_a),
        },
    }
    return make_net(places, transitions, parameters=params, constraints=constraints)


DARKNESS_START = ClockConfig(light_start="off")
