import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tpnsynth import (
    DomainError,
    IllFormedIntervalError,
    InputError,
    LinearConstraint,
    ParamDomain,
    ParamInterval,
    PreconditionError,
    TimeInterval,
    domain_contains,
    enabled_set,
    eval_constraint,
    instantiate,
    make_net,
    newly_enabled_set,
    validate_net,
)
from tpnsynth.petri import Net, ParamExpr, fire_marking

from _gen import random_concrete_net


def lc(coeffs, rel, bound):
    return LinearConstraint.make(coeffs, rel, bound)


class TestConstraints:
    def test_single_parameter_lower_bound(self):
        c = lc({"tg": 1}, ">=", 1)
        assert eval_constraint(c, {"tg": 1})
        assert not eval_constraint(c, {"tg": 0})

    def test_day_length_equality(self):
        c = lc({"ton": 1, "toff": 1}, "=", 24)
        assert eval_constraint(c, {"ton": 7, "toff": 17})
        assert not eval_constraint(c, {"ton": 7, "toff": 16})

    def test_zero_coefficients_always_hold(self):
        c = lc({"x": 0}, "<=", 0)
        for k in range(5):
            assert eval_constraint(c, {"x": k})

    def test_missing_parameter_is_an_input_error(self):
        with pytest.raises(InputError):
            eval_constraint(lc({"x": 1}, ">=", 0), {})

    def test_rational_coefficients(self):
        c = lc({"x": "1/2"}, "<=", "3/2")
        assert eval_constraint(c, {"x": 3})
        assert not eval_constraint(c, {"x": 4})


class TestDomain:
    def test_empty_domain_contains_everything(self):
        assert domain_contains(ParamDomain(), {"x": 5})

    def test_gene_delay_domain_excludes_zero(self):
        d = ParamDomain((lc({"tg": 1}, ">=", 1),))
        assert not domain_contains(d, {"tg": 0})
        assert domain_contains(d, {"tg": 3})

    def test_contradictory_domain_is_empty(self):
        d = ParamDomain((lc({"x": 1}, ">=", 2), lc({"x": 1}, "<=", 1)))
        assert all(not domain_contains(d, {"x": k}) for k in range(11))

    def test_dropping_a_constraint_never_shrinks_the_set(self):
        rng = random.Random(7)
        for _ in range(50):
            cs = tuple(
                lc({"a": rng.randint(-2, 2), "b": rng.randint(-2, 2)}, rng.choice(["<", "<=", "=", ">=", ">"]), rng.randint(-5, 5))
                for _ in range(rng.randint(1, 3))
            )
            full = ParamDomain(cs)
            dropped = ParamDomain(cs[1:])
            for a in range(11):
                for b in range(11):
                    v = {"a": a, "b": b}
                    if domain_contains(full, v):
                        assert domain_contains(dropped, v)


class TestIntervals:
    def test_unbounded_interval_is_right_open(self):
        iv = TimeInterval(2, float("inf"))
        assert not iv.right_closed
        assert iv.contains(2) and iv.contains(10**6)

    def test_low_above_high_rejected(self):
        with pytest.raises(IllFormedIntervalError):
            TimeInterval(3, 2)

    def test_open_endpoints_shrink_integer_range(self):
        iv = TimeInterval(1, 4, left_closed=False, right_closed=False)
        assert iv.int_low() == 2 and iv.int_high() == 3

    def test_param_interval_instantiation(self):
        j = ParamInterval.make("td", "td")
        assert j.evaluate({"td": 6}) == TimeInterval(6, 6)

    def test_param_interval_low_over_high(self):
        j = ParamInterval.make(2, "t")
        with pytest.raises(IllFormedIntervalError):
            j.evaluate({"t": 1})


class TestInstantiate:
    def test_structure_preserved(self):
        net = make_net(
            [("p1", 1), ("p2", 0)],
            {"t": {"pre": {"p1": 1}, "post": {"p2": 1}, "interval": ("td", "td")}},
            parameters=["td"],
        )
        c = instantiate(net, {"td": 6})
        assert c.places == net.places
        assert c.transitions == net.transitions
        assert c.pre == net.pre and c.post == net.post
        assert c.read == net.read and c.inhibit == net.inhibit
        assert c.initial == net.initial
        assert c.intervals == (TimeInterval(6, 6),)

    def test_no_parameters_keeps_intervals(self):
        net = make_net([("p", 1)], {"t": {"pre": {"p": 1}, "interval": (2, 3)}})
        assert instantiate(net, {}).intervals == (TimeInterval(2, 3),)

    def test_valuation_outside_domain_rejected(self):
        net = make_net(
            [("p", 1)],
            {"t": {"pre": {"p": 1}, "interval": ("x", "x")}},
            parameters=["x"],
            constraints=[lc({"x": 1}, ">=", 1)],
        )
        with pytest.raises(DomainError):
            instantiate(net, {"x": 0})


class TestEnabled:
    def test_plain_arc(self, net_a):
        assert enabled_set(net_a, (1, 0)) == {"t1"}

    def test_inhibitor_blocks(self, net_b):
        assert enabled_set(net_b, (1, 1)) == {"t1"}
        assert enabled_set(net_b, (1, 0)) == {"t1", "t2"}

    def test_inhibitor_exhaustive_small_markings(self, net_b):
        # componentwise definition checked over every marking with <= 2 tokens
        for a in range(3):
            for b in range(3):
                expected = set()
                if a >= 1:
                    expected.add("t1")
                    if b < 1:
                        expected.add("t2")
                assert enabled_set(net_b, (a, b)) == expected

    def test_read_arc_requires_tokens(self):
        net = make_net(
            [("p1", 0), ("p2", 0)],
            {"t3": {"read": {"p2": 1}, "interval": (0, 1)}},
        )
        c = instantiate(net, {})
        assert enabled_set(c, (0, 0)) == set()
        assert enabled_set(c, (0, 1)) == {"t3"}

    def test_matches_independent_predicate_on_random_nets(self):
        # oracle: a literally transcribed componentwise check
        rng = random.Random(11)
        for _ in range(200):
            net = random_concrete_net(rng)
            m = tuple(rng.randint(0, 3) for _ in net.places)
            expected = set()
            for i, t in enumerate(net.transitions):
                ok = all(m[k] >= net.pre[i][k] for k in range(len(m)))
                ok = ok and all(m[k] >= net.read[i][k] for k in range(len(m)))
                ok = ok and all(
                    m[k] < net.inhibit[i][k] for k in range(len(m)) if net.inhibit[i][k] > 0
                )
                if ok:
                    expected.add(t)
            assert enabled_set(net, m) == expected


class TestNewlyEnabled:
    def test_self_loop_is_newly_enabled(self):
        net = make_net(
            [("p1", 1)],
            {"t": {"pre": {"p1": 1}, "post": {"p1": 1}, "interval": (1, 1)}},
        )
        c = instantiate(net, {})
        assert newly_enabled_set(c, (1,), "t") == {"t"}

    def test_consumer_not_newly_enabled_after_firing(self, net_a):
        assert "t1" not in newly_enabled_set(net_a, (1, 0), "t1")

    def test_chain_enables_downstream(self):
        net = make_net(
            [("p1", 1), ("p2", 0)],
            {
                "t1": {"pre": {"p1": 1}, "post": {"p2": 1}, "interval": (0, 1)},
                "t2": {"pre": {"p2": 1}, "interval": (0, 1)},
            },
        )
        c = instantiate(net, {})
        assert newly_enabled_set(c, (1, 0), "t1") == {"t2"}

    def test_fired_must_be_enabled(self, net_a):
        with pytest.raises(PreconditionError):
            newly_enabled_set(net_a, (0, 1), "t1")

    def test_subset_of_enabled_at_successor_marking(self):
        rng = random.Random(23)
        checked = 0
        while checked < 150:
            net = random_concrete_net(rng)
            m = tuple(rng.randint(0, 2) for _ in net.places)
            fireable = sorted(enabled_set(net, m))
            if not fireable:
                continue
            t = rng.choice(fireable)
            m2 = fire_marking(net, m, net.transition_index[t])
            assert newly_enabled_set(net, m, t) <= enabled_set(net, m2)
            checked += 1


class TestValidate:
    def test_well_formed(self, net_a):
        assert validate_net(net_a) == []

    def test_unknown_parameter_in_interval(self):
        net = make_net([("p", 1)], {"t": {"pre": {"p": 1}, "interval": (0, 1)}})
        bad = Net(
            places=net.places,
            transitions=net.transitions,
            parameters=(),
            pre=net.pre,
            post=net.post,
            read=net.read,
            inhibit=net.inhibit,
            initial=net.initial,
            intervals=(ParamInterval.make("tau_x", "tau_x"),),
            domain=net.domain,
        )
        assert any("unknown parameter" in d for d in validate_net(bad))

    def test_incomplete_weight_vector(self, net_a):
        bad = Net(
            places=net_a.places,
            transitions=net_a.transitions,
            parameters=(),
            pre=((1,),),  # missing the p2 entry
            post=net_a.post,
            read=net_a.read,
            inhibit=net_a.inhibit,
            initial=net_a.initial,
            intervals=(ParamInterval.make(2, 3),),
        )
        assert any("incomplete" in d for d in validate_net(bad))

    def test_make_net_rejects_unknown_place(self):
        with pytest.raises(InputError):
            make_net([("p", 0)], {"t": {"pre": {"nope": 1}, "interval": (0, 1)}})


@given(st.integers(0, 5), st.integers(0, 5), st.booleans())
@settings(max_examples=60)
def test_interval_contains_agrees_with_enumeration(lo, extra, closed_right):
    hi = lo + extra
    iv = TimeInterval(lo, hi, True, closed_right)
    for x in range(0, hi + 2):
        expected = lo <= x <= (hi if closed_right else hi - 1)
        assert iv.contains(x) == expected


def test_param_expr_requires_exactly_one_payload():
    with pytest.raises(InputError):
        ParamExpr(value=1, param="x")
    with pytest.raises(InputError):
        ParamExpr()
