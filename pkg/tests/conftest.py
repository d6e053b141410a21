import pytest

from tpnsynth import instantiate, make_net


@pytest.fixture
def net_a():
    """One plain transition p1 -> p2 with firing window [2,3]."""
    net = make_net(
        [("p1", 1), ("p2", 0)],
        {"t1": {"pre": {"p1": 1}, "post": {"p2": 1}, "interval": (2, 3)}},
    )
    return instantiate(net, {})


@pytest.fixture
def net_b():
    """net_a plus t2 sharing p1 but blocked by an inhibitor arc on p2."""
    net = make_net(
        [("p1", 1), ("p2", 1)],
        {
            "t1": {"pre": {"p1": 1}, "post": {"p2": 1}, "interval": (2, 3)},
            "t2": {"pre": {"p1": 1}, "inhibit": {"p2": 1}, "interval": (0, 4)},
        },
    )
    return instantiate(net, {})
