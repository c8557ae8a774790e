from __future__ import annotations

import pytest

from riskgames import CostDistribution, Edge, GameSpec
from riskgames.cli_bench import load_scenario


@pytest.fixture(scope="session")
def graph_a() -> GameSpec:
    return load_scenario("graph_a").spec


@pytest.fixture(scope="session")
def graph_b() -> GameSpec:
    return load_scenario("graph_b").spec


def make_diamond(q: float = 0.0, types=(0.05, 0.5), prior=(0.5, 0.5)) -> GameSpec:
    """Four-node diamond: a risky north route (4, 18) and a safe south route (6, 2)."""
    return GameSpec(
        nodes=("1", "2", "3", "4"),
        edges=(
            Edge("1", "2", "N", CostDistribution(2, 9)),
            Edge("1", "3", "S", CostDistribution(3, 1)),
            Edge("2", "4", "E", CostDistribution(2, 9)),
            Edge("3", "4", "E", CostDistribution(3, 1)),
        ),
        terminals={"4": CostDistribution(0, 0)},
        start_node="1",
        horizon_T=3,
        types=types,
        prior=prior,
        transmission_cost=q,
    )


@pytest.fixture
def diamond() -> GameSpec:
    return make_diamond()
