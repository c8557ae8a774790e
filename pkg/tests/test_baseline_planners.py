from dataclasses import replace
from fractions import Fraction

import pytest

from riskgames import CostDistribution, Edge, GameSpec
from riskgames.baseline_planners import (
    average_theta,
    baseline_policy,
    best_case_value,
    enumerate_paths_oracle,
    neutral_override_plan,
    risk_adjusted_shortest_path,
)
from riskgames.errors import EnumerationGuardError, UnreachableTerminalError
from riskgames.game_model import as_fraction, path_criterion

THETA_GRID = (0, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1)


def test_enumeration_contains_reference_totals(graph_a):
    totals = {(ps.mean, ps.variance) for ps in enumerate_paths_oracle(graph_a)}
    assert (30, 400) in totals
    assert (35, 100) in totals
    assert len(totals) == 2


def test_enumeration_single_edge_graph():
    spec = GameSpec(
        nodes=("a", "b"),
        edges=(Edge("a", "b", "E", CostDistribution(1, 2)),),
        terminals={"b": CostDistribution(0, 0)},
        start_node="a",
        horizon_T=2,
        types=(0.1,),
        prior=(1.0,),
    )
    paths = enumerate_paths_oracle(spec)
    assert len(paths) == 1
    assert paths[0].mean == 1 and paths[0].variance == 2


def test_enumeration_graph_b_has_three_distinct_argmins(graph_b):
    stats = enumerate_paths_oracle(graph_b)
    assert len(stats) >= 3
    argmins = set()
    for theta in graph_b.types:
        best = min(stats, key=lambda ps: ps.criterion(theta))
        argmins.add(best.directions)
    assert len(argmins) == 3


def test_enumeration_node_guard():
    nodes = tuple(f"n{i}" for i in range(21))
    edges = tuple(
        Edge(f"n{i}", f"n{i+1}", "E", CostDistribution(1, 0)) for i in range(20)
    )
    spec = GameSpec(
        nodes=nodes,
        edges=edges,
        terminals={"n20": CostDistribution(0, 0)},
        start_node="n0",
        horizon_T=22,
        types=(0.1,),
        prior=(1.0,),
    )
    with pytest.raises(EnumerationGuardError) as err:
        enumerate_paths_oracle(spec)
    assert err.value.bound == 20


def test_planner_reference_routes(graph_a):
    p1 = risk_adjusted_shortest_path(graph_a, 0.01)
    assert p1.per_type_criterion[0] == 34
    assert [e.direction for e in p1.path] == ["E", "E", "S", "E", "N"]
    p2 = risk_adjusted_shortest_path(graph_a, 0.05)
    assert p2.per_type_criterion[1] == 40
    assert [e.direction for e in p2.path] == ["E", "E", "N", "E", "S"]


def test_planner_zero_theta_minimizes_mean(graph_a, graph_b):
    for spec in (graph_a, graph_b):
        plan = risk_adjusted_shortest_path(spec, 0)
        best_mean = min(ps.mean for ps in enumerate_paths_oracle(spec))
        got = sum((e.cost.exact_mean for e in plan.path), start=Fraction(0))
        got += spec.terminals[plan.terminal].exact_mean
        assert got == best_mean


def test_planner_agrees_with_enumeration(graph_a, graph_b, diamond):
    for spec in (graph_a, graph_b, diamond):
        stats = enumerate_paths_oracle(spec)
        for theta in THETA_GRID:
            plan = risk_adjusted_shortest_path(spec, theta)
            value = path_criterion(spec, plan.path, 0, theta)
            best = min(ps.criterion(theta) for ps in stats)
            assert value == best
            argmin_dirs = {ps.directions for ps in stats if ps.criterion(theta) == best}
            assert tuple(e.direction for e in plan.path) in argmin_dirs


def test_planner_respects_horizon():
    # detour is cheaper but does not fit the horizon
    spec = GameSpec(
        nodes=("a", "b", "c", "d"),
        edges=(
            Edge("a", "d", "E", CostDistribution(10, 0)),
            Edge("a", "b", "N", CostDistribution(1, 0)),
            Edge("b", "c", "E", CostDistribution(1, 0)),
            Edge("c", "d", "S", CostDistribution(1, 0)),
        ),
        terminals={"d": CostDistribution(0, 0)},
        start_node="a",
        horizon_T=2,
        types=(0.0,),
        prior=(1.0,),
    )
    plan = risk_adjusted_shortest_path(spec, 0)
    assert [e.direction for e in plan.path] == ["E"]
    assert plan.per_type_criterion[0] == 10


def test_planner_unreachable_terminal():
    spec = GameSpec(
        nodes=("a", "b"),
        edges=(),
        terminals={"b": CostDistribution(0, 0)},
        start_node="a",
        horizon_T=3,
        types=(0.1,),
        prior=(1.0,),
    )
    with pytest.raises(UnreachableTerminalError):
        risk_adjusted_shortest_path(spec, 0.1)


def test_best_case_point_mass_is_single_optimum(graph_a):
    spec = replace(graph_a, prior=(1.0, 0.0))
    assert best_case_value(spec) == 34


def test_best_case_graph_a_even_prior(graph_a):
    assert best_case_value(graph_a) == 37


def test_best_case_graph_b_matches_enumeration(graph_b):
    stats = enumerate_paths_oracle(graph_b)
    want = sum(
        as_fraction(w) * min(ps.criterion(t) for ps in stats)
        for w, t in zip(graph_b.prior, graph_b.types)
    )
    assert best_case_value(graph_b) == want


def test_average_theta_reference_values(graph_b):
    assert abs(average_theta(graph_b) - Fraction(31, 300)) < Fraction(1, 10**12)
    skewed = replace(graph_b, prior=(0.0, 0.5, 0.5))
    assert average_theta(skewed) == Fraction(3, 20)


def test_average_theta_linearity(graph_b):
    for prior in ((0.2, 0.3, 0.5), (1.0, 0.0, 0.0), (0.0, 0.0, 1.0)):
        spec = replace(graph_b, prior=prior)
        want = sum(as_fraction(w) * as_fraction(t) for w, t in zip(prior, spec.types))
        assert average_theta(spec) == want


def test_baseline_neutral_ignores_prior(graph_a):
    for prior in ((0.5, 0.5), (0.9, 0.1), (0.0, 1.0)):
        plan = baseline_policy(replace(graph_a, prior=prior), "neutral")
        assert [e.direction for e in plan.path] == ["E", "E", "S", "E", "N"]
        assert plan.planner_theta == 0


def test_baseline_average_uses_theta_bar(graph_b):
    plan = baseline_policy(graph_b, "average")
    assert plan.planner_theta == average_theta(graph_b)
    direct = risk_adjusted_shortest_path(graph_b, average_theta(graph_b))
    assert plan.path == direct.path


def test_baseline_average_point_mass_collapse(graph_b):
    for k in range(3):
        prior = tuple(1.0 if i == k else 0.0 for i in range(3))
        spec = replace(graph_b, prior=prior)
        plan = baseline_policy(spec, "average")
        own = risk_adjusted_shortest_path(spec, spec.types[k])
        assert plan.per_type_criterion[k] == own.per_type_criterion[k]


def test_baseline_rejects_unknown_mode(graph_a):
    with pytest.raises(ValueError):
        baseline_policy(graph_a, "bogus")


def test_neutral_override_plan_graph_a(graph_a):
    # the neutral machine drives the min-mean (south) route; the cautious
    # rider pays one fee to divert north, the tolerant rider stays silent
    tolerant = neutral_override_plan(graph_a, 0)
    assert tolerant.overrides == 0
    assert [e.direction for e in tolerant.path] == ["E", "E", "S", "E", "N"]
    cautious = neutral_override_plan(graph_a, 1)
    assert cautious.overrides == 1
    assert [e.direction for e in cautious.path] == ["E", "E", "N", "E", "S"]


def test_neutral_override_plan_keeps_fee_worthwhile(graph_a):
    # with a prohibitive fee the rider just rides the neutral route
    pricey = replace(graph_a, transmission_cost=100.0)
    cautious = neutral_override_plan(pricey, 1)
    assert cautious.overrides == 0
    assert [e.direction for e in cautious.path] == ["E", "E", "S", "E", "N"]
