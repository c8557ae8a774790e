import itertools
import random
from fractions import Fraction

import pytest

from riskgames.belief_filter import (
    Belief,
    bayes_update,
    likelihood_update,
    reachable_supports,
)
from riskgames.errors import ZeroProbabilityObservation

ACTIONS = ("SILENT", "N", "S")


def test_point_mass_consistent_observation_is_identity():
    b = Belief.from_weights({1: 1})
    out = bayes_update(b, "N", {1: "N"})
    assert out == b


def test_uniform_three_types_restrict_to_matching_pair():
    b = Belief.from_prior([Fraction(1, 3)] * 3)
    out = bayes_update(b, "N", {0: "S", 1: "N", 2: "N"})
    assert out.support == frozenset({1, 2})
    assert out.normalized() == {1: Fraction(1, 2), 2: Fraction(1, 2)}


def test_distinct_directions_are_fully_revealing():
    b = Belief.from_prior([0.5, 0.5])
    out = bayes_update(b, "S", {0: "S", 1: "N"})
    assert out.support == frozenset({0})
    assert out.normalized() == {0: Fraction(1)}


def test_zero_probability_observation_raises():
    b = Belief.from_prior([0.5, 0.5])
    with pytest.raises(ZeroProbabilityObservation):
        bayes_update(b, "E", {0: "S", 1: "N"})


def test_slice_must_cover_support():
    b = Belief.from_prior([0.5, 0.5])
    with pytest.raises(ValueError):
        bayes_update(b, "S", {0: "S"})


def _exhaustive_slices(k):
    for combo in itertools.product(ACTIONS, repeat=k):
        yield dict(enumerate(combo))


def test_restriction_idempotence_monotonicity_exhaustive():
    # every slice over up to 4 types, every observable action
    for k in range(1, 5):
        prior = [Fraction(i + 1, (k * (k + 3)) // 2) for i in range(k)]
        belief = Belief.from_weights(dict(enumerate(prior)))
        for strategy in _exhaustive_slices(k):
            for observed in set(strategy.values()):
                out = bayes_update(belief, observed, strategy)
                # restriction: survivors keep their prior weights
                assert all(out.weight(i) == belief.weight(i) for i in out.support)
                assert out.support == frozenset(
                    i for i in belief.support if strategy[i] == observed
                )
                # support monotonicity
                assert out.support <= belief.support
                # idempotence
                again = bayes_update(out, observed, strategy)
                assert again == out


def test_relative_weights_invariant_under_updates():
    rng = random.Random(7)
    for _ in range(50):
        k = rng.randint(2, 4)
        weights = {i: Fraction(rng.randint(1, 9), rng.randint(1, 9)) for i in range(k)}
        belief = Belief.from_weights(weights)
        strategy = {i: rng.choice(ACTIONS) for i in range(k)}
        observed = strategy[rng.randrange(k)]
        out = bayes_update(belief, observed, strategy)
        for i in out.support:
            for j in out.support:
                assert out.weight(i) * belief.weight(j) == out.weight(j) * belief.weight(i)


def test_generalized_update_agrees_with_restriction_on_deterministic_slices():
    for k in range(1, 5):
        belief = Belief.from_weights({i: Fraction(i + 2, 7) for i in range(k)})
        for strategy in _exhaustive_slices(k):
            randomized = {
                i: {a: (1 if strategy[i] == a else 0) for a in ACTIONS} for i in range(k)
            }
            for observed in set(strategy.values()):
                assert likelihood_update(belief, observed, randomized) == bayes_update(
                    belief, observed, strategy
                )


def test_likelihood_update_multiplies_and_carries():
    belief = Belief.from_weights({0: Fraction(1, 2), 1: Fraction(1, 2)})
    randomized = {0: {"N": 0.5, "S": 0.5}, 1: {"N": 1.0}}
    out = likelihood_update(belief, "N", randomized)
    assert out.weight(0) == Fraction(1, 4)
    assert out.weight(1) == Fraction(1, 2)
    with pytest.raises(ZeroProbabilityObservation):
        likelihood_update(belief, "E", randomized)


def test_belief_requires_positive_support():
    with pytest.raises(ValueError):
        Belief(())
    assert Belief.from_weights({0: 0, 1: 2}).support == frozenset({1})


def test_normalized_view_sums_to_one():
    b = Belief.from_weights({0: Fraction(3, 7), 2: Fraction(5, 9), 4: 2})
    assert sum(b.normalized().values()) == 1


def test_reachable_supports_counts(graph_a, graph_b):
    two = reachable_supports(graph_a)
    assert two == {(0,), (1,), (0, 1)}
    three = reachable_supports(graph_b)
    assert len(three) == 7
    assert (0, 1, 2) in three


def test_reachable_supports_k1_and_k4(diamond):
    from dataclasses import replace

    k1 = replace(diamond, types=(0.1,), prior=(1.0,))
    assert reachable_supports(k1) == {(0,)}
    k4 = replace(diamond, types=(0.0, 0.1, 0.2, 0.3), prior=(0.25, 0.25, 0.25, 0.25))
    assert len(reachable_supports(k4)) == 15
