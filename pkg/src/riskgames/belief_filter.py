"""Posterior over the rider's private type given observed signals.

With deterministic signalling rules a Bayes update can only restrict the
support: the posterior is the prior confined to the types consistent with
what was observed. Beliefs therefore carry unnormalized weights straight
from the prior and renormalization is a view, not a state change.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ZeroProbabilityObservation
from .game_model import GameSpec, Number, as_fraction


@dataclass(frozen=True)
class Belief:
    """Unnormalized posterior weights over type indices (support only)."""

    weights: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        if not self.weights:
            raise ValueError("belief support must be non-empty")
        if any(w <= 0 for _, w in self.weights):
            raise ValueError("supported weights must be strictly positive")

    @classmethod
    def from_weights(cls, mapping: Mapping[int, Number]) -> "Belief":
        items = tuple(
            (int(i), as_fraction(w)) for i, w in sorted(mapping.items()) if as_fraction(w) > 0
        )
        return cls(items)

    @classmethod
    def from_prior(cls, prior: Sequence[Number]) -> "Belief":
        return cls.from_weights({i: w for i, w in enumerate(prior) if as_fraction(w) > 0})

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.weights)

    def weight(self, type_index: int) -> Fraction:
        for i, w in self.weights:
            if i == type_index:
                return w
        raise KeyError(type_index)

    def normalized(self) -> dict[int, Fraction]:
        total = sum((w for _, w in self.weights), start=Fraction(0))
        return {i: w / total for i, w in self.weights}


def bayes_update(belief: Belief, observed: str, strategy_slice: Mapping[int, str]) -> Belief:
    """Condition on an observed signal under a deterministic strategy slice.

    The support restricts to the types whose prescribed action matches the
    observation; surviving weights are carried unchanged (renormalization
    is deferred to readers). Raises ZeroProbabilityObservation when no
    supported type prescribes the observed action.
    """
    missing = [i for i, _ in belief.weights if i not in strategy_slice]
    if missing:
        raise ValueError(f"strategy slice undefined for supported types {missing}")
    survivors = tuple((i, w) for i, w in belief.weights if strategy_slice[i] == observed)
    if not survivors:
        raise ZeroProbabilityObservation(
            f"no supported type prescribes {observed!r} (support {sorted(belief.support)})"
        )
    return Belief(survivors)


def likelihood_update(
    belief: Belief, observed: str, randomized_slice: Mapping[int, Mapping[str, Number]]
) -> Belief:
    """General nonlinear-filter update for randomized strategy slices.

    Weights are multiplied by the likelihood each type assigns to the
    observation and carried unnormalized. With 0/1 likelihoods this reduces
    exactly to the restriction rule of :func:`bayes_update`.
    """
    missing = [i for i, _ in belief.weights if i not in randomized_slice]
    if missing:
        raise ValueError(f"randomized slice undefined for supported types {missing}")
    survivors = []
    for i, w in belief.weights:
        like = as_fraction(randomized_slice[i].get(observed, 0))
        if like < 0 or like > 1:
            raise ValueError(f"likelihood {like} for type {i} outside [0, 1]")
        if like > 0:
            survivors.append((i, w * like))
    if not survivors:
        raise ZeroProbabilityObservation(
            f"observation {observed!r} has zero probability under every supported type"
        )
    return Belief(tuple(survivors))


def reachable_supports(spec: GameSpec) -> set[tuple[int, ...]]:
    """All belief supports reachable by restriction: every non-empty subset.

    Deterministic signalling can split a support arbitrarily over the
    course of play, so the closure is the full power set minus the empty
    set: 2^K - 1 subsets for K types.
    """
    indices = range(len(spec.types))
    out: set[tuple[int, ...]] = set()
    for r in range(1, len(spec.types) + 1):
        out.update(itertools.combinations(indices, r))
    return out
