"""Exact solver for the coordinated human-machine routing game.

The asymmetric-information game is reduced to a single-agent problem: a
coordinator picks, for every (node, belief support, period) state, one
machine action plus a human action per supported type. Under deterministic
movement, independent edge costs and the mean-plus-weighted-variance
criterion, the prior-weighted objective decomposes edge by edge, so
backward induction over belief-augmented states is exact; the solver
asserts nothing weaker than rational-number equality with the brute-force
policy enumeration.

Conventions fixed here for reproducibility:

* ties between prescriptions break lexicographically, machine action
  first (N, S, E, W, STOP), then the human action per ascending type
  index (SILENT, N, S, E, W, STOP);
* STOP is absorbing and periods after it cost nothing;
* all arithmetic is on exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .belief_filter import Belief, bayes_update
from .errors import (
    DeviationBudgetError,
    EnumerationGuardError,
    HorizonError,
    SpecValidationError,
    UnsupportedAggregatorError,
)
from .game_model import (
    HUMAN_ACTIONS,
    SILENT,
    STOP,
    Edge,
    GameSpec,
    as_fraction,
    validate_spec,
)
from .risk_measures import EmpiricalOutcome, cvar_aggregate

_HUMAN_RANK = {a: i for i, a in enumerate(HUMAN_ACTIONS)}

DEFAULT_POLICY_GUARD = 10_000_000
DEFAULT_DEVIATION_BUDGET = 1_000_000


@dataclass(frozen=True)
class BeliefState:
    """A coordinator state: position, belief support, and period (1-based)."""

    node: str
    support: tuple[int, ...]
    period: int


@dataclass(frozen=True)
class Prescription:
    """One machine action plus a human action per supported type."""

    machine: str
    human: tuple[tuple[int, str], ...]

    @property
    def human_map(self) -> dict[int, str]:
        return dict(self.human)


@dataclass
class CoordinatorPolicy:
    """Backward-induction output: decisions, values and belief transitions.

    ``decision`` and ``value`` cover every feasible state the solve
    explored (a superset of the on-path states), which is what the
    equilibrium verifier needs to price unilateral deviations.
    ``transitions`` maps (state, observed human action) to the successor
    state, or None when that branch stops.
    """

    root: BeliefState
    decision: dict[BeliefState, Prescription]
    value: dict[BeliefState, Fraction]
    transitions: dict[tuple[BeliefState, str], BeliefState | None]
    weights: dict[int, Fraction]


@dataclass(frozen=True)
class PolicyTree:
    """A deterministic coordinator policy as an explicit decision tree."""

    prescription: Prescription
    children: tuple[tuple[str, "PolicyTree | None"], ...]

    def child(self, signal: str) -> "PolicyTree | None":
        for s, sub in self.children:
            if s == signal:
                return sub
        raise KeyError(signal)


@dataclass(frozen=True)
class OracleResult:
    value: Fraction
    policies: tuple[PolicyTree, ...]
    policy_count: int


@dataclass(frozen=True)
class TypeTrajectory:
    """The deterministic playout of one rider type under a policy."""

    type_index: int
    nodes: tuple[str, ...]
    machine_actions: tuple[str, ...]
    signals: tuple[str, ...]
    effective: tuple[str, ...]
    edges: tuple[Edge, ...]
    overrides: int
    override_periods: tuple[int, ...]
    terminal: str
    stop_period: int
    mean: Fraction
    variance: Fraction
    criterion: Fraction


class _Engine:
    """Shared exact-cost tables for the solver, oracle and verifier."""

    def __init__(self, spec: GameSpec):
        self.spec = spec
        self.T = spec.horizon_T
        self.q = as_fraction(spec.transmission_cost)
        self.thetas = {i: as_fraction(th) for i, th in enumerate(spec.types)}
        self.weights = spec.exact_prior()
        self.support0 = tuple(sorted(self.weights))
        self.dist = spec.steps_to_terminal
        self.edge_dst: dict[tuple[str, str], str] = {}
        self.move_cost: dict[tuple[str, str, int], Fraction] = {}
        self.stop_cost: dict[tuple[str, int], Fraction] = {}
        for node, out in spec.out_edges.items():
            for direction, edge in out.items():
                self.edge_dst[(node, direction)] = edge.dst
                m, v = edge.cost.exact_mean, edge.cost.exact_variance
                for i, th in self.thetas.items():
                    self.move_cost[(node, direction, i)] = m + th * v
        for node, cost in spec.terminals.items():
            m, v = cost.exact_mean, cost.exact_variance
            for i, th in self.thetas.items():
                self.stop_cost[(node, i)] = m + th * v
        self._machine_acts: dict[str, tuple[str, ...]] = {}
        self._human_acts: dict[str, tuple[str, ...]] = {}

    def machine_actions(self, node: str) -> tuple[str, ...]:
        acts = self._machine_acts.get(node)
        if acts is None:
            acts = self.spec.machine_moves(node)
            self._machine_acts[node] = acts
        return acts

    def human_actions(self, node: str) -> tuple[str, ...]:
        acts = self._human_acts.get(node)
        if acts is None:
            acts = self.spec.human_moves(node)
            self._human_acts[node] = acts
        return acts

    def feasible(self, node: str, period: int) -> bool:
        # needs dist moves plus one STOP period inside the horizon
        return self.dist[node] <= self.T - period

    def type_stage(self, i: int, node: str, effective: str, override: bool) -> Fraction:
        """One type's exact stage contribution (fee included on override)."""
        base = (
            self.stop_cost[(node, i)]
            if effective == STOP
            else self.move_cost[(node, effective, i)]
        )
        return (base + self.q) if override else base

    def groups_of(self, support: tuple[int, ...], human_map) -> list[tuple[str, tuple[int, ...]]]:
        """Partition a support by prescribed signal, deterministic order."""
        groups: dict[str, list[int]] = {}
        for i in support:
            groups.setdefault(human_map[i], []).append(i)
        return [(signal, tuple(members)) for signal, members in groups.items()]


class _Solver(_Engine):
    _UNSET = object()

    def __init__(self, spec: GameSpec):
        super().__init__(spec)
        # state -> (value, prescription, children) or None when infeasible
        self.memo: dict[BeliefState, tuple | None] = {}

    def solve_state(self, state: BeliefState) -> Fraction | None:
        entry = self.memo.get(state, self._UNSET)
        if entry is not self._UNSET:
            return entry[0] if entry is not None else None
        node, support, t = state.node, state.support, state.period
        if t > self.T or not self.feasible(node, t):
            self.memo[state] = None
            return None
        best = None
        human_acts = self.human_actions(node)
        for a_m in self.machine_actions(node):
            for combo in itertools.product(human_acts, repeat=len(support)):
                outcome = self._prescription_value(node, t, support, a_m, combo)
                if outcome is None:
                    continue
                val, children = outcome
                if best is None or val < best[0]:
                    best = (val, Prescription(a_m, tuple(zip(support, combo))), children)
        self.memo[state] = best
        return best[0] if best is not None else None

    def _prescription_value(self, node, t, support, a_m, combo):
        groups: dict[str, list[int]] = {}
        for i, a in zip(support, combo):
            groups.setdefault(a, []).append(i)
        total = Fraction(0)
        children: list[tuple[str, BeliefState | None]] = []
        for signal, members in groups.items():
            override = signal != SILENT
            effective = signal if override else a_m
            if effective == STOP:
                for i in members:
                    total += self.weights[i] * self.type_stage(i, node, STOP, override)
                children.append((signal, None))
            else:
                for i in members:
                    total += self.weights[i] * self.type_stage(i, node, effective, override)
                child = BeliefState(self.edge_dst[(node, effective)], tuple(members), t + 1)
                sub = self.solve_state(child)
                if sub is None:
                    return None
                total += sub
                children.append((signal, child))
        return total, tuple(children)


def solve_dp(spec: GameSpec) -> CoordinatorPolicy:
    """Solve the coordinator problem exactly by backward induction.

    Returns the optimal policy over (node, belief support, period) states
    together with its exact value table. The root value equals the
    prior-weighted sum of the per-type realized criteria under the policy.
    Requires the expectation aggregator: only a linear aggregator lets the
    objective decompose across belief splits; route CVaR instances through
    :func:`brute_force_oracle` instead.
    """
    problems = validate_spec(spec)
    if problems:
        raise SpecValidationError(problems)
    if spec.machine_aggregator.kind != "expectation":
        raise UnsupportedAggregatorError(
            "exact backward induction requires the expectation aggregator; "
            "use brute_force_oracle for CVaR instances"
        )
    solver = _Solver(spec)
    root = BeliefState(spec.start_node, solver.support0, 1)
    value = solver.solve_state(root)
    if value is None:
        raise HorizonError(
            f"no terminal reachable and stoppable from {spec.start_node!r} "
            f"within horizon {spec.horizon_T}"
        )
    decision: dict[BeliefState, Prescription] = {}
    values: dict[BeliefState, Fraction] = {}
    transitions: dict[tuple[BeliefState, str], BeliefState | None] = {}
    for state, entry in solver.memo.items():
        if entry is None:
            continue
        val, presc, children = entry
        decision[state] = presc
        values[state] = val
        for signal, child in children:
            transitions[(state, signal)] = child
    return CoordinatorPolicy(
        root=root,
        decision=decision,
        value=values,
        transitions=transitions,
        weights=dict(solver.weights),
    )


class _Oracle(_Engine):
    def __init__(self, spec: GameSpec):
        super().__init__(spec)
        self._prescriptions: dict[BeliefState, list] = {}
        self._counts: dict[BeliefState, int] = {}
        self._subtrees: dict[BeliefState, tuple[PolicyTree, ...]] = {}

    def prescriptions(self, state: BeliefState) -> list:
        """Feasible prescriptions with their child states, canonical order."""
        cached = self._prescriptions.get(state)
        if cached is not None:
            return cached
        node, support, t = state.node, state.support, state.period
        out = []
        if t <= self.T and self.feasible(node, t):
            human_acts = self.human_actions(node)
            for a_m in self.machine_actions(node):
                for combo in itertools.product(human_acts, repeat=len(support)):
                    groups: dict[str, list[int]] = {}
                    for i, a in zip(support, combo):
                        groups.setdefault(a, []).append(i)
                    children: list[tuple[str, BeliefState | None]] = []
                    workable = True
                    for signal, members in groups.items():
                        effective = signal if signal != SILENT else a_m
                        if effective == STOP:
                            children.append((signal, None))
                            continue
                        dst = self.edge_dst[(node, effective)]
                        if not self.feasible(dst, t + 1):
                            workable = False
                            break
                        children.append((signal, BeliefState(dst, tuple(members), t + 1)))
                    if workable:
                        out.append((Prescription(a_m, tuple(zip(support, combo))), tuple(children)))
        self._prescriptions[state] = out
        return out

    def count(self, state: BeliefState) -> int:
        cached = self._counts.get(state)
        if cached is not None:
            return cached
        total = 0
        for _, children in self.prescriptions(state):
            branch = 1
            for _, child in children:
                if child is not None:
                    branch *= self.count(child)
            total += branch
        self._counts[state] = total
        return total

    def subtrees(self, state: BeliefState) -> tuple[PolicyTree, ...]:
        cached = self._subtrees.get(state)
        if cached is not None:
            return cached
        trees = tuple(self.iter_trees(state))
        self._subtrees[state] = trees
        return trees

    def iter_trees(self, state: BeliefState):
        for presc, children in self.prescriptions(state):
            signals = [s for s, _ in children]
            options = [
                self.subtrees(child) if child is not None else (None,)
                for _, child in children
            ]
            for chosen in itertools.product(*options):
                yield PolicyTree(presc, tuple(zip(signals, chosen)))

    def evaluate(self, tree: PolicyTree) -> tuple[Fraction, dict[int, Fraction]]:
        """Forward evaluation: simulate each type and aggregate path totals.

        Deliberately independent of the Bellman recursion; per-type costs
        come from whole-path mean/variance/override aggregation.
        """
        per_type: dict[int, Fraction] = {}
        for i in self.support0:
            mean = Fraction(0)
            var = Fraction(0)
            overrides = 0
            node = self.spec.start_node
            cur: PolicyTree | None = tree
            while True:
                presc = cur.prescription
                a = presc.human_map[i]
                override = a != SILENT
                effective = a if override else presc.machine
                overrides += 1 if override else 0
                if effective == STOP:
                    term = self.spec.terminals[node]
                    mean += term.exact_mean
                    var += term.exact_variance
                    break
                edge = self.spec.out_edges[node][effective]
                mean += edge.cost.exact_mean
                var += edge.cost.exact_variance
                node = edge.dst
                cur = cur.child(a)
            per_type[i] = (mean + self.q * overrides) + self.thetas[i] * var
        agg = self.spec.machine_aggregator
        if agg.kind == "expectation":
            value = sum((self.weights[i] * c for i, c in per_type.items()), start=Fraction(0))
        else:
            outcome = EmpiricalOutcome.of((per_type[i], self.weights[i]) for i in self.support0)
            value = cvar_aggregate(outcome, agg.alpha)
        return value, per_type


def count_deterministic_policies(spec: GameSpec) -> int:
    """Number of deterministic coordinator decision trees for an instance."""
    oracle = _Oracle(spec)
    root = BeliefState(spec.start_node, oracle.support0, 1)
    return oracle.count(root)


def evaluate_policy_tree(spec: GameSpec, tree: PolicyTree) -> tuple[Fraction, dict[int, Fraction]]:
    """Aggregate value and per-type criteria of an explicit decision tree."""
    return _Oracle(spec).evaluate(tree)


def tree_playout(spec: GameSpec, tree: PolicyTree, type_index: int):
    """(edges, signals, override periods, terminal) of one type under a tree."""
    edges: list[Edge] = []
    signals: list[str] = []
    override_periods: list[int] = []
    node = spec.start_node
    cur: PolicyTree | None = tree
    period = 1
    while True:
        presc = cur.prescription
        a = presc.human_map[type_index]
        signals.append(a)
        override = a != SILENT
        if override:
            override_periods.append(period)
        effective = a if override else presc.machine
        if effective == STOP:
            return tuple(edges), tuple(signals), tuple(override_periods), node
        edge = spec.out_edges[node][effective]
        edges.append(edge)
        node = edge.dst
        cur = cur.child(a)
        period += 1


def brute_force_oracle(spec: GameSpec, guard: int = DEFAULT_POLICY_GUARD) -> OracleResult:
    """Exhaustively enumerate coordinator policies and minimize by forward evaluation.

    Ground truth for :func:`solve_dp`, and the solve path for CVaR
    aggregation (which does not decompose across belief splits). Errors out
    when the policy count exceeds ``guard``.
    """
    problems = validate_spec(spec)
    if problems:
        raise SpecValidationError(problems)
    oracle = _Oracle(spec)
    root = BeliefState(spec.start_node, oracle.support0, 1)
    n = oracle.count(root)
    if n == 0:
        raise HorizonError(
            f"no policy can finish from {spec.start_node!r} within horizon {spec.horizon_T}"
        )
    if n > guard:
        raise EnumerationGuardError(
            f"{n} candidate policies exceed the enumeration guard of {guard}", bound=guard
        )
    best_value: Fraction | None = None
    best_trees: list[PolicyTree] = []
    for tree in oracle.iter_trees(root):
        value, _ = oracle.evaluate(tree)
        if best_value is None or value < best_value:
            best_value = value
            best_trees = [tree]
        elif value == best_value:
            best_trees.append(tree)
    return OracleResult(value=best_value, policies=tuple(best_trees), policy_count=n)


def simulate_type(spec: GameSpec, policy: CoordinatorPolicy, type_index: int) -> TypeTrajectory:
    """Deterministic playout of one type under a coordinator policy."""
    if type_index not in policy.weights:
        raise ValueError(f"type {type_index} has no prior weight in this game")
    theta = as_fraction(spec.types[type_index])
    q = as_fraction(spec.transmission_cost)
    state = policy.root
    nodes = [state.node]
    machine_actions: list[str] = []
    signals: list[str] = []
    effective_moves: list[str] = []
    edges: list[Edge] = []
    override_periods: list[int] = []
    mean = Fraction(0)
    var = Fraction(0)
    while True:
        presc = policy.decision.get(state)
        if presc is None:
            raise ValueError(f"policy undefined at reached state {state}")
        a = presc.human_map[type_index]
        override = a != SILENT
        effective = a if override else presc.machine
        machine_actions.append(presc.machine)
        signals.append(a)
        effective_moves.append(effective)
        if override:
            override_periods.append(state.period)
        if effective == STOP:
            term = spec.terminals[state.node]
            mean += term.exact_mean
            var += term.exact_variance
            stop_period = state.period
            terminal = state.node
            break
        edge = spec.out_edges[state.node][effective]
        edges.append(edge)
        mean += edge.cost.exact_mean
        var += edge.cost.exact_variance
        nxt = policy.transitions.get((state, a))
        if nxt is None:
            raise ValueError(f"policy transition missing at {state} for signal {a!r}")
        state = nxt
        nodes.append(state.node)
    overrides = len(override_periods)
    mean += q * overrides
    return TypeTrajectory(
        type_index=type_index,
        nodes=tuple(nodes),
        machine_actions=tuple(machine_actions),
        signals=tuple(signals),
        effective=tuple(effective_moves),
        edges=tuple(edges),
        overrides=overrides,
        override_periods=tuple(override_periods),
        terminal=terminal,
        stop_period=stop_period,
        mean=mean,
        variance=var,
        criterion=mean + theta * var,
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    improvement: Fraction | None = None


@dataclass(frozen=True)
class EquilibriumReport:
    machine_ic: CheckResult
    human_ic: CheckResult
    belief_consistency: CheckResult
    per_type: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return self.machine_ic.passed and self.human_ic.passed and self.belief_consistency.passed


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self, n: int = 1):
        self.used += n
        if self.used > self.limit:
            raise DeviationBudgetError(
                f"deviation search exceeded the budget of {self.limit} explored actions",
                budget=self.limit,
            )


def _machine_best_response(engine: _Engine, policy: CoordinatorPolicy, budget: _Budget):
    """Best machine value against the policy's fixed human decision rules.

    At every reachable state the riders keep signalling per the policy's
    slice there (their rule depends on the public state, not on the
    machine's action), so the machine's unilateral deviations form a
    one-agent problem over the same belief states.
    """
    memo: dict[BeliefState, tuple[Fraction, str] | None] = {}

    def best(state: BeliefState):
        if state in memo:
            return memo[state]
        memo[state] = None  # states outside the solved envelope read as dead ends
        presc = policy.decision.get(state)
        if presc is None or state.period > engine.T:
            return None
        groups = engine.groups_of(state.support, presc.human_map)
        best_entry = None
        for a_m in engine.machine_actions(state.node):
            budget.tick()
            total = Fraction(0)
            workable = True
            for signal, members in groups:
                override = signal != SILENT
                effective = signal if override else a_m
                for i in members:
                    total += policy.weights[i] * engine.type_stage(i, state.node, effective, override)
                if effective != STOP:
                    child = BeliefState(
                        engine.edge_dst[(state.node, effective)], members, state.period + 1
                    )
                    sub = best(child)
                    if sub is None:
                        workable = False
                        break
                    total += sub[0]
            if workable and (best_entry is None or total < best_entry[0]):
                best_entry = (total, a_m)
        memo[state] = best_entry
        return best_entry

    root_entry = best(policy.root)
    if root_entry is None:
        return None, ""
    # describe the deviation by walking the argmin actions forward
    moves: list[tuple[int, str, str]] = []
    queue = [policy.root]
    seen = set()
    while queue:
        state = queue.pop(0)
        if state in seen:
            continue
        seen.add(state)
        entry = memo.get(state)
        presc = policy.decision.get(state)
        if entry is None or presc is None:
            continue
        _, a_m = entry
        if a_m != presc.machine:
            moves.append((state.period, state.node, a_m))
        for signal, members in engine.groups_of(state.support, presc.human_map):
            effective = signal if signal != SILENT else a_m
            if effective != STOP:
                queue.append(
                    BeliefState(engine.edge_dst[(state.node, effective)], members, state.period + 1)
                )
    detail = "; ".join(f"period {p} at node {n!r}: play {a}" for p, n, a in moves)
    return root_entry[0], detail


def _human_best_response(
    engine: _Engine, policy: CoordinatorPolicy, type_index: int, budget: _Budget
):
    """Best value one rider type can reach by deviating to on-path signals.

    The machine keeps playing the policy and keeps filtering beliefs
    through the equilibrium slice, so the deviator can only send signals
    that have positive probability there (mimicking some supported type,
    or riding silent where silence is prescribed). Off-path observations
    are outside the filter's domain and are not searched.
    """
    theta = engine.thetas[type_index]
    memo: dict[BeliefState, tuple[Fraction, str] | None] = {}

    def best(state: BeliefState):
        if state in memo:
            return memo[state]
        memo[state] = None
        presc = policy.decision.get(state)
        if presc is None or state.period > engine.T:
            return None
        slice_map = presc.human_map
        signals = sorted(set(slice_map.values()), key=_HUMAN_RANK.__getitem__)
        best_entry = None
        for a in signals:
            budget.tick()
            override = a != SILENT
            effective = a if override else presc.machine
            stage = engine.type_stage(type_index, state.node, effective, override)
            if effective == STOP:
                cand = stage
            else:
                child = policy.transitions.get((state, a))
                if child is None:
                    continue
                sub = best(child)
                if sub is None:
                    continue
                cand = stage + sub[0]
            if best_entry is None or cand < best_entry[0]:
                best_entry = (cand, a)
        memo[state] = best_entry
        return best_entry

    root_entry = best(policy.root)
    if root_entry is None:
        return None, ""
    # walk the argmin signals for the counterexample description
    chosen: list[tuple[int, str, str]] = []
    state = policy.root
    while True:
        entry = memo.get(state)
        if entry is None:
            break
        _, a = entry
        chosen.append((state.period, state.node, a))
        presc = policy.decision[state]
        effective = a if a != SILENT else presc.machine
        if effective == STOP:
            break
        state = policy.transitions[(state, a)]
    detail = ", ".join(f"({p}, {n!r}, {a})" for p, n, a in chosen)
    return root_entry[0], detail


def _check_belief_consistency(spec: GameSpec, policy: CoordinatorPolicy) -> CheckResult:
    """Recompute every on-path belief transition through the Bayes filter."""
    weights = policy.weights
    queue = [policy.root]
    seen: set[BeliefState] = set()
    while queue:
        state = queue.pop(0)
        if state in seen:
            continue
        seen.add(state)
        presc = policy.decision.get(state)
        if presc is None:
            return CheckResult(
                "belief_consistency", False, f"policy undefined at reachable state {state}"
            )
        slice_map = presc.human_map
        belief = Belief.from_weights({i: weights[i] for i in state.support})
        for signal in sorted(set(slice_map.values()), key=_HUMAN_RANK.__getitem__):
            updated = bayes_update(belief, signal, slice_map)
            effective = signal if signal != SILENT else presc.machine
            key = (state, signal)
            if key not in policy.transitions:
                return CheckResult(
                    "belief_consistency",
                    False,
                    f"transition missing at {state} for observed {signal!r}",
                )
            stored = policy.transitions[key]
            if effective == STOP:
                if stored is not None:
                    return CheckResult(
                        "belief_consistency",
                        False,
                        f"{state} observed {signal!r}: branch stops but successor {stored} stored",
                    )
                continue
            edge = spec.out_edges[state.node].get(effective)
            if edge is None:
                return CheckResult(
                    "belief_consistency",
                    False,
                    f"{state}: effective move {effective!r} has no edge",
                )
            expected = BeliefState(edge.dst, tuple(sorted(updated.support)), state.period + 1)
            if stored != expected:
                return CheckResult(
                    "belief_consistency",
                    False,
                    f"first inconsistent step: {state} observed {signal!r}: "
                    f"stored {stored}, filter gives {expected}",
                )
            queue.append(stored)
    return CheckResult("belief_consistency", True, "all on-path updates match the filter")


def verify_equilibrium(
    spec: GameSpec,
    policy: CoordinatorPolicy,
    deviation_budget: int = DEFAULT_DEVIATION_BUDGET,
) -> EquilibriumReport:
    """Check that a coordinator policy is an equilibrium of the two-agent game.

    Three conditions: (I) no unilateral machine deviation lowers the
    prior-weighted criterion while the riders keep their decision rules;
    (II) no rider type can lower its own criterion by deviating, with the
    machine still filtering beliefs through the equilibrium slice; (III)
    every on-path belief transition matches the Bayes restriction filter.
    The deviation search is budgeted by explored (state, action) pairs and
    raises DeviationBudgetError beyond ``deviation_budget``.
    """
    engine = _Engine(spec)
    budget = _Budget(deviation_budget)
    root_value = policy.value[policy.root]

    best_m, detail_m = _machine_best_response(engine, policy, budget)
    if best_m is None:
        machine_ic = CheckResult("machine_ic", False, "machine best response is undefined")
    else:
        gain = root_value - best_m
        if gain > 0:
            machine_ic = CheckResult(
                "machine_ic",
                False,
                f"machine deviation lowers the objective from {root_value} to {best_m}: {detail_m}",
                improvement=gain,
            )
        else:
            machine_ic = CheckResult(
                "machine_ic", True, "no improving machine deviation", improvement=Fraction(0)
            )

    per_type: list[CheckResult] = []
    for i in sorted(policy.weights):
        name = f"human_ic[type {i}]"
        try:
            eq_value = simulate_type(spec, policy, i).criterion
        except (KeyError, ValueError) as exc:
            per_type.append(
                CheckResult(name, False, f"equilibrium playout undefined for type {i}: {exc}")
            )
            continue
        best_h, detail_h = _human_best_response(engine, policy, i, budget)
        if best_h is None:
            per_type.append(CheckResult(name, False, "human best response undefined"))
            continue
        gain = eq_value - best_h
        if gain > 0:
            per_type.append(
                CheckResult(
                    name,
                    False,
                    f"type {i} lowers its criterion from {eq_value} to {best_h} "
                    f"via signals {detail_h}",
                    improvement=gain,
                )
            )
        else:
            per_type.append(
                CheckResult(name, True, "no improving deviation", improvement=Fraction(0))
            )
    human_ic = CheckResult(
        "human_ic",
        all(c.passed for c in per_type),
        "; ".join(f"{c.name}: {'ok' if c.passed else c.detail}" for c in per_type),
    )

    belief_consistency = _check_belief_consistency(spec, policy)
    return EquilibriumReport(
        machine_ic=machine_ic,
        human_ic=human_ic,
        belief_consistency=belief_consistency,
        per_type=tuple(per_type),
    )
