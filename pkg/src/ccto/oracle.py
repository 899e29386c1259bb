"""Exhaustive reference solvers, trusted by everything else.

Deliberately simple: a label-setting sweep over (vertex, time, visited-set)
states for whole instances, and a memo-free DFS for pairwise min-cost walk
queries. Both refuse inputs large enough to make exhaustion dubious.
"""

from __future__ import annotations

from .core import INF, CapabilityError, CctoInstance, TemporalCostGraph
from .result import SolveResult

MAX_ORACLE_VERTICES = 14
MAX_WALK_ORACLE_VERTICES = 8
MAX_WALK_ORACLE_LIFETIME = 10


def solve_exact(instance: CctoInstance) -> SolveResult:
    """Solve an instance by dynamic programming over visited-vertex sets.

    States are (vertex, arrival time, visited bitmask) with minimal cost;
    every transition strictly increases time, so one ascending sweep settles
    all labels. Optimal cost is independent of the budget; the budget only
    decides feasibility. Deterministic: states and moves are expanded in
    sorted order and labels improve strictly.
    """
    graph = instance.graph
    if graph.n > MAX_ORACLE_VERTICES:
        raise CapabilityError(
            f"exhaustive solver handles at most {MAX_ORACLE_VERTICES} vertices, "
            f"got {graph.n}"
        )
    start = (instance.source, 0, 1 << instance.source)
    labels = {start: 0}
    parent: dict = {}
    by_time: dict[int, set] = {0: {start}}
    for t in range(graph.lifetime + 1):
        for state in sorted(by_time.get(t, ())):
            v, _, mask = state
            base = labels[state]
            for depart, arrive, w, cost in graph.moves_from(v):
                if depart < t:
                    continue
                nxt = (w, arrive, mask | (1 << w))
                candidate = base + cost
                if candidate < labels.get(nxt, INF):
                    labels[nxt] = candidate
                    parent[nxt] = (state, (v, w, depart, arrive))
                    by_time.setdefault(arrive, set()).add(nxt)
    best = INF
    best_state = None
    if instance.source == instance.sink and instance.k == 1:
        best, best_state = 0, start
    for state in sorted(labels):
        v, _, mask = state
        if v != instance.sink or bin(mask).count("1") < instance.k:
            continue
        if labels[state] < best:
            best, best_state = labels[state], state
    witness = None
    if best_state is not None:
        steps = []
        node = best_state
        while node != start:
            node, step = parent[node]
            steps.append(step)
        steps.reverse()
        witness = steps
    return SolveResult(
        feasible=best <= instance.budget,
        optimal_cost=best,
        witness=witness,
        solver="oracle",
        stats={"states": len(labels)},
    )


def min_cost_walk_oracle(
    graph: TemporalCostGraph, u: int, v: int, t1: int, t2: int
):
    """Min cost of a walk u -> v departing exactly t1, arriving exactly t2.

    The first movement step must leave at t1 and the last must land at t2;
    waiting is free, so u == v with t1 <= t2 costs 0. Enumerates every chain
    of stored tuples by depth-first search, no memoization — this is the
    independent yardstick for the shared-subwalk tables elsewhere.
    """
    if graph.n > MAX_WALK_ORACLE_VERTICES:
        raise CapabilityError(
            f"walk oracle handles at most {MAX_WALK_ORACLE_VERTICES} vertices, "
            f"got {graph.n}"
        )
    if graph.lifetime > MAX_WALK_ORACLE_LIFETIME:
        raise CapabilityError(
            f"walk oracle handles lifetimes up to {MAX_WALK_ORACLE_LIFETIME}, "
            f"got {graph.lifetime}"
        )
    graph._check_vertex(u)
    graph._check_vertex(v)
    if u == v and t1 <= t2:
        return 0
    if t1 >= t2:
        return INF

    best = [INF]

    def explore(here: int, ready: int, spent: int) -> None:
        if here == v and ready == t2 and spent < best[0]:
            best[0] = spent
        for depart, arrive, w, cost in graph.moves_from(here):
            if depart >= ready and arrive <= t2:
                explore(w, arrive, spent + cost)

    for depart, arrive, w, cost in graph.moves_from(u):
        if depart == t1 and arrive <= t2:
            explore(w, arrive, cost)
    return best[0]
