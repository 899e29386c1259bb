"""Colour-order decomposition solvers.

The pipeline: a table of minimum walk costs between all vertex/time pairs,
a dynamic program over walks whose colours first appear in a prescribed
order, a solver for the colourful variant (visit every colour) built on all
orders of the palette, and the full solver that tries colourings of the
inner vertices — every colouring exhaustively, or seeded random draws with
an explicit failure probability.

A walk that must show all k colours visits k distinct vertices, and any
walk through k distinct vertices is colourful under some colouring that
separates those vertices, which is what makes the reduction exact.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .core import INF, CapabilityError, CctoInstance, TemporalCostGraph
from .result import SolveResult, verify_result

MAX_EXHAUSTIVE_COLOURINGS = 1_000_000
DEFAULT_FAILURE_PROB = 1e-3

_CARRY = ("carry",)


@dataclass
class MinWalkTable:
    """Minimum walk costs keyed by (from, to, depart, arrive).

    An entry is the cheapest valid walk whose first move departs exactly
    `depart` and whose last move arrives exactly `arrive`; quadruples with
    no finite walk are absent. Diagonal queries (u, u, t1, t2) with
    t1 <= t2 cost 0 by waiting in place and are answered without storage.
    When built with a restriction, walks may only pass through the allowed
    vertices (the two endpoints are always allowed for their own walks).
    """

    n: int
    horizon: int
    entries: dict
    _parents: dict = field(default_factory=dict, repr=False)

    def cost(self, u, v, t1, t2):
        if u == v and t1 <= t2:
            return 0
        return self.entries.get((u, v, t1, t2), INF)

    def walk(self, u, v, t1, t2):
        """Steps of a minimum walk for the quadruple ([] for diagonals)."""
        if u == v and t1 <= t2:
            return []
        if (u, v, t1, t2) not in self.entries:
            raise ValueError(f"no finite walk for {(u, v, t1, t2)}")
        steps = []
        node = (v, t2)
        while node is not None:
            prev, prev_t, step = self._parents[(u, node[0], t1, node[1])]
            steps.append(step)
            node = None if prev is None else (prev, prev_t)
        steps.reverse()
        return steps


def all_pairs_min_walk(graph: TemporalCostGraph, restrict_to=None) -> MinWalkTable:
    """Minimum-cost walks between all vertex/time quadruples.

    One sweep per (source, departure time): arrivals are settled in time
    order, each stored tuple extends the best arrival at or before its
    departure, and the first move must leave the source at exactly the
    sweep's departure time. With a restriction, intermediate stops are
    confined to the allowed set while the final move may land anywhere.
    """
    n, horizon = graph.n, graph.lifetime
    interior = frozenset(range(n)) if restrict_to is None else frozenset(restrict_to)
    departs_at: dict[int, list] = {}
    for u, v, depart, arrive, cost in graph.tuples():
        departs_at.setdefault(depart, []).append((u, v, arrive, cost))
    entries: dict = {}
    parents: dict = {}

    for u in range(n):
        allowed = interior | {u}
        for t1 in range(horizon):
            # arrive[t][v] = best cost of a confined walk u -> v landing at t
            arrive = [dict() for _ in range(horizon + 1)]

            def settle(x, y, depart, land, cand, origin_t):
                # x is None for a first move (the chain stops there); the
                # recorded step still names the true from-vertex.
                key = (u, y, t1, land)
                step = (u if x is None else x, y, depart, land)
                if y != u and cand < entries.get(key, INF):
                    entries[key] = cand
                    parents[key] = (x, origin_t, step)
                if y in allowed and cand < arrive[land].get(y, INF):
                    arrive[land][y] = cand
                    if y == u:
                        parents[key] = (x, origin_t, step)

            for x, y, land, cost in departs_at.get(t1, ()):
                if x == u:
                    settle(None, y, t1, land, cost, None)
            best: dict = {}
            for d in range(t1 + 1, horizon + 1):
                for v, cost in arrive[d].items():
                    if cost < best.get(v, (INF, None))[0]:
                        best[v] = (cost, d)
                for x, y, land, cost in departs_at.get(d, ()):
                    if x not in best:
                        continue
                    base, origin_t = best[x]
                    settle(x, y, d, land, base + cost, origin_t)
    return MinWalkTable(n, horizon, entries, parents)


def _classes(colouring):
    """colour -> sorted tuple of its vertices."""
    out: dict = {}
    for v in sorted(colouring):
        out.setdefault(colouring[v], []).append(v)
    return {c: tuple(vs) for c, vs in out.items()}


def _prefix_table(graph, allowed, cache):
    if cache is None:
        return all_pairs_min_walk(graph, allowed)
    key = frozenset(allowed)
    if key not in cache:
        cache[key] = all_pairs_min_walk(graph, key)
    return cache[key]


def _ordered_run(graph, classes, order, cache):
    """Fill, colour by colour in `order`, the cheapest cost of reaching each
    vertex of the current colour by each time, with that vertex the first of
    its colour on the walk and all earlier stops of already-placed colours.

    Returns per-step (table, costs, backpointers); costs[v][t] is monotone
    in t (waiting is free), backpointers record either the realizing move
    (previous vertex, its departure time) or a carry from t - 1.
    """
    horizon = graph.lifetime
    source = classes[order[0]][0]
    steps: list = [None]
    prev_costs = {source: [0] * (horizon + 1)}
    placed = set(classes[order[0]])
    prev_class = classes[order[0]]
    for colour in order[1:]:
        table = _prefix_table(graph, placed, cache)
        costs = {}
        bp = {}
        for v in classes.get(colour, ()):
            row = [INF] * (horizon + 1)
            row_bp = [None] * (horizon + 1)
            for t2 in range(1, horizon + 1):
                for vp in prev_class:
                    prow = prev_costs[vp]
                    for t1 in range(t2):
                        if prow[t1] == INF:
                            continue
                        leg = table.cost(vp, v, t1, t2)
                        if leg == INF:
                            continue
                        cand = prow[t1] + leg
                        if cand < row[t2]:
                            row[t2] = cand
                            row_bp[t2] = (vp, t1)
                if row[t2 - 1] < row[t2]:
                    row[t2] = row[t2 - 1]
                    row_bp[t2] = _CARRY
            costs[v] = row
            bp[v] = row_bp
        steps.append((table, costs, bp))
        placed |= set(classes.get(colour, ()))
        prev_class = classes.get(colour, ())
        prev_costs = costs
    return steps


def _rebuild_ordered(steps, order, classes, v, t):
    legs = []
    for i in range(len(order) - 1, 0, -1):
        table, _costs, bp = steps[i]
        while bp[v][t] is _CARRY:
            t -= 1
        vp, t1 = bp[v][t]
        legs.append(table.walk(vp, v, t1, t))
        v, t = vp, t1
    legs.reverse()
    return [step for leg in legs for step in leg]


def ordered_walk_min(graph, colouring, order, _cache=None):
    """Cheapest walk whose colours first appear exactly in `order`.

    `colouring` maps vertices to colours; colour 0 must be exactly one
    vertex (the start), `order` must be a permutation of the used colours
    beginning with 0. Uncoloured vertices are off limits. Returns
    (cost, steps) with steps None when no such walk exists; the walk ends
    at the vertex where the last colour first appeared.
    """
    classes = _classes(colouring)
    _check_colour_zero(classes, order, set(colouring.values()))
    if len(order) == 1:
        return 0, []
    steps = _ordered_run(graph, classes, order, _cache)
    _table, costs, _bp = steps[-1]
    horizon = graph.lifetime
    best, best_v = INF, None
    for v in classes.get(order[-1], ()):
        if costs[v][horizon] < best:
            best, best_v = costs[v][horizon], v
    if best_v is None:
        return INF, None
    return best, _rebuild_ordered(steps, order, classes, best_v, horizon)


def _check_colour_zero(classes, order, used_colours):
    if len(classes.get(0, ())) != 1:
        raise ValueError("colour 0 must be exactly the start vertex")
    if not order or order[0] != 0:
        raise ValueError("colour order must start with colour 0")
    if set(order) != used_colours or len(order) != len(set(order)):
        raise ValueError("colour order must permute the used colours")


def solve_colourful(graph, source, sink, k, colouring, budget, _cache=None) -> SolveResult:
    """Cheapest walk source -> sink showing every colour, k colours total.

    `colouring` covers exactly the inner vertices (everything but source
    and sink) with colours 1..k-2, or 1..k-1 when source = sink. The source
    is colour 0 and a distinct sink the last colour. All orders of the
    non-zero colours are tried — the sink's colour may first appear
    mid-walk, with revisits carrying the walk onward — and each candidate
    ends with an unrestricted final leg to the sink. For k of at most 2
    with distinct endpoints (or 1 when closed) no colours are needed and
    the walk-cost table answers directly.
    """
    if _cache is None:
        _cache = {}
    horizon = graph.lifetime
    inner = set(range(graph.n)) - {source, sink}
    palette = k - 2 if source != sink else k - 1

    if palette <= 0:
        return _direct(graph, source, sink, budget, _cache)

    got = {v: c for v, c in colouring.items()}
    if set(got) != inner:
        raise ValueError("colouring must cover exactly the inner vertices")
    bad = [c for c in got.values() if not (1 <= c <= palette)]
    if bad:
        raise ValueError(
            f"colour {bad[0]} outside the inner palette 1..{palette}"
        )
    full = dict(got)
    full[source] = 0
    if source != sink:
        full[sink] = k - 1
    classes = _classes(full)
    nonzero = sorted(c for c in classes if c != 0)
    order_count = 0
    best = INF
    best_at = None
    if all(classes.get(c) for c in range(1, palette + 1)):
        full_table = _prefix_table(graph, frozenset(range(graph.n)), _cache)
        for tail in itertools.permutations(nonzero):
            order = (0,) + tail
            order_count += 1
            steps = _ordered_run(graph, classes, order, _cache)
            _table, costs, _bp = steps[-1]
            for v in classes[order[-1]]:
                row = costs[v]
                for t1 in range(horizon + 1):
                    if row[t1] == INF:
                        continue
                    for t2 in range(t1, horizon + 1):
                        leg = full_table.cost(v, sink, t1, t2)
                        if leg == INF:
                            continue
                        if row[t1] + leg < best:
                            best = row[t1] + leg
                            best_at = (order, v, t1, t2)
    witness = None
    if best_at is not None:
        order, v, t1, t2 = best_at
        steps = _ordered_run(graph, classes, order, _cache)
        full_table = _prefix_table(graph, frozenset(range(graph.n)), _cache)
        witness = _rebuild_ordered(steps, order, classes, v, t1)
        witness += full_table.walk(v, sink, t1, t2)
    return SolveResult(
        feasible=best <= budget,
        optimal_cost=best,
        witness=witness,
        solver="colourful",
        stats={"orders": order_count, "tables": len(_cache)},
    )


def _direct(graph, source, sink, budget, cache):
    """No inner colours needed: query the walk-cost table directly."""
    table = _prefix_table(graph, frozenset(range(graph.n)), cache)
    if source == sink:
        return SolveResult(
            feasible=True,
            optimal_cost=0,
            witness=[],
            solver="colourful",
            stats={"orders": 0, "direct": True},
        )
    best, best_at = INF, None
    for (u, v, t1, t2), cost in sorted(table.entries.items()):
        if u == source and v == sink and cost < best:
            best, best_at = cost, (t1, t2)
    witness = None
    if best_at is not None:
        witness = table.walk(source, sink, best_at[0], best_at[1])
    return SolveResult(
        feasible=best <= budget,
        optimal_cost=best,
        witness=witness,
        solver="colourful",
        stats={"orders": 0, "direct": True},
    )


def _partitions(count, parts):
    """Assignments of `count` items to exactly `parts` unlabelled groups,
    as tuples of group ids 1..parts in first-use order."""
    assign = [0] * count

    def rec(i, used):
        if count - i < parts - used:
            return
        if i == count:
            yield tuple(assign)
            return
        top = min(used + 1, parts)
        for c in range(1, top + 1):
            assign[i] = c
            yield from rec(i + 1, max(used, c))

    yield from rec(0, 0)


def solve_color_coding(
    instance: CctoInstance,
    mode: str = "exhaustive",
    *,
    trials=None,
    failure_prob: float = DEFAULT_FAILURE_PROB,
    seed=None,
    exhaustive_cap: int = MAX_EXHAUSTIVE_COLOURINGS,
) -> SolveResult:
    """Solve by colouring the inner vertices and taking the best colourful
    answer.

    Exhaustive mode tries every way of splitting the inner vertices into
    exactly as many groups as there are inner colours (colour names do not
    matter because every order is tried) and is exact. Randomized mode
    draws independent uniform colourings: a witness with k distinct
    vertices gets distinct colours with probability at least p!/p^p for p
    inner colours, so ceil(e^p * ln(1/failure_prob)) trials push the miss
    probability below failure_prob. A feasible answer always carries a
    re-validated witness; "infeasible" from randomized mode means no
    witness was found at that confidence.
    """
    graph, source, sink = instance.graph, instance.source, instance.sink
    k, budget = instance.k, instance.budget
    inner = sorted(set(range(graph.n)) - {source, sink})
    palette = k - 2 if source != sink else k - 1
    cache: dict = {}

    if palette <= 0:
        result = solve_colourful(graph, source, sink, k, {}, budget, cache)
        result.stats["mode"] = mode
        return result
    if palette > len(inner):
        return SolveResult(
            feasible=False,
            optimal_cost=INF,
            solver="colorcoding",
            stats={"mode": mode, "reason": "fewer inner vertices than colours"},
        )

    if mode == "exhaustive":
        bound = palette ** len(inner)
        if bound > exhaustive_cap:
            raise CapabilityError(
                f"{bound} colourings exceed the cap {exhaustive_cap}"
            )
        best = None
        colourings = 0
        for assign in _partitions(len(inner), palette):
            colourings += 1
            colouring = dict(zip(inner, assign))
            result = solve_colourful(graph, source, sink, k, colouring, budget, cache)
            if best is None or result.optimal_cost < best.optimal_cost:
                best = result
        best.solver = "colorcoding"
        best.stats = {
            "mode": "exhaustive",
            "colourings": colourings,
            "tables": len(cache),
        }
        return best

    if mode != "randomized":
        raise ValueError(f"unknown mode {mode!r}")
    if seed is None:
        raise ValueError("randomized mode needs a seed")
    if trials is None:
        trials = math.ceil(math.e**palette * math.log(1 / failure_prob))
    if trials < 1:
        raise ValueError("randomized mode needs at least one trial")
    best = None
    used = 0
    for i in range(trials):
        rng = random.Random(seed * 1_000_003 + i)
        colouring = {v: rng.randint(1, palette) for v in inner}
        result = solve_colourful(graph, source, sink, k, colouring, budget, cache)
        used = i + 1
        if best is None or result.optimal_cost < best.optimal_cost:
            best = result
        if best.feasible:
            break
    best.solver = "colorcoding"
    best.stats = {
        "mode": "randomized",
        "trials": trials,
        "trials_used": used,
        "failure_prob": failure_prob,
        "note": (
            "cost is a verified upper bound"
            if best.feasible
            else f"not found (failure prob <= {failure_prob})"
        ),
    }
    if best.feasible:
        verify_result(instance, best)
    return best
