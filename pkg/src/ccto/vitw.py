"""Interval bags over time and the width-parameterized solver.

A vertex belongs to the bag at time t when it has some arrival at or before
t and some departure at or after t; such membership forms one contiguous
interval, so a vertex leaves the bag sequence at most once. The solver walks
the bags in order keeping, per (current vertex, count of visited vertices
already out of scope, visited subset of the current bag), only the minimum
fuel — small bags mean few states regardless of the lifetime.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import INF, CapabilityError, CctoInstance, TemporalCostGraph
from .result import SolveResult

MAX_BAG_WIDTH = 12


@dataclass
class VitwSequence:
    """Per-time vertex bags (index 0..lifetime) and their maximum size."""

    bags: list
    width: int


def vitw_sequence(graph: TemporalCostGraph) -> VitwSequence:
    """Bags H_t = vertices with an arrival <= t and a departure >= t.

    Vertices missing either side appear in no bag; otherwise membership is
    exactly the interval [earliest arrival, latest departure].
    """
    first_arrival: dict[int, int] = {}
    last_departure: dict[int, int] = {}
    for u, v, depart, arrive, _cost in graph.tuples():
        if depart > last_departure.get(u, -1):
            last_departure[u] = depart
        if arrive < first_arrival.get(v, graph.lifetime + 1):
            first_arrival[v] = arrive
    bags = [set() for _ in range(graph.lifetime + 1)]
    for v, start in first_arrival.items():
        stop = last_departure.get(v, -1)
        for t in range(start, stop + 1):
            bags[t].add(v)
    frozen = [frozenset(bag) for bag in bags]
    return VitwSequence(frozen, max((len(b) for b in frozen), default=0))


def _trivial(instance):
    """Result when the source can never move or the sink never be reached."""
    if instance.source == instance.sink and instance.k == 1:
        return SolveResult(
            feasible=0 <= instance.budget,
            optimal_cost=0,
            witness=[],
            solver="vitw",
            stats={"trivial": True},
        )
    return SolveResult(
        feasible=False,
        optimal_cost=INF,
        witness=None,
        solver="vitw",
        stats={"trivial": True},
    )


def solve_vitw(instance: CctoInstance, max_width: int = MAX_BAG_WIDTH) -> SolveResult:
    """Bag-sequence dynamic program; exact for any instance, fast when the
    bag width is small.

    Times are first shifted so the earliest source departure is 1 and
    truncated after the last arrival at the sink (tuples outside that window
    are unusable). The source and sink are additionally kept in every bag
    the program works with: the source is live before any arrival and the
    sink must stay addressable after its last departure, while every other
    vertex is only ever occupied inside its own interval. The reported bags
    and width follow the two-sided definition unchanged.

    States map (vertex, forgotten-visited count capped at k, visited subset
    of the current bag) to minimum fuel, so the optimal cost is independent
    of the budget; the budget decides feasibility only.
    """
    graph = instance.graph
    source, sink, k = instance.source, instance.sink, instance.k

    source_departs = [m for m in graph.moves_from(source)]
    if not source_departs:
        return _trivial(instance)
    shift = 1 - min(depart for depart, _, _, _ in source_departs)
    shifted = [
        (u, v, depart + shift, arrive + shift, cost)
        for u, v, depart, arrive, cost in graph.tuples()
        if depart + shift >= 1
    ]
    sink_arrivals = [arrive for _, v, _, arrive, _ in shifted if v == sink]
    if not sink_arrivals:
        return _trivial(instance)
    horizon = max(sink_arrivals)
    work = TemporalCostGraph(
        graph.n, [t for t in shifted if t[3] <= horizon]
    )
    sequence = vitw_sequence(work)
    if sequence.width > max_width:
        raise CapabilityError(
            f"bag width {sequence.width} exceeds the cap {max_width}"
        )
    endpoint_mask = (1 << source) | (1 << sink)
    bag_masks = []
    for bag in sequence.bags:
        mask = endpoint_mask
        for v in bag:
            mask |= 1 << v
        bag_masks.append(mask)
    width_eff = max(bin(mask).count("1") for mask in bag_masks)

    moves_at: dict = {}
    for u, v, depart, arrive, cost in work.tuples():
        moves_at.setdefault((u, depart), []).append((arrive, v, cost))

    start_key = (source, 0, 1 << source)
    current = {start_key: 0}
    parents = {(0, start_key): None}
    staged: dict[int, list] = {}
    best, best_at = INF, None
    max_live = 0
    total_states = 0

    for j in range(horizon + 1):
        if j > 0:
            bag = bag_masks[j]
            merged = {}
            merged_from = {}
            for key in sorted(current):
                v, before, mask = key
                if not (bag >> v) & 1:
                    continue
                gone = mask & ~bag
                key2 = (
                    v,
                    min(k, before + bin(gone).count("1")),
                    mask & bag,
                )
                if current[key] < merged.get(key2, INF):
                    merged[key2] = current[key]
                    merged_from[key2] = ((j - 1, key), None)
            for key2, fuel, back in staged.pop(j, ()):
                if fuel < merged.get(key2, INF):
                    merged[key2] = fuel
                    merged_from[key2] = back
            current = merged
            for key2, back in merged_from.items():
                parents[(j, key2)] = back
        current = _prune(current)
        max_live = max(max_live, len(current))
        total_states += len(current)
        for key in sorted(current):
            v, before, mask = key
            fuel = current[key]
            if v == sink and before + bin(mask).count("1") >= k:
                if fuel < best:
                    best, best_at = fuel, (j, key)
            for arrive, w, cost in moves_at.get((v, j), ()):
                bag = bag_masks[arrive]
                if not (bag >> w) & 1:
                    continue
                gone = mask & ~bag
                key2 = (
                    w,
                    min(k, before + bin(gone).count("1")),
                    (mask & bag) | (1 << w),
                )
                staged.setdefault(arrive, []).append(
                    (key2, fuel + cost, ((j, key), (v, w, j, arrive)))
                )

    witness = None
    if best_at is not None:
        steps = []
        node = best_at
        while parents[node] is not None:
            (node, step) = parents[node][0], parents[node][1]
            if step is not None:
                u, w, depart, arrive = step
                steps.append((u, w, depart - shift, arrive - shift))
        steps.reverse()
        witness = steps
    bound = width_eff * (k + 1) * 2**width_eff * (instance.budget + 1)
    assert max_live <= bound, "live states exceeded the width bound"
    return SolveResult(
        feasible=best <= instance.budget,
        optimal_cost=best,
        witness=witness,
        solver="vitw",
        stats={
            "width": sequence.width,
            "width_eff": width_eff,
            "shift": shift,
            "effective_lifetime": horizon,
            "max_live_states": max_live,
            "states": total_states,
            "state_bound": bound,
        },
    )


def _prune(states: dict) -> dict:
    """Drop states beaten on both counters by a sibling with the same
    (vertex, visited subset): more forgotten and no more fuel wins."""
    groups: dict = {}
    for (v, before, mask), fuel in states.items():
        groups.setdefault((v, mask), []).append((before, fuel))
    kept = {}
    for (v, mask), entries in groups.items():
        entries.sort(key=lambda e: (-e[0], e[1]))
        best_fuel = INF
        for before, fuel in entries:
            if fuel < best_fuel:
                kept[(v, before, mask)] = fuel
                best_fuel = fuel
    return kept
