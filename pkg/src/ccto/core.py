"""Temporal cost graphs, valid walks, and problem instances.

A temporal cost graph on vertices 0..n-1 assigns a fuel cost to every
quadruple (from, to, depart, arrive) over the time domain {0, ..., T}.
Only finitely many quadruples carry a finite positive cost; these are
stored explicitly and everything else follows the defaults: waiting at
a vertex is free (cost 0 whenever depart < arrive), and any other
movement, including travel backwards in time, is impossible (Infinite).

Graphs are immutable after construction and safe to share between
threads; all query methods are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

INF = math.inf

# Largest cost accepted on a stored tuple. Sums of stored costs may exceed
# this (Python ints do not wrap); the bound only guards serialized inputs.
COST_MAX = 2**64 - 1

# One movement of a walk: (from, to, depart, arrive). Waiting steps have
# from == to; stored graph tuples always have from != to.
Step = tuple[int, int, int, int]
Walk = list  # list[Step]


class NotApplicableError(ValueError):
    """A specialized solver's structural precondition does not hold."""


class CapabilityError(RuntimeError):
    """An instance exceeds a solver's configured size cap."""


class TemporalCostGraph:
    """Finite set of costed movement tuples over a common vertex set.

    Args:
        n: number of vertices (ids 0..n-1).
        tuples: iterable of (from, to, depart, arrive, cost) with
            from != to, 0 <= depart < arrive, and 1 <= cost <= COST_MAX.
        names: optional mapping from vertex id to display name.

    Raises:
        ValueError: on malformed or duplicate tuples.
    """

    __slots__ = ("n", "names", "_cost", "_by_source", "_edges", "lifetime")

    def __init__(self, n: int, tuples: Iterable[tuple], names: Optional[dict] = None):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"vertex count must be a positive integer, got {n!r}")
        self.n = n
        self.names = dict(names) if names else {}
        for vid in self.names:
            self._check_vertex(vid)
        cost_map: dict[tuple[int, int, int, int], int] = {}
        for item in tuples:
            u, v, depart, arrive, cost = item
            for value in (u, v, depart, arrive, cost):
                if not isinstance(value, int):
                    raise ValueError(f"non-integer field in tuple {item!r}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"vertex out of range in tuple {item!r}")
            if u == v:
                raise ValueError(f"self-loop tuple {item!r}; waiting is implicit")
            if not (0 <= depart < arrive):
                raise ValueError(f"need 0 <= depart < arrive in tuple {item!r}")
            if not (1 <= cost <= COST_MAX):
                raise ValueError(f"cost must be in [1, 2^64-1] in tuple {item!r}")
            key = (u, v, depart, arrive)
            if key in cost_map:
                raise ValueError(f"duplicate tuple key {key}")
            cost_map[key] = cost
        self._cost = cost_map
        self.lifetime = max((key[3] for key in cost_map), default=0)
        by_source: dict[int, list[tuple[int, int, int, int]]] = {}
        edges = set()
        for (u, v, depart, arrive), cost in cost_map.items():
            by_source.setdefault(u, []).append((depart, arrive, v, cost))
            edges.add((u, v) if u < v else (v, u))
        for moves in by_source.values():
            moves.sort()
        self._by_source = by_source
        self._edges = frozenset(edges)

    def _check_vertex(self, v) -> None:
        if not isinstance(v, int) or not (0 <= v < self.n):
            raise ValueError(f"vertex id {v!r} out of range [0, {self.n})")

    def cost(self, u: int, v: int, depart: int, arrive: int):
        """Cost of moving from u to v departing/arriving at the given times.

        Returns 0 for waiting (u == v, depart < arrive), the stored cost for
        a stored tuple, and INF otherwise. Vertex ids are checked; times may
        be any integers (out-of-order times are simply Infinite).
        """
        self._check_vertex(u)
        self._check_vertex(v)
        if depart >= arrive:
            return INF
        if u == v:
            return 0
        return self._cost.get((u, v, depart, arrive), INF)

    def tuples(self) -> Iterator[tuple[int, int, int, int, int]]:
        """Stored tuples as (from, to, depart, arrive, cost), sorted."""
        for key in sorted(self._cost):
            yield key + (self._cost[key],)

    def tuple_count(self) -> int:
        return len(self._cost)

    def moves_from(self, u: int) -> list[tuple[int, int, int, int]]:
        """Stored tuples leaving u, as (depart, arrive, to, cost), sorted."""
        return self._by_source.get(u, [])

    @property
    def edges(self) -> frozenset:
        """Underlying static edges as (min_id, max_id) pairs."""
        return self._edges

    def neighbors(self, u: int) -> set:
        self._check_vertex(u)
        out = set()
        for a, b in self._edges:
            if a == u:
                out.add(b)
            elif b == u:
                out.add(a)
        return out

    def is_connected(self) -> bool:
        """Connectivity of the underlying static graph (informational)."""
        if self.n == 1:
            return True
        adjacency: dict[int, set] = {v: set() for v in range(self.n)}
        for a, b in self._edges:
            adjacency[a].add(b)
            adjacency[b].add(a)
        seen = {0}
        stack = [0]
        while stack:
            for w in adjacency[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def is_tree(self) -> bool:
        return len(self._edges) == self.n - 1 and self.is_connected()

    def max_traversal_number(self, u: int, v: int) -> int:
        """Longest chain of usable time pairs on the edge {u, v}.

        A time pair (t1, t2) is usable if either direction of the edge has a
        stored tuple at those times; a chain requires each pair to depart no
        earlier than the previous pair arrives. Computed greedily over pairs
        sorted by arrival (classic activity selection).

        Raises:
            ValueError: if {u, v} is not an edge of the graph.
        """
        self._check_vertex(u)
        self._check_vertex(v)
        edge = (u, v) if u < v else (v, u)
        if edge not in self._edges:
            raise ValueError(f"{{{u}, {v}}} is not an edge of the graph")
        pairs = set()
        for a, b in ((u, v), (v, u)):
            for key in self._cost:
                if key[0] == a and key[1] == b:
                    pairs.add((key[2], key[3]))
        count = 0
        frontier = -1
        for depart, arrive in sorted(pairs, key=lambda p: (p[1], p[0])):
            if depart >= frontier:
                count += 1
                frontier = arrive
        return count


@dataclass(frozen=True)
class WalkReport:
    """Outcome of validating a walk; `step_index` locates the first failure."""

    ok: bool
    reason: Optional[str] = None
    step_index: Optional[int] = None


def validate_walk(graph: TemporalCostGraph, walk: list, anchor: int) -> WalkReport:
    """Check that `walk` is a valid walk of `graph` starting at `anchor`.

    A valid walk is a sequence of steps (from, to, depart, arrive) where each
    step has finite cost under the graph's accessor, consecutive steps chain
    on vertices (to == next from) and times (arrive <= next depart), and the
    first step leaves the anchor. The empty walk is valid at any anchor.
    """
    graph._check_vertex(anchor)
    previous = None
    for index, step in enumerate(walk):
        if len(step) != 4:
            return WalkReport(False, f"step {step!r} is not a quadruple", index)
        u, v, depart, arrive = step
        try:
            step_cost = graph.cost(u, v, depart, arrive)
        except ValueError as exc:
            return WalkReport(False, str(exc), index)
        if depart >= arrive:
            return WalkReport(False, f"step {step!r} does not advance time", index)
        if step_cost == INF:
            return WalkReport(False, f"step {step!r} has infinite cost", index)
        if previous is None:
            if u != anchor:
                return WalkReport(False, f"first step leaves {u}, anchor is {anchor}", index)
        else:
            if u != previous[1]:
                return WalkReport(False, f"step {step!r} does not chain on vertex {previous[1]}", index)
            if depart < previous[3]:
                return WalkReport(False, f"step {step!r} departs before arrival at {previous[3]}", index)
        previous = step
    return WalkReport(True)


def walk_cost(graph: TemporalCostGraph, walk: list):
    """Total cost of a valid walk (0 for the empty walk).

    Raises:
        ValueError: if the walk does not validate from its own first vertex.
    """
    if not walk:
        return 0
    report = validate_walk(graph, walk, walk[0][0])
    if not report.ok:
        raise ValueError(f"invalid walk at step {report.step_index}: {report.reason}")
    return sum(graph.cost(*step) for step in walk)


def distinct_vertices(walk: list, anchor: int) -> int:
    """Number of distinct vertices visited: anchor plus endpoints of moves."""
    seen = {anchor}
    for u, v, _, _ in walk:
        if u != v:
            seen.add(u)
            seen.add(v)
    return len(seen)


@dataclass(frozen=True)
class CctoInstance:
    """A temporal orienteering query against a temporal cost graph.

    Asks for a walk from source to sink that visits at least k distinct
    vertices (source and sink are counted) at total cost at most budget.
    """

    graph: TemporalCostGraph
    source: int
    sink: int
    k: int
    budget: int

    def __post_init__(self):
        self.graph._check_vertex(self.source)
        self.graph._check_vertex(self.sink)
        # k above n is allowed and simply infeasible; queries like "visit 5
        # distinct vertices of a 3-vertex graph" must be representable.
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if not isinstance(self.budget, int) or self.budget < 0:
            raise ValueError(f"budget must be a non-negative integer, got {self.budget!r}")
