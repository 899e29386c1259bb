"""Exact solvers exploiting tree shape or tuple sparsity.

Three label DPs over (vertex, time, bookkeeping) states, each polynomial
where the general problem is hard because structure limits how often a walk
can re-enter territory it has already counted:

- solve_tree_closed: closed walks on a tree whose edges all admit at most
  three traversals. A closed tree walk crosses each edge an even number of
  times, so at most twice, so arcs pointing away from the source are exactly
  the first visits and a saturating counter suffices.
- solve_subforest: open or closed walks on a tree where edges crossable more
  than three times form a designated subforest. Subforest edges carry
  per-path high-water marks that admit increments only for genuinely new
  vertices; the remaining edges use +1/-1 bookkeeping that nets exactly one
  increment per used edge.
- solve_sparse_triples: any graph where each vertex touches at most three
  stored tuples, which caps every vertex (bar the endpoints, handled
  specially) at a single visit.

All report the budget-independent optimal cost with a witness walk and raise
NotApplicableError when their structural precondition fails.
"""

from __future__ import annotations

from collections import deque

from .core import INF, CctoInstance, NotApplicableError, TemporalCostGraph
from .result import SolveResult

MAX_SUBFOREST_PATHS = 4


def _label_sweep(graph, start, step):
    """Settle min-cost labels over time-layered states.

    States are tuples starting (vertex, arrival_time, ...); `step` maps a
    settled state and a stored move (depart, arrive, to, cost) to the next
    state, or None to drop the transition. Every move strictly increases
    time, so one ascending sweep settles everything; sorted iteration and
    strict improvement keep backpointers deterministic.
    """
    labels = {start: 0}
    parent = {}
    by_time = {start[1]: {start}}
    for t in range(graph.lifetime + 1):
        for state in sorted(by_time.get(t, ())):
            base = labels[state]
            v = state[0]
            for move in graph.moves_from(v):
                if move[0] < t:
                    continue
                nxt = step(state, move)
                if nxt is None:
                    continue
                candidate = base + move[3]
                if candidate < labels.get(nxt, INF):
                    labels[nxt] = candidate
                    parent[nxt] = (state, (v, move[2], move[0], move[1]))
                    by_time.setdefault(move[1], set()).add(nxt)
    return labels, parent


def _best_accepted(labels, accept):
    best, best_state = INF, None
    for state in sorted(labels):
        if labels[state] < best and accept(state):
            best, best_state = labels[state], state
    return best, best_state


def _rebuild(parent, start, state):
    steps = []
    while state != start:
        state, step = parent[state]
        steps.append(step)
    steps.reverse()
    return steps


def _tree_parents(graph: TemporalCostGraph, root: int) -> dict:
    """Parent map of the tree rooted at `root` (root maps to None)."""
    parent = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in graph.neighbors(u):
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return parent


def _tree_depths(graph: TemporalCostGraph, root: int) -> dict:
    depth = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in graph.neighbors(u):
            if w not in depth:
                depth[w] = depth[u] + 1
                queue.append(w)
    return depth


def _require_tree(graph):
    if not graph.is_tree():
        raise NotApplicableError("the underlying graph is not a tree")


def _check_tree_closed(instance: CctoInstance):
    _require_tree(instance.graph)
    if instance.source != instance.sink:
        raise NotApplicableError("closed-walk solver needs source = sink")
    for u, v in sorted(instance.graph.edges):
        number = instance.graph.max_traversal_number(u, v)
        if number > 3:
            raise NotApplicableError(
                f"edge ({u}, {v}) admits {number} traversals, more than 3"
            )


def tree_closed_applicable(instance: CctoInstance) -> bool:
    try:
        _check_tree_closed(instance)
    except NotApplicableError:
        return False
    return True


def solve_tree_closed(instance: CctoInstance) -> SolveResult:
    """Closed tree walks with all traversal numbers at most 3.

    A walk from the source back to itself crosses each tree edge an even
    number of times, hence at most twice here: once away from the source,
    once back. Away arcs therefore enter each vertex at most once and are
    the exact moments a new vertex is counted. The counter starts at 1 (the
    source itself is counted) and saturates at k.
    """
    _check_tree_closed(instance)
    graph, k = instance.graph, instance.k
    parent = _tree_parents(graph, instance.source)
    start = (instance.source, 0, 1)

    def step(state, move):
        v, _, count = state
        _, arrive, w, _cost = move
        if parent.get(w) == v:
            return (w, arrive, min(count + 1, k))
        return (w, arrive, count)

    labels, parents = _label_sweep(graph, start, step)
    best, best_state = _best_accepted(
        labels, lambda s: s[0] == instance.source and s[2] == k
    )
    witness = None if best_state is None else _rebuild(parents, start, best_state)
    return SolveResult(
        feasible=best <= instance.budget,
        optimal_cost=best,
        witness=witness,
        solver="tree_closed",
        stats={
            "states": len(labels),
            "state_space": graph.n * (graph.lifetime + 1) * (k + 1),
        },
    )


def partition_forest_paths(graph: TemporalCostGraph, subforest, source: int):
    """Split subforest edges into vertex paths, each ending at a leaf.

    Each connected piece of the subforest is rooted at its vertex nearest
    the source in the tree. Leaves (childless vertices of the rooted piece)
    are processed in vertex-id order; each walks up toward the root until it
    meets an already covered edge or the root, producing one path written
    top-first. Every subforest edge lands in exactly one path; the first
    vertex of a path may be shared with an earlier one.
    """
    _require_tree(graph)
    edges = set()
    adjacency: dict[int, list] = {}
    for u, v in subforest:
        edge = (min(u, v), max(u, v))
        if edge not in graph.edges:
            raise ValueError(f"subforest edge {edge} is not an edge of the graph")
        if edge in edges:
            continue
        edges.add(edge)
        adjacency.setdefault(edge[0], []).append(edge[1])
        adjacency.setdefault(edge[1], []).append(edge[0])
    depth = _tree_depths(graph, source)
    paths = []
    assigned = set()
    for first in sorted(adjacency):
        if first in assigned:
            continue
        component = {first}
        queue = deque([first])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if w not in component:
                    component.add(w)
                    queue.append(w)
        assigned |= component
        root = min(component, key=lambda v: (depth[v], v))
        cparent = {root: None}
        children = {v: 0 for v in component}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if w not in cparent:
                    cparent[w] = u
                    children[u] += 1
                    queue.append(w)
        covered = set()
        for leaf in sorted(v for v in component if v != root and not children[v]):
            chain = [leaf]
            v = leaf
            while v != root:
                up = cparent[v]
                edge = (min(v, up), max(v, up))
                if edge in covered:
                    break
                covered.add(edge)
                chain.append(up)
                v = up
            chain.reverse()
            paths.append(chain)
        if len(covered) != len(component) - 1:
            raise AssertionError("leaf paths failed to cover the component")
    return paths


def _check_subforest(instance, edges, paths, max_paths):
    if len(paths) > max_paths:
        raise NotApplicableError(
            f"subforest has {len(paths)} leaf paths, cap is {max_paths}"
        )
    for u, v in sorted(instance.graph.edges):
        if (u, v) in edges:
            continue
        number = instance.graph.max_traversal_number(u, v)
        if number > 3:
            raise NotApplicableError(
                f"edge ({u}, {v}) outside the subforest admits {number} "
                "traversals, more than 3"
            )


def subforest_applicable(instance, subforest=(), max_paths=MAX_SUBFOREST_PATHS):
    try:
        if not instance.graph.is_tree():
            return False
        edges = {(min(u, v), max(u, v)) for u, v in subforest}
        paths = partition_forest_paths(instance.graph, edges, instance.source)
        _check_subforest(instance, edges, paths, max_paths)
    except (NotApplicableError, ValueError):
        return False
    return True


def solve_subforest(
    instance: CctoInstance, subforest=(), max_paths=MAX_SUBFOREST_PATHS
) -> SolveResult:
    """Tree walks where only the subforest edges may be crossed freely.

    Every edge outside the subforest needs a traversal number of at most 3.
    Used non-subforest edges then follow forced crossing patterns (pairs
    away-then-toward off the source-sink path; toward or
    toward-away-toward on it), so counting +1 on arrivals toward the sink
    and -1 on path arrivals away from it nets exactly one new vertex per
    used edge. Subforest edges may be recrossed arbitrarily often, so each
    decomposition path carries a high-water mark of its deepest visited
    position and only arrivals beyond the mark count as new. The counter
    starts at 1 for the source and saturates at k; every transient dip is
    repaid before the walk can reach the sink, so accepting states with
    counter exactly k at the sink is exact.
    """
    graph, k = instance.graph, instance.k
    _require_tree(graph)
    edges = {(min(u, v), max(u, v)) for u, v in subforest}
    paths = partition_forest_paths(graph, edges, instance.source)
    _check_subforest(instance, edges, paths, max_paths)

    position = []
    edge_path = {}
    for j, path in enumerate(paths):
        position.append({v: i + 1 for i, v in enumerate(path)})
        for a, b in zip(path, path[1:]):
            edge_path[(min(a, b), max(a, b))] = j

    toward_sink = _tree_parents(graph, instance.sink)
    anchor_edges = set()
    v = instance.source
    while v != instance.sink:
        up = toward_sink[v]
        anchor_edges.add((min(v, up), max(v, up)))
        v = up

    start = (instance.source, 0, 1, (0,) * len(paths))

    def step(state, move):
        v, _, q, marks = state
        _, arrive, w, _cost = move
        edge = (v, w) if v < w else (w, v)
        j = edge_path.get(edge)
        if j is not None:
            pos = position[j][w]
            fresh = pos > marks[j]
            q2 = min(q + 1, k) if fresh else q
            if pos >= 2 and pos > marks[j]:
                marks = marks[:j] + (pos,) + marks[j + 1 :]
            return (w, arrive, q2, marks)
        if toward_sink.get(v) == w:
            return (w, arrive, min(q + 1, k), marks)
        q2 = q - 1 if edge in anchor_edges else q
        if q2 < 0:
            return None
        return (w, arrive, q2, marks)

    labels, parents = _label_sweep(graph, start, step)
    best, best_state = _best_accepted(
        labels, lambda s: s[0] == instance.sink and s[2] == k
    )
    witness = None if best_state is None else _rebuild(parents, start, best_state)
    mark_space = 1
    for path in paths:
        mark_space *= len(path)
    return SolveResult(
        feasible=best <= instance.budget,
        optimal_cost=best,
        witness=witness,
        solver="subforest",
        stats={
            "states": len(labels),
            "paths": len(paths),
            "state_space": graph.n * (graph.lifetime + 1) * (k + 1) * mark_space,
        },
    )


def _check_sparse_triples(graph: TemporalCostGraph):
    counts = [0] * graph.n
    for u, v, _, _, _ in graph.tuples():
        counts[u] += 1
        counts[v] += 1
    for vertex, count in enumerate(counts):
        if count > 3:
            label = graph.names.get(vertex, str(vertex))
            raise NotApplicableError(
                f"vertex {label} participates in {count} stored tuples, "
                "more than 3"
            )


def sparse_triples_applicable(graph: TemporalCostGraph) -> bool:
    try:
        _check_sparse_triples(graph)
    except NotApplicableError:
        return False
    return True


def solve_sparse_triples(instance: CctoInstance) -> SolveResult:
    """Any graph where each vertex touches at most three stored tuples.

    A walk uses each stored tuple at most once (departure times strictly
    increase), so a mid-walk visit consumes two of a vertex's three tuple
    slots: interior vertices are visited at most once and every arrival at
    one counts a new vertex. The endpoints get special treatment — with
    three slots the source can be left, re-entered and left again, and the
    sink entered, left and re-entered — so arrivals at the source never
    count (it is pre-counted) and arrivals at the sink count once, tracked
    by a flag.
    """
    _check_sparse_triples(instance.graph)
    graph, k = instance.graph, instance.k
    source, sink = instance.source, instance.sink
    closed = source == sink
    start = (source, 0, 1) if closed else (source, 0, 1, False)

    def step(state, move):
        _, arrive, w, _cost = move
        if closed:
            count = state[2]
            if w != source:
                count = min(count + 1, k)
            return (w, arrive, count)
        count, seen = state[2], state[3]
        if w == sink and not seen:
            return (w, arrive, min(count + 1, k), True)
        if w in (source, sink):
            return (w, arrive, count, seen)
        return (w, arrive, min(count + 1, k), seen)

    labels, parents = _label_sweep(graph, start, step)
    best, best_state = _best_accepted(
        labels, lambda s: s[0] == sink and s[2] == k
    )
    witness = None if best_state is None else _rebuild(parents, start, best_state)
    return SolveResult(
        feasible=best <= instance.budget,
        optimal_cost=best,
        witness=witness,
        solver="sparse_triples",
        stats={
            "states": len(labels),
            "state_space": graph.n * (graph.lifetime + 1) * (k + 1),
        },
    )
