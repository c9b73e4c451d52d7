"""Constraint hypergraphs, GYO acyclicity testing, and join forests.

Acyclicity is decided by the GYO reduction: repeatedly (i) drop vertices in
at most one hyperedge and (ii) drop hyperedges that are empty or contained
in another hyperedge.  The hypergraph is acyclic iff this empties it; the
outcome is independent of the action order.

A join forest is extracted as a maximal-weight spanning forest of the
weighted relational graph (nodes = constraints, edge weight = number of
shared variables).  For acyclic instances that forest has the property that
the constraints containing any given variable induce a connected subtree;
this is re-verified on every call and a failure is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Instance
from .errors import InputError, InternalCheckError, NotAcyclicError


@dataclass(frozen=True)
class Hypergraph:
    """Vertices plus hyperedges, each edge tagged with its source constraint."""

    vertices: tuple
    edges: tuple          # tuple of frozensets
    tags: tuple = ()      # constraint index per edge, or () when untagged

    def __post_init__(self):
        declared = set(self.vertices)
        for e in self.edges:
            if not e <= declared:
                raise InputError(f"hyperedge {sorted(e)} mentions unknown vertices")
        if self.tags and len(self.tags) != len(self.edges):
            raise InputError("edge tags do not match edge list")


def build_hypergraph(instance: Instance) -> Hypergraph:
    """One edge per constraint (the *set* of its variables; duplicates collapse)."""
    edges = tuple(c.var_set() for c in instance.constraints)
    return Hypergraph(tuple(instance.variables), edges,
                      tuple(range(len(edges))))


def gyo_reduce(h: Hypergraph, policy: str = "batch"):
    """Run the GYO reduction; returns (acyclic, trace).

    policy "batch" applies every currently-applicable action per round;
    "vertex-first"/"edge-first" apply one action at a time with different
    preferences (used to exercise order-independence).
    """
    live_edges: dict = {i: set(e) for i, e in enumerate(h.edges)}
    live_verts = set(h.vertices)
    trace: list = []

    def incidence():
        inc: dict = {v: set() for v in live_verts}
        for i, e in live_edges.items():
            for v in e:
                inc[v].add(i)
        return inc

    def drop_vertex(v, inc):
        for i in inc.get(v, ()):
            live_edges[i].discard(v)
        live_verts.discard(v)
        trace.append({"action": "drop-vertex", "vertex": v})

    def removable_edge(i, inc):
        e = live_edges[i]
        if not e:
            return "empty"
        v = min(e, key=lambda x: (len(inc[x]), x))
        for j in sorted(inc[v]):
            if j == i or j not in live_edges:
                continue
            ej = live_edges[j]
            if e < ej or (e == ej and j < i):
                return sorted(ej)
        return None

    def drop_edge(i, reason):
        e = live_edges.pop(i)
        entry = {"action": "drop-edge", "edge": sorted(e), "reason": "empty"}
        if reason != "empty":
            entry["reason"] = "contained"
            entry["in"] = reason
        trace.append(entry)

    while True:
        inc = incidence()
        loose = sorted(v for v in live_verts if len(inc.get(v, ())) <= 1)

        if policy == "batch":
            changed = False
            if loose:
                changed = True
                for v in loose:
                    drop_vertex(v, inc)
                inc = incidence()
            for i in sorted(live_edges, key=lambda i: (len(live_edges[i]), i)):
                if i not in live_edges:
                    continue
                r = removable_edge(i, inc)
                if r is not None:
                    drop_edge(i, r)
                    changed = True
            if not changed:
                break
        elif policy in ("vertex-first", "edge-first"):
            redundant = []
            for i in sorted(live_edges, key=lambda i: (len(live_edges[i]), i)):
                r = removable_edge(i, inc)
                if r is not None:
                    redundant.append((i, r))
            actions = []
            if policy == "vertex-first":
                if loose:
                    actions = [("v", loose[0])]
                elif redundant:
                    actions = [("e", redundant[0])]
            else:
                if redundant:
                    actions = [("e", redundant[0])]
                elif loose:
                    actions = [("v", loose[0])]
            if not actions:
                break
            kind, payload = actions[0]
            if kind == "v":
                drop_vertex(payload, inc)
            else:
                drop_edge(*payload)
        else:
            raise InputError(f"unknown GYO policy {policy!r}")

    acyclic = not live_edges and not live_verts
    return acyclic, trace


def is_acyclic(h: Hypergraph) -> bool:
    return gyo_reduce(h)[0]


def instance_acyclic(instance: Instance):
    """(acyclic, trace) for an instance's constraint hypergraph."""
    return gyo_reduce(build_hypergraph(instance))


def require_acyclic(instance: Instance):
    ok, trace = instance_acyclic(instance)
    if not ok:
        raise NotAcyclicError("instance hypergraph is not acyclic", trace=trace)
    return trace


@dataclass(frozen=True)
class RelationalGraph:
    """Constraint indices joined whenever they share a variable."""

    nodes: tuple
    weights: dict  # (i, j) with i < j -> shared-variable count


def relational_graph(instance: Instance) -> RelationalGraph:
    sets = [c.var_set() for c in instance.constraints]
    weights = {}
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            w = len(sets[i] & sets[j])
            if w:
                weights[(i, j)] = w
    return RelationalGraph(tuple(range(len(sets))), weights)


@dataclass(frozen=True)
class JoinForest:
    """Maximal-weight spanning forest over constraint indices."""

    parent: dict   # index -> parent index or None for roots
    roots: tuple
    edges: tuple   # chosen (i, j) pairs
    total_weight: int

    def children(self) -> dict:
        ch: dict = {i: [] for i in self.parent}
        for i, p in self.parent.items():
            if p is not None:
                ch[p].append(i)
        for lst in ch.values():
            lst.sort()
        return ch


class _UnionFind:
    def __init__(self, items):
        self.up = {x: x for x in items}

    def find(self, x):
        while self.up[x] != x:
            self.up[x] = self.up[self.up[x]]
            x = self.up[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.up[rb] = ra
        return True


def join_forest(instance: Instance) -> JoinForest:
    """Kruskal with deterministic tie-breaking, then the connectivity check."""
    require_acyclic(instance)
    rg = relational_graph(instance)
    order = sorted(rg.weights.items(), key=lambda kv: (-kv[1], kv[0]))
    uf = _UnionFind(rg.nodes)
    chosen = []
    total = 0
    for (i, j), w in order:
        if uf.union(i, j):
            chosen.append((i, j))
            total += w

    adj: dict = {i: [] for i in rg.nodes}
    for i, j in chosen:
        adj[i].append(j)
        adj[j].append(i)

    parent: dict = {}
    roots = []
    seen: set = set()
    for start in rg.nodes:
        if start in seen:
            continue
        roots.append(start)
        parent[start] = None
        seen.add(start)
        queue = [start]
        while queue:
            node = queue.pop(0)
            for nxt in sorted(adj[node]):
                if nxt not in seen:
                    seen.add(nxt)
                    parent[nxt] = node
                    queue.append(nxt)

    forest = JoinForest(parent, tuple(roots), tuple(chosen), total)
    bad = _connectivity_violation(instance, forest)
    if bad is not None:
        raise InternalCheckError(
            f"join forest violates variable connectivity for {bad!r}",
            variable=bad,
        )
    return forest


def _connectivity_violation(instance: Instance, forest: JoinForest):
    """Return a variable whose constraints are not connected in the forest."""
    adj: dict = {i: set() for i in forest.parent}
    for i, j in forest.edges:
        adj[i].add(j)
        adj[j].add(i)
    by_var: dict = {}
    for idx, c in enumerate(instance.constraints):
        for v in c.var_set():
            by_var.setdefault(v, set()).add(idx)
    for v, members in sorted(by_var.items()):
        if len(members) < 2:
            continue
        start = min(members)
        reached = {start}
        queue = [start]
        while queue:
            node = queue.pop()
            for nxt in adj[node]:
                if nxt in members and nxt not in reached:
                    reached.add(nxt)
                    queue.append(nxt)
        if reached != members:
            return v
    return None


def check_join_forest(instance: Instance, forest: JoinForest) -> bool:
    return _connectivity_violation(instance, forest) is None
