"""Graphs on opaque labels, Prüfer decoding and antisymmetric edge-weight systems."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

Vertex = Hashable


def vertex_key(v):
    """Sort key giving a total order over mixed int/str labels (ints first)."""
    if isinstance(v, int) and not isinstance(v, bool):
        return (0, v, "")
    return (1, 0, str(v))


def edge_key(u, v) -> tuple:
    """Canonical orientation of the pair: smaller label first."""
    return (u, v) if vertex_key(u) <= vertex_key(v) else (v, u)


class GraphError(ValueError):
    pass


class DisconnectedGraphError(GraphError):
    def __init__(self, witness: tuple[frozenset, frozenset]):
        self.witness = witness
        b, c = witness
        super().__init__(
            f"graph is disconnected: no edge between {sorted(b, key=vertex_key)} "
            f"and {sorted(c, key=vertex_key)}"
        )


class InfeasibleSystemError(GraphError):
    def __init__(self, cycle: list, weight: int):
        self.cycle = cycle
        self.weight = weight
        super().__init__(f"cycle {cycle} has weight {weight}, expected 0")


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph. Vertex order is the order given at construction."""

    vertices: tuple
    edges: frozenset

    def __post_init__(self):
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex")
        for e in self.edges:
            if len(e) != 2:
                raise GraphError(f"edge {sorted(e, key=vertex_key)} is not a pair of distinct vertices")
            for v in e:
                if v not in vs:
                    raise GraphError(f"edge endpoint {v!r} is not a vertex")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], vertices: Iterable | None = None) -> Graph:
        """Build a simple graph, rejecting loops and repeated edges."""
        vlist = list(vertices) if vertices is not None else []
        seen_v = set(vlist)
        es = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u!r}")
            e = frozenset((u, v))
            if e in es:
                raise GraphError(f"duplicate edge {edge_key(u, v)}")
            es.add(e)
            for w in edge_key(u, v):
                if w not in seen_v:
                    seen_v.add(w)
                    vlist.append(w)
        return cls(tuple(vlist), frozenset(es))

    def __len__(self):
        return len(self.vertices)

    def sorted_edges(self) -> list[tuple]:
        return sorted((edge_key(*e) for e in self.edges), key=lambda p: (vertex_key(p[0]), vertex_key(p[1])))

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v in self.sorted_edges():
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def has_edge(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.vertices) - 1 and find_disconnection(self) is None


class EdgeWeights(Mapping):
    """Antisymmetric edge weights stored once per edge in canonical orientation.

    ``w[b, c]`` returns the weight of the oriented edge (b, c); the
    mirror ``w[c, b]`` is its negation.
    """

    def __init__(self, weights: Mapping[tuple, int] | Iterable[tuple[tuple, int]] = ()):
        self._w: dict[tuple, int] = {}
        items = weights.items() if isinstance(weights, Mapping) else weights
        for (b, c), value in items:
            key = edge_key(b, c)
            signed = value if key == (b, c) else -value
            if key in self._w and self._w[key] != signed:
                raise GraphError(f"weights for {(b, c)} are not antisymmetric")
            self._w[key] = signed

    def __getitem__(self, pair):
        b, c = pair
        key = edge_key(b, c)
        value = self._w[key]
        return value if key == (b, c) else -value

    def __contains__(self, pair):
        try:
            b, c = pair
        except (TypeError, ValueError):
            return False
        return edge_key(b, c) in self._w

    def __iter__(self):
        return iter(self._w)

    def __len__(self):
        return len(self._w)

    def __repr__(self):
        return f"EdgeWeights({self._w!r})"

    def __eq__(self, other):
        if isinstance(other, EdgeWeights):
            return self._w == other._w
        return NotImplemented

    def edges(self) -> frozenset:
        return frozenset(frozenset(k) for k in self._w)


@dataclass(frozen=True)
class WeightedTree:
    tree: Graph
    weights: EdgeWeights

    def __post_init__(self):
        if not self.tree.is_tree():
            raise GraphError("underlying graph is not a tree")
        if self.weights.edges() != self.tree.edges:
            raise GraphError("weights must be defined on exactly the tree edges")


def intersection_graph(sets: Mapping[Vertex, Iterable[int]]) -> Graph:
    """Graph on the labels with an edge wherever two sets share an element."""
    labels = list(sets)
    if not labels:
        raise GraphError("empty family")
    owners: dict[int, list] = {}
    for label in labels:
        for x in set(sets[label]):
            owners.setdefault(x, []).append(label)
    edges = set()
    for group in owners.values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                edges.add(frozenset((group[i], group[j])))
    return Graph(tuple(labels), frozenset(edges))


def connected_components(g: Graph) -> list[list]:
    """Components in order of their smallest vertex; each listed in BFS order."""
    adj = g.adjacency()
    seen = set()
    comps = []
    for root in sorted(g.vertices, key=vertex_key):
        if root in seen:
            continue
        seen.add(root)
        comp = [root]
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(comp)
    return comps


def find_disconnection(g: Graph) -> tuple[frozenset, frozenset] | None:
    """Return (B, C) with no edge across, B the component of the smallest vertex."""
    if not g.vertices:
        raise GraphError("graph has no vertices")
    comps = connected_components(g)
    if len(comps) == 1:
        return None
    b = frozenset(comps[0])
    return b, frozenset(g.vertices) - b


def _bfs_tree(g: Graph, root) -> tuple[dict, list]:
    adj = g.adjacency()
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
                queue.append(w)
    return parent, order


def spanning_tree(g: Graph) -> Graph:
    witness = find_disconnection(g)
    if witness is not None:
        raise DisconnectedGraphError(witness)
    root = min(g.vertices, key=vertex_key)
    parent, _ = _bfs_tree(g, root)
    edges = frozenset(frozenset((v, p)) for v, p in parent.items() if p is not None)
    return Graph(g.vertices, edges)


def prufer_decode(code: Sequence, labels: Sequence) -> Graph:
    """The tree on ``labels`` whose Prüfer code is ``code``.

    Leaves are removed smallest-first with respect to the order of
    ``labels``; ``code`` must have length ``len(labels) - 2``.
    """
    n = len(labels)
    if n < 2:
        raise GraphError("Prüfer codes need at least 2 labels")
    if len(code) != n - 2:
        raise GraphError(f"code length {len(code)} != {n - 2}")
    index = {label: i for i, label in enumerate(labels)}
    if len(index) != n:
        raise GraphError("duplicate label")
    degree = [1] * n
    idx_code = []
    for c in code:
        if c not in index:
            raise GraphError(f"code entry {c!r} is not a label")
        idx_code.append(index[c])
        degree[index[c]] += 1
    leaves = [i for i in range(n) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for j in idx_code:
        leaf = heapq.heappop(leaves)
        edges.append(frozenset((labels[leaf], labels[j])))
        degree[j] -= 1
        if degree[j] == 1:
            heapq.heappush(leaves, j)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append(frozenset((labels[u], labels[v])))
    return Graph(tuple(labels), frozenset(edges))


def _tree_path(parent: dict, u, v) -> list:
    """Vertex path u -> v in the BFS tree described by ``parent``."""
    up = [u]
    while parent[up[-1]] is not None:
        up.append(parent[up[-1]])
    pos = {w: i for i, w in enumerate(up)}
    down = [v]
    while down[-1] not in pos:
        down.append(parent[down[-1]])
    lca = down[-1]
    return up[: pos[lca] + 1] + down[-2::-1]


def walk_weight(walk: Sequence, weights: Mapping[tuple, int]) -> int:
    return sum(weights[walk[i - 1], walk[i]] for i in range(1, len(walk)))


def _propagate(g: Graph, weights: Mapping[tuple, int], anchors: dict):
    """Assign potentials per component from the given roots; return (t, violation)."""
    t = {}
    adj = g.adjacency()
    for root, value in anchors.items():
        parent, order = _bfs_tree(g, root)
        t[root] = value
        for v in order[1:]:
            p = parent[v]
            # t_p - t_v = w(p, v)
            t[v] = t[p] - weights[p, v]
        for b in order:
            for c in adj[b]:
                if t[b] - t[c] != weights[b, c]:
                    cycle = _tree_path(parent, c, b) + [c]
                    return t, (cycle, walk_weight(cycle, weights))
    return t, None


def _check_weights(g: Graph, weights: Mapping[tuple, int]) -> None:
    for e in g.edges:
        b, c = tuple(e)
        if (b, c) not in weights or (c, b) not in weights:
            raise GraphError(f"no weight for edge {edge_key(b, c)}")
        if weights[b, c] != -weights[c, b]:
            raise GraphError(f"weight of {edge_key(b, c)} is not antisymmetric")


def weight_system_feasible(g: Graph, weights: Mapping[tuple, int]) -> bool:
    """True iff some integer vector t has t_b - t_c = w(b, c) on every edge."""
    _check_weights(g, weights)
    roots = {comp[0]: 0 for comp in connected_components(g)}
    _, violation = _propagate(g, weights, roots)
    return violation is None


def solve_weight_system(g: Graph, weights: Mapping[tuple, int], anchor: tuple) -> dict:
    """The unique solution with ``t[anchor[0]] == anchor[1]`` on a connected graph."""
    _check_weights(g, weights)
    witness = find_disconnection(g)
    if witness is not None:
        raise DisconnectedGraphError(witness)
    b, u = anchor
    if b not in set(g.vertices):
        raise GraphError(f"anchor {b!r} is not a vertex")
    t, violation = _propagate(g, weights, {b: u})
    if violation is not None:
        raise InfeasibleSystemError(*violation)
    return {v: t[v] for v in g.vertices}
