"""Golomb ruler gadgets and the vertex-cover encoding into soapy-union instances."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

from .core import Instance, evaluate
from .graphs import Graph, GraphError, edge_key, vertex_key

ROOT_LABEL = "∅"


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class Ruler:
    n: int
    elements: tuple[int, ...]


def ruler(n: int) -> Ruler:
    """R_n = {(i - 1) n^2 + i^2 : 1 <= i <= n}, sorted ascending."""
    if n < 1:
        raise ValueError("ruler size must be positive")
    return Ruler(n, tuple((i - 1) * n * n + i * i for i in range(1, n + 1)))


def is_golomb(marks: Iterable[int]) -> bool:
    """True iff all positive pairwise differences are distinct."""
    xs = sorted(set(marks))
    seen = set()
    for i, x in enumerate(xs):
        for y in xs[:i]:
            d = x - y
            if d in seen:
                return False
            seen.add(d)
    return True


def ruler_properties(r: Ruler) -> dict[str, bool]:
    """The four structural properties every R_n must have."""
    n, xs = r.n, sorted(r.elements)
    gaps = [b - a for a, b in zip(xs, xs[1:])]
    return {
        "min_is_1": xs[0] == 1,
        "max_is_n_cubed": xs[-1] == n**3,
        "cardinality_n": len(set(xs)) == n,
        "gaps_at_least_n2_plus_3": all(g >= n * n + 3 for g in gaps),
        "golomb": is_golomb(xs),
    }


def aux_bound(x: int) -> Fraction:
    """f(x) = (x/4 + 2)^3 + x/2 - 4, exactly."""
    if x < 0:
        raise ValueError("aux_bound expects x >= 0")
    return (Fraction(x, 4) + 2) ** 3 + Fraction(x, 2) - 4


def is_aux(instance: Instance, k: int | None = None) -> bool:
    """Every element (and the budget, if given) is bounded in absolute value by f(max |X_a|)."""
    bound = aux_bound(instance.max_size())
    values = set(instance.universe())
    if k is not None:
        values.add(k)
    return all(abs(v) <= bound for v in values)


def edge_label(y: int, z: int) -> str:
    return f"({y}-{z})"


@dataclass(frozen=True)
class ReducedInstance:
    instance: Instance
    n: int
    s: int
    ruler: Ruler
    k: int
    orientation: Mapping[str, tuple[int, int]]
    source: Graph
    # original vertex name -> position in 1..n
    relabel: Mapping = field(default_factory=dict)

    @property
    def root_size(self) -> int:
        return len(self.instance[ROOT_LABEL])

    @property
    def threshold(self) -> int:
        return self.root_size + self.k

    @property
    def trivially_yes(self) -> bool:
        return self.k >= self.n

    def original(self, v: int):
        return self._inverse()[v]

    def _inverse(self) -> dict:
        return {i: v for v, i in self.relabel.items()}


def encode_vc(g: Graph, k: int) -> ReducedInstance:
    """Map a vertex-cover instance (g, k) to a soapy-union instance.

    Vertices are renumbered 1..n in sorted order. With s = (n + 4)^3 and
    R = R_{n+4}, the root set is (V - s - n) | (R - s) | (R + n) | (V + s + n)
    and each edge e = {y, z}, y < z, gets {z - n} | R | {y + s}. The
    threshold is |root set| + k.
    """
    if k < 0:
        raise ReductionError("k must be non-negative")
    if not isinstance(g, Graph):
        raise ReductionError("encode_vc expects a Graph")
    order = sorted(g.vertices, key=vertex_key)
    relabel = {v: i for i, v in enumerate(order, start=1)}
    n = len(order)
    s = (n + 4) ** 3
    r = ruler(n + 4)
    vs = range(1, n + 1)
    root = (
        {v - s - n for v in vs}
        | {x - s for x in r.elements}
        | {x + n for x in r.elements}
        | {v + s + n for v in vs}
    )
    family = [(ROOT_LABEL, root)]
    orientation = {}
    pairs = sorted(tuple(sorted((relabel[u], relabel[v]))) for u, v in (tuple(e) for e in g.edges))
    for y, z in pairs:
        label = edge_label(y, z)
        orientation[label] = (y, z)
        family.append((label, {z - n} | set(r.elements) | {y + s}))
    return ReducedInstance(Instance.from_sets(family), n, s, r, k, orientation, g, relabel)


def _edge_of(ri: ReducedInstance, label: str) -> tuple:
    y, z = ri.orientation[label]
    return ri.original(y), ri.original(z)


def is_vertex_cover(g: Graph, cover: Iterable) -> bool:
    c = set(cover)
    return all(e & c for e in g.edges)


def construct_solution_from_cover(ri: ReducedInstance, cover: Iterable) -> dict[str, int]:
    """Root at 0; edge e at -s when its smaller endpoint is covered, else +n."""
    c = set(cover)
    unknown = c - set(ri.relabel)
    if unknown:
        raise ReductionError(f"cover contains non-vertices {sorted(unknown, key=vertex_key)}")
    cov = {ri.relabel[v] for v in c}
    shifts = {ROOT_LABEL: 0}
    for label in ri.instance.labels[1:]:
        y, z = ri.orientation[label]
        if y in cov:
            shifts[label] = -ri.s
        elif z in cov:
            shifts[label] = ri.n
        else:
            raise ReductionError(f"edge {_edge_of(ri, label)} is not covered")
    return shifts


def decode_cover(ri: ReducedInstance, shifts: Mapping[str, int]) -> set:
    """Vertex cover read off any shift vector, at most as large as the excess over |X_root|.

    Returns the original vertex names.
    """
    value = evaluate(ri.instance, shifts).value
    excess = value - ri.root_size
    if excess >= ri.n:
        return set(ri.relabel)
    root = ri.instance[ROOT_LABEL]
    t0 = shifts[ROOT_LABEL]
    leftover = set()
    for label in ri.instance.labels[1:]:
        d = shifts[label] - t0
        leftover.update(x + d for x in ri.instance[label])
    leftover -= root
    inv = ri._inverse()
    return {inv[v] for v in leftover if 1 <= v <= ri.n}


@dataclass(frozen=True)
class CheckEntry:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class GadgetReport:
    entries: tuple[CheckEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    @property
    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.ok]


def lemma6_window(ri: ReducedInstance) -> tuple[int, int]:
    """Range of t outside which R + t misses the root set entirely."""
    root = ri.instance[ROOT_LABEL]
    r = ri.ruler.elements
    return min(root) - max(r), max(root) - min(r)


def check_gadget_lemmas(ri: ReducedInstance) -> GadgetReport:
    """Recheck the encoding by direct set arithmetic.

    Covers the structural invariants of the construction, the two
    per-edge leftover identities, and the ruler-translate bound (scanned
    over every t where R + t can meet the root set).
    """
    n, s = ri.n, ri.s
    inst = ri.instance
    root = inst[ROOT_LABEL]
    r = set(ri.ruler.elements)
    entries = []

    def add(name, ok, detail=""):
        entries.append(CheckEntry(name, bool(ok), "" if ok else detail))

    add("s_is_(n+4)^3", s == (n + 4) ** 3, f"s={s}, (n+4)^3={(n + 4) ** 3}")
    add("ruler_is_R_(n+4)", ri.ruler == ruler(n + 4), f"ruler n={ri.ruler.n}")
    add("root_size_4n+8", len(root) == 4 * n + 8, f"|root|={len(root)}, 4n+8={4 * n + 8}")
    extreme = max(abs(x) for x in inst.universe())
    add("max_abs_is_s+2n", extreme == s + 2 * n, f"max |x|={extreme}, s+2n={s + 2 * n}")
    add("aux_bound_identity", aux_bound(4 * n + 8) == s + 2 * n, f"f(4n+8)={aux_bound(4 * n + 8)}")
    add("is_aux", is_aux(inst, ri.threshold), "instance exceeds f(max |X_a|)")

    for label in inst.labels[1:]:
        y, z = ri.orientation[label]
        xe = inst[label]
        minus_s = {x - s for x in xe} - root
        plus_n = {x + n for x in xe} - root
        add(f"leftover_minus_s[{label}]", minus_s == {y}, f"(X_e - s) \\ X_root = {sorted(minus_s)}, expected [{y}]")
        add(f"leftover_plus_n[{label}]", plus_n == {z}, f"(X_e + n) \\ X_root = {sorted(plus_n)}, expected [{z}]")

    lo, hi = lemma6_window(ri)
    bad = []
    for t in range(lo, hi + 1):
        if t in (-s, n):
            continue
        missed = sum(1 for x in r if x + t not in root)
        if missed < n:
            bad.append(t)
    add("ruler_translates", not bad, f"|(R + t) \\ X_root| < n at t={bad[:5]}")
    return GadgetReport(tuple(entries))


MUTATIONS = ("drop-ruler-point", "shift-endpoint", "wrong-s")


def mutate_gadget(ri: ReducedInstance, kind: str) -> ReducedInstance:
    """A deliberately broken copy of ``ri`` for negative tests of check_gadget_lemmas."""
    sets = {a: set(xs) for a, xs in ri.instance.items()}
    if kind == "drop-ruler-point":
        # remove the largest point of R - s from the root set
        sets[ROOT_LABEL].discard(max(ri.ruler.elements) - ri.s)
        return replace(ri, instance=Instance.from_sets((a, sets[a]) for a in ri.instance.labels))
    if kind == "shift-endpoint":
        if len(ri.instance) < 2:
            raise ReductionError("shift-endpoint needs at least one edge")
        label = ri.instance.labels[1]
        y, _ = ri.orientation[label]
        sets[label].discard(y + ri.s)
        sets[label].add(y + ri.s + 1)
        return replace(ri, instance=Instance.from_sets((a, sets[a]) for a in ri.instance.labels))
    if kind == "wrong-s":
        return replace(ri, s=ri.s + 1)
    raise ValueError(f"unknown mutation {kind!r}; choose from {MUTATIONS}")


def minimum_vertex_covers(g: Graph) -> tuple[int, list[frozenset]]:
    """Brute force over vertex subsets by increasing size: (tau, all minimum covers)."""
    vs = sorted(g.vertices, key=vertex_key)
    edges = [tuple(e) for e in g.edges]
    for size in range(len(vs) + 1):
        found = [
            frozenset(c)
            for c in itertools.combinations(vs, size)
            if all(u in c or v in c for u, v in edges)
        ]
        if found:
            return size, found
    raise AssertionError("the full vertex set is always a cover")


def has_vertex_cover(g: Graph, k: int) -> bool:
    vs = sorted(g.vertices, key=vertex_key)
    edges = [tuple(e) for e in g.edges]
    for size in range(min(k, len(vs)) + 1):
        for c in itertools.combinations(vs, size):
            if all(u in c or v in c for u, v in edges):
                return True
    return False


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    vs = list(range(1, n + 1))
    edges = [(u, v) for u, v in itertools.combinations(vs, 2) if rng.random() < p]
    return Graph.from_edges(edges, vertices=vs)


def random_cubic_graph(n: int, rng: random.Random, max_tries: int = 1000) -> Graph:
    """Uniform-ish random 3-regular simple graph via the pairing model with rejection."""
    if n < 4 or n % 2:
        raise GraphError("cubic graphs need an even number of vertices >= 4")
    points = [v for v in range(1, n + 1) for _ in range(3)]
    for _ in range(max_tries):
        rng.shuffle(points)
        pairs = [tuple(points[i : i + 2]) for i in range(0, len(points), 2)]
        keys = {edge_key(u, v) for u, v in pairs}
        if all(u != v for u, v in pairs) and len(keys) == len(pairs):
            return Graph.from_edges(pairs, vertices=range(1, n + 1))
    raise GraphError(f"no simple cubic graph found in {max_tries} tries")
