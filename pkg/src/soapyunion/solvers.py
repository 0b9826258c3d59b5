"""Exact solver, brute-force oracle, certificate verifier and heuristics."""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol

from .core import BitUnion, Instance, check_shifts, difference_set, evaluate, normalize
from .graphs import (
    EdgeWeights,
    Graph,
    GraphError,
    WeightedTree,
    find_disconnection,
    intersection_graph,
    prufer_decode,
    solve_weight_system,
    _bfs_tree,
)


DEFAULT_GUARD_LIMIT = 10**8
# below this many candidates a process pool costs more than it saves
_PARALLEL_MIN_CANDIDATES = 200_000


class GuardLimitError(RuntimeError):
    def __init__(self, count: int, limit: int, what: str):
        self.count = count
        self.limit = limit
        super().__init__(f"{what} has {count} candidates, above the guard limit {limit}")


class CertificateError(ValueError):
    pass


class CancelToken(Protocol):
    def is_set(self) -> bool: ...


@dataclass(frozen=True)
class SolveResult:
    shifts: dict[str, int]
    value: int
    method: str
    explored: int
    optimal: bool = True
    tree: WeightedTree | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Certificate:
    tree: WeightedTree
    budget: int

    def __post_init__(self):
        if self.budget < 0:
            raise CertificateError("budget must be non-negative")


def exact_search_size(instance: Instance) -> int:
    """|A|^(|A|-2) * |U-U|^(|A|-1), the number of (tree, weights) pairs."""
    n = len(instance)
    d = len(difference_set(instance))
    if n == 1:
        return 1
    return n ** (n - 2) * d ** (n - 1)


def _single_label(instance: Instance, method: str) -> SolveResult:
    (label,) = instance.labels
    tree = WeightedTree(Graph((label,), frozenset()), EdgeWeights())
    return SolveResult({label: 0}, len(instance[label]), method, 1, True, tree)


def _exact_chunk(instance: Instance, codes: list[tuple[int, ...]], diffs: list[int]):
    """Best (value, shift tuple, tree edges/weights) over the given Prüfer codes."""
    labels = instance.labels
    n = len(labels)
    span = diffs[-1]
    bits = BitUnion(instance, min(instance.universe()) - (n - 1) * span)
    pos = {label: i for i, label in enumerate(labels)}

    best_value = None
    best_vec = None
    best_tree = None
    explored = 0

    for code in codes:
        tree = prufer_decode([labels[i] for i in code], labels)
        parent, order = _bfs_tree(tree, labels[0])
        idx = [pos[v] for v in order]
        par = [pos[parent[v]] for v in order[1:]]
        masks = [bits.masks[i] for i in idx]
        offs = [bits.mins[i] - bits.floor for i in idx]
        t = [0] * n  # indexed by BFS position
        chosen = [0] * n
        last = n - 1

        def descend(depth: int, acc: int):
            nonlocal best_value, best_vec, best_tree
            p = t[order_pos[par[depth - 1]]]
            mask = masks[depth]
            off = offs[depth]
            if depth == last:
                for w in diffs:
                    val = (acc | (mask << (off + p - w))).bit_count()
                    if best_value is None or val <= best_value:
                        t[depth] = p - w
                        chosen[depth] = w
                        vec = [0] * n
                        for k in range(n):
                            vec[idx[k]] = t[k]
                        vec = tuple(vec)
                        if best_value is None or val < best_value or vec < best_vec:
                            best_value, best_vec = val, vec
                            best_tree = (code, tuple(chosen[1:]), tuple(order))
                return
            for w in diffs:
                t[depth] = p - w
                chosen[depth] = w
                descend(depth + 1, acc | (mask << (off + p - w)))

        order_pos = {v: k for k, v in enumerate(idx)}
        descend(1, masks[0] << offs[0])
        explored += len(diffs) ** (n - 1)

    return best_value, best_vec, best_tree, explored


def _chunks(items: list, parts: int) -> list[list]:
    parts = max(1, min(parts, len(items)))
    size = -(-len(items) // parts)
    return [items[i : i + size] for i in range(0, len(items), size)]


def _tree_from_choice(instance: Instance, choice) -> WeightedTree:
    code, weights, order = choice
    labels = instance.labels
    tree = prufer_decode([labels[i] for i in code], labels)
    parent, _ = _bfs_tree(tree, labels[0])
    ws = EdgeWeights({(parent[v], v): w for v, w in zip(order[1:], weights)})
    return WeightedTree(tree, ws)


def solve_exact(
    instance: Instance,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
    threads: int = 1,
    cancel: CancelToken | None = None,
) -> SolveResult:
    """Global optimum by enumerating every labelled tree and every weighting from U - U.

    Each (tree, weights) pair is anchored at the first label with shift 0
    and evaluated. Ties go to the lexicographically smallest shift vector
    in label order. ``explored`` is the exact number of pairs examined.
    """
    labels = instance.labels
    n = len(labels)
    if n == 1:
        return _single_label(instance, "exact")
    count = exact_search_size(instance)
    if count > guard_limit:
        raise GuardLimitError(count, guard_limit, "exact search space")

    diffs = sorted(difference_set(instance))
    codes = list(itertools.product(range(n), repeat=n - 2))
    threads = max(1, threads)
    if threads > 1 and count >= _PARALLEL_MIN_CANDIDATES and len(codes) > 1:
        chunks = _chunks(codes, threads * 4)
    else:
        chunks = [[c] for c in codes]

    best = None
    explored = 0
    cancelled = False

    def merge(res):
        nonlocal best, explored
        value, vec, choice, seen = res
        explored += seen
        if value is not None and (best is None or (value, vec) < best[:2]):
            best = (value, vec, choice)

    if threads > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_exact_chunk, instance, chunk, diffs) for chunk in chunks]
            # merge in submission order so ties resolve identically to the serial path
            for fut in futures:
                if cancel is not None and cancel.is_set():
                    cancelled = True
                    for f in futures:
                        f.cancel()
                    break
                merge(fut.result())
    else:
        for chunk in chunks:
            if cancel is not None and cancel.is_set():
                cancelled = True
                break
            merge(_exact_chunk(instance, chunk, diffs))

    if best is None:
        # cancelled before anything ran: fall back to the zero vector
        shifts = {a: 0 for a in labels}
        return SolveResult(shifts, evaluate(instance, shifts).value, "exact", explored, False)
    value, vec, choice = best
    shifts = dict(zip(labels, vec))
    return SolveResult(shifts, value, "exact", explored, not cancelled, _tree_from_choice(instance, choice))


def default_radius(instance: Instance) -> int:
    u = instance.universe()
    return (len(instance) - 1) * (max(u) - min(u))


def solve_oracle(
    instance: Instance,
    radius: int | None = None,
    guard_limit: int = DEFAULT_GUARD_LIMIT,
    candidates: Mapping[str, Iterable[int]] | None = None,
) -> SolveResult:
    """Exhaustive search over a box of shift vectors using plain set unions.

    By default the first label is pinned to 0 and every other shift ranges
    over [-radius, radius], with a radius large enough to contain a
    normalized optimum. ``candidates`` replaces the box with an explicit
    per-label list of shifts.
    """
    labels = instance.labels
    full_radius = default_radius(instance)
    if candidates is not None:
        missing = set(labels) - set(candidates)
        if missing:
            raise ValueError(f"no candidate shifts for {sorted(missing)}")
        choices = [sorted(set(candidates[a])) for a in labels]
        complete = False
    else:
        r = full_radius if radius is None else radius
        if r < 0:
            raise ValueError("radius must be non-negative")
        choices = [[0]] + [list(range(-r, r + 1)) for _ in labels[1:]]
        complete = r >= full_radius
    count = 1
    for c in choices:
        count *= len(c)
    if count > guard_limit:
        raise GuardLimitError(count, guard_limit, "oracle box")
    if count == 0:
        raise ValueError("empty candidate set")

    shifted = [
        {t: frozenset(x + t for x in instance[a]) for t in choice}
        for a, choice in zip(labels, choices)
    ]
    n = len(labels)
    best_value = None
    best_vec = None
    current = [0] * n

    def visit(depth: int, acc: frozenset):
        nonlocal best_value, best_vec
        table = shifted[depth]
        if depth == n - 1:
            for t, ys in table.items():
                val = len(acc | ys)
                if best_value is None or val <= best_value:
                    current[depth] = t
                    base = current[0]
                    vec = tuple(x - base for x in current)
                    if best_value is None or val < best_value or vec < best_vec:
                        best_value, best_vec = val, vec
            return
        for t, ys in table.items():
            current[depth] = t
            visit(depth + 1, acc | ys)

    visit(0, frozenset())
    return SolveResult(dict(zip(labels, best_vec)), best_value, "oracle", count, complete)


def certificate_for(result: SolveResult, budget: int | None = None) -> Certificate:
    if result.tree is None:
        raise CertificateError(f"{result.method} result carries no tree")
    return Certificate(result.tree, result.value if budget is None else budget)


def verify_certificate(instance: Instance, cert: Certificate) -> bool:
    """Check an NP witness: weights in U - U, tree system solvable, union size <= budget."""
    tree = cert.tree.tree
    if set(tree.vertices) != set(instance.labels) or len(tree.vertices) != len(instance.labels):
        raise CertificateError(
            f"certificate tree spans {sorted(map(str, tree.vertices))}, "
            f"instance has {sorted(instance.labels)}"
        )
    diffs = difference_set(instance)
    if any(w not in diffs for w in cert.tree.weights.values()):
        return False
    try:
        shifts = solve_weight_system(tree, cert.tree.weights, (instance.labels[0], 0))
    except GraphError:
        return False
    return evaluate(instance, shifts).value <= cert.budget


def improve_disconnected(instance: Instance, shifts: Mapping[str, int]) -> dict[str, int] | None:
    """Merge two sides of a disconnected intersection graph onto a common point.

    With (B, C) a disconnection of the shifted family, side B is moved
    so its smallest element lands on 0, and likewise for C. The result
    is strictly better. Returns None when the graph is connected.
    """
    check_shifts(instance, shifts)
    shifted = {a: frozenset(x + shifts[a] for x in instance[a]) for a in instance.labels}
    split = find_disconnection(intersection_graph(shifted))
    if split is None:
        return None
    side_b, side_c = split
    r = min(min(shifted[a]) for a in side_b)
    s = min(min(shifted[a]) for a in side_c)
    return {a: shifts[a] + (-r if a in side_b else -s) for a in instance.labels}


def _best_overlap(p: frozenset, q: frozenset) -> tuple[int, int, int]:
    """Largest |p & (q + d)| over d; returns (overlap, d, pairs scanned)."""
    counts = Counter(x - y for x in p for y in q)
    d, c = min(counts.items(), key=lambda kv: (-kv[1], abs(kv[0]), kv[0]))
    return c, d, len(counts)


def solve_greedy(instance: Instance) -> SolveResult:
    """Agglomerative merge: join the two clusters with the largest achievable overlap."""
    clusters = [({a: 0}, frozenset(instance[a])) for a in instance.labels]
    explored = 0
    while len(clusters) > 1:
        best = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                overlap, d, scanned = _best_overlap(clusters[i][1], clusters[j][1])
                explored += scanned
                if best is None or overlap > best[0]:
                    best = (overlap, i, j, d)
        _, i, j, d = best
        members = dict(clusters[i][0])
        members.update({a: t + d for a, t in clusters[j][0].items()})
        union = clusters[i][1] | frozenset(x + d for x in clusters[j][1])
        clusters[i] = (members, union)
        del clusters[j]

    shifts = normalize(clusters[0][0], instance.labels)
    while True:
        better = improve_disconnected(instance, shifts)
        if better is None:
            break
        explored += 1
        shifts = normalize(better, instance.labels)
    return SolveResult(shifts, evaluate(instance, shifts).value, "greedy", explored, False)
