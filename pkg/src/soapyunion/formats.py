"""Line-oriented text formats for instances, graphs and certificates.

Instance::

    # comment
    set a : 0 1 3
    set b : 10 11

Graph::

    vertices 4
    edge 1 2

Certificate::

    tree a b 7
    budget 5

The distinguished reduction label is written as ``root`` on disk.
"""

from __future__ import annotations

import re
from typing import Iterable

from .core import Instance, InstanceError, check_int64
from .graphs import EdgeWeights, Graph, GraphError, WeightedTree
from .reductions import ROOT_LABEL
from .solvers import Certificate

LABEL_RE = re.compile(r"^[A-Za-z0-9_()-]+$")
FILE_ROOT = "root"


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def to_file_label(label: str) -> str:
    return FILE_ROOT if label == ROOT_LABEL else label


def from_file_label(label: str) -> str:
    return ROOT_LABEL if label == FILE_ROOT else label


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def _int(token: str, number: int, what: str = "integer") -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"non-integer token {token!r}", number) from None
    try:
        return check_int64(value, what)
    except OverflowError as exc:
        raise ParseError(str(exc), number) from None


def _label(token: str, number: int) -> str:
    if not LABEL_RE.match(token):
        raise ParseError(f"invalid label {token!r}", number)
    return from_file_label(token)


def parse_instance(text: str) -> Instance:
    family = []
    seen = set()
    for number, line in _lines(text):
        head, sep, rest = line.partition(":")
        words = head.split()
        if not sep or len(words) != 2 or words[0] != "set":
            raise ParseError(f"expected 'set <label> : <ints>', got {line!r}", number)
        label = _label(words[1], number)
        if label in seen:
            raise ParseError(f"duplicate label {words[1]!r}", number)
        seen.add(label)
        values = [_int(tok, number, "element") for tok in rest.split()]
        if not values:
            raise ParseError(f"empty set {words[1]!r}", number)
        family.append((label, values))
    if not family:
        raise ParseError("instance has no sets")
    try:
        return Instance.from_sets(family)
    except (InstanceError, OverflowError) as exc:
        raise ParseError(str(exc)) from None


def render_instance(instance: Instance) -> str:
    out = []
    for label, xs in instance.items():
        out.append(f"set {to_file_label(label)} : " + " ".join(map(str, sorted(xs))))
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> Graph:
    declared = None
    edges = []
    seen = set()
    for number, line in _lines(text):
        words = line.split()
        if words[0] == "vertices" and len(words) == 2:
            if declared is not None:
                raise ParseError("repeated 'vertices' header", number)
            declared = _int(words[1], number)
            if declared < 0:
                raise ParseError("vertex count must be non-negative", number)
        elif words[0] == "edge" and len(words) == 3:
            u, v = _int(words[1], number), _int(words[2], number)
            if u < 1 or v < 1:
                raise ParseError("vertex names must be positive integers", number)
            if declared is not None and max(u, v) > declared:
                raise ParseError(f"vertex {max(u, v)} exceeds declared count {declared}", number)
            if u == v:
                raise ParseError(f"loop edge at vertex {u}", number)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(f"duplicate edge {key[0]} {key[1]}", number)
            seen.add(key)
            edges.append((u, v))
        else:
            raise ParseError(f"expected 'vertices <n>' or 'edge <u> <v>', got {line!r}", number)
    vertices = list(range(1, declared + 1)) if declared is not None else None
    try:
        g = Graph.from_edges(edges, vertices=vertices)
    except GraphError as exc:
        raise ParseError(str(exc)) from None
    if vertices is None:
        # without a header, list vertices in numeric order
        g = Graph(tuple(sorted(g.vertices)), g.edges)
    return g


def render_graph(g: Graph) -> str:
    out = [f"vertices {len(g.vertices)}"] if all(isinstance(v, int) for v in g.vertices) else []
    out += [f"edge {u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(out) + "\n"


def parse_certificate(text: str) -> Certificate:
    """Read ``tree``/``node``/``budget`` lines; ``node <label>`` names isolated tree vertices."""
    budget = None
    nodes: list[str] = []
    weights = []
    for number, line in _lines(text):
        words = line.split()
        if words[0] == "tree" and len(words) == 4:
            b, c = _label(words[1], number), _label(words[2], number)
            if b == c:
                raise ParseError(f"loop edge at {words[1]!r}", number)
            weights.append(((b, c), _int(words[3], number, "weight")))
            for v in (b, c):
                if v not in nodes:
                    nodes.append(v)
        elif words[0] == "node" and len(words) == 2:
            v = _label(words[1], number)
            if v not in nodes:
                nodes.append(v)
        elif words[0] == "budget" and len(words) == 2:
            if budget is not None:
                raise ParseError("repeated 'budget' line", number)
            budget = _int(words[1], number, "budget")
            if budget < 0:
                raise ParseError("budget must be non-negative", number)
        else:
            raise ParseError(f"expected 'tree <a> <b> <int>', 'node <a>' or 'budget <int>', got {line!r}", number)
    if budget is None:
        raise ParseError("missing 'budget' line")
    if not nodes:
        raise ParseError("certificate has no tree")
    try:
        ws = EdgeWeights(weights)
        tree = Graph.from_edges([pair for pair, _ in weights], vertices=nodes)
        return Certificate(WeightedTree(tree, ws), budget)
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def render_certificate(cert: Certificate) -> str:
    out = []
    tree = cert.tree
    if not tree.tree.edges:
        out += [f"node {to_file_label(v)}" for v in tree.tree.vertices]
    for b, c in tree.tree.sorted_edges():
        out.append(f"tree {to_file_label(b)} {to_file_label(c)} {tree.weights[b, c]}")
    out.append(f"budget {cert.budget}")
    return "\n".join(out) + "\n"


def shifts_to_file(shifts: dict[str, int]) -> dict[str, int]:
    return {to_file_label(a): t for a, t in shifts.items()}


def shifts_from_file(shifts: dict[str, int], labels: Iterable[str]) -> dict[str, int]:
    out = {from_file_label(a): int(t) for a, t in shifts.items()}
    order = list(labels)
    return {a: out[a] for a in order if a in out} | {a: t for a, t in out.items() if a not in order}
