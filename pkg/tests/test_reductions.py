import itertools
import random
from fractions import Fraction

import pytest

from soapyunion.core import evaluate
from soapyunion.graphs import Graph
from soapyunion.reductions import (
    MUTATIONS,
    ROOT_LABEL,
    ReductionError,
    aux_bound,
    check_gadget_lemmas,
    construct_solution_from_cover,
    decode_cover,
    encode_vc,
    has_vertex_cover,
    is_aux,
    is_golomb,
    is_vertex_cover,
    minimum_vertex_covers,
    mutate_gadget,
    random_cubic_graph,
    random_graph,
    ruler,
    ruler_properties,
)
from soapyunion.solvers import solve_exact

SINGLE = Graph.from_edges([(1, 2)])
TRIANGLE = Graph.from_edges([(1, 2), (2, 3), (1, 3)])


@pytest.mark.parametrize(
    "n, expected",
    [
        (1, (1,)),
        (4, (1, 20, 41, 64)),
        (6, (1, 40, 81, 124, 169, 216)),
        (7, (1, 53, 107, 163, 221, 281, 343)),
    ],
)
def test_ruler_values(n, expected):
    assert ruler(n).elements == expected


def test_ruler_rejects_zero():
    with pytest.raises(ValueError):
        ruler(0)


def test_is_golomb():
    assert is_golomb({0, 1, 3})
    assert not is_golomb({0, 1, 2})
    assert is_golomb({5})


def brute_golomb(marks):
    # translate-overlap form: |R & (R + t)| <= 1 for t != 0
    r = set(marks)
    span = max(r) - min(r)
    return all(len(r & {x + t for x in r}) <= 1 for t in range(-span, span + 1) if t)


@pytest.mark.parametrize("n", range(1, 21))
def test_ruler_properties(n):
    r = ruler(n)
    assert all(ruler_properties(r).values())
    assert brute_golomb(r.elements)


def test_golomb_forms_agree_on_random_sets():
    rng = random.Random(0)
    for _ in range(300):
        marks = set(rng.sample(range(30), rng.randint(1, 6)))
        assert is_golomb(marks) == brute_golomb(marks)


def test_encode_single_edge():
    ri = encode_vc(SINGLE, 1)
    assert ri.s == 216
    assert ri.ruler == ruler(6)
    assert ri.root_size == 16
    assert ri.threshold == 17
    assert ri.instance.labels == (ROOT_LABEL, "(1-2)")
    assert ri.instance["(1-2)"] == {2 - 2, 1 + 216} | set(ruler(6).elements)


def test_encode_triangle():
    ri = encode_vc(TRIANGLE, 2)
    assert len(ri.instance) == 4
    assert ri.s == 343
    assert ri.threshold == 22


def test_encode_flags_trivial_budget():
    assert encode_vc(SINGLE, 2).trivially_yes
    assert not encode_vc(SINGLE, 1).trivially_yes
    with pytest.raises(ReductionError):
        encode_vc(SINGLE, -1)


def test_root_set_formula():
    ri = encode_vc(TRIANGLE, 0)
    n, s, r = 3, 343, ruler(7).elements
    expected = set()
    for v in (1, 2, 3):
        expected |= {v - s - n, v + s + n}
    for x in r:
        expected |= {x - s, x + n}
    assert ri.instance[ROOT_LABEL] == expected


@pytest.mark.parametrize("n", range(1, 9))
def test_extreme_element_identity(n):
    g = Graph.from_edges(list(itertools.combinations(range(1, n + 1), 2)), vertices=range(1, n + 1))
    ri = encode_vc(g, 0)
    extreme = max(abs(x) for x in ri.instance.universe())
    assert extreme == ri.s + 2 * n == aux_bound(ri.root_size)
    assert min(ri.instance.universe()) == 1 - ri.s - n
    assert is_aux(ri.instance, ri.threshold)


def test_aux_bound_values():
    assert aux_bound(16) == 220
    assert aux_bound(0) == 4
    assert aux_bound(1) == Fraction(9**3, 4**3) + Fraction(1, 2) - 4
    # (x/4 + 2)^3 + x/2 - 4 at x = 4n + 8 is (n + 4)^3 + 2n
    for n in range(0, 30):
        assert aux_bound(4 * n + 8) == (n + 4) ** 3 + 2 * n


def test_construct_single_edge():
    ri = encode_vc(SINGLE, 1)
    t = construct_solution_from_cover(ri, {1})
    assert t == {ROOT_LABEL: 0, "(1-2)": -216}
    assert evaluate(ri.instance, t).value <= 17


def test_construct_triangle_and_full_cover():
    ri = encode_vc(TRIANGLE, 2)
    assert evaluate(ri.instance, construct_solution_from_cover(ri, {1, 2})).value <= 22
    full = construct_solution_from_cover(ri, {1, 2, 3})
    assert evaluate(ri.instance, full).value <= ri.root_size + 3


def test_construct_rejects_non_cover():
    ri = encode_vc(TRIANGLE, 2)
    with pytest.raises(ReductionError, match=r"\(2, 3\)"):
        construct_solution_from_cover(ri, {1})


def test_decode_of_construct_for_minimal_covers():
    for g in (SINGLE, TRIANGLE, Graph.from_edges([(1, 2), (2, 3), (3, 4)])):
        ri = encode_vc(g, 0)
        _, covers = minimum_vertex_covers(g)
        for c in covers:
            assert decode_cover(ri, construct_solution_from_cover(ri, c)) <= c


def test_decode_terrible_shifts():
    ri = encode_vc(SINGLE, 1)
    zero = {a: 0 for a in ri.instance.labels}
    c = decode_cover(ri, zero)
    assert is_vertex_cover(SINGLE, c)
    assert c == {1, 2}


def test_decode_under_threshold_is_small():
    ri = encode_vc(TRIANGLE, 2)
    t = construct_solution_from_cover(ri, {2, 3})
    t = {a: v + 1000 for a, v in t.items()}  # decode must not depend on t_root = 0
    value = evaluate(ri.instance, t).value
    assert value <= ri.threshold
    c = decode_cover(ri, t)
    assert is_vertex_cover(TRIANGLE, c) and len(c) <= value - ri.root_size


def test_original_vertex_names_preserved():
    g = Graph.from_edges([(10, 30), (30, 20)])
    ri = encode_vc(g, 1)
    assert ri.orientation == {"(1-3)": (1, 3), "(2-3)": (2, 3)}
    t = construct_solution_from_cover(ri, {30})
    assert decode_cover(ri, t) == {30}


@pytest.mark.parametrize("g", [SINGLE, TRIANGLE], ids=["single", "triangle"])
def test_gadget_checks_pass(g):
    report = check_gadget_lemmas(encode_vc(g, 1))
    assert report.ok, report.failures


@pytest.mark.parametrize("kind", MUTATIONS)
def test_gadget_mutations_fail(kind):
    for g in (SINGLE, TRIANGLE):
        assert not check_gadget_lemmas(mutate_gadget(encode_vc(g, 1), kind)).ok


def test_unknown_mutation():
    with pytest.raises(ValueError):
        mutate_gadget(encode_vc(SINGLE, 0), "nope")


def all_graphs(n, max_edges):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for m in range(max_edges + 1):
        for edges in itertools.combinations(pairs, m):
            yield Graph.from_edges(edges, vertices=range(1, n + 1))


def test_reduction_iff_small():
    for n in (2, 3):
        for g in all_graphs(n, 2):
            ri = encode_vc(g, 0)
            opt = solve_exact(ri.instance).value
            tau, _ = minimum_vertex_covers(g)
            assert opt == 4 * n + 8 + tau
            for k in range(n):
                assert has_vertex_cover(g, k) == (opt <= ri.root_size + k)


def test_l_reduction_inequality():
    rng = random.Random(8)
    for g in all_graphs(3, 2):
        ri = encode_vc(g, 0)
        upsilon = solve_exact(ri.instance).value
        tau, _ = minimum_vertex_covers(g)
        candidates = [-ri.s, ri.n, 0, 5, -ri.s + 1]
        for _ in range(30):
            t = {a: rng.choice(candidates) if rng.random() < 0.8 else rng.randint(-500, 500) for a in ri.instance.labels}
            c = decode_cover(ri, t)
            assert is_vertex_cover(g, c)
            assert len(c) - tau <= evaluate(ri.instance, t).value - upsilon


def test_random_cubic_graph():
    rng = random.Random(1)
    for n in (4, 6, 8, 10):
        g = random_cubic_graph(n, rng)
        deg = {v: 0 for v in g.vertices}
        for e in g.edges:
            for v in e:
                deg[v] += 1
        assert set(deg.values()) == {3}
        tau, _ = minimum_vertex_covers(g)
        assert 3 * tau >= len(g.edges) >= n


def test_random_graph_is_simple():
    g = random_graph(6, 0.5, random.Random(0))
    assert set(g.vertices) == set(range(1, 7))
