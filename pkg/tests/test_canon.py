import random
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjelmslev.canon import BACKENDS, ColoredGraph, canonical_form, orbits, parse_dimacs, refine
from hjelmslev.geometry import build_geometry

BACKEND_NAMES = sorted(BACKENDS)


def _random_graph(rng, n, p=0.4, ncolors=1):
    edges = [(a, b) for a, b in combinations(range(n), 2) if rng.random() < p]
    colors = [rng.randrange(ncolors) for _ in range(n)]
    return ColoredGraph.from_edges(n, edges, colors)


def _brute_aut_count(g):
    n = g.n
    adj = [[False] * n for _ in range(n)]
    for a, b in g.edges():
        adj[a][b] = adj[b][a] = True
    count = 0
    for p in permutations(range(n)):
        if any(g.colors[p[v]] != g.colors[v] for v in range(n)):
            continue
        if all(adj[p[a]][p[b]] == adj[a][b] for a in range(n) for b in range(a + 1, n)):
            count += 1
    return count


def _cycle_count(perm, items):
    seen, cycles = set(), 0
    for x in items:
        if x in seen:
            continue
        cycles += 1
        while x not in seen:
            seen.add(x)
            x = perm(x)
    return cycles


def _burnside_classes(n, ncolors):
    """Isomorphism classes of vertex-colored simple graphs on n vertices."""
    pairs = list(combinations(range(n), 2))
    total = 0
    for p in permutations(range(n)):
        c_pairs = _cycle_count(lambda e: tuple(sorted((p[e[0]], p[e[1]]))), pairs)
        c_vert = _cycle_count(lambda v: p[v], range(n))
        total += 2**c_pairs * ncolors**c_vert
    return Fraction(total, factorial(n))


def _all_graphs(n, ncolors):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [e for i, e in enumerate(pairs) if mask >> i & 1]
        for colors in product(range(ncolors), repeat=n):
            yield ColoredGraph.from_edges(n, edges, list(colors))


def test_burnside_oracle_sanity():
    # uncolored graph counts on 1..5 vertices
    assert [_burnside_classes(n, 1) for n in range(1, 6)] == [1, 2, 4, 11, 34]


@pytest.mark.parametrize("backend", BACKEND_NAMES)
@pytest.mark.parametrize("n,ncolors", [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (3, 2), (4, 2)])
def test_census_distinct_forms_equals_class_count(backend, n, ncolors):
    forms = {canonical_form(g, backend).canonical_form for g in _all_graphs(n, ncolors)}
    assert len(forms) == _burnside_classes(n, ncolors)


@pytest.mark.slow
@pytest.mark.parametrize("backend", BACKEND_NAMES)
def test_census_six_vertices(backend):
    forms = {canonical_form(g, backend).canonical_form for g in _all_graphs(6, 1)}
    assert len(forms) == _burnside_classes(6, 1) == 156


@pytest.mark.parametrize("seed", range(60))
def test_aut_order_against_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    g = _random_graph(rng, n, p=rng.choice([0.2, 0.5, 0.8]), ncolors=rng.choice([1, 1, 2]))
    res = canonical_form(g)
    assert res.aut_order == _brute_aut_count(g)
    for gen in res.aut_generators:
        assert g.is_automorphism(gen)


@pytest.mark.parametrize("seed", range(40))
def test_relabeling_invariance_and_labeling(seed):
    rng = random.Random(1000 + seed)
    n = rng.randint(2, 30)
    g = _random_graph(rng, n, p=rng.choice([0.1, 0.3, 0.5]), ncolors=rng.choice([1, 2, 3]))
    base = canonical_form(g)
    for _ in range(3):
        perm = list(range(n))
        rng.shuffle(perm)
        h = g.relabel(perm)
        res = canonical_form(h)
        assert res.canonical_form == base.canonical_form
        assert res.aut_order == base.aut_order
    # applying the canonical labeling to g gives the same graph as applying it to any relabeling
    assert g.relabel(base.labeling).edges() == h.relabel(res.labeling).edges()


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.data())
def test_forms_separate_non_isomorphic(n, data):
    pairs = list(combinations(range(n), 2))
    e1 = data.draw(st.sets(st.sampled_from(pairs)))
    e2 = data.draw(st.sets(st.sampled_from(pairs)))
    g1 = ColoredGraph.from_edges(n, sorted(e1))
    g2 = ColoredGraph.from_edges(n, sorted(e2))
    r1, r2 = canonical_form(g1), canonical_form(g2)
    iso = g1.relabel(r1.labeling).edges() == g2.relabel(r2.labeling).edges()
    assert (r1.canonical_form == r2.canonical_form) == iso
    if r1.canonical_form != r2.canonical_form and n <= 7:
        # exhaustive check that they really are non-isomorphic
        s2 = {tuple(sorted(e)) for e in e2}
        assert not any({tuple(sorted((p[a], p[b]))) for a, b in e1} == s2 for p in permutations(range(n)))


@pytest.mark.skipif(len(BACKEND_NAMES) < 2, reason="compiled backend not built")
@pytest.mark.parametrize("seed", range(30))
def test_backends_agree(seed):
    rng = random.Random(5000 + seed)
    g = _random_graph(rng, rng.randint(1, 40), p=rng.random() * 0.5, ncolors=rng.randint(1, 3))
    results = [canonical_form(g, b) for b in BACKEND_NAMES]
    assert len({r.canonical_form for r in results}) == 1
    assert len({tuple(r.labeling) for r in results}) == 1
    assert len({r.aut_order for r in results}) == 1


def test_refine_examples():
    path = ColoredGraph.from_edges(3, [(0, 1), (1, 2)])
    cells = refine(path, [[0, 1, 2]])
    assert sorted(map(sorted, cells)) == [[0, 2], [1]]
    cycle = ColoredGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert refine(cycle, [[0, 1, 2, 3]]) == [[0, 1, 2, 3]]
    split = refine(cycle, [[0], [1, 2, 3]])
    assert sorted(map(sorted, split)) == [[0], [1, 3], [2]]


def test_small_aut_orders():
    tri = ColoredGraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert canonical_form(tri).aut_order == 6
    c4 = ColoredGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert canonical_form(c4).aut_order == 8
    edgeless = ColoredGraph.from_edges(6, [])
    assert canonical_form(edgeless).aut_order == 720
    assert orbits(edgeless) == [list(range(6))]
    star = ColoredGraph.from_edges(6, [(0, i) for i in range(1, 6)])
    assert canonical_form(star).aut_order == 120
    assert orbits(star) == [[0], [1, 2, 3, 4, 5]]
    assert canonical_form(ColoredGraph.from_edges(0, [])).aut_order == 1


def test_petersen_and_cube():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    petersen = ColoredGraph.from_edges(10, outer + spokes + inner)
    assert canonical_form(petersen).aut_order == 120
    cube = ColoredGraph.from_edges(8, [(a, a ^ (1 << b)) for a in range(8) for b in range(3) if a < a ^ (1 << b)])
    assert canonical_form(cube).aut_order == 48


def test_z4_plane_collineations():
    g = build_geometry("Z4", 2)
    colored = ColoredGraph.bipartite(g.incidence, [0] * g.npoints, 1)
    res = canonical_form(colored)
    assert res.aut_order == 43008
    assert len(res.orbits()) == 2
    # without separating points from lines, dualities are included
    plain = ColoredGraph.bipartite(g.incidence, [0] * g.npoints, 0)
    assert canonical_form(plain).aut_order == 2 * 43008


def test_z16_plane_completes():
    g = build_geometry("Z16", 2)
    res = canonical_form(ColoredGraph.bipartite(g.incidence, [0] * g.npoints, 1))
    assert len(res.labeling) == 2 * g.npoints
    assert sorted(res.labeling) == list(range(2 * g.npoints))


def test_parse_dimacs():
    text = "c a triangle with a tail\np edge 4 4\ne 1 2\ne 2 3\ne 3 1\ne 3 4\nn 4 2\n"
    g = parse_dimacs(text)
    assert g.n == 4 and g.colors == [0, 0, 0, 2]
    assert sorted(g.edges()) == [(0, 1), (0, 2), (1, 2), (2, 3)]
    assert canonical_form(g).aut_order == 2
    with pytest.raises(ValueError):
        parse_dimacs("e 1 2\n")
    with pytest.raises(ValueError):
        parse_dimacs("p edge 2 1\nx 1 2\n")


def test_rejects_bad_graphs():
    with pytest.raises(ValueError):
        ColoredGraph.from_edges(2, [(1, 1)])
    with pytest.raises(ValueError):
        ColoredGraph.from_edges(2, [(0, 1)], colors=[0])


def test_bipartite_layout():
    inc = np.array([[1, 0], [1, 1]], dtype=bool)
    g = ColoredGraph.bipartite(inc, [5, 6], 9)
    assert g.colors == [5, 6, 9, 9]
    assert sorted(g.edges()) == [(0, 2), (1, 2), (1, 3)]
