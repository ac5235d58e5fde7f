import random
from collections import Counter
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjelmslev.arcsearch import (
    Arc,
    addable_points,
    arc_canon,
    arc_graph,
    classify,
    collineation_group,
    complete_to_hyperoval,
    default_jobs,
    extension_bound,
    find_maximum,
    hyperoval_census,
    hyperoval_size,
    image_of_points,
    is_complete,
    is_degenerate,
    is_quadrangle,
    kernel_group,
    size_upper_bound,
)
from hjelmslev.geometry import build_geometry

Z4 = build_geometry("Z4", 2)


def _brute_classes(geom, u, sets_only=False):
    """Level-by-level generation of all arcs, deduplicated by canonical form; returns complete-arc forms."""
    level = {arc_canon(Arc.empty(geom), u).canonical_form: Arc.empty(geom)}
    complete = {}
    while level:
        nxt = {}
        for arc in level.values():
            add = addable_points(arc, u, sets_only)
            if len(add) == 0:
                complete[arc_canon(arc, u).canonical_form] = arc
            for p in add:
                child = arc.plus(int(p))
                f = arc_canon(child, u).canonical_form
                nxt.setdefault(f, child)
        level = nxt
    return complete


@pytest.mark.parametrize(
    "ring,u,sets_only",
    [("Z4", 2, False), ("S22", 2, False), ("Z4", 3, True), ("Z4", 2, True), ("Z4", 3, False), ("S22", 3, False)],
)
def test_classify_matches_brute_force(ring, u, sets_only):
    geom = build_geometry(ring, 2)
    want = _brute_classes(geom, u, sets_only)
    res = classify(geom, u, sets_only=sets_only)
    assert res.final
    assert {c.canonical_form for c in res.classes} == set(want)
    for c in res.classes:
        assert c.complete and c.representative.is_valid(u)
        assert c.representative.loads_consistent()
        if sets_only:
            assert c.representative.mult.max() == 1


@pytest.mark.slow
@pytest.mark.parametrize("ring,k,u", [("Z4", 2, 4), ("Z4", 3, 2), ("Z8", 2, 2), ("Z9", 2, 2)])
def test_classify_matches_brute_force_larger(ring, k, u):
    geom = build_geometry(ring, k)
    want = _brute_classes(geom, u)
    res = classify(geom, u)
    assert {c.canonical_form for c in res.classes} == set(want)


def test_z4_u2_full_census():
    res = classify(Z4, 2)
    assert res.census() == {2: 1, 4: 1, 6: 1, 7: 1}
    assert res.m_u == 7 and res.counts == (1, 1)
    small = [c for c in res.classes if c.n == 2][0]
    assert small.representative.mult.max() == 2  # a doubled point blocks every line through it


def test_min_size_keeps_exactly_the_large_classes():
    full = classify(Z4, 3)
    cut = classify(Z4, 3, min_size=9)
    assert {c.canonical_form for c in cut.classes} == {c.canonical_form for c in full.classes if c.n >= 9}
    assert cut.pruned > 0


def test_find_maximum_z4():
    res = find_maximum(Z4, 3)
    assert res.final and res.m_u == 10 and res.counts == (8, 8)
    assert res.attempts[0]["min_size"] == size_upper_bound(Z4, 3)
    assert res.attempts[-1]["min_size"] == 10


def test_counting_bound():
    assert size_upper_bound(Z4, 2) == 9
    assert size_upper_bound(Z4, 6) == 28


def test_checkpoint_resume_equals_uninterrupted(tmp_path):
    ref = classify(Z4, 3, min_size=9)
    ck = tmp_path / "run.json"
    res = classify(Z4, 3, min_size=9, checkpoint=ck, max_nodes=40)
    assert not res.final and ck.exists()
    rounds = 1
    while not res.final:
        rounds += 1
        res = classify(Z4, 3, min_size=9, checkpoint=ck, max_nodes=40 * rounds)
    assert rounds > 2
    assert not ck.exists()
    assert [c.canonical_form for c in res.classes] == [c.canonical_form for c in ref.classes]
    assert res.nodes == ref.nodes


def test_checkpoint_rejects_other_search(tmp_path):
    ck = tmp_path / "run.json"
    classify(Z4, 3, min_size=9, checkpoint=ck, max_nodes=5)
    with pytest.raises(ValueError):
        classify(Z4, 4, min_size=9, checkpoint=ck)


def test_parallel_equals_serial():
    a = classify(Z4, 3, min_size=9, jobs=1)
    b = classify(Z4, 3, min_size=9, jobs=2)
    assert [c.canonical_form for c in a.classes] == [c.canonical_form for c in b.classes]


def test_default_jobs_env(monkeypatch):
    monkeypatch.setenv("HJELMSLEV_JOBS", "3")
    assert default_jobs() == 3
    monkeypatch.setenv("HJELMSLEV_JOBS", "bogus")
    assert default_jobs() == 1
    monkeypatch.delenv("HJELMSLEV_JOBS")
    assert default_jobs() == 1


def test_budget_exhaustion_is_reported():
    res = classify(Z4, 4, max_nodes=3)
    assert not res.final
    assert res.to_json()["status"] == "budget-exhausted"


def test_arc_basics():
    a = Arc.from_points(Z4, [0, 0, 5])
    assert a.n == 3 and a.pairs() == [(0, 2), (5, 1)]
    assert a.point_ids() == [0, 0, 5]
    assert a.minus(0).plus(0).pairs() == a.pairs()
    with pytest.raises(ValueError):
        a.minus(1)
    with pytest.raises(ValueError):
        Arc(Z4, np.zeros(3))
    assert Arc.from_pairs(Z4, [(0, 2), (5, 1)]).pairs() == a.pairs()
    assert a.fmt()[0].endswith("mult=2")


def test_arc_graph_colors():
    a = Arc.from_points(Z4, [0, 0, 5])
    g = arc_graph(a, 3)
    assert g.n == Z4.npoints + Z4.nhyps
    assert g.colors[0] == 2 and g.colors[5] == 1 and g.colors[1] == 0
    assert set(g.colors[Z4.npoints :]) == {4}


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, Z4.npoints - 1), max_size=8), st.integers(1, 4), st.booleans())
def test_addable_points_definition(pts, u, sets_only):
    arc = Arc.from_points(Z4, pts)
    got = set(addable_points(arc, u, sets_only).tolist())
    want = set()
    for p in range(Z4.npoints):
        if sets_only and arc.mult[p]:
            continue
        if all(arc.loads[h] < u for h in Z4.hyps_of_point[p]):
            want.add(p)
    assert got == want
    assert is_complete(arc, u, sets_only) == (not want)


def _submodule_is_proper(geom, pids):
    R = geom.ring
    dim = geom.k + 1
    span = {(0,) * dim}
    gens = [tuple(int(x) for x in geom.points[p]) for p in pids]
    frontier = list(span)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                for s in range(R.size):
                    w = tuple(int(R.add[a, R.mul[b, s]]) for a, b in zip(v, g))
                    if w not in span:
                        span.add(w)
                        nxt.append(w)
        frontier = nxt
    return len(span) < R.size**dim


@settings(max_examples=60, deadline=None)
@given(st.sets(st.integers(0, Z4.npoints - 1), min_size=1, max_size=5))
def test_degenerate_against_submodule_span(pids):
    arc = Arc.from_points(Z4, sorted(pids))
    assert is_degenerate(arc) == _submodule_is_proper(Z4, sorted(pids))


def _random_completion(arc, u, rng, sets_only=False):
    while True:
        add = addable_points(arc, u, sets_only)
        if len(add) == 0:
            return arc
        arc = arc.plus(int(rng.choice(add)))


@pytest.mark.parametrize("ring", ["Z4", "S22", "Z8"])
@pytest.mark.parametrize("u", [2, 3, 4])
def test_extension_bound_is_sound(ring, u):
    geom = build_geometry(ring, 2)
    rng = np.random.default_rng(u)
    for trial in range(25):
        sets_only = bool(trial % 2)
        arc = _random_completion(Arc.empty(geom), u, rng, sets_only)
        cut = int(rng.integers(0, arc.n + 1))
        ids = arc.point_ids()
        rng.shuffle(ids)
        part = Arc.from_points(geom, ids[:cut])
        assert extension_bound(part, u, sets_only) >= arc.n
        # every completion of the partial arc respects the bound
        for _ in range(3):
            ext = _random_completion(part, u, rng, sets_only)
            assert extension_bound(part, u, sets_only) >= ext.n


def test_extension_bound_on_complete_arc():
    res = classify(Z4, 2)
    for c in res.classes:
        assert extension_bound(c.representative, 2) == c.n


# hyperovals and collineations


def test_hyperoval_census_z4():
    census = hyperoval_census(Z4)
    assert hyperoval_size(Z4) == 7
    assert census.count == 256
    assert census.distinct_forms == 1
    assert census.stabilizer_order == 168
    assert collineation_group(Z4).aut_order == 256 * 168
    for h in census.hyperovals[:20]:
        loads = Arc.from_points(Z4, h).loads
        assert set(loads.tolist()) <= {0, 2}
        assert len({int(Z4.quotient[p]) for p in h}) == 7


def test_quadrangles_complete_uniquely():
    census = hyperoval_census(Z4)
    covered = Counter()
    for h in census.hyperovals:
        for quad in combinations(h, 4):
            if is_quadrangle(Z4, quad):
                covered[quad] += 1
    assert set(covered.values()) == {1}
    # every quadrangle of the plane is covered: 7 frames of the quotient plane, 4 lifts per point
    classes = Z4.neighbor_classes()
    frames = [c for c in combinations(range(7), 4) if is_quadrangle(Z4, [classes[i][0] for i in c])]
    assert len(frames) == 7
    assert len(covered) == 7 * 4**4
    rng = random.Random(0)
    for quad in rng.sample(sorted(covered), 25):
        arc = complete_to_hyperoval(Z4, list(quad))
        assert set(quad) <= set(arc.support.tolist()) and arc.n == 7


def test_ordered_quadrangles_per_hyperoval():
    h = hyperoval_census(Z4).hyperovals[0]
    ordered = [q for q in permutations(h, 4) if is_quadrangle(Z4, q)]
    assert len(ordered) == 168


def test_quadrangle_rejects_collinear_classes():
    classes = Z4.neighbor_classes()
    with pytest.raises(ValueError):
        complete_to_hyperoval(Z4, [classes[0][0], classes[0][1], classes[1][0], classes[2][0]])


def test_kernel_acts_regularly_on_hyperovals():
    ovals = hyperoval_census(Z4).hyperovals
    kernel = kernel_group(Z4)
    assert len(kernel) == 256
    h0 = ovals[0]
    images = {image_of_points(g, h0) for g in kernel}
    assert images == set(ovals)


def test_no_hyperovals_in_z8_plane():
    assert hyperoval_census(build_geometry("Z8", 2)).count == 0


def test_hyperovals_need_a_plane():
    from hjelmslev.arcsearch import _hyperovals

    with pytest.raises(ValueError):
        _hyperovals(build_geometry("Z4", 3))


def test_g42_hyperoval_exists():
    from hjelmslev.arcsearch import _hyperovals

    g = build_geometry("G42", 2)
    found = _hyperovals(g, limit=1)
    assert len(found) == 1
    arc = Arc.from_points(g, found[0])
    assert arc.n == hyperoval_size(g) == 21
    assert set(arc.loads.tolist()) <= {0, 2}
