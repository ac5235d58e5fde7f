from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hjelmslev.geometry import (
    build_geometry,
    incident,
    load_geometry,
    normalize_hyperplane,
    normalize_point,
    point_count,
    points_per_hyperplane,
)
from hjelmslev.rings import RING_NAMES, build_ring

SMALL_K = [(name, k) for name in RING_NAMES for k in (1, 2) if not (k == 2 and build_ring(name).size > 16)]


def _orbits_brute(R, k, side):
    """Classes of vectors with a unit entry under unit scaling from one side."""
    units = [s for s in range(R.size) if R.unit[s]]
    seen, classes = set(), 0
    for v in product(range(R.size), repeat=k + 1):
        if v in seen or not any(R.unit[x] for x in v):
            continue
        classes += 1
        for s in units:
            if side == "right":
                seen.add(tuple(int(R.mul[x, s]) for x in v))
            else:
                seen.add(tuple(int(R.mul[s, x]) for x in v))
    return classes


@pytest.mark.parametrize("name,k", [("Z4", 2), ("Z4", 3), ("Z8", 2), ("T4", 2), ("S32", 2)])
def test_point_and_hyperplane_counts_brute_force(name, k):
    R = build_ring(name)
    npts = _orbits_brute(R, k, "right")
    assert npts == _orbits_brute(R, k, "left")
    g = build_geometry(name, k)
    assert g.npoints == g.nhyps == npts == point_count(R, k)


def test_known_counts():
    assert build_geometry("Z4", 2).npoints == 28
    assert build_geometry("Z4", 3).npoints == 120
    assert build_geometry("Z8", 2).npoints == 112
    assert point_count(build_ring("Z4"), 4) == 496


@pytest.mark.parametrize("name,k", SMALL_K + [("Z4", 3), ("S22", 3), ("Z9", 3)])
def test_regularity(name, k):
    g = build_geometry(name, k)
    R = g.ring
    assert g.npoints == point_count(R, k)
    assert (g.incidence.sum(axis=0) == points_per_hyperplane(R, k)).all()
    assert (g.incidence.sum(axis=1) == points_per_hyperplane(R, k)).all()
    classes = g.neighbor_classes()
    assert len(classes) == (R.q ** (k + 1) - 1) // (R.q - 1)
    assert {len(c) for c in classes} == {R.q ** ((R.m - 1) * k)}


def test_incidence_matches_scalar_rule():
    g = build_geometry("T4", 2)
    R = g.ring
    rng = np.random.default_rng(1)
    for i, j in rng.integers(0, g.npoints, size=(400, 2)):
        c, x = g.hyperplanes[j], g.points[i]
        acc = 0
        for ci, xi in zip(c, x):
            acc = int(R.add[acc, R.mul[int(ci), int(xi)]])
        assert g.incidence[i, j] == (acc == 0)


def test_z4_plane_structure():
    g = build_geometry("Z4", 2)
    assert g.hyps_per_point == 6
    assert [len(c) for c in g.neighbor_classes()] == [4] * 7
    assert normalize_point(g.ring, (3, 2, 1)) == (1, 2, 3)
    assert normalize_hyperplane(g.ring, (2, 3, 3)) == (2, 1, 1)
    assert incident(g.ring, (1, 1, 1), (1, 2, 1))
    assert not incident(g.ring, (1, 0, 0), (1, 2, 1))
    # two neighboring points share q = 2 lines, two non-neighbors share one
    lam = g.common_hyperplanes
    nbr = g.quotient[:, None] == g.quotient[None, :]
    off = ~np.eye(g.npoints, dtype=bool)
    assert set(lam[nbr & off].tolist()) == {2}
    assert set(lam[~nbr].tolist()) == {1}


def test_full_point_set_is_a_28_6_arc():
    g = build_geometry("Z4", 2)
    loads = g.incidence.sum(axis=0)
    assert loads.max() == 6 and g.npoints == 28


def test_rejects_vectors_without_unit():
    R = build_ring("Z4")
    with pytest.raises(ValueError):
        normalize_point(R, (2, 0, 2))
    with pytest.raises(ValueError):
        build_geometry("Z4", 5)


_T4 = build_ring("T4")
_T4_UNITS = [s for s in range(_T4.size) if _T4.unit[s]]
_T4_GEOM = build_geometry("T4", 2)

elements = st.integers(0, _T4.size - 1)
units = st.sampled_from(_T4_UNITS)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, _T4_GEOM.npoints - 1), st.integers(0, _T4_GEOM.nhyps - 1), units, units)
def test_rescaling_invariance_noncommutative(i, j, s, t):
    R, g = _T4, _T4_GEOM
    x = [int(v) for v in g.points[i]]
    c = [int(v) for v in g.hyperplanes[j]]
    xs = [int(R.mul[v, s]) for v in x]
    tc = [int(R.mul[t, v]) for v in c]
    assert g.point_id(xs) == i
    assert g.hyperplane_id(tc) == j
    assert incident(R, tc, xs) == bool(g.incidence[i, j])


@settings(max_examples=200, deadline=None)
@given(st.lists(elements, min_size=3, max_size=3))
def test_normalize_idempotent(v):
    R = _T4
    if not any(R.unit[x] for x in v):
        return
    p = normalize_point(R, v)
    assert normalize_point(R, p) == p
    assert _T4_GEOM.point_index[p] == _T4_GEOM.point_id(v)


def test_cache_round_trip(tmp_path):
    g = build_geometry("Z8", 2)
    path = tmp_path / "z8.phg"
    g.save(path)
    h = load_geometry(path)
    assert h.ring.name == "Z8" and h.k == 2
    assert (h.incidence == g.incidence).all()
    assert (h.points == g.points).all()


def test_cache_corruption_detected(tmp_path):
    g = build_geometry("Z4", 2)
    path = tmp_path / "z4.phg"
    g.save(path)
    data = bytearray(path.read_bytes())
    header = len(data) - (g.npoints * g.nhyps + 7) // 8
    for b in range(header, len(data)):
        data[b] ^= 0xFF
    path.write_bytes(bytes(data))
    with pytest.raises(ValueError):
        load_geometry(path)
    path.write_bytes(b"nope")
    with pytest.raises(ValueError):
        load_geometry(path)
    (tmp_path / "short.phg").write_bytes(bytes(data[: header + 3]))
    with pytest.raises(ValueError):
        load_geometry(tmp_path / "short.phg")
