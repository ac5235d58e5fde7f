"""Isomorph-free generation of complete (n,u)-arcs by canonical augmentation.

A node of the search tree is an arc K (a multiset of points, every hyperplane
carrying at most u points).  Its children add one point from each
Aut(K)-orbit of addable points.  A child K' = K + P is kept only if P lies in
the Aut(K')-orbit of the canonical deletion point of K', so every equivalence
class of arcs is reached along exactly one path.  Complete arcs (nothing
addable) are the recorded leaves.
"""

from __future__ import annotations

import json
import multiprocessing as mp
import os
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .canon import CanonResult, ColoredGraph, canonical_form
from .geometry import Geometry, build_geometry
from .perm import UnionFind, closure

CHECKPOINT_VERSION = 1
JOBS_ENV = "HJELMSLEV_JOBS"


# ---------------------------------------------------------------------------
# arcs


class Arc:
    """Multiset of points of a geometry with cached hyperplane loads."""

    __slots__ = ("geom", "mult", "loads")

    def __init__(self, geom: Geometry, mult, loads=None):
        self.geom = geom
        self.mult = np.asarray(mult, dtype=np.int64)
        if self.mult.shape != (geom.npoints,) or (self.mult < 0).any():
            raise ValueError("multiplicities must be a non-negative vector over the points")
        self.loads = self.mult @ geom.incidence if loads is None else loads

    @classmethod
    def empty(cls, geom: Geometry) -> "Arc":
        return cls(geom, np.zeros(geom.npoints, dtype=np.int64))

    @classmethod
    def from_points(cls, geom: Geometry, point_ids: Iterable[int]) -> "Arc":
        return cls(geom, np.bincount(np.asarray(list(point_ids), dtype=np.int64), minlength=geom.npoints))

    @classmethod
    def from_pairs(cls, geom: Geometry, pairs: Iterable[Sequence[int]]) -> "Arc":
        mult = np.zeros(geom.npoints, dtype=np.int64)
        for pid, m in pairs:
            mult[int(pid)] += int(m)
        return cls(geom, mult)

    @property
    def n(self) -> int:
        return int(self.mult.sum())

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.mult)[0]

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(self.mult[i])) for i in self.support]

    def point_ids(self) -> list[int]:
        return [int(i) for i in self.support for _ in range(int(self.mult[i]))]

    def max_load(self) -> int:
        return int(self.loads.max()) if len(self.loads) else 0

    def is_valid(self, u: int) -> bool:
        return self.max_load() <= u

    def loads_consistent(self) -> bool:
        return bool((self.loads == self.mult @ self.geom.incidence).all())

    def plus(self, pid: int) -> "Arc":
        mult = self.mult.copy()
        mult[pid] += 1
        return Arc(self.geom, mult, self.loads + self.geom.incidence[pid])

    def minus(self, pid: int) -> "Arc":
        if self.mult[pid] == 0:
            raise ValueError(f"point {pid} is not in the arc")
        mult = self.mult.copy()
        mult[pid] -= 1
        return Arc(self.geom, mult, self.loads - self.geom.incidence[pid])

    def fmt(self) -> list[str]:
        out = []
        for pid, m in self.pairs():
            s = self.geom.fmt_point(pid)
            out.append(s if m == 1 else f"{s} mult={m}")
        return out


def addable_points(arc: Arc, u: int, sets_only: bool = False) -> np.ndarray:
    """Points whose multiplicity can be raised by one without exceeding u on any hyperplane."""
    full = arc.loads >= u
    ok = ~arc.geom.incidence[:, full].any(axis=1)
    if sets_only:
        ok &= arc.mult == 0
    return np.nonzero(ok)[0]


def is_complete(arc: Arc, u: int, sets_only: bool = False) -> bool:
    return len(addable_points(arc, u, sets_only)) == 0


def is_degenerate(arc: Arc) -> bool:
    """Support generates a proper submodule iff its residues span less than F_q^(k+1)."""
    return arc.geom.residue_rank(arc.support) < arc.geom.k + 1


@lru_cache(maxsize=None)
def incidence_graph(geom: Geometry) -> ColoredGraph:
    """Point vertices 0..P-1 followed by hyperplane vertices, all color 0."""
    return ColoredGraph.bipartite(geom.incidence, [0] * geom.npoints, 0)


def arc_graph(arc: Arc, u: int) -> ColoredGraph:
    """Incidence graph with points colored by multiplicity and hyperplanes by u+1."""
    base = incidence_graph(arc.geom)
    colors = arc.mult.tolist() + [u + 1] * arc.geom.nhyps
    return base.with_colors(colors)


def arc_canon(arc: Arc, u: int) -> CanonResult:
    return canonical_form(arc_graph(arc, u))


def automorphism_order(arc: Arc, u: int) -> int:
    return arc_canon(arc, u).aut_order


# ---------------------------------------------------------------------------
# pruning bound


@lru_cache(maxsize=None)
def _excess_pairs(geom: Geometry) -> np.ndarray:
    # lambda(P,Q) - 1: hyperplanes through both, minus one (every pair has one)
    return (geom.common_hyperplanes - 1).astype(np.int64)


def extension_bound(arc: Arc, u: int, sets_only: bool = False) -> int:
    """Upper bound on |K'| over all (.,u)-arcs K' containing ``arc``.

    For any point P, |K'| = sum_{L through P} load'(L) - sum_Q m'(Q)(lambda(P,Q)-1).
    Loads are capped by what addable points could still contribute, and the
    subtracted term only grows under extension.
    """
    geom = arc.geom
    inc = geom.incidence
    add = addable_points(arc, u, sets_only)
    if len(add) == 0:
        return arc.n
    headroom = u - np.where(inc[add], arc.loads[None, :], 0).max(axis=1)
    if sets_only:
        headroom = np.minimum(headroom, 1)
    room = np.zeros(geom.npoints, dtype=np.int64)
    room[add] = headroom
    cap = np.minimum(u, arc.loads + room @ inc)
    per_point = inc.astype(np.int64) @ cap - _excess_pairs(geom) @ arc.mult
    global_bound = int(cap.sum()) // geom.hyps_per_point
    return int(min(per_point.min(), global_bound))


def size_upper_bound(geom: Geometry, u: int) -> int:
    """Counting bound n * (hyperplanes per point) <= u * (number of hyperplanes)."""
    return u * geom.nhyps // geom.hyps_per_point


# ---------------------------------------------------------------------------
# canonical augmentation


def _deletion_invariant(arc: Arc) -> np.ndarray:
    # isomorphism-invariant score per point; candidates for deletion maximize it
    inc = arc.geom.incidence.astype(np.int64)
    s1 = inc @ arc.loads
    s2 = inc @ (arc.loads * arc.loads)
    big = int(s2.max()) + 1
    return (arc.mult * (int(s1.max()) + 1) + s1) * big + s2


def _orbit_reps(gens: list[tuple[int, ...]], n: int, points: np.ndarray) -> list[int]:
    uf = UnionFind(n)
    for g in gens:
        uf.add_perm(g)
    seen = set()
    reps = []
    for p in points:
        r = uf.find(int(p))
        if r not in seen:
            seen.add(r)
            reps.append(int(p))
    return reps


@dataclass
class SearchOptions:
    u: int
    sets_only: bool = False
    min_size: int = 0

    def to_json(self) -> dict:
        return {"u": self.u, "sets_only": self.sets_only, "min_size": self.min_size}


@dataclass
class _Stats:
    nodes: int = 0
    canon_calls: int = 0
    pruned: int = 0

    def merge(self, other: "_Stats") -> None:
        self.nodes += other.nodes
        self.canon_calls += other.canon_calls
        self.pruned += other.pruned


class _Expander:
    def __init__(self, geom: Geometry, opts: SearchOptions):
        self.geom = geom
        self.opts = opts
        self.stats = _Stats()

    def canon(self, arc: Arc) -> CanonResult:
        self.stats.canon_calls += 1
        return arc_canon(arc, self.opts.u)

    def accept(self, child: Arc, pid: int) -> CanonResult | None | bool:
        """Parent test; returns the child's canon result, True if accepted without one, or None."""
        inv = _deletion_invariant(child)
        support = child.support
        best = inv[support].max()
        if inv[pid] != best:
            return None
        cands = support[inv[support] == best]
        if len(cands) == 1:
            return True
        res = self.canon(child)
        lab = res.labeling
        c = min((int(x) for x in cands), key=lambda x: lab[x])
        if c == pid:
            return res
        uf = UnionFind(len(lab))
        for g in res.aut_generators:
            uf.add_perm(g)
        return res if uf.find(c) == uf.find(pid) else None

    def children(self, arc: Arc, res: CanonResult | None) -> tuple[list[tuple[Arc, CanonResult | None]], bool]:
        """Accepted children and whether ``arc`` is complete."""
        opts = self.opts
        add = addable_points(arc, opts.u, opts.sets_only)
        if len(add) == 0:
            return [], True
        if res is None:
            res = self.canon(arc)
        out = []
        for pid in _orbit_reps(res.aut_generators, res.n, add):
            child = arc.plus(pid)
            if opts.min_size and extension_bound(child, opts.u, opts.sets_only) < opts.min_size:
                self.stats.pruned += 1
                continue
            verdict = self.accept(child, pid)
            if verdict is None:
                continue
            out.append((child, verdict if isinstance(verdict, CanonResult) else None))
        return out, False

    def run(self, stack: list[tuple[Arc, CanonResult | None]], deadline: float | None, max_nodes: int | None):
        """Depth-first expansion; returns (complete arcs found, unexpanded stack)."""
        found: list[Arc] = []
        while stack:
            if deadline is not None and time.monotonic() > deadline:
                break
            if max_nodes is not None and self.stats.nodes >= max_nodes:
                break
            arc, res = stack.pop()
            self.stats.nodes += 1
            kids, complete = self.children(arc, res)
            if complete:
                if arc.n >= self.opts.min_size:
                    found.append(arc)
                continue
            stack.extend(reversed(kids))
        return found, stack


# ---------------------------------------------------------------------------
# results


@dataclass
class ArcClass:
    representative: Arc
    canonical_form: bytes
    aut_order: int
    complete: bool
    degenerate: bool

    @property
    def n(self) -> int:
        return self.representative.n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "points": self.representative.fmt(),
            "point_ids": self.representative.pairs(),
            "aut_order": self.aut_order,
            "complete": self.complete,
            "degenerate": self.degenerate,
            "canonical_form_sha256": _sha256(self.canonical_form),
        }


def _sha256(b: bytes) -> str:
    import hashlib

    return hashlib.sha256(b).hexdigest()


@dataclass
class ClassificationResult:
    ring: str
    k: int
    options: SearchOptions
    classes: list[ArcClass]  # every complete class found with n >= min_size, sorted by canonical form
    final: bool
    nodes: int = 0
    canon_calls: int = 0
    pruned: int = 0
    attempts: list[dict] = field(default_factory=list)

    @property
    def u(self) -> int:
        return self.options.u

    @property
    def m_u(self) -> int | None:
        return max((c.n for c in self.classes), default=None)

    @property
    def classes_at_max(self) -> list[ArcClass]:
        top = self.m_u
        return [c for c in self.classes if c.n == top]

    @property
    def counts(self) -> tuple[int, int]:
        """(nondegenerate, total) class counts at the maximum size."""
        at = self.classes_at_max
        return sum(not c.degenerate for c in at), len(at)

    def census(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.classes:
            out[c.n] = out.get(c.n, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        nondeg, total = self.counts
        return {
            "ring": self.ring,
            "k": self.k,
            "u": self.u,
            "options": self.options.to_json(),
            "status": "final" if self.final else "budget-exhausted",
            "m_u": self.m_u,
            "nondegenerate_at_max": nondeg,
            "total_at_max": total,
            "census": {str(n): c for n, c in self.census().items()},
            "small_complete_classes_pruned": self.options.min_size > 0,
            "classes_at_max": [c.to_json() for c in self.classes_at_max],
            "search": {"nodes": self.nodes, "canon_calls": self.canon_calls, "pruned": self.pruned},
            "attempts": self.attempts,
        }


# ---------------------------------------------------------------------------
# checkpoints


def _save_checkpoint(path, geom, opts, pending, found, stats) -> None:
    data = {
        "version": CHECKPOINT_VERSION,
        "ring": geom.ring.name,
        "k": geom.k,
        "options": opts.to_json(),
        "pending": [a.pairs() for a, _ in pending],
        "found": [a.pairs() for a in found],
        "stats": {"nodes": stats.nodes, "canon_calls": stats.canon_calls, "pruned": stats.pruned},
    }
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps(data, sort_keys=True))
    os.replace(tmp, path)


def _load_checkpoint(path, geom, opts):
    data = json.loads(Path(path).read_text())
    if data.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version")
    if (data["ring"], data["k"], data["options"]) != (geom.ring.name, geom.k, opts.to_json()):
        raise ValueError(f"{path}: checkpoint belongs to a different search")
    pending = [(Arc.from_pairs(geom, p), None) for p in data["pending"]]
    found = [Arc.from_pairs(geom, p) for p in data["found"]]
    st = data["stats"]
    return pending, found, _Stats(st["nodes"], st["canon_calls"], st["pruned"])


# ---------------------------------------------------------------------------
# driver


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def _worker(args):
    ring, k, opts, pairs, deadline, max_nodes = args
    geom = build_geometry(ring, k)
    ex = _Expander(geom, opts)
    found, rest = ex.run([(Arc.from_pairs(geom, pairs), None)], deadline, max_nodes)
    return [a.pairs() for a in found], [a.pairs() for a, _ in rest], ex.stats


def _frontier(ex: _Expander, root: Arc, width: int) -> tuple[list, list[Arc]]:
    """Breadth-first expansion until at least ``width`` open nodes exist."""
    level = [(root, None)]
    found = []
    while level and len(level) < width:
        nxt = []
        for arc, res in level:
            ex.stats.nodes += 1
            kids, complete = ex.children(arc, res)
            if complete and arc.n >= ex.opts.min_size:
                found.append(arc)
            nxt.extend(kids)
        level = nxt
    return level, found


def classify(
    geom: Geometry,
    u: int,
    *,
    sets_only: bool = False,
    min_size: int = 0,
    jobs: int | None = None,
    checkpoint: str | Path | None = None,
    time_budget: float | None = None,
    max_nodes: int | None = None,
) -> ClassificationResult:
    """Classify complete (n,u)-arcs with n >= min_size up to equivalence.

    With ``min_size=0`` this is the full census of complete arcs.  When the
    budget runs out the open nodes are written to ``checkpoint`` (if given)
    and the result is marked non-final; calling again with the same
    checkpoint resumes.
    """
    if u < 1:
        raise ValueError("u must be positive")
    opts = SearchOptions(u, sets_only, min_size)
    jobs = default_jobs() if jobs is None else max(1, jobs)
    deadline = None if time_budget is None else time.monotonic() + time_budget
    ex = _Expander(geom, opts)
    if checkpoint and Path(checkpoint).exists():
        pending, found, ex.stats = _load_checkpoint(checkpoint, geom, opts)
    else:
        pending, found = [(Arc.empty(geom), None)], []
    if jobs > 1:
        pending, early = _frontier(ex, pending.pop()[0], 8 * jobs) if len(pending) == 1 else (pending, [])
        found += early
        rest_all = []
        budget_share = None if max_nodes is None else max(1, (max_nodes - ex.stats.nodes) // max(1, len(pending)))
        tasks = [(geom.ring.name, geom.k, opts, a.pairs(), deadline, budget_share) for a, _ in pending]
        ctx = mp.get_context("fork")
        with ctx.Pool(jobs) as pool:
            for f, rest, st in pool.imap(_worker, tasks):
                found += [Arc.from_pairs(geom, p) for p in f]
                rest_all += [(Arc.from_pairs(geom, p), None) for p in rest]
                ex.stats.merge(st)
        pending = rest_all
    else:
        f, pending = ex.run(pending, deadline, max_nodes)
        found += f
    final = not pending
    if checkpoint:
        if final:
            Path(checkpoint).unlink(missing_ok=True)
        else:
            _save_checkpoint(checkpoint, geom, opts, pending, found, ex.stats)
    classes = _collect(found, u, sets_only)
    return ClassificationResult(
        geom.ring.name, geom.k, opts, classes, final, ex.stats.nodes, ex.stats.canon_calls, ex.stats.pruned
    )


def _collect(found: list[Arc], u: int, sets_only: bool) -> list[ArcClass]:
    by_form: dict[bytes, ArcClass] = {}
    for arc in found:
        res = arc_canon(arc, u)
        if res.canonical_form in by_form:
            raise AssertionError("duplicate equivalence class emitted by the search")
        by_form[res.canonical_form] = ArcClass(
            arc, res.canonical_form, res.aut_order, is_complete(arc, u, sets_only), is_degenerate(arc)
        )
    return [by_form[f] for f in sorted(by_form)]


def find_maximum(
    geom: Geometry,
    u: int,
    *,
    start: int | None = None,
    sets_only: bool = False,
    jobs: int | None = None,
    time_budget: float | None = None,
    max_nodes: int | None = None,
) -> ClassificationResult:
    """Determine m_u by pruned searches with decreasing ``min_size``.

    Starts at the counting bound (or ``start``) and lowers the target until
    some complete arc reaches it; that search contains every maximal class.
    """
    target = size_upper_bound(geom, u) if start is None else start
    deadline = None if time_budget is None else time.monotonic() + time_budget
    attempts = []
    total = _Stats()
    while target >= 1:
        left = None if deadline is None else max(0.0, deadline - time.monotonic())
        res = classify(geom, u, sets_only=sets_only, min_size=target, jobs=jobs, time_budget=left, max_nodes=max_nodes)
        total.merge(_Stats(res.nodes, res.canon_calls, res.pruned))
        attempts.append({"min_size": target, "found": len(res.classes), "final": res.final, "nodes": res.nodes})
        if res.classes or not res.final:
            res.attempts = attempts
            res.nodes, res.canon_calls, res.pruned = total.nodes, total.canon_calls, total.pruned
            return res
        target -= 1
    raise AssertionError("no complete arc found at any size")


# ---------------------------------------------------------------------------
# hyperovals


def hyperoval_size(geom: Geometry) -> int:
    R = geom.ring
    return R.q**R.m + R.q ** (R.m - 1) + 1


def _hyperovals(geom: Geometry, fixed: Sequence[int] = (), limit: int | None = None) -> list[tuple[int, ...]]:
    # No tangents and (lines per point) = N - 1 force every pair of points onto
    # exactly one common line, so points are pairwise non-neighbours and every
    # line meets the hyperoval in 0 or 2 points.
    if geom.k != 2:
        raise ValueError("hyperovals live in planes (k = 2)")
    N = hyperoval_size(geom)
    classes = geom.neighbor_classes()
    if N > len(classes):
        return []
    inc = geom.incidence
    cls_of = geom.quotient
    fixed = [int(p) for p in fixed]
    loads = np.zeros(geom.nhyps, dtype=np.int64)
    for p in fixed:
        loads += inc[p]
    if loads.max(initial=0) > 2 or len({int(cls_of[p]) for p in fixed}) != len(fixed):
        return []
    used = {int(cls_of[p]) for p in fixed}
    order = [c for c in range(len(classes)) if c not in used]
    out: list[tuple[int, ...]] = []
    chosen = list(fixed)

    def dfs(i: int, loads: np.ndarray) -> bool:
        if len(chosen) == N:
            out.append(tuple(sorted(chosen)))
            return limit is not None and len(out) >= limit
        if len(chosen) + (len(order) - i) < N:
            return False
        for p in classes[order[i]]:
            row = inc[p]
            if (loads[row] >= 2).any():
                continue
            chosen.append(p)
            stop = dfs(i + 1, loads + row)
            chosen.pop()
            if stop:
                return True
        return dfs(i + 1, loads)

    dfs(0, loads)
    return sorted(out)


@dataclass
class HyperovalCensus:
    hyperovals: list[tuple[int, ...]]
    distinct_forms: int
    stabilizer_order: int | None

    @property
    def count(self) -> int:
        return len(self.hyperovals)

    def to_json(self) -> dict:
        return {"count": self.count, "distinct_canonical_forms": self.distinct_forms, "stabilizer_order": self.stabilizer_order}


def hyperoval_census(geom: Geometry) -> HyperovalCensus:
    """All hyperovals (no isomorph rejection) with a transitivity report."""
    ovals = _hyperovals(geom)
    if not ovals:
        return HyperovalCensus([], 0, None)
    forms = set()
    first = None
    for h in ovals:
        res = arc_canon(Arc.from_points(geom, h), 2)
        forms.add(res.canonical_form)
        if first is None:
            first = res
    return HyperovalCensus(ovals, len(forms), first.aut_order)


def is_quadrangle(geom: Geometry, pts: Sequence[int]) -> bool:
    """Four points in distinct neighbour classes, no three classes collinear in the quotient plane."""
    if geom.k != 2 or len(pts) != 4 or len({int(geom.quotient[p]) for p in pts}) != 4:
        return False
    for skip in range(4):
        trio = [p for j, p in enumerate(pts) if j != skip]
        if geom.residue_rank(trio) < 3:
            return False
    return True


def complete_to_hyperoval(geom: Geometry, quadrangle: Sequence[int]) -> Arc:
    if not is_quadrangle(geom, quadrangle):
        raise ValueError("input is not a quadrangle")
    ovals = _hyperovals(geom, quadrangle)
    if len(ovals) != 1:
        raise ValueError(f"expected a unique completion, found {len(ovals)}")
    return Arc.from_points(geom, ovals[0])


# ---------------------------------------------------------------------------
# collineations


def collineation_group(geom: Geometry) -> CanonResult:
    """Automorphisms of the incidence graph with points and hyperplanes kept apart."""
    return canonical_form(incidence_graph(geom).with_colors([0] * geom.npoints + [1] * geom.nhyps))


def kernel_group(geom: Geometry, limit: int = 10**6) -> list[tuple[int, ...]]:
    """Collineations fixing every neighbour class setwise, as permutations of points then hyperplanes."""
    base = incidence_graph(geom)
    colors = geom.quotient.tolist() + [int(geom.quotient.max()) + 1] * geom.nhyps
    res = canonical_form(base.with_colors(colors))
    return closure(res.aut_generators, res.n, limit)


def image_of_points(perm: Sequence[int], pts: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(perm[p] for p in pts))


__all__ = [
    "Arc",
    "ArcClass",
    "ClassificationResult",
    "HyperovalCensus",
    "SearchOptions",
    "addable_points",
    "arc_canon",
    "arc_graph",
    "automorphism_order",
    "classify",
    "collineation_group",
    "complete_to_hyperoval",
    "default_jobs",
    "extension_bound",
    "find_maximum",
    "hyperoval_census",
    "hyperoval_size",
    "image_of_points",
    "incidence_graph",
    "is_complete",
    "is_degenerate",
    "is_quadrangle",
    "kernel_group",
    "size_upper_bound",
]
