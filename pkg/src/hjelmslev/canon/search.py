"""Individualization-refinement search for canonical labeling and automorphisms.

The canonical leaf is the one maximizing ``(trace hashes along its path,
certificate)``.  Subtrees are skipped when their trace prefix is already worse
than the best leaf (unless it still matches the first leaf, which is kept to
harvest automorphisms), when their root is in the same orbit as an explored
sibling under the automorphisms found so far that fix the current path, and
by jumping back to the common ancestor whenever an automorphism is found.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..perm import StabilizerChain, UnionFind, is_identity, orbit_partition
from ._backend import partition_class
from .graph import ColoredGraph


@dataclass(eq=False)
class CanonResult:
    canonical_form: bytes
    labeling: list[int]  # labeling[v] = canonical index of vertex v
    aut_generators: list[tuple[int, ...]]
    base: list[int] = field(default_factory=list)
    nodes: int = 0

    @property
    def n(self) -> int:
        return len(self.labeling)

    @cached_property
    def aut_order(self) -> int:
        return StabilizerChain(self.n, self.aut_generators, base=self.base).order()

    def orbits(self) -> list[list[int]]:
        return orbit_partition(self.aut_generators, self.n)


class _Leaf:
    __slots__ = ("path", "invs", "cert", "lab")

    def __init__(self, path, invs, cert, lab):
        self.path = path
        self.invs = invs
        self.cert = cert
        self.lab = lab


def _common_prefix(a: list[int], b: list[int]) -> int:
    j = 0
    for x, y in zip(a, b):
        if x != y:
            break
        j += 1
    return j


class _Search:
    def __init__(self, g: ColoredGraph, backend: str | None):
        self.g = g
        self.Partition = partition_class(backend)
        self.indptr, self.indices = g.csr(self.Partition.wants_numpy)
        self.gens: list[tuple[int, ...]] = []
        self.first: _Leaf | None = None
        self.best: _Leaf | None = None
        self.nodes = 0

    def run(self) -> CanonResult:
        g = self.g
        part = self.Partition(g.n, g.color_cells())
        h = part.refine(self.indptr, self.indices, part.cell_starts())
        self._dfs(part, [], [h])
        best = self.best
        labeling = [0] * g.n
        for i, v in enumerate(best.lab):
            labeling[v] = i
        return CanonResult(best.cert, labeling, self.gens, list(self.first.path), self.nodes)

    def _worth(self, invs: list[int]) -> bool:
        if self.first is None:
            return True
        k = len(invs)
        if self.first.invs[:k] == invs:
            return True
        return invs >= self.best.invs[:k]

    def _dfs(self, part, path: list[int], invs: list[int]) -> int | None:
        self.nodes += 1
        s = part.target()
        if s < 0:
            return self._leaf(part, path, invs)
        depth = len(path)
        members = sorted(part.cell(s))
        explored: list[int] = []
        used = -1
        uf = None
        roots: set[int] = set()
        for v in members:
            if len(self.gens) != used:
                used = len(self.gens)
                uf = UnionFind(self.g.n)
                for gen in self.gens:
                    if all(gen[x] == x for x in path):
                        uf.add_perm(gen)
                roots = {uf.find(w) for w in explored}
            if uf.find(v) in roots:
                continue
            explored.append(v)
            roots.add(uf.find(v))
            child = part.copy()
            cs = child.individualize(v)
            h = child.refine(self.indptr, self.indices, [cs])
            cinvs = invs + [h]
            if not self._worth(cinvs):
                continue
            r = self._dfs(child, path + [v], cinvs)
            if r is not None and r < depth:
                return r
        return None

    def _leaf(self, part, path, invs) -> int | None:
        cert = part.certificate(self.indptr, self.indices, self.g.colors)
        lab = part.labeling()
        if self.first is None:
            self.first = self.best = _Leaf(path, invs, cert, lab)
            return None
        first, best = self.first, self.best
        if invs == first.invs and cert == first.cert:
            self._add_aut(first.lab, lab)
            return _common_prefix(path, first.path)
        key, bkey = (invs, cert), (best.invs, best.cert)
        if key == bkey:
            self._add_aut(best.lab, lab)
            return _common_prefix(path, best.path)
        if key > bkey:
            self.best = _Leaf(path, invs, cert, lab)
        return None

    def _add_aut(self, lab_a, lab_b) -> None:
        gamma = [0] * len(lab_a)
        for x, y in zip(lab_a, lab_b):
            gamma[x] = y
        gamma = tuple(gamma)
        if not is_identity(gamma):
            self.gens.append(gamma)


def canonical_form(g: ColoredGraph, backend: str | None = None) -> CanonResult:
    """Canonical labeling, automorphism generators and group order of a colored graph."""
    if g.n == 0:
        return CanonResult(b"\x00\x00\x00\x00\x00\x00\x00\x00", [], [])
    return _Search(g, backend).run()


def refine(g: ColoredGraph, partition: list[list[int]], backend: str | None = None) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition."""
    P = partition_class(backend)
    part = P(g.n, partition)
    indptr, indices = g.csr(P.wants_numpy)
    part.refine(indptr, indices, part.cell_starts())
    return part.cells()


def orbits(g: ColoredGraph, backend: str | None = None) -> list[list[int]]:
    return canonical_form(g, backend).orbits()
