"""Permutation helpers: orbits, Schreier-Sims group order, small-group closure.

Permutations are sequences ``p`` with ``p[i]`` the image of ``i``.  Products
act left to right: ``mul(p, q)`` first applies ``p`` then ``q``.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def mul(p: Sequence[int], q: Sequence[int]) -> Perm:
    return tuple(q[x] for x in p)


def inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_identity(p: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(p))


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def add_perm(self, p: Sequence[int]) -> None:
        for i, x in enumerate(p):
            if i != x:
                self.union(i, x)


def orbit_partition(gens: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """Orbits of <gens> on range(n), each sorted, ordered by least element."""
    uf = UnionFind(n)
    for g in gens:
        uf.add_perm(g)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    return sorted(groups.values())


class StabilizerChain:
    """Deterministic Schreier-Sims over an explicit generating set."""

    def __init__(self, n: int, gens: Iterable[Sequence[int]] = (), base: Sequence[int] = ()):
        self.n = n
        self.base: list[int] = []
        self.strong: list[list[Perm]] = []
        self.trans: list[dict[int, Perm]] = []  # point -> perm mapping base point to it
        self._base_hint = list(base)
        for g in gens:
            g = tuple(g)
            if not is_identity(g):
                h, lvl = self.sift(g)
                if not is_identity(h):
                    self._add_strong(h, 0, lvl)

    def order(self) -> int:
        out = 1
        for t in self.trans:
            out *= len(t)
        return out

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self.base)):
            x = g[self.base[i]]
            u = self.trans[i].get(x)
            if u is None:
                return g, i
            g = mul(g, inverse(u))
        return g, len(self.base)

    def contains(self, g: Sequence[int]) -> bool:
        h, _ = self.sift(tuple(g))
        return is_identity(h)

    def _new_level(self, g: Perm) -> None:
        b = next((x for x in self._base_hint if g[x] != x and x not in self.base), None)
        if b is None:
            b = next(i for i, x in enumerate(g) if i != x)
        self.base.append(b)
        self.strong.append([])
        self.trans.append({b: identity(self.n)})

    def _add_strong(self, h: Perm, lo: int, hi: int) -> None:
        # h fixes base[:hi], so it belongs to every stabilizer S^(j), lo <= j <= hi
        for j in range(hi, lo - 1, -1):
            self._extend(h, j)

    def _extend(self, g: Perm, level: int) -> None:
        if level == len(self.base):
            self._new_level(g)
        self.strong[level].append(g)
        trans = self.trans[level]
        gens = self.strong[level]
        # Schreier generators for the new generator at old orbit points, then
        # all generators at newly reached points
        todo = [(x, g) for x in list(trans)]
        while todo:
            x, s = todo.pop()
            y = s[x]
            ux = trans[x]
            if y not in trans:
                trans[y] = mul(ux, s)
                todo.extend((y, t) for t in gens)
                continue
            sch = mul(mul(ux, s), inverse(trans[y]))
            if is_identity(sch):
                continue
            h, lvl = self.sift(sch, level + 1)
            if not is_identity(h):
                self._add_strong(h, level + 1, lvl)


def group_order(gens: Iterable[Sequence[int]], n: int) -> int:
    return StabilizerChain(n, gens).order()


def closure(gens: Sequence[Sequence[int]], n: int, limit: int = 10**6) -> list[Perm]:
    """All elements of <gens> by breadth-first multiplication (small groups only)."""
    e = identity(n)
    seen = {e}
    frontier = [e]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise ValueError("group larger than closure limit")
        frontier = nxt
    return sorted(seen)
