from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np


class ColoredGraph:
    """Undirected simple graph on 0..n-1 with a small integer color per vertex.

    Stored in CSR form (``indptr``, ``indices``) so many graphs can share one
    adjacency structure and differ only in colors.
    """

    __slots__ = ("n", "indptr", "indices", "colors", "_np")

    def __init__(self, n: int, indptr, indices, colors: Sequence[int] | None = None, _np=None):
        self.n = n
        self.indptr = list(indptr)
        self.indices = list(indices)
        self._np = _np
        self.colors = list(colors) if colors is not None else [0] * n
        if len(self.colors) != n:
            raise ValueError("one color per vertex required")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], colors=None) -> "ColoredGraph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise ValueError("self-loops are not allowed")
            adj[a].add(b)
            adj[b].add(a)
        return cls.from_adjacency([sorted(s) for s in adj], colors)

    @classmethod
    def from_adjacency(cls, adj: Sequence[Sequence[int]], colors=None) -> "ColoredGraph":
        n = len(adj)
        indptr = [0]
        indices: list[int] = []
        for row in adj:
            indices.extend(int(x) for x in row)
            indptr.append(len(indices))
        return cls(n, indptr, indices, colors)

    @classmethod
    def bipartite(cls, incidence: np.ndarray, left_colors, right_color: int) -> "ColoredGraph":
        """Incidence graph: rows are vertices 0..r-1, columns r..r+c-1."""
        r, c = incidence.shape
        rows = [list(np.nonzero(row)[0] + r) for row in incidence]
        cols = [list(np.nonzero(col)[0]) for col in incidence.T]
        return cls.from_adjacency(rows + cols, list(left_colors) + [right_color] * c)

    def with_colors(self, colors: Sequence[int]) -> "ColoredGraph":
        g = ColoredGraph.__new__(ColoredGraph)
        g.n, g.indptr, g.indices, g._np = self.n, self.indptr, self.indices, self.csr(True)
        g.colors = list(colors)
        if len(g.colors) != g.n:
            raise ValueError("one color per vertex required")
        return g

    def csr(self, as_numpy: bool = False):
        if not as_numpy:
            return self.indptr, self.indices
        if self._np is None:
            self._np = (np.asarray(self.indptr, dtype=np.int32), np.asarray(self.indices, dtype=np.int32))
        return self._np

    def neighbors(self, v: int) -> list[int]:
        return list(self.indices[self.indptr[v] : self.indptr[v + 1]])

    def edges(self) -> list[tuple[int, int]]:
        return [(v, u) for v in range(self.n) for u in self.neighbors(v) if v < u]

    def relabel(self, perm: Sequence[int]) -> "ColoredGraph":
        """Graph with vertex v renamed perm[v]."""
        colors = [0] * self.n
        for v, c in enumerate(self.colors):
            colors[perm[v]] = c
        return ColoredGraph.from_edges(self.n, [(perm[a], perm[b]) for a, b in self.edges()], colors)

    def is_automorphism(self, perm: Sequence[int]) -> bool:
        if any(self.colors[perm[v]] != self.colors[v] for v in range(self.n)):
            return False
        for v in range(self.n):
            if sorted(perm[u] for u in self.neighbors(v)) != sorted(self.neighbors(perm[v])):
                return False
        return True

    def color_cells(self) -> list[list[int]]:
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(self.colors):
            cells.setdefault(c, []).append(v)
        return [cells[c] for c in sorted(cells)]


def parse_dimacs(text: str) -> ColoredGraph:
    """Read ``p edge N M`` / ``e a b`` / ``n v color`` lines (1-based vertices)."""
    n = None
    edges = []
    colors: dict[int, int] = {}
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        elif parts[0] == "n":
            colors[int(parts[1]) - 1] = int(parts[2])
        else:
            raise ValueError(f"unrecognized DIMACS line: {line!r}")
    if n is None:
        raise ValueError("missing 'p edge' header")
    return ColoredGraph.from_edges(n, edges, [colors.get(v, 0) for v in range(n)])
