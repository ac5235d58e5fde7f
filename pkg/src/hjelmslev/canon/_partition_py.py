"""Ordered partitions with equitable refinement, pure-Python backend.

The compiled twin in ``_partition_cy.pyx`` implements the same class with the
same hashing, so both produce identical traces and certificates.

Cells occupy contiguous ranges of ``lab``; a cell is named by its start
position.  ``cstart[v]`` is the start of the cell holding ``v`` and
``clen[s]`` the length of the cell starting at ``s``.
"""

from __future__ import annotations

import sys
from array import array

MASK = (1 << 64) - 1
FNV_PRIME = 0x100000001B3
FNV_SEED = 0xCBF29CE484222325


def _mix(h: int, x: int) -> int:
    return ((h ^ x) * FNV_PRIME) & MASK


class Partition:
    __slots__ = ("n", "lab", "pos", "cstart", "clen", "ncells")
    wants_numpy = False

    def __init__(self, n: int, cells=None):
        self.n = n
        if cells is None:
            return
        lab: list[int] = []
        cstart = [0] * n
        clen = [0] * n
        for cell in cells:
            s = len(lab)
            clen[s] = len(cell)
            for v in cell:
                cstart[v] = s
            lab.extend(cell)
        if len(lab) != n or len(set(lab)) != n:
            raise ValueError("cells must partition range(n)")
        self.lab = lab
        pos = [0] * n
        for i, v in enumerate(lab):
            pos[v] = i
        self.pos = pos
        self.cstart = cstart
        self.clen = clen
        self.ncells = len(cells)

    def copy(self) -> "Partition":
        other = Partition(self.n)
        other.lab = self.lab[:]
        other.pos = self.pos[:]
        other.cstart = self.cstart[:]
        other.clen = self.clen[:]
        other.ncells = self.ncells
        return other

    def cell_starts(self) -> list[int]:
        out = []
        i = 0
        while i < self.n:
            out.append(i)
            i += self.clen[i]
        return out

    def cells(self) -> list[list[int]]:
        return [self.lab[s : s + self.clen[s]] for s in self.cell_starts()]

    def cell(self, s: int) -> list[int]:
        return self.lab[s : s + self.clen[s]]

    def labeling(self) -> list[int]:
        return self.lab[:]

    def is_discrete(self) -> bool:
        return self.ncells == self.n

    def target(self) -> int:
        """Start of the first largest non-singleton cell, or -1 if discrete."""
        best, best_len = -1, 1
        i = 0
        clen = self.clen
        while i < self.n:
            L = clen[i]
            if L > best_len:
                best, best_len = i, L
            i += L
        return best

    def individualize(self, v: int) -> int:
        """Split v off the front of its cell; returns the singleton's start."""
        s = self.cstart[v]
        L = self.clen[s]
        if L == 1:
            return s
        lab, pos = self.lab, self.pos
        u = lab[s]
        pv = pos[v]
        lab[pv], pos[u] = u, pv
        lab[s], pos[v] = v, s
        self.clen[s] = 1
        self.clen[s + 1] = L - 1
        cstart = self.cstart
        for i in range(s + 1, s + L):
            cstart[lab[i]] = s + 1
        self.ncells += 1
        return s

    def refine(self, indptr, indices, queue) -> int:
        """Refine to the coarsest equitable partition; returns a trace hash.

        ``queue`` lists the cell starts to use as initial splitters.
        """
        n = self.n
        lab, pos, cstart, clen = self.lab, self.pos, self.cstart, self.clen
        inq = [False] * n
        q = list(queue)
        for s in q:
            inq[s] = True
        cnt = [0] * n
        h = FNV_SEED
        qi = 0
        while qi < len(q):
            if self.ncells == n:
                break
            w = q[qi]
            qi += 1
            inq[w] = False
            touched = []
            for i in range(w, w + clen[w]):
                v = lab[i]
                for e in range(indptr[v], indptr[v + 1]):
                    u = indices[e]
                    if cnt[u] == 0:
                        touched.append(u)
                    cnt[u] += 1
            h = _mix(h, w)
            h = _mix(h, len(touched))
            tcells = sorted({cstart[u] for u in touched})
            for s in tcells:
                L = clen[s]
                if L == 1:
                    h = _mix(h, cnt[lab[s]])
                    continue
                members = lab[s : s + L]
                cs = [cnt[v] for v in members]
                lo, hi = min(cs), max(cs)
                if lo == hi:
                    h = _mix(h, lo)
                    continue
                members.sort(key=cnt.__getitem__)
                was_queued = inq[s]
                frags = []  # (start, length)
                fs = s
                prev = cnt[members[0]]
                for j, v in enumerate(members):
                    c = cnt[v]
                    if c != prev:
                        frags.append((fs, s + j - fs, prev))
                        fs = s + j
                        prev = c
                    lab[s + j] = v
                    pos[v] = s + j
                frags.append((fs, s + L - fs, prev))
                for fstart, flen, c in frags:
                    clen[fstart] = flen
                    for i in range(fstart, fstart + flen):
                        cstart[lab[i]] = fstart
                    h = _mix(h, _mix(_mix(fstart, flen), c))
                self.ncells += len(frags) - 1
                if was_queued:
                    for fstart, _, _ in frags[1:]:
                        inq[fstart] = True
                        q.append(fstart)
                else:
                    big = max(range(len(frags)), key=lambda j: (frags[j][1], -j))
                    for j, (fstart, _, _) in enumerate(frags):
                        if j != big:
                            inq[fstart] = True
                            q.append(fstart)
            for u in touched:
                cnt[u] = 0
        h = _mix(h, self.ncells)
        return h

    def certificate(self, indptr, indices, colors) -> bytes:
        """Relabeled graph: n, color sequence, sorted upper-triangle edge keys (big-endian u32)."""
        n = self.n
        pos, lab = self.pos, self.lab
        keys = []
        for v in range(n):
            a = pos[v]
            for e in range(indptr[v], indptr[v + 1]):
                b = pos[indices[e]]
                if a < b:
                    keys.append(a * n + b)
        keys.sort()
        out = array("I", [n])
        out.extend(colors[v] for v in lab)
        out.append(len(keys))
        out.extend(keys)
        if sys.byteorder == "little":
            out.byteswap()
        return out.tobytes()
