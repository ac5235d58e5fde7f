# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Ordered partitions with equitable refinement, compiled backend.

Mirrors ``_partition_py.Partition`` exactly, including the trace hash and the
certificate byte layout.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, uint32_t, uint64_t
from libc.stdlib cimport malloc, free, qsort
from libc.string cimport memset

cnp.import_array()

cdef uint64_t FNV_PRIME = 0x100000001B3ULL
cdef uint64_t FNV_SEED = 0xCBF29CE484222325ULL


cdef inline uint64_t mix(uint64_t h, uint64_t x) noexcept nogil:
    return (h ^ x) * FNV_PRIME


cdef int cmp_u64(const void* a, const void* b) noexcept nogil:
    cdef uint64_t x = (<uint64_t*>a)[0]
    cdef uint64_t y = (<uint64_t*>b)[0]
    return (x > y) - (x < y)


cdef int cmp_i32(const void* a, const void* b) noexcept nogil:
    cdef int32_t x = (<int32_t*>a)[0]
    cdef int32_t y = (<int32_t*>b)[0]
    return (x > y) - (x < y)


cdef int cmp_u32(const void* a, const void* b) noexcept nogil:
    cdef uint32_t x = (<uint32_t*>a)[0]
    cdef uint32_t y = (<uint32_t*>b)[0]
    return (x > y) - (x < y)


cdef class Partition:
    cdef public int n
    cdef public int ncells
    cdef int32_t[::1] lab
    cdef int32_t[::1] pos
    cdef int32_t[::1] cstart
    cdef int32_t[::1] clen

    wants_numpy = True

    def __init__(self, int n, cells=None):
        self.n = n
        if cells is None:
            return
        lab = np.empty(n, dtype=np.int32)
        pos = np.empty(n, dtype=np.int32)
        cstart = np.zeros(n, dtype=np.int32)
        clen = np.zeros(n, dtype=np.int32)
        cdef int i = 0
        cdef int s
        seen = np.zeros(n, dtype=bool)
        for cell in cells:
            s = i
            clen[s] = len(cell)
            for v in cell:
                if i >= n or seen[v]:
                    raise ValueError("cells must partition range(n)")
                seen[v] = True
                lab[i] = v
                pos[v] = i
                cstart[v] = s
                i += 1
        if i != n:
            raise ValueError("cells must partition range(n)")
        self.lab, self.pos, self.cstart, self.clen = lab, pos, cstart, clen
        self.ncells = len(cells)

    def copy(self):
        cdef Partition other = Partition.__new__(Partition)
        other.n = self.n
        other.ncells = self.ncells
        other.lab = np.array(self.lab, copy=True)
        other.pos = np.array(self.pos, copy=True)
        other.cstart = np.array(self.cstart, copy=True)
        other.clen = np.array(self.clen, copy=True)
        return other

    def cell_starts(self):
        out = []
        cdef int i = 0
        while i < self.n:
            out.append(i)
            i += self.clen[i]
        return out

    def cells(self):
        return [self.cell(s) for s in self.cell_starts()]

    def cell(self, int s):
        return [int(self.lab[i]) for i in range(s, s + self.clen[s])]

    def labeling(self):
        return [int(x) for x in self.lab]

    def is_discrete(self):
        return self.ncells == self.n

    def target(self):
        cdef int best = -1, best_len = 1, i = 0, L
        while i < self.n:
            L = self.clen[i]
            if L > best_len:
                best = i
                best_len = L
            i += L
        return best

    def individualize(self, int v):
        cdef int s = self.cstart[v]
        cdef int L = self.clen[s]
        cdef int u, pv, i
        if L == 1:
            return s
        u = self.lab[s]
        pv = self.pos[v]
        self.lab[pv] = u
        self.pos[u] = pv
        self.lab[s] = v
        self.pos[v] = s
        self.clen[s] = 1
        self.clen[s + 1] = L - 1
        for i in range(s + 1, s + L):
            self.cstart[self.lab[i]] = s + 1
        self.ncells += 1
        return s

    def refine(self, const int32_t[::1] indptr, const int32_t[::1] indices, queue):
        cdef int n = self.n
        cdef int32_t* cnt = <int32_t*>malloc(n * sizeof(int32_t))
        cdef char* inq = <char*>malloc(n * sizeof(char))
        cdef char* cmark = <char*>malloc(n * sizeof(char))
        cdef int32_t* q = <int32_t*>malloc(n * sizeof(int32_t))
        cdef int32_t* touched = <int32_t*>malloc(n * sizeof(int32_t))
        cdef int32_t* tcells = <int32_t*>malloc(n * sizeof(int32_t))
        cdef uint64_t* keys = <uint64_t*>malloc(n * sizeof(uint64_t))
        cdef int32_t* fst = <int32_t*>malloc(n * sizeof(int32_t))
        cdef int32_t* fln = <int32_t*>malloc(n * sizeof(int32_t))
        cdef int32_t* fct = <int32_t*>malloc(n * sizeof(int32_t))
        cdef int32_t* order = <int32_t*>malloc(n * sizeof(int32_t))
        cdef uint64_t h = FNV_SEED
        cdef int qhead = 0, qcount = 0
        cdef int w, i, e, v, u, ntouched, ntc, t, s, L, j, lo, hi, c, nfrag, fs, prev, big, bigl
        cdef bint was_queued
        cdef int32_t[::1] lab = self.lab
        cdef int32_t[::1] pos = self.pos
        cdef int32_t[::1] cstart = self.cstart
        cdef int32_t[::1] clen = self.clen
        try:
            memset(cnt, 0, n * sizeof(int32_t))
            memset(inq, 0, n)
            memset(cmark, 0, n)
            for s0 in queue:
                s = s0
                if not inq[s]:
                    inq[s] = 1
                    q[(qhead + qcount) % n] = s
                    qcount += 1
            with nogil:
                while qcount > 0:
                    if self.ncells == n:
                        break
                    w = q[qhead]
                    qhead = (qhead + 1) % n
                    qcount -= 1
                    inq[w] = 0
                    ntouched = 0
                    for i in range(w, w + clen[w]):
                        v = lab[i]
                        for e in range(indptr[v], indptr[v + 1]):
                            u = indices[e]
                            if cnt[u] == 0:
                                touched[ntouched] = u
                                ntouched += 1
                            cnt[u] += 1
                    h = mix(h, <uint64_t>w)
                    h = mix(h, <uint64_t>ntouched)
                    ntc = 0
                    for t in range(ntouched):
                        s = cstart[touched[t]]
                        if not cmark[s]:
                            cmark[s] = 1
                            tcells[ntc] = s
                            ntc += 1
                    qsort(tcells, ntc, sizeof(int32_t), cmp_i32)
                    for t in range(ntc):
                        s = tcells[t]
                        cmark[s] = 0
                        L = clen[s]
                        if L == 1:
                            h = mix(h, <uint64_t>cnt[lab[s]])
                            continue
                        lo = cnt[lab[s]]
                        hi = lo
                        for j in range(s, s + L):
                            c = cnt[lab[j]]
                            if c < lo:
                                lo = c
                            if c > hi:
                                hi = c
                        if lo == hi:
                            h = mix(h, <uint64_t>lo)
                            continue
                        # stable sort by count: key = count << 32 | offset
                        for j in range(L):
                            keys[j] = ((<uint64_t>cnt[lab[s + j]]) << 32) | <uint64_t>j
                        qsort(keys, L, sizeof(uint64_t), cmp_u64)
                        for j in range(L):
                            order[j] = lab[s + <int>(keys[j] & 0xFFFFFFFFULL)]
                        was_queued = inq[s]
                        nfrag = 0
                        fs = s
                        prev = cnt[order[0]]
                        for j in range(L):
                            v = order[j]
                            c = cnt[v]
                            if c != prev:
                                fst[nfrag] = fs
                                fln[nfrag] = s + j - fs
                                fct[nfrag] = prev
                                nfrag += 1
                                fs = s + j
                                prev = c
                            lab[s + j] = v
                            pos[v] = s + j
                        fst[nfrag] = fs
                        fln[nfrag] = s + L - fs
                        fct[nfrag] = prev
                        nfrag += 1
                        big = 0
                        bigl = -1
                        for j in range(nfrag):
                            clen[fst[j]] = fln[j]
                            for i in range(fst[j], fst[j] + fln[j]):
                                cstart[lab[i]] = fst[j]
                            h = mix(h, mix(mix(<uint64_t>fst[j], <uint64_t>fln[j]), <uint64_t>fct[j]))
                            if fln[j] > bigl:
                                bigl = fln[j]
                                big = j
                        self.ncells += nfrag - 1
                        for j in range(nfrag):
                            if was_queued:
                                if j == 0:
                                    continue
                            elif j == big:
                                continue
                            inq[fst[j]] = 1
                            q[(qhead + qcount) % n] = fst[j]
                            qcount += 1
                    for t in range(ntouched):
                        cnt[touched[t]] = 0
            h = mix(h, <uint64_t>self.ncells)
        finally:
            free(cnt); free(inq); free(cmark); free(q); free(touched); free(tcells)
            free(keys); free(fst); free(fln); free(fct); free(order)
        return h

    def certificate(self, const int32_t[::1] indptr, const int32_t[::1] indices, colors):
        cdef int n = self.n
        cdef int nedges = indptr[n] // 2
        cdef int total = 2 + n + nedges
        cdef uint32_t* out = <uint32_t*>malloc(total * sizeof(uint32_t))
        cdef unsigned char* buf = <unsigned char*>malloc(total * 4)
        cdef uint32_t* keys = out + 2 + n
        cdef int v, e, a, b, k = 0, i
        cdef uint32_t x
        cdef int32_t[::1] pos = self.pos
        cdef int32_t[::1] lab = self.lab
        if n >= 65536:
            raise ValueError("certificate supports fewer than 65536 vertices")
        try:
            out[0] = n
            for i in range(n):
                out[1 + i] = colors[lab[i]]
            out[1 + n] = nedges
            with nogil:
                for v in range(n):
                    a = pos[v]
                    for e in range(indptr[v], indptr[v + 1]):
                        b = pos[indices[e]]
                        if a < b:
                            keys[k] = <uint32_t>(a * n + b)
                            k += 1
                qsort(keys, k, sizeof(uint32_t), cmp_u32)
                for i in range(total):
                    x = out[i]
                    buf[4 * i] = (x >> 24) & 0xFF
                    buf[4 * i + 1] = (x >> 16) & 0xFF
                    buf[4 * i + 2] = (x >> 8) & 0xFF
                    buf[4 * i + 3] = x & 0xFF
            return (<char*>buf)[: total * 4]
        finally:
            free(out)
            free(buf)
