"""Points, hyperplanes and incidence of the projective Hjelmslev geometry PHG(k, R).

Points are free rank-1 right submodules ``xR`` of ``R^{k+1}``, hyperplanes are
given dually by left coefficient vectors ``c`` with ``x`` on ``c`` iff
``sum c_i x_i = 0``.  Both are normalized so the earliest unit entry is 1, which
makes the two representative sets coincide as sets of vectors.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from pathlib import Path

import numpy as np

from .fields import rank
from .rings import RingTable, build_ring

CACHE_MAGIC = b"PHGC"
CACHE_VERSION = 1


def point_count(R: RingTable, k: int) -> int:
    q, m = R.q, R.m
    return q ** ((m - 1) * k) * (q ** (k + 1) - 1) // (q - 1)


def points_per_hyperplane(R: RingTable, k: int) -> int:
    q, m = R.q, R.m
    return q ** ((m - 1) * (k - 1)) * (q**k - 1) // (q - 1)


def normalized_vectors(R: RingTable, k: int) -> np.ndarray:
    """All vectors of length k+1 whose earliest unit entry is 1, lexicographic."""
    nonunits = [x for x in range(R.size) if not R.unit[x]]
    everything = list(range(R.size))
    rows = []
    for j in range(k + 1):
        for head in product(nonunits, repeat=j):
            for tail in product(everything, repeat=k - j):
                rows.append(head + (1,) + tail)
    rows.sort()
    return np.array(rows, dtype=np.int64).reshape(-1, k + 1)


def normalize_point(R: RingTable, v) -> tuple[int, ...]:
    """Right-scale so the earliest unit coordinate becomes 1."""
    j = next((i for i, x in enumerate(v) if R.unit[x]), None)
    if j is None:
        raise ValueError(f"{v} has no unit coordinate; not a point of PHG")
    s = int(R.inv[v[j]])
    return tuple(int(R.mul[x, s]) for x in v)


def normalize_hyperplane(R: RingTable, c) -> tuple[int, ...]:
    """Left-scale so the earliest unit coefficient becomes 1."""
    j = next((i for i, x in enumerate(c) if R.unit[x]), None)
    if j is None:
        raise ValueError(f"{c} has no unit coefficient; not a hyperplane")
    s = int(R.inv[c[j]])
    return tuple(int(R.mul[s, x]) for x in c)


def incident(R: RingTable, c, x) -> bool:
    acc = 0
    for ci, xi in zip(c, x):
        acc = int(R.add[acc, R.mul[ci, xi]])
    return acc == 0


def _incidence_matrix(R: RingTable, pts: np.ndarray, hyps: np.ndarray, chunk: int = 512) -> np.ndarray:
    out = np.zeros((len(pts), len(hyps)), dtype=bool)
    for s in range(0, len(hyps), chunk):
        hc = hyps[s : s + chunk]
        acc = np.zeros((len(pts), len(hc)), dtype=np.int64)
        for i in range(pts.shape[1]):
            acc = R.add[acc, R.mul[hc[None, :, i], pts[:, None, i]]]
        out[:, s : s + chunk] = acc == 0
    return out


@dataclass(eq=False)
class Geometry:
    ring: RingTable
    k: int
    points: np.ndarray  # (npoints, k+1) coordinate indices
    hyperplanes: np.ndarray  # (nhyps, k+1) coefficient indices
    incidence: np.ndarray = field(repr=False)  # bool (npoints, nhyps)

    @property
    def npoints(self) -> int:
        return len(self.points)

    @property
    def nhyps(self) -> int:
        return len(self.hyperplanes)

    @cached_property
    def hyps_of_point(self) -> list[np.ndarray]:
        return [np.nonzero(row)[0] for row in self.incidence]

    @cached_property
    def points_of_hyp(self) -> list[np.ndarray]:
        return [np.nonzero(col)[0] for col in self.incidence.T]

    @cached_property
    def point_index(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(x) for x in p): i for i, p in enumerate(self.points)}

    @cached_property
    def hyp_index(self) -> dict[tuple[int, ...], int]:
        return {tuple(int(x) for x in c): i for i, c in enumerate(self.hyperplanes)}

    def point_id(self, v) -> int:
        return self.point_index[normalize_point(self.ring, v)]

    def hyperplane_id(self, c) -> int:
        return self.hyp_index[normalize_hyperplane(self.ring, c)]

    def fmt_point(self, i: int) -> str:
        return "(" + ":".join(self.ring.fmt(int(x)) for x in self.points[i]) + ")"

    @cached_property
    def quotient(self) -> np.ndarray:
        """Index of the point of PG(k, F_q) under each point (reduction mod rad)."""
        R = self.ring
        F = R.residue_field
        res = R.residue[self.points]
        keys = []
        for row in res:
            j = next(i for i, x in enumerate(row) if x)
            s = int(F.inv[row[j]])
            keys.append(tuple(int(F.mul[s, x]) for x in row))
        order = {kv: i for i, kv in enumerate(sorted(set(keys)))}
        return np.array([order[kv] for kv in keys], dtype=np.int64)

    @property
    def neighbor_class(self) -> np.ndarray:
        return self.quotient

    def neighbor_classes(self) -> list[list[int]]:
        classes: dict[int, list[int]] = {}
        for i, c in enumerate(self.quotient):
            classes.setdefault(int(c), []).append(i)
        return [classes[c] for c in sorted(classes)]

    def are_neighbors(self, i: int, j: int) -> bool:
        return bool(self.quotient[i] == self.quotient[j])

    @cached_property
    def common_hyperplanes(self) -> np.ndarray:
        """lam[P, Q] = number of hyperplanes through both P and Q."""
        I = self.incidence.astype(np.int32)
        return I @ I.T

    @cached_property
    def hyps_per_point(self) -> int:
        return int(self.incidence[0].sum())

    def residue_rank(self, point_ids) -> int:
        R = self.ring
        rows = [R.residue[self.points[i]].tolist() for i in point_ids]
        return rank(R.residue_field, rows)

    def summary(self) -> dict:
        classes = self.neighbor_classes()
        return {
            "ring": self.ring.name,
            "presentation": self.ring.presentation,
            "k": self.k,
            "points": self.npoints,
            "hyperplanes": self.nhyps,
            "hyperplanes_per_point": self.hyps_per_point,
            "points_per_hyperplane": int(self.incidence[:, 0].sum()),
            "neighbor_classes": len(classes),
            "neighbor_class_size": len(classes[0]),
        }

    def save(self, path: str | Path) -> None:
        name = self.ring.name.encode()
        header = CACHE_MAGIC + struct.pack("<HB", CACHE_VERSION, len(name)) + name
        header += struct.pack("<HII", self.k, self.npoints, self.nhyps)
        bits = np.packbits(self.incidence, axis=None)
        Path(path).write_bytes(header + bits.tobytes())


def load_geometry(path: str | Path, spot_checks: int = 256) -> Geometry:
    """Read a cache written by ``Geometry.save``; a random sample of entries is re-derived."""
    data = Path(path).read_bytes()
    if data[:4] != CACHE_MAGIC:
        raise ValueError(f"{path}: not a geometry cache file")
    version, nlen = struct.unpack_from("<HB", data, 4)
    if version != CACHE_VERSION:
        raise ValueError(f"{path}: unsupported cache version {version}")
    off = 7
    name = data[off : off + nlen].decode()
    off += nlen
    k, npts, nh = struct.unpack_from("<HII", data, off)
    off += 10
    R = build_ring(name)
    vecs = normalized_vectors(R, k)
    if (npts, nh) != (len(vecs), len(vecs)):
        raise ValueError(f"{path}: header does not match PHG({k}, {name})")
    bits = np.unpackbits(np.frombuffer(data[off:], dtype=np.uint8))
    if len(bits) < npts * nh:
        raise ValueError(f"{path}: truncated incidence data")
    inc = bits[: npts * nh].reshape(npts, nh).astype(bool)
    rng = np.random.default_rng(0)
    for i, j in rng.integers(0, [npts, nh], size=(spot_checks, 2)):
        if incident(R, vecs[j], vecs[i]) != inc[i, j]:
            raise ValueError(f"{path}: cached incidence is inconsistent")
    return Geometry(R, k, vecs, vecs.copy(), inc)


@lru_cache(maxsize=None)
def build_geometry(ring: str, k: int) -> Geometry:
    if not 1 <= k <= 4:
        raise ValueError("dimension k must be between 1 and 4")
    R = build_ring(ring)
    vecs = normalized_vectors(R, k)
    inc = _incidence_matrix(R, vecs, vecs)
    return Geometry(R, k, vecs, vecs.copy(), inc)


def enumerate_points(R: RingTable, k: int) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in v) for v in normalized_vectors(R, k)]


def enumerate_hyperplanes(R: RingTable, k: int) -> list[tuple[int, ...]]:
    return enumerate_points(R, k)
