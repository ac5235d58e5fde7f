"""Linear codes of arcs: homogeneous weight, Gray map and weight enumerators.

The code of a multiset of points has the point representatives as generator
matrix columns; codewords are ``x G`` for row vectors ``x`` acting on the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from .fields import FieldTable
from .geometry import Geometry
from .rings import RingTable


def hom_weight_table(R: RingTable) -> np.ndarray:
    """0 on zero, q on nonzero socle elements, q-1 elsewhere."""
    w = np.full(R.size, R.q - 1, dtype=np.int64)
    for x in R.socle:
        w[x] = R.q
    w[0] = 0
    return w


def hom_weight(R: RingTable, x: int) -> int:
    return int(hom_weight_table(R)[x])


def hom_distance(R: RingTable, a, b) -> int:
    w = hom_weight_table(R)
    return int(sum(w[R.sub(int(x), int(y))] for x, y in zip(a, b)))


@lru_cache(maxsize=None)
def _gray_table(R: RingTable) -> np.ndarray:
    F = R.residue_field
    q, m = R.q, R.m
    coords = list(product(range(q), repeat=m - 1))  # lexicographic in c
    out = np.zeros((R.size, len(coords)), dtype=np.int64)
    for x in range(R.size):
        xbar = [int(R.residue[d]) for d in R.theta_adic(x)]
        for j, c in enumerate(coords):
            acc = xbar[m - 1]
            for i in range(1, m):
                acc = int(F.add[acc, F.mul[c[i - 1], xbar[i - 1]]])
            out[x, j] = acc
    out.setflags(write=False)
    return out


def gray_table(R: RingTable) -> np.ndarray:
    """Row x is the Gray image of x: a vector of length q^(m-1) over F_q."""
    return _gray_table(R)


def gray_map(R: RingTable, x: int) -> tuple[int, ...]:
    return tuple(int(v) for v in _gray_table(R)[x])


def generator_matrix(geom: Geometry, mult) -> np.ndarray:
    """(k+1) x n matrix: point representatives as columns, repeated per multiplicity."""
    cols = [geom.points[i] for i in range(geom.npoints) for _ in range(int(mult[i]))]
    return np.array(cols, dtype=np.int64).T.reshape(geom.k + 1, len(cols))


def codewords(R: RingTable, G: np.ndarray) -> np.ndarray:
    """All x G for x in R^(k+1), in lexicographic order of x."""
    elems = np.arange(R.size)
    words = np.zeros((1, G.shape[1]), dtype=np.int64)
    for row in G:
        contrib = R.mul[elems[:, None], row[None, :]]  # (|R|, n)
        words = R.add[words[:, None, :], contrib[None, :, :]].reshape(-1, G.shape[1])
    return words


def _span_rank(F: FieldTable, vecs: np.ndarray, limit: int, chunk: int = 4096) -> int:
    """Rank over F of the row span, stopping as soon as it exceeds ``limit``."""
    basis: list[tuple[int, np.ndarray]] = []
    for s in range(0, len(vecs), chunk):
        V = vecs[s : s + chunk]
        for p, row in basis:
            V = F.add[V, F.mul[F.neg[V[:, p]][:, None], row[None, :]]]
        while True:
            nz = np.nonzero(V.any(axis=1))[0]
            if len(nz) == 0:
                break
            v = V[nz[0]]
            p = int(np.nonzero(v)[0][0])
            row = F.mul[F.inv[v[p]], v]
            basis.append((p, row))
            if len(basis) > limit:
                return len(basis)
            V = V[nz]
            V = F.add[V, F.mul[F.neg[V[:, p]][:, None], row[None, :]]]
    return len(basis)


@dataclass
class CodeReport:
    n: int
    size: int
    d_hom: Fraction
    gray_q: int
    gray_length: int
    gray_dimension: float  # log_q |C|
    gray_min_hamming: int
    weight_enumerator: dict[int, int]
    gray_linear: bool
    degenerate: bool = False
    warnings: list[str] = field(default_factory=list)

    @property
    def gray_parameters(self) -> tuple[int, float, int]:
        return (self.gray_length, self.gray_dimension, self.gray_min_hamming)

    def enumerator_text(self) -> str:
        return format_enumerator(self.weight_enumerator)

    def to_json(self) -> dict:
        dim = self.gray_dimension
        return {
            "n": self.n,
            "size": self.size,
            "d_hom": str(self.d_hom),
            "gray_q": self.gray_q,
            "gray_length": self.gray_length,
            "gray_dimension": int(dim) if float(dim).is_integer() else dim,
            "gray_min_hamming": self.gray_min_hamming,
            "weight_enumerator": {str(w): c for w, c in sorted(self.weight_enumerator.items())},
            "weight_enumerator_text": self.enumerator_text(),
            "gray_linear": self.gray_linear,
            "degenerate": self.degenerate,
            "warnings": list(self.warnings),
        }


def format_enumerator(enum: dict[int, int]) -> str:
    terms = []
    for w, c in sorted(enum.items()):
        if w == 0:
            terms.append(str(c))
        else:
            coef = "" if c == 1 else str(c)
            terms.append(f"{coef}X^{w}")
    return " + ".join(terms)


def code_report(geom: Geometry, mult) -> CodeReport:
    R = geom.ring
    G = generator_matrix(geom, mult)
    n = G.shape[1]
    words = codewords(R, G)
    total = len(words)
    warnings = []
    degenerate = False
    if len(np.unique(words, axis=0)) != total:
        degenerate = True
        words = np.unique(words, axis=0)
        warnings.append("degenerate arc: x -> xG is not injective; codewords deduplicated")
    gray = _gray_table(R)
    gw = (gray != 0).sum(axis=1)
    hw = hom_weight_table(R)
    gray_weights = gw[words].sum(axis=1)
    hom_weights = hw[words].sum(axis=1)
    nonzero = words.any(axis=1)
    gray_min = int(gray_weights[nonzero].min()) if nonzero.any() else 0
    d_hom = Fraction(int(hom_weights[nonzero].min())) if nonzero.any() else Fraction(0)
    if d_hom != Fraction(R.q) ** (2 - R.m) * gray_min:
        raise AssertionError("Gray map is not an isometry for the homogeneous weight")
    vals, counts = np.unique(gray_weights, return_counts=True)
    enum = {int(v): int(c) for v, c in zip(vals, counts)}
    size = len(words)
    dim = math.log(size, R.q)
    if abs(dim - round(dim)) < 1e-9:
        dim = float(round(dim))
    images = gray[words].reshape(size, -1)
    limit = math.ceil(dim)
    linear = size == R.q**limit and _span_rank(R.residue_field, images, limit) == limit
    return CodeReport(
        n=n,
        size=size,
        d_hom=d_hom,
        gray_q=R.q,
        gray_length=n * R.q ** (R.m - 1),
        gray_dimension=dim,
        gray_min_hamming=gray_min,
        weight_enumerator=enum,
        gray_linear=bool(linear),
        degenerate=degenerate,
        warnings=warnings,
    )
