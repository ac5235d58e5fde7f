"""Small prime-power fields as operation tables.

Only the residue fields of the rings in scope are needed here (q <= 4), but the
construction works for any ``F_p[a]/(f)`` with ``f`` irreducible of degree r.
Element index ``i`` encodes the polynomial whose base-p digits are the
coefficients, lowest degree first, so index 0 is zero, 1 is one and ``p`` is
the generator ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

# monic irreducible polynomials, low-order coefficients only (leading 1 implied)
IRREDUCIBLE = {
    (2, 1): (0,),
    (3, 1): (0,),
    (2, 2): (1, 1),  # a^2 + a + 1
    (3, 2): (2, 1),  # a^2 + a + 2
    (2, 3): (1, 1, 0),  # a^3 + a + 1
    (2, 4): (1, 1, 0, 0),  # a^4 + a + 1
}


@dataclass(frozen=True, eq=False)
class FieldTable:
    p: int
    r: int
    poly: tuple[int, ...]
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray  # inv[0] = 0 by convention

    @property
    def q(self) -> int:
        return self.p**self.r

    @property
    def generator(self) -> int:
        """Index of a primitive element (``a`` when r > 1, else the least primitive root)."""
        for g in range(1, self.q):
            x, seen = 1, set()
            for _ in range(self.q - 1):
                x = int(self.mul[x, g])
                seen.add(x)
            if len(seen) == self.q - 1:
                return g
        raise AssertionError("no primitive element")

    def fmt(self, x: int) -> str:
        if self.r == 1:
            return str(x)
        digits = [(x // self.p**i) % self.p for i in range(self.r)]
        terms = []
        for i in reversed(range(self.r)):
            c = digits[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) or "0"


@lru_cache(maxsize=None)
def build_field(p: int, r: int = 1) -> FieldTable:
    poly = IRREDUCIBLE[(p, r)]
    q = p**r
    vecs = list(product(range(p), repeat=r))
    vecs = [tuple(reversed(v)) for v in vecs]  # index = sum c_i p^i

    def index(v):
        return sum(c * p**i for i, c in enumerate(v))

    def mulvec(u, v):
        prod = [0] * (2 * r - 1)
        for i, a in enumerate(u):
            for j, b in enumerate(v):
                prod[i + j] = (prod[i + j] + a * b) % p
        for e in range(2 * r - 2, r - 1, -1):
            c = prod[e]
            if c:
                prod[e] = 0
                for i, f in enumerate(poly):
                    prod[e - r + i] = (prod[e - r + i] - c * f) % p
        return tuple(prod[:r])

    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for u in vecs:
        for v in vecs:
            add[index(u), index(v)] = index(tuple((a + b) % p for a, b in zip(u, v)))
            mul[index(u), index(v)] = index(mulvec(u, v))
    neg = np.array([index(tuple((-c) % p for c in v)) for v in sorted(vecs, key=index)])
    inv = np.zeros(q, dtype=np.int64)
    for x in range(1, q):
        inv[x] = int(np.nonzero(mul[x] == 1)[0][0])
    return FieldTable(p, r, poly, add, mul, neg, inv)


def rank(field: FieldTable, rows: list[list[int]]) -> int:
    """Rank over F_q of a list of row vectors given as element indices."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        s = int(field.inv[m[rk][col]])
        m[rk] = [int(field.mul[s, x]) for x in m[rk]]
        for i in range(len(m)):
            if i != rk and m[i][col]:
                f = int(field.neg[m[i][col]])
                m[i] = [int(field.add[x, field.mul[f, y]]) for x, y in zip(m[i], m[rk])]
        rk += 1
        if rk == len(m):
            break
    return rk
