"""Finite chain rings of order at most 16 (plus Z9 and S_{3,2}) as operation tables.

Every ring is built from a presentation ``B[X; sigma] / (f(X), extra)`` where the
coefficient ring ``B`` is either ``Z_N`` or a small field, ``f`` is monic, and
``extra`` is an optional power ``X^e`` factored out afterwards (needed for H8
and K16).  The resulting ring is materialized as dense index tables; index 0 is
zero and index 1 is one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

import numpy as np

from .fields import FieldTable, build_field


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class RingSpec:
    name: str
    base: str  # "Z<N>" or "F<q>"
    modulus: tuple[int, ...] = ()  # low coefficients of monic f, () for no generator
    extra_power: int | None = None
    skew: bool = False
    gen: str = "X"
    description: str = ""

    @property
    def presentation(self) -> str:
        return self.description


RING_SPECS: dict[str, RingSpec] = {
    s.name: s
    for s in [
        RingSpec("Z4", "Z4", description="Z/4Z"),
        RingSpec("S22", "F2", (0, 0), description="F2[X]/(X^2)"),
        RingSpec("Z8", "Z8", description="Z/8Z"),
        RingSpec("H8", "Z4", (2, 0), extra_power=3, description="Z4[X]/(X^2+2, X^3)"),
        RingSpec("S23", "F2", (0, 0, 0), description="F2[X]/(X^3)"),
        RingSpec("Z9", "Z9", description="Z/9Z"),
        RingSpec("S32", "F3", (0, 0), description="F3[X]/(X^2)"),
        RingSpec("G42", "Z4", (3, 3), gen="a", description="GR(16,4) = Z4[a]/(a^2+3a+3), i.e. a^2 = a+1"),
        RingSpec("S42", "F4", (0, 0), description="F4[X]/(X^2), F4 = F2[a]/(a^2+a+1)"),
        RingSpec(
            "T4",
            "F4",
            (0, 0),
            skew=True,
            description="F4[X; sigma]/(X^2), sigma(a) = a^2, Xb = sigma(b)X, F4 = F2[a]/(a^2+a+1)",
        ),
        RingSpec("Z16", "Z16", description="Z/16Z"),
        RingSpec("I16", "Z4", (2, 0), description="Z4[X]/(X^2+2)"),
        RingSpec("J16", "Z4", (2, 2), description="Z4[X]/(X^2+2X+2)"),
        RingSpec("K16", "Z4", (2, 0, 0), extra_power=4, description="Z4[X]/(X^3+2, X^4)"),
        RingSpec("S24", "F2", (0, 0, 0, 0), description="F2[X]/(X^4)"),
    ]
}
RING_NAMES = list(RING_SPECS)


class _Base:
    """Coefficient ring Z_N or F_q with an optional automorphism sigma."""

    def __init__(self, kind: str, skew: bool):
        n = int(kind[1:])
        self.size = n
        self.is_field = kind[0] == "F"
        if self.is_field:
            p = next(d for d in range(2, n + 1) if n % d == 0)
            r = round(np.log(n) / np.log(p))
            f = build_field(p, r)
            self.field = f
            self.add = f.add.tolist()
            self.mul = f.mul.tolist()
            self.neg = f.neg.tolist()
        else:
            self.field = None
            self.add = [[(a + b) % n for b in range(n)] for a in range(n)]
            self.mul = [[(a * b) % n for b in range(n)] for a in range(n)]
            self.neg = [(-a) % n for a in range(n)]
        if skew:
            # Frobenius x -> x^p on F_q
            p = self.field.p
            sig = []
            for x in range(n):
                y = 1
                for _ in range(p):
                    y = self.mul[y][x]
                sig.append(y)
            self.sigma = sig
        else:
            self.sigma = list(range(n))

    def fmt(self, x: int) -> str:
        return self.field.fmt(x) if self.is_field else str(x)


def _raw_ring(spec: RingSpec):
    """Tables of B[X;sigma]/(f) before the optional extra quotient."""
    base = _Base(spec.base, spec.skew)
    d = max(len(spec.modulus), 1)
    B = base.size
    has_gen = bool(spec.modulus)
    vecs = [tuple(v) for v in product(range(B), repeat=d)]
    vecs = [tuple(reversed(v)) for v in vecs]

    def idx(v):
        return sum(c * B**i for i, c in enumerate(v))

    vecs.sort(key=idx)

    def vadd(u, v):
        return tuple(base.add[a][b] for a, b in zip(u, v))

    def scal(c, v):
        return tuple(base.mul[c][x] for x in v)

    def xtimes(v):
        # X * (sum c_i X^i) = sum sigma(c_i) X^{i+1}, then X^d -> -(f_0 + ... )
        top = base.sigma[v[-1]]
        out = (0,) + tuple(base.sigma[c] for c in v[:-1])
        if top:
            red = tuple(base.neg[base.mul[top][f]] for f in spec.modulus)
            out = vadd(out, red)
        return out

    # left-coefficient vectors of X^e for e < 2d
    powers = [tuple([1] + [0] * (d - 1))]
    for _ in range(2 * d):
        powers.append(xtimes(powers[-1]) if has_gen else powers[-1])

    sig_pow = [list(range(B))]
    for _ in range(2 * d):
        sig_pow.append([base.sigma[x] for x in sig_pow[-1]])

    def vmul(u, v):
        acc = (0,) * d
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                c = base.mul[a][sig_pow[i][b]]
                if c:
                    acc = vadd(acc, scal(c, powers[i + j]))
        return acc

    n = len(vecs)
    add = np.array([[idx(vadd(u, v)) for v in vecs] for u in vecs], dtype=np.int64)
    mul = np.array([[idx(vmul(u, v)) for v in vecs] for u in vecs], dtype=np.int64)
    assert n == B**d
    return base, vecs, add, mul, powers


@dataclass(eq=False)
class RingTable:
    """A finite chain ring with elements 0..size-1 (0 = zero, 1 = one)."""

    name: str
    presentation: str
    add: np.ndarray
    mul: np.ndarray
    coeffs: list[tuple[int, ...]]  # normal-form coefficient vector of each element
    base: _Base = field(repr=False)
    gen: str = "X"
    has_gen: bool = True

    # structural data, filled in by _analyze
    neg: np.ndarray = field(init=False, repr=False)
    unit: np.ndarray = field(init=False, repr=False)
    inv: np.ndarray = field(init=False, repr=False)
    theta: int = field(init=False)
    q: int = field(init=False)
    m: int = field(init=False)
    p: int = field(init=False)
    r: int = field(init=False)
    lam: int = field(init=False)
    residue_field: FieldTable = field(init=False, repr=False)
    residue: np.ndarray = field(init=False, repr=False)
    gamma: list[int] = field(init=False)
    sigma_note: str = field(init=False, default="")

    def __post_init__(self):
        self._analyze()

    @property
    def size(self) -> int:
        return len(self.coeffs)

    def _analyze(self):
        n = self.size
        add, mul = self.add, self.mul
        self.neg = np.array([int(np.nonzero(add[x] == 0)[0][0]) for x in range(n)])
        self.unit = np.array([bool((mul[x] == 1).any() and (mul[:, x] == 1).any()) for x in range(n)])
        self.inv = np.full(n, -1)
        for x in np.nonzero(self.unit)[0]:
            self.inv[x] = int(np.nonzero(mul[x] == 1)[0][0])
        rad = set(np.nonzero(~self.unit)[0].tolist())
        if not rad:
            raise RingError(f"{self.name}: expected a non-field chain ring")
        self.theta = -1
        for t in sorted(rad):
            if set(mul[t].tolist()) == rad and set(mul[:, t].tolist()) == rad:
                self.theta = t
                break
        if self.theta < 0:
            raise RingError(f"{self.name}: radical is not principal")
        self.q = n // len(rad)
        m, s = 0, 1
        while s < n:
            s *= self.q
            m += 1
        if s != n:
            raise RingError(f"{self.name}: |R| is not a power of |R/rad|")
        self.m = m
        self.p = next(d for d in range(2, self.q + 1) if self.q % d == 0)
        self.r = round(np.log(self.q) / np.log(self.p))
        # characteristic = additive order of 1
        x, c = 1, 1
        while x != 0:
            x = int(add[x, 1])
            c += 1
        lam, pp = 0, 1
        while pp < c:
            pp *= self.p
            lam += 1
        if pp != c:
            raise RingError(f"{self.name}: characteristic is not a power of p")
        self.lam = lam

        # residue map R -> F_q via a root of the field's defining polynomial
        F = build_field(self.p, self.r)
        self.residue_field = F
        alpha = 1
        if self.r > 1:
            alpha = next(a for a in range(n) if self._poly_eval(F.poly, a) in rad)
        lifts = []
        for fe in range(self.q):
            digits = [(fe // self.p**i) % self.p for i in range(self.r)]
            acc, pw = 0, 1
            for dgt in digits:
                for _ in range(dgt):
                    acc = int(add[acc, pw])
                pw = int(mul[pw, alpha])
            lifts.append(acc)
        residue = np.full(n, -1)
        for fe, lift in enumerate(lifts):
            for y in rad:
                residue[int(add[lift, y])] = fe
        if (residue < 0).any():
            raise RingError(f"{self.name}: residue map not total")
        self.residue = residue

        # multiplicatively closed transversal {0} u <g>; prefer one closed under +
        # (a copy of F_q), which exists exactly for characteristic-p rings
        candidates = []
        for g in range(n):
            if self.power(g, self.q) != g or (self.q > 2 and residue[g] != F.generator):
                continue
            s = {0}
            y = 1
            for _ in range(self.q - 1):
                s.add(y)
                y = int(mul[y, g])
            if len({int(residue[x]) for x in s}) == self.q:
                candidates.append(frozenset(s))
        if not candidates:
            raise RingError(f"{self.name}: no multiplicative transversal")
        closed = [s for s in candidates if all(int(add[x, y]) in s for x in s for y in s)]
        pick = min(closed or candidates, key=lambda s: sorted(s))
        self.gamma = sorted(pick, key=lambda x: residue[x])
        if self.base.sigma != list(range(self.base.size)):
            self.sigma_note = "sigma: a -> a^2 on F4; X b = sigma(b) X"

    def _poly_eval(self, poly, a):
        # monic polynomial with low coeffs poly over the prime field, evaluated at a
        acc = 1
        for c in reversed(poly):
            acc = int(self.mul[acc, a])
            for _ in range(c):
                acc = int(self.add[acc, 1])
        return acc

    def power(self, x: int, e: int) -> int:
        y = 1
        for _ in range(e):
            y = int(self.mul[y, x])
        return y

    # convenience arithmetic on indices
    def sub(self, x: int, y: int) -> int:
        return int(self.add[x, self.neg[y]])

    def is_unit(self, x: int) -> bool:
        return bool(self.unit[x])

    @cached_property
    def commutative(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    @cached_property
    def rad_powers(self) -> list[frozenset[int]]:
        """rad^i for i = 0..m, as sets of element indices."""
        out = [frozenset(range(self.size))]
        cur = 1
        for _ in range(self.m):
            cur = int(self.mul[cur, self.theta])
            out.append(frozenset(int(v) for v in self.mul[cur]))
        return out

    @cached_property
    def valuations(self) -> np.ndarray:
        val = np.zeros(self.size, dtype=np.int64)
        for i, s in enumerate(self.rad_powers):
            for x in s:
                val[x] = i
        return val

    def valuation(self, x: int) -> int:
        return int(self.valuations[x])

    @cached_property
    def socle(self) -> frozenset[int]:
        return self.rad_powers[self.m - 1]

    @cached_property
    def digits(self) -> list[tuple[int, ...]]:
        """theta-adic expansion x = sum gamma_i theta^i with gamma_i in Gamma."""
        tpow = [1]
        for _ in range(self.m - 1):
            tpow.append(int(self.mul[tpow[-1], self.theta]))
        table: list[tuple[int, ...] | None] = [None] * self.size
        for combo in product(self.gamma, repeat=self.m):
            x = 0
            for g, t in zip(combo, tpow):
                x = int(self.add[x, self.mul[g, t]])
            if table[x] is not None:
                raise RingError(f"{self.name}: theta-adic expansion not unique")
            table[x] = combo
        return table  # type: ignore[return-value]

    def theta_adic(self, x: int) -> tuple[int, ...]:
        return self.digits[x]

    # literals
    def fmt(self, x: int) -> str:
        v = self.coeffs[x]
        if not self.has_gen:
            return str(v[0])
        terms = []
        for i in reversed(range(len(v))):
            c = v[i]
            if c == 0:
                continue
            cs = self.base.fmt(c)
            compound = "+" in cs
            mono = "" if i == 0 else (self.gen if i == 1 else f"{self.gen}^{i}")
            if not mono:
                terms.append(f"({cs})" if compound and terms else cs)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"({cs}){mono}" if compound else f"{cs}{mono}")
        return "+".join(terms) or "0"

    @cached_property
    def _symbols(self) -> dict[str, int]:
        syms = {}
        if self.has_gen:
            syms[self.gen] = self.from_coeffs((0, 1) + (0,) * (len(self.coeffs[0]) - 2))
        if self.base.is_field and self.base.field.r > 1:
            syms["a"] = self.from_coeffs((self.base.field.p,) + (0,) * (len(self.coeffs[0]) - 1))
        return syms

    @cached_property
    def _coeff_index(self) -> dict[tuple[int, ...], int]:
        return {c: i for i, c in enumerate(self.coeffs)}

    def from_coeffs(self, v: tuple[int, ...]) -> int:
        try:
            return self._coeff_index[tuple(v)]
        except KeyError:
            raise RingError(f"{self.name}: {v} is not a normal form") from None

    def from_int(self, k: int) -> int:
        x = 0
        one = 1 if k >= 0 else int(self.neg[1])
        for _ in range(abs(k)):
            x = int(self.add[x, one])
        return x

    def parse(self, text: str) -> int:
        return _LiteralParser(self, text).parse()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z])|(\^)|([-+*()]))")


class _LiteralParser:
    """Recursive descent over sums of products of integers, a, X, parentheses and ^."""

    def __init__(self, ring: RingTable, text: str):
        self.ring = ring
        self.text = text
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            mt = _TOKEN.match(text, pos)
            if not mt:
                raise RingError(f"bad literal {text!r}")
            self.toks.append(next(g for g in mt.groups() if g is not None))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> int:
        v = self.expr()
        if self.peek() is not None:
            raise RingError(f"trailing input in {self.text!r}")
        return v

    def expr(self) -> int:
        R = self.ring
        neg = False
        if self.peek() == "-":
            self.take()
            neg = True
        v = self.term()
        if neg:
            v = int(R.neg[v])
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            v = int(R.add[v, t]) if op == "+" else R.sub(v, t)
        return v

    def term(self) -> int:
        v = self.factor()
        while self.peek() is not None and self.peek() not in ("+", "-", ")"):
            if self.peek() == "*":
                self.take()
            v = int(self.ring.mul[v, self.factor()])
        return v

    def factor(self) -> int:
        R = self.ring
        t = self.take()
        if t is None:
            raise RingError(f"unexpected end of {self.text!r}")
        if t == "(":
            v = self.expr()
            if self.take() != ")":
                raise RingError(f"unbalanced parentheses in {self.text!r}")
        elif t.isdigit():
            v = R.from_int(int(t))
        elif t in R._symbols:
            v = R._symbols[t]
        else:
            raise RingError(f"unknown symbol {t!r} for ring {R.name}")
        if self.peek() == "^":
            self.take()
            e = self.take()
            if e is None or not e.isdigit():
                raise RingError(f"bad exponent in {self.text!r}")
            v = R.power(v, int(e))
        return v


def _quotient(add, mul, coeffs, gen_elem_power):
    """Factor out the two-sided ideal generated by one element."""
    n = len(coeffs)
    g = gen_elem_power
    gens = {int(mul[mul[r, g], s]) for r in range(n) for s in range(n)}
    ideal = {0}
    frontier = list(ideal)
    while frontier:
        x = frontier.pop()
        for y in gens:
            z = int(add[x, y])
            if z not in ideal:
                ideal.add(z)
                frontier.append(z)
    rep = {}
    for x in range(n):
        rep[x] = min(int(add[x, y]) for y in ideal)
    reps = sorted(set(rep.values()))
    new = {r: i for i, r in enumerate(reps)}
    qadd = np.array([[new[rep[int(add[a, b])]] for b in reps] for a in reps], dtype=np.int64)
    qmul = np.array([[new[rep[int(mul[a, b])]] for b in reps] for a in reps], dtype=np.int64)
    return qadd, qmul, [coeffs[r] for r in reps]


@lru_cache(maxsize=None)
def build_ring(name: str | RingSpec) -> RingTable:
    """Materialize one of the named chain rings and validate its chain structure."""
    spec = name if isinstance(name, RingSpec) else RING_SPECS.get(name)
    if spec is None:
        raise RingError(f"unknown ring {name!r}; choose from {', '.join(RING_NAMES)}")
    base, vecs, add, mul, powers = _raw_ring(spec)
    coeffs = vecs
    if spec.extra_power is not None:
        B = base.size
        xe = powers[spec.extra_power]
        g = sum(c * B**i for i, c in enumerate(xe))
        add, mul, coeffs = _quotient(add, mul, coeffs, g)
    ring = RingTable(
        name=spec.name,
        presentation=spec.description,
        add=add,
        mul=mul,
        coeffs=coeffs,
        base=base,
        gen=spec.gen,
        has_gen=bool(spec.modulus),
    )
    validate_chain_ring(ring)
    return ring


def validate_chain_ring(R: RingTable) -> None:
    """Exhaustive ring-axiom and chain-condition check; raises RingError on failure."""
    n = R.size
    add, mul = R.add, R.mul
    idx = np.arange(n)
    if not ((add == add.T).all() and (add[0] == idx).all() and (mul[:, 1] == idx).all() and (mul[1] == idx).all()):
        raise RingError(f"{R.name}: identity or commutativity of + fails")
    for a in range(n):
        # tables indexed [b, c]
        if not (add[add[a]] == add[a][add]).all():
            raise RingError(f"{R.name}: + not associative")
        if not (mul[mul[a]] == mul[a][mul]).all():
            raise RingError(f"{R.name}: * not associative")
        if not (mul[a][add] == add[mul[a][:, None], mul[a][None, :]]).all():
            raise RingError(f"{R.name}: left distributivity fails")
        if not (mul[add[a]] == add[mul[a][None, :], mul]).all():
            raise RingError(f"{R.name}: right distributivity fails")
    if int(R.unit.sum()) != n - n // R.q:
        raise RingError(f"{R.name}: wrong number of units")
    for i, s in enumerate(R.rad_powers):
        if len(s) != R.q ** (R.m - i):
            raise RingError(f"{R.name}: |rad^{i}| != q^(m-{i})")
    right = frozenset(int(v) for v in mul[:, R.theta])
    if right != R.rad_powers[1]:
        raise RingError(f"{R.name}: R theta != theta R")
    R.digits  # noqa: B018  (raises on non-unique expansion)
