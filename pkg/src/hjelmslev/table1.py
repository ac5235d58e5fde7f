"""Published maximal-arc cardinalities and class counts, and a runner comparing against them.

Cells are keyed by (ring, k, u).  ``nondegenerate`` and ``total`` count the
equivalence classes of maximal arcs; a bold (unique) entry is 1/1 and an entry
without a parenthesized total has no degenerate maximal arcs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .arcsearch import ClassificationResult, classify, find_maximum
from .geometry import build_geometry


@dataclass(frozen=True)
class Cell:
    ring: str
    k: int
    u: int
    m: int
    nondegenerate: int | None  # None when only a lower bound on m is known
    total: int | None
    lower_bound: bool = False

    @property
    def key(self) -> str:
        return f"{self.ring} k={self.k} u={self.u}"

    def expected_text(self) -> str:
        if self.lower_bound:
            return f">={self.m}"
        if self.nondegenerate == self.total:
            return f"{self.m} ({self.total} classes)"
        return f"{self.m} ({self.nondegenerate} nondegenerate, {self.total} total)"


def _c(ring, k, u, m, nondeg=1, total=None):
    return Cell(ring, k, u, m, nondeg, nondeg if total is None else total)


CELLS: list[Cell] = [
    # k = 2, u = 2
    _c("Z4", 2, 2, 7), _c("S22", 2, 2, 6, 2), _c("Z8", 2, 2, 10), _c("H8", 2, 2, 10, 5),
    _c("S23", 2, 2, 10, 5), _c("Z9", 2, 2, 9, 3), _c("S32", 2, 2, 9, 4), _c("G42", 2, 2, 21),
    _c("S42", 2, 2, 18, 6), _c("T4", 2, 2, 18), Cell("Z16", 2, 2, 16, None, None, lower_bound=True),
    _c("I16", 2, 2, 22), _c("J16", 2, 2, 22), _c("K16", 2, 2, 19, 5), _c("S24", 2, 2, 19),
    # k = 2, u >= 3
    _c("Z4", 2, 3, 10, 8), _c("S22", 2, 3, 10, 8), _c("Z8", 2, 3, 21), _c("H8", 2, 3, 18, 93),
    _c("S23", 2, 3, 18, 93), _c("Z9", 2, 3, 19, 3), _c("S32", 2, 3, 18, 255),
    _c("Z4", 2, 4, 16, 3), _c("S22", 2, 4, 16, 3),
    _c("Z4", 2, 5, 22), _c("S22", 2, 5, 22),
    _c("Z4", 2, 6, 28), _c("S22", 2, 6, 28),
    # k = 3
    _c("Z4", 3, 3, 8), _c("S22", 3, 3, 6, 1, 2), _c("Z8", 3, 3, 8, 57, 68), _c("H8", 3, 3, 9),
    _c("S23", 3, 3, 9), _c("Z9", 3, 3, 10), _c("S32", 3, 3, 10),
    _c("Z4", 3, 4, 10, 25), _c("S22", 3, 4, 11),
    _c("Z4", 3, 5, 16, 2), _c("S22", 3, 5, 16, 2),
    # k = 4
    _c("Z4", 4, 4, 6, 5, 17), _c("S22", 4, 4, 6, 5, 17),
    _c("Z4", 4, 5, 11, 4), _c("S22", 4, 5, 11, 6),
]

SMALL = [
    ("Z4", 2, 2), ("Z4", 2, 3), ("Z4", 2, 4), ("Z4", 2, 5), ("Z4", 2, 6),
    ("S22", 2, 2), ("S22", 2, 3), ("S22", 2, 4), ("S22", 2, 5), ("S22", 2, 6),
    ("Z4", 3, 3), ("S22", 3, 3), ("Z9", 2, 2), ("S32", 2, 2), ("Z8", 2, 2),
]

_BY_KEY = {(c.ring, c.k, c.u): c for c in CELLS}


def cell(ring: str, k: int, u: int) -> Cell:
    return _BY_KEY[(ring, k, u)]


def select(scope: str) -> list[Cell]:
    if scope == "small":
        return [_BY_KEY[key] for key in SMALL]
    if scope == "all":
        return list(CELLS)
    raise ValueError(f"unknown scope {scope!r}; use 'small' or 'all'")


@dataclass
class CellOutcome:
    cell: Cell
    result: ClassificationResult
    seconds: float

    @property
    def status(self) -> str:
        """'match', 'mismatch' or 'budget-exhausted'."""
        c, r = self.cell, self.result
        if not r.final:
            # a lower-bound cell only needs a witness
            if c.lower_bound and r.m_u is not None and r.m_u >= c.m:
                return "match"
            return "budget-exhausted"
        if c.lower_bound:
            return "match" if r.m_u is not None and r.m_u >= c.m else "mismatch"
        nondeg, total = r.counts
        return "match" if (r.m_u, nondeg, total) == (c.m, c.nondegenerate, c.total) else "mismatch"

    def got_text(self) -> str:
        r = self.result
        if r.m_u is None:
            return "nothing found"
        nondeg, total = r.counts
        return f"{r.m_u} ({nondeg} nondegenerate, {total} total)"

    def to_json(self) -> dict:
        return {
            "cell": self.cell.key,
            "expected": self.cell.expected_text(),
            "got": self.got_text(),
            "status": self.status,
            "seconds": round(self.seconds, 3),
            "result": self.result.to_json(),
        }


def run_cell(c: Cell, *, jobs: int | None = None, time_budget: float | None = None, sets_only: bool = False) -> CellOutcome:
    geom = build_geometry(c.ring, c.k)
    t0 = time.monotonic()
    if c.lower_bound:
        # only a lower bound is published: look for witnesses at that size
        res = classify(geom, c.u, min_size=c.m, jobs=jobs, time_budget=time_budget, sets_only=sets_only)
    else:
        res = find_maximum(geom, c.u, jobs=jobs, time_budget=time_budget, sets_only=sets_only)
    return CellOutcome(c, res, time.monotonic() - t0)
