"""Plain-text arc files.

Header lines ``ring=<name>``, ``dim=<k>`` and optionally ``u=<u>``; then one
point per line in homogeneous coordinates with ring element literals, e.g.
``(1:X+1:aX)``, optionally followed by ``mult=<m>``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .arcsearch import Arc
from .geometry import Geometry, build_geometry

_POINT = re.compile(r"^\((?P<coords>[^()]*(?:\([^()]*\)[^()]*)*)\)\s*(?:mult\s*=\s*(?P<mult>\d+))?$")


@dataclass
class ArcFile:
    ring: str
    k: int
    u: int | None
    points: list[tuple[str, ...]]  # coordinate literals
    mults: list[int]

    def load(self) -> tuple[Geometry, Arc]:
        geom = build_geometry(self.ring, self.k)
        R = geom.ring
        arc = Arc.empty(geom)
        mult = arc.mult.copy()
        for coords, m in zip(self.points, self.mults):
            if len(coords) != self.k + 1:
                raise ValueError(f"point {':'.join(coords)} does not have {self.k + 1} coordinates")
            pid = geom.point_id([R.parse(c) for c in coords])
            mult[pid] += m
        return geom, Arc(geom, mult)


def _split_coords(body: str) -> tuple[str, ...]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == ":" and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return tuple(parts)


def parse_arc_text(text: str) -> ArcFile:
    header: dict[str, str] = {}
    points, mults = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("("):
            mt = _POINT.match(line)
            if not mt:
                raise ValueError(f"line {lineno}: malformed point {raw!r}")
            points.append(_split_coords(mt.group("coords")))
            mults.append(int(mt.group("mult") or 1))
        elif "=" in line:
            key, val = (s.strip() for s in line.split("=", 1))
            header[key] = val
        else:
            raise ValueError(f"line {lineno}: expected a header or a point, got {raw!r}")
    for key in ("ring", "dim"):
        if key not in header:
            raise ValueError(f"missing header line '{key}=...'")
    u = int(header["u"]) if "u" in header else None
    return ArcFile(header["ring"], int(header["dim"]), u, points, mults)


def read_arc_file(path: str | Path) -> ArcFile:
    return parse_arc_text(Path(path).read_text())


def format_arc(arc: Arc, u: int | None = None) -> str:
    lines = [f"ring={arc.geom.ring.name}", f"dim={arc.geom.k}"]
    if u is not None:
        lines.append(f"u={u}")
    lines.extend(arc.fmt())
    return "\n".join(lines) + "\n"
