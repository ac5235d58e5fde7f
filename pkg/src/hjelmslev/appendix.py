"""Bundled appendix arcs with their published invariants, and the checker for them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .arcfile import ArcFile, parse_arc_text
from .arcsearch import arc_canon, is_complete, is_degenerate
from .codes import code_report


@dataclass(frozen=True)
class AppendixEntry:
    file: str
    ring: str
    k: int
    n: int
    u: int
    g: int
    d_hom: Fraction
    gray: tuple[int, int, int, int]  # (q, length, log_q |C|, minimum distance)
    enumerator: dict[int, int]
    gray_linear: bool | None  # None where no linearity claim is made
    note: str = ""

    def arc_file(self) -> ArcFile:
        text = resources.files("hjelmslev.data.appendix").joinpath(self.file).read_text()
        return parse_arc_text(text)


ENTRIES: list[AppendixEntry] = [
    AppendixEntry(
        "z4_plane_7_2.arc", "Z4", 2, 7, 2, 168, Fraction(6), (2, 14, 6, 6),
        {0: 1, 6: 42, 8: 7, 10: 14}, None,
        "The best linear binary [14,6]-code has minimum distance 5.",
    ),
    AppendixEntry(
        "z4_plane_22_5.arc", "Z4", 2, 22, 5, 1536, Fraction(20), (2, 44, 6, 20),
        {0: 1, 20: 6, 22: 48, 24: 6, 28: 2, 32: 1}, None,
        "There is a linear binary [44,6,21]-code.",
    ),
    AppendixEntry(
        "s22_plane_22_5.arc", "S22", 2, 22, 5, 1536, Fraction(20), (2, 44, 6, 20),
        {0: 1, 20: 6, 22: 48, 24: 6, 28: 2, 32: 1}, True,
        "Linear binary code with the same parameters as the Z4 (22,5)-arc.",
    ),
    AppendixEntry(
        "z4_space_8_3.arc", "Z4", 3, 8, 3, 1344, Fraction(6), (2, 16, 8, 6),
        {0: 1, 6: 112, 8: 30, 10: 112, 16: 1}, None,
        "Nordstrom-Robinson code; the best linear binary [16,8]-code has minimum distance 5.",
    ),
    AppendixEntry(
        "s22_space_11_4.arc", "S22", 3, 11, 4, 24, Fraction(8), (2, 22, 8, 8),
        {0: 1, 8: 54, 10: 76, 12: 72, 14: 48, 16: 1, 18: 4}, True,
        "Optimal linear binary [22,8,8]-code.",
    ),
    AppendixEntry(
        "z8_plane_10_2.arc", "Z8", 2, 10, 2, 8, Fraction(6), (2, 40, 9, 12),
        {0: 1, 12: 4, 16: 70, 18: 128, 20: 168, 22: 32, 24: 72, 26: 32, 28: 4, 32: 1}, None,
        "There is a linear binary [40,9,16]-code.",
    ),
    AppendixEntry(
        "z8_plane_21_3.arc", "Z8", 2, 21, 3, 168, Fraction(18), (2, 84, 9, 36),
        {0: 1, 36: 14, 38: 168, 42: 196, 44: 42, 48: 7, 50: 84}, None,
        "There is a linear binary [84,9,38]-code.",
    ),
    AppendixEntry(
        "h8_space_9_3.arc", "H8", 3, 9, 3, 12, Fraction(5), (2, 36, 12, 10),
        {0: 1, 10: 12, 12: 166, 14: 504, 16: 873, 18: 908, 20: 1020, 22: 468, 24: 110, 26: 24, 28: 6, 30: 4},
        None,
        "There is a linear binary [36,12,12]-code.",
    ),
    AppendixEntry(
        "s23_space_9_3.arc", "S23", 3, 9, 3, 12, Fraction(5), (2, 36, 12, 10),
        {0: 1, 10: 12, 12: 166, 14: 504, 16: 873, 18: 908, 20: 1020, 22: 468, 24: 110, 26: 24, 28: 6, 30: 4},
        True,
        "Linear binary code with the same parameters as the H8 (9,3)-arc.",
    ),
    AppendixEntry(
        "z9_space_10_3.arc", "Z9", 3, 10, 3, 10, Fraction(15), (3, 30, 8, 15),
        {0: 1, 15: 720, 18: 1680, 21: 3240, 24: 900, 27: 20}, None,
        "There is no better linear ternary [30,8]-code.",
    ),
    AppendixEntry(
        "s32_space_10_3.arc", "S32", 3, 10, 3, 10, Fraction(15), (3, 30, 8, 15),
        {0: 1, 15: 720, 18: 1680, 21: 3240, 24: 900, 27: 20}, True,
        "Optimal linear ternary code with the same parameters as the Z9 (10,3)-arc.",
    ),
    AppendixEntry(
        "g42_plane_21_2.arc", "G42", 2, 21, 2, 126, Fraction(60), (4, 84, 6, 60),
        {0: 1, 60: 2520, 64: 63, 68: 1512}, None,
        "The best known linear quaternary [84,6]-code has minimum distance 59.",
    ),
    AppendixEntry(
        "t4_plane_18_2.arc", "T4", 2, 18, 2, 96, Fraction(48), (4, 72, 6, 48),
        {0: 1, 48: 12, 50: 864, 51: 960, 52: 96, 54: 576, 56: 144, 58: 864, 59: 576, 64: 3}, True,
        "There is a linear quaternary [72,6,50]-code.",
    ),
]


def analyze(arc_file: ArcFile, u: int | None = None) -> dict:
    """Code report plus automorphism group order for an arc; ``u`` defaults to the max load."""
    geom, arc = arc_file.load()
    load = arc.max_load()
    u = (arc_file.u if arc_file.u is not None else load) if u is None else u
    report = code_report(geom, arc.mult)
    out = {
        "ring": geom.ring.name,
        "k": geom.k,
        "u": u,
        "n": arc.n,
        "max_load": load,
        "valid": load <= u,
        "complete": is_complete(arc, u),
        "degenerate": is_degenerate(arc),
        "g": arc_canon(arc, u).aut_order,
        "code": report.to_json(),
    }
    return out


def check_entry(entry: AppendixEntry) -> tuple[dict, list[str]]:
    """Analyze a bundled arc; returns the analysis and a list of field mismatches."""
    af = entry.arc_file()
    got = analyze(af, entry.u)
    code = got["code"]
    diffs = []

    def cmp(name, have, want):
        if have != want:
            diffs.append(f"{entry.file}: {name}: got {have}, expected {want}")

    cmp("ring", got["ring"], entry.ring)
    cmp("k", got["k"], entry.k)
    cmp("n", got["n"], entry.n)
    cmp("u-valid", got["valid"], True)
    cmp("nondegenerate", not got["degenerate"], True)
    cmp("g", got["g"], entry.g)
    cmp("d_hom", Fraction(code["d_hom"]), entry.d_hom)
    gray = (code["gray_q"], code["gray_length"], code["gray_dimension"], code["gray_min_hamming"])
    cmp("gray parameters", gray, entry.gray)
    cmp("weight enumerator", {int(w): c for w, c in code["weight_enumerator"].items()}, entry.enumerator)
    if entry.gray_linear is not None:
        cmp("gray linear", code["gray_linear"], entry.gray_linear)
    got["note"] = entry.note
    return got, diffs
