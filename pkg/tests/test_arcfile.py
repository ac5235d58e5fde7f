import pytest

from hjelmslev.arcfile import format_arc, parse_arc_text, read_arc_file
from hjelmslev.arcsearch import Arc
from hjelmslev.geometry import build_geometry


def test_parse_with_comments_and_multiplicities():
    text = """# a small multiset
ring=Z4
dim=2
u=3
(1:0:0)
(0:1:0) mult=2   # doubled
(1:1:1)
"""
    af = parse_arc_text(text)
    assert (af.ring, af.k, af.u) == ("Z4", 2, 3)
    assert af.points == [("1", "0", "0"), ("0", "1", "0"), ("1", "1", "1")]
    assert af.mults == [1, 2, 1]
    geom, arc = af.load()
    assert arc.n == 4 and arc.max_load() <= 3


def test_parenthesized_coordinates():
    af = parse_arc_text("ring=T4\ndim=2\n((a+1)X:1:a)\n(1:(a)+(a)X:0)\n")
    assert af.points[0] == ("(a+1)X", "1", "a")
    assert af.points[1] == ("1", "(a)+(a)X", "0")
    geom, arc = af.load()
    assert arc.n == 2


def test_rescaled_points_normalize():
    geom, arc = parse_arc_text("ring=Z4\ndim=2\n(3:2:1)\n").load()
    assert arc.support.tolist() == [geom.point_id((1, 2, 3))]


@pytest.mark.parametrize(
    "text",
    [
        "dim=2\n(1:0:0)\n",
        "ring=Z4\n(1:0:0)\n",
        "ring=Z4\ndim=2\n1:0:0\n",
        "ring=Z4\ndim=2\n(1:0:0\n",
    ],
)
def test_malformed_files(text):
    with pytest.raises(ValueError):
        parse_arc_text(text)


def test_wrong_arity_and_non_points():
    with pytest.raises(ValueError):
        parse_arc_text("ring=Z4\ndim=2\n(1:0)\n").load()
    with pytest.raises(ValueError):
        parse_arc_text("ring=Z4\ndim=2\n(2:0:2)\n").load()


def test_round_trip(tmp_path):
    geom = build_geometry("S22", 2)
    arc = Arc.from_points(geom, [0, 3, 3, 17])
    path = tmp_path / "a.arc"
    path.write_text(format_arc(arc, u=3))
    af = read_arc_file(path)
    assert af.u == 3
    _, back = af.load()
    assert back.pairs() == arc.pairs()
