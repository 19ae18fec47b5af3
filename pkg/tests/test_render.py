import math

from fbcount.render import _paths, render_svg
from fbcount.report import build_report


def test_great_circle_splits_at_the_equator():
    pts = [[math.cos(t), 0.0, math.sin(t)] for t in (0.3 + k * math.pi / 8 for k in range(8))]
    paths = _paths(pts)
    assert len(paths) == 2
    # the curve leaves at one boundary point and re-enters at its antipode
    assert paths[0][-1] == [-c for c in paths[1][0]]


def test_small_circle_stays_one_path():
    pts = [[0.3 * math.cos(t), 0.3 * math.sin(t), 1.0] for t in (k * math.pi / 16 for k in range(32))]
    assert len(_paths(pts)) == 1


def test_svg_marks_every_event(get_analysis):
    a = get_analysis("fig7_left")
    svg = render_svg(build_report(a, ledgers=False))
    assert svg.count("<circle") >= len(a.events)
    assert svg.rstrip().endswith("</svg>")
