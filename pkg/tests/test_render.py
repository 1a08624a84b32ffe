import xml.etree.ElementTree as ET

import numpy as np
import pytest

from syz.gamma import build_gamma_simplex
from syz.render import Scene, render_svg, spine_segments
from syz.spine import corner_locus

NS = "{http://www.w3.org/2000/svg}"
BOX = (-3.0, 3.0, -3.0, 3.0)


def three_rays():
    return corner_locus([((0, 0), 0.0), ((1, 0), 0.0), ((0, 1), 0.0)])


def test_empty_scene():
    with pytest.raises(ValueError):
        render_svg(Scene())


def test_raster_needs_window():
    with pytest.raises(ValueError):
        render_svg(Scene(membership=np.ones((4, 4), bool)))


def test_valid_svg_and_layers():
    m = np.zeros((10, 10), bool)
    m[2:5, 3] = True
    m[7, 3] = True
    m[1, 8] = True
    svg = render_svg(Scene(window=BOX, membership=m, spine=three_rays(),
                           labels=[(1.0, -1.0, "(1,0)")], title="t"))
    root = ET.fromstring(svg.encode())
    assert root.tag == NS + "svg" and root.get("version") == "1.1"
    groups = {g.get("id"): g for g in root.iter(NS + "g")}
    paths = list(groups["raster"])
    assert len(paths) == 2  # one path per row with marked pixels
    # top row first: row 8 has one run, row 3 has two
    assert [p.get("d").count("M") for p in paths] == [1, 2]
    assert paths[0].get("d") == "M60 60h60v60h-60z"
    assert len(list(groups["spine"])) == 3
    assert [t.text for t in groups["labels"]] == ["(1,0)"]


def test_spine_clipping():
    segs = spine_segments(three_rays(), BOX)
    ends = sorted(tuple(np.round(b, 9)) for _, b in segs)
    assert ends == [(-3.0, 0.0), (0.0, -3.0), (3.0, 3.0)]
    assert all(a == (0.0, 0.0) for a, _ in segs)


def test_spine_outside_window():
    assert spine_segments(three_rays(), (5.0, 6.0, -6.0, -5.0)) == []


def test_graph_layer():
    g = build_gamma_simplex(1)
    root = ET.fromstring(render_svg(Scene(graph=g)).encode())
    graph = [g_ for g_ in root.iter(NS + "g") if g_.get("id") == "graph"][0]
    assert sum(1 for e in graph if e.tag == NS + "line") == len(g.edges)
    assert sum(1 for e in graph if e.tag == NS + "circle") == len(g.vertices)


def test_stable_output():
    m = np.random.default_rng(0).uniform(size=(30, 30)) > 0.5
    scene = Scene(window=BOX, membership=m, spine=three_rays())
    assert render_svg(scene) == render_svg(Scene(window=BOX, membership=m.copy(), spine=three_rays()))


def test_escaping():
    svg = render_svg(Scene(window=BOX, labels=[(0, 0, "a<b&c")], title="x & y"))
    ET.fromstring(svg.encode())
    assert "a&lt;b&amp;c" in svg
