"""Deterministic SVG output for amoeba rasters, spines, and graphs.

Every number is written with a fixed format and elements are emitted in a
fixed order, so identical inputs give byte-identical documents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from syz.gamma import GammaGraph
from syz.monodromy import VertexKind

RASTER_FILL = "#9a9a9a"
SPINE_STROKE = "#000000"


def _num(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


@dataclass
class Scene:
    """What to draw. ``window`` is ``(xmin, xmax, ymin, ymax)`` in data units."""

    window: tuple[float, float, float, float] | None = None
    membership: np.ndarray | None = None  # (nx, ny), x-major
    spine: object | None = None  # TropicalSpine
    labels: list[tuple[float, float, str]] = field(default_factory=list)
    graph: GammaGraph | None = None
    title: str | None = None

    @property
    def empty(self) -> bool:
        return self.membership is None and self.spine is None and self.graph is None and not self.labels


def _clip(p: np.ndarray, d: np.ndarray, t0: float, t1: float, box) -> tuple[float, float] | None:
    """Liang-Barsky clip of ``p + t d`` for ``t`` in ``[t0, t1]`` against ``box``."""
    xmin, xmax, ymin, ymax = box
    for q, dq, lo, hi in ((p[0], d[0], xmin, xmax), (p[1], d[1], ymin, ymax)):
        if dq == 0:
            if q < lo or q > hi:
                return None
            continue
        a, b = (lo - q) / dq, (hi - q) / dq
        if a > b:
            a, b = b, a
        t0, t1 = max(t0, a), min(t1, b)
    if t0 > t1:
        return None
    return t0, t1


def spine_segments(spine, box) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Edges of a spine clipped to ``box``, in edge order."""
    out = []
    for e in spine.edges:
        d = np.array(e.direction, dtype=float)
        if e.kind == "segment":
            p = np.array(spine.vertices[e.start], dtype=float)
            q = np.array(spine.vertices[e.end], dtype=float)
            d, span = q - p, (0.0, 1.0)
        elif e.kind == "ray":
            p = np.array(spine.vertices[e.start], dtype=float)
            span = (0.0, math.inf)
        else:
            p = np.array(e.anchor, dtype=float)
            span = (-math.inf, math.inf)
        t = _clip(p, d, span[0], span[1], box)
        if t is None:
            continue
        a, b = p + t[0] * d, p + t[1] * d
        out.append(((float(a[0]), float(a[1])), (float(b[0]), float(b[1]))))
    return out


def _graph_layout(g: GammaGraph, size: float) -> dict[int, tuple[float, float]]:
    """Vertices on a circle in id order."""
    ids = sorted(g.vertices)
    n = max(len(ids), 1)
    r = 0.42 * size
    c = size / 2
    return {v: (c + r * math.cos(2 * math.pi * k / n), c + r * math.sin(2 * math.pi * k / n))
            for k, v in enumerate(ids)}


def render_svg(scene: Scene, size: int = 600) -> str:
    """SVG 1.1 document for ``scene``.

    Raises:
        ValueError: the scene has nothing to draw, or a raster/spine lacks a window.
    """
    if scene.empty:
        raise ValueError("empty scene")
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if scene.title:
        out.append(f"<title>{escape(scene.title)}</title>")
    out.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>')
    needs_window = scene.membership is not None or scene.spine is not None or scene.labels
    if needs_window:
        if scene.window is None:
            raise ValueError("raster and spine layers need a window")
        xmin, xmax, ymin, ymax = scene.window
        sx = size / (xmax - xmin)
        sy = size / (ymax - ymin)

        def to_px(x, y):
            return (x - xmin) * sx, (ymax - y) * sy

        if scene.membership is not None:
            m = np.asarray(scene.membership, dtype=bool)
            nx, ny = m.shape
            pw, ph = size / nx, size / ny
            out.append(f'<g id="raster" fill="{RASTER_FILL}" stroke="none">')
            for j in range(ny - 1, -1, -1):
                row = m[:, j]
                if not row.any():
                    continue
                padded = np.concatenate([[False], row, [False]])
                edges = np.flatnonzero(padded[1:] != padded[:-1])
                top = (ny - 1 - j) * ph
                cmds = []
                for a, b in zip(edges[0::2], edges[1::2]):
                    cmds.append(f"M{_num(a * pw)} {_num(top)}h{_num((b - a) * pw)}v{_num(ph)}"
                                f"h{_num(-(b - a) * pw)}z")
                out.append(f'<path d="{"".join(cmds)}"/>')
            out.append("</g>")
        if scene.spine is not None:
            out.append(f'<g id="spine" fill="none" stroke="{SPINE_STROKE}" stroke-width="2">')
            for a, b in spine_segments(scene.spine, scene.window):
                (x0, y0), (x1, y1) = to_px(*a), to_px(*b)
                out.append(f'<polyline points="{_num(x0)},{_num(y0)} {_num(x1)},{_num(y1)}"/>')
            out.append("</g>")
        if scene.labels:
            out.append('<g id="labels" font-family="sans-serif" font-size="14" text-anchor="middle">')
            for x, y, text in scene.labels:
                px, py = to_px(x, y)
                out.append(f'<text x="{_num(px)}" y="{_num(py)}">{escape(text)}</text>')
            out.append("</g>")
    if scene.graph is not None:
        pos = _graph_layout(scene.graph, size)
        out.append('<g id="graph" stroke="#000000" stroke-width="1">')
        for eid in sorted(scene.graph.edges):
            e = scene.graph.edges[eid]
            (x0, y0), (x1, y1) = pos[e.a], pos[e.b]
            out.append(f'<line x1="{_num(x0)}" y1="{_num(y0)}" x2="{_num(x1)}" y2="{_num(y1)}"/>')
        for v in sorted(scene.graph.vertices):
            x, y = pos[v]
            fill = "#000000" if scene.graph.vertices[v] == VertexKind.POSITIVE else "#ffffff"
            out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="3" fill="{fill}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def order_labels(components, window) -> list[tuple[float, float, str]]:
    """Text labels ``(a,b)`` at the deepest pixel of each component with a known order."""
    out = []
    for c in components:
        if c.order is None:
            continue
        x, y = window.center(*c.deep_pixel)
        out.append((x, y, "(" + ",".join(str(v) for v in c.order) + ")"))
    return out
