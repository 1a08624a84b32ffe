"""Exact corner locus of a max of affine functions with integer gradients.

Offsets are rounded to 1e-9 and converted to rationals, so the topology of
the spine (vertices, edges, rays, bounded faces) is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy import ndimage

from syz import intlinalg
from syz.laurent import NewtonPolytope

OFFSET_QUANTUM = 10**9

Point = tuple[Fraction, Fraction]


def quantize(c: float) -> Fraction:
    return Fraction(round(float(c) * OFFSET_QUANTUM), OFFSET_QUANTUM)


@dataclass(frozen=True)
class SpineEdge:
    """A maximal piece of the corner locus where two functions tie at the max.

    ``start``/``end`` index into ``TropicalSpine.vertices``; a ray has only
    ``start`` and a full line has neither (``anchor`` is then a point on it).
    ``direction`` is primitive and points from ``start`` towards ``end`` or
    out along the ray.
    """

    pair: tuple[int, int]
    direction: tuple[int, int]
    weight: int
    start: int | None = None
    end: int | None = None
    anchor: Point | None = None

    @property
    def kind(self) -> str:
        if self.start is not None and self.end is not None:
            return "segment"
        if self.start is not None:
            return "ray"
        return "line"


@dataclass(frozen=True)
class TropicalSpine:
    functions: tuple[tuple[tuple[int, int], Fraction], ...]
    vertices: tuple[Point, ...]
    edges: tuple[SpineEdge, ...]
    regions: tuple[int, ...] = field(default=())  # functions attaining the max on an open set

    @property
    def is_empty(self) -> bool:
        return not self.edges

    def bounded_faces(self) -> int:
        """Bounded cells of the induced subdivision of R^2."""
        if len(self.regions) < 2:
            return 0
        grads = [self.functions[i][0] for i in range(len(self.functions))]
        hull = NewtonPolytope.from_points(grads)
        return sum(1 for i in self.regions if hull.contains(self.functions[i][0], strict=True))

    def vertex_balance(self, v: int) -> tuple[int, int]:
        """Weighted sum of outgoing primitive directions at vertex ``v``."""
        sx = sy = 0
        for e in self.edges:
            if e.start == v:
                sx += e.weight * e.direction[0]
                sy += e.weight * e.direction[1]
            if e.end == v:
                sx -= e.weight * e.direction[0]
                sy -= e.weight * e.direction[1]
        return sx, sy

    def degree(self, v: int) -> int:
        return sum((e.start == v) + (e.end == v) for e in self.edges)

    def sample_points(self, step: float, box: tuple[float, float, float, float]) -> np.ndarray:
        """Points along every edge, spaced by ``step``, clipped to ``box``."""
        xmin, xmax, ymin, ymax = box
        diag = float(np.hypot(xmax - xmin, ymax - ymin))
        far = diag + max(abs(xmin), abs(xmax), abs(ymin), abs(ymax)) + 1.0
        out = []
        for e in self.edges:
            d = np.array(e.direction, dtype=float)
            d /= np.linalg.norm(d)
            if e.kind == "segment":
                a = np.array(self.vertices[e.start], dtype=float)
                b = np.array(self.vertices[e.end], dtype=float)
            elif e.kind == "ray":
                a = np.array(self.vertices[e.start], dtype=float)
                b = a + far * d
            else:
                p = np.array(e.anchor, dtype=float)
                a, b = p - far * d, p + far * d
            n = max(2, int(np.ceil(np.linalg.norm(b - a) / step)) + 1)
            pts = a[None, :] + np.linspace(0, 1, n)[:, None] * (b - a)[None, :]
            keep = (pts[:, 0] >= xmin) & (pts[:, 0] < xmax) & (pts[:, 1] >= ymin) & (pts[:, 1] < ymax)
            out.append(pts[keep])
        return np.concatenate(out) if out else np.empty((0, 2))

    def to_json(self) -> dict:
        def fl(p):
            return [float(p[0]), float(p[1])]

        edges = []
        for e in self.edges:
            doc: dict = {"pair": list(e.pair), "weight": e.weight}
            if e.kind == "segment":
                doc.update({"from": e.start, "to": e.end})
            elif e.kind == "ray":
                doc.update({"from": e.start, "ray_dir": list(e.direction)})
            else:
                doc.update({"point": fl(e.anchor), "line_dir": list(e.direction)})
            edges.append(doc)
        return {
            "functions": [{"grad": list(g), "offset": float(c)} for g, c in self.functions],
            "vertices": [fl(v) for v in self.vertices],
            "edges": edges,
        }


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def corner_locus(functions: Iterable[tuple[Sequence[int], float | Fraction]]) -> TropicalSpine:
    """Corner locus of ``max_i (<g_i, x> + c_i)`` in R^2.

    Functions with repeated gradients keep only the larger offset. For every
    pair of gradients the tie line is intersected with the region where both
    attain the max; when three or more functions tie along the same line the
    lexicographically extreme gradients form the recorded pair.
    """
    best: dict[tuple[int, int], Fraction] = {}
    for g, c in functions:
        g = (int(g[0]), int(g[1]))
        c = c if isinstance(c, Fraction) else quantize(c)
        if g not in best or c > best[g]:
            best[g] = c
    funcs = tuple(sorted(best.items()))
    n = len(funcs)
    raw = []
    for i in range(n):
        gi, ci = funcs[i]
        for j in range(i + 1, n):
            gj, cj = funcs[j]
            D = (gi[0] - gj[0], gi[1] - gj[1])
            dirv = (-D[1], D[0])
            nn = _dot(D, D)
            P0 = (D[0] * (cj - ci) / nn, D[1] * (cj - ci) / nn)
            lo: Fraction | None = None
            hi: Fraction | None = None
            tied = [i, j]
            empty = False
            for k in range(n):
                if k in (i, j):
                    continue
                gk, ck = funcs[k]
                diff = (gi[0] - gk[0], gi[1] - gk[1])
                a = _dot(diff, dirv)
                b = _dot(diff, P0) + ci - ck
                if a == 0:
                    if b < 0:
                        empty = True
                        break
                    if b == 0:
                        tied.append(k)
                    continue
                t = -b / a
                if a > 0:
                    lo = t if lo is None or t > lo else lo
                else:
                    hi = t if hi is None or t < hi else hi
            if empty or (lo is not None and hi is not None and lo >= hi):
                continue
            if min(tied) != i or max(tied) != j:
                continue
            prim = tuple(intlinalg.primitive(dirv))
            weight = intlinalg.content(D)
            plo = None if lo is None else (P0[0] + lo * dirv[0], P0[1] + lo * dirv[1])
            phi = None if hi is None else (P0[0] + hi * dirv[0], P0[1] + hi * dirv[1])
            raw.append(((i, j), prim, weight, plo, phi, P0))
    verts: dict[Point, int] = {}
    for _, _, _, plo, phi, _ in raw:
        for p in (plo, phi):
            if p is not None and p not in verts:
                verts[p] = 0
    ordered = sorted(verts)
    index = {p: k for k, p in enumerate(ordered)}
    edges = []
    for pair, prim, weight, plo, phi, P0 in raw:
        if plo is not None and phi is not None:
            edges.append(SpineEdge(pair, prim, weight, index[plo], index[phi]))
        elif plo is not None:
            edges.append(SpineEdge(pair, prim, weight, index[plo]))
        elif phi is not None:
            edges.append(SpineEdge(pair, (-prim[0], -prim[1]), weight, index[phi]))
        else:
            edges.append(SpineEdge(pair, prim, weight, anchor=P0))
    regions = sorted({k for e in edges for k in e.pair})
    if n == 1:
        regions = [0]
    return TropicalSpine(funcs, tuple(ordered), tuple(edges), tuple(regions))


def build_spine(components) -> TropicalSpine:
    """Spine of an amoeba from its complement components (orders and Ronkin constants)."""
    funcs = [(c.order, c.ronkin_constant) for c in components
             if c.order is not None and c.ronkin_constant is not None]
    if len(funcs) < 2:
        return TropicalSpine(tuple((tuple(g), quantize(c)) for g, c in funcs), (), (), ())
    if any(len(g) != 2 for g, _ in funcs):
        raise ValueError("spines are only built for n = 2")
    return corner_locus(funcs)


@dataclass
class RetractReport:
    passed: bool
    violations: list[tuple[float, float]]
    checked_points: int
    raster_holes: int
    spine_bounded_faces: int

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [list(p) for p in self.violations],
            "checked_points": self.checked_points,
            "raster_holes": self.raster_holes,
            "spine_bounded_faces": self.spine_bounded_faces,
        }


def spine_retract_check(raster, spine: TropicalSpine, tolerance_pixels: float = 2.0) -> RetractReport:
    """Raster-level check that the spine sits inside the amoeba with matching holes.

    (i) every spine point in the window is within ``tolerance_pixels`` of a
    marked pixel; (ii) the raster's bounded complement components and the
    spine's bounded faces agree in number. Failures are reported, not raised.
    """
    from syz.amoeba import bounded_count

    w = raster.window
    if raster.marked:
        dist = ndimage.distance_transform_edt(~raster.membership)
    else:
        dist = np.full(raster.membership.shape, np.inf)
    step = 0.5 * min(w.dx, w.dy)
    pts = spine.sample_points(step, (w.xmin, w.xmax, w.ymin, w.ymax))
    violations = []
    for x, y in pts:
        p = w.pixel(x, y)
        if p is None:
            continue
        if dist[p] > tolerance_pixels:
            violations.append((float(x), float(y)))
    holes = bounded_count(raster)
    faces = spine.bounded_faces()
    return RetractReport(
        passed=not violations and holes == faces,
        violations=violations,
        checked_points=int(len(pts)),
        raster_holes=holes,
        spine_bounded_faces=faces,
    )
