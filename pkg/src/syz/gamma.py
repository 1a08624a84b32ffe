"""The trivalent discriminant graph of a torus fibration and its local rewrites.

Vertices carry a kind (Positive or Negative). Edges have integer ids and may
carry a 3x3 monodromy label, oriented from endpoint ``a`` to endpoint ``b``.
During construction a graph may also hold *stubs*: dangling half-edges keyed
by a gluing key.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Hashable, Sequence

from syz.monodromy import MonodromyMatrix, VertexKind, classify_vertex, mirror_dual

SIGN = {VertexKind.POSITIVE: 1, VertexKind.NEGATIVE: -1}


class GraphError(ValueError):
    """Malformed graph, invalid move target, or unfinalized input."""


class MoveRejected(GraphError):
    """A rewrite whose result breaks monodromy-label consistency."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    label: MonodromyMatrix | None = None

    def other(self, v: int) -> int:
        return self.b if v == self.a else self.a


@dataclass
class GammaGraph:
    vertices: dict[int, VertexKind] = field(default_factory=dict)
    edges: dict[int, Edge] = field(default_factory=dict)
    stubs: dict[Hashable, int] = field(default_factory=dict)

    # -- construction ------------------------------------------------------
    def add_vertex(self, kind: VertexKind) -> int:
        vid = max(self.vertices, default=-1) + 1
        self.vertices[vid] = VertexKind(kind)
        return vid

    def add_edge(self, a: int, b: int, label: MonodromyMatrix | None = None) -> int:
        if a not in self.vertices or b not in self.vertices:
            raise GraphError(f"edge ({a}, {b}) references an unknown vertex")
        eid = max(self.edges, default=-1) + 1
        self.edges[eid] = Edge(a, b, label)
        return eid

    def add_stub(self, key: Hashable, v: int) -> None:
        if key in self.stubs:
            raise GraphError(f"duplicate stub {key!r}")
        self.stubs[key] = v

    def copy(self) -> "GammaGraph":
        return GammaGraph(dict(self.vertices), dict(self.edges), dict(self.stubs))

    # -- queries -----------------------------------------------------------
    def incident(self, v: int) -> list[int]:
        """Incident edge ids in increasing order; a loop appears twice."""
        out = []
        for eid, e in self.edges.items():
            if e.a == v:
                out.append(eid)
            if e.b == v:
                out.append(eid)
        return sorted(out)

    def degree(self, v: int) -> int:
        return len(self.incident(v)) + sum(1 for s in self.stubs.values() if s == v)

    def count(self, kind: VertexKind) -> int:
        return sum(1 for k in self.vertices.values() if k == kind)

    @property
    def is_finalized(self) -> bool:
        if self.stubs:
            return False
        deg = {v: 0 for v in self.vertices}
        for e in self.edges.values():
            deg[e.a] += 1
            deg[e.b] += 1
        return all(d == 3 for d in deg.values())

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e in self.edges.values():
            adj[e.a].append(e.b)
            adj[e.b].append(e.a)
        start = min(self.vertices)
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    def outgoing_label(self, eid: int, v: int) -> MonodromyMatrix | None:
        """Label of edge ``eid`` oriented away from ``v``."""
        e = self.edges[eid]
        if e.label is None:
            return None
        return e.label if e.a == v else e.label.inverse()

    def vertex_report(self, v: int) -> dict:
        """Classification of the labeled triple around ``v``.

        The cyclic order of edges at a vertex is not recorded, so both
        orientations are tried; the vertex is consistent when one of them
        classifies as the stored kind.
        """
        inc = self.incident(v)
        labels = [self.outgoing_label(eid, v) for eid in inc]
        doc = {"vertex": v, "kind": self.vertices[v].value, "edges": inc}
        if len(inc) != 3 or any(m is None for m in labels):
            doc.update({"labeled": False, "consistent": True})
            return doc
        kinds = {classify_vertex([labels[i] for i in p]) for p in permutations(range(3))}
        valid = kinds - {VertexKind.INVALID}
        doc.update({
            "labeled": True,
            "classified": sorted(k.value for k in valid) or ["Invalid"],
            "consistent": self.vertices[v] in valid,
        })
        return doc

    def label_reports(self) -> list[dict]:
        return [self.vertex_report(v) for v in sorted(self.vertices)]

    def labels_consistent(self) -> bool:
        return all(r["consistent"] for r in self.label_reports())

    # -- I/O ---------------------------------------------------------------
    def to_json(self) -> dict:
        if self.stubs:
            raise GraphError("cannot serialize a graph with open stubs")
        edges = []
        for eid in sorted(self.edges):
            e = self.edges[eid]
            doc = {"id": eid, "a": e.a, "b": e.b}
            if e.label is not None:
                doc["monodromy"] = e.label.to_json()
            edges.append(doc)
        return {
            "vertices": [{"id": v, "kind": self.vertices[v].value} for v in sorted(self.vertices)],
            "edges": edges,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, doc) -> "GammaGraph":
        g = cls()
        try:
            for v in doc["vertices"]:
                vid = int(v["id"])
                if vid in g.vertices:
                    raise GraphError(f"duplicate vertex id {vid}")
                g.vertices[vid] = VertexKind(v["kind"])
            for k, e in enumerate(doc["edges"]):
                eid = int(e.get("id", k))
                if eid in g.edges:
                    raise GraphError(f"duplicate edge id {eid}")
                a, b = int(e["a"]), int(e["b"])
                if a not in g.vertices or b not in g.vertices:
                    raise GraphError(f"edge {eid} references an unknown vertex")
                label = MonodromyMatrix.from_json(e["monodromy"]) if e.get("monodromy") else None
                if label is not None and label.size != 3:
                    raise GraphError(f"edge {eid} label must be 3x3")
                g.edges[eid] = Edge(a, b, label)
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from exc
        return g

    def to_dot(self) -> str:
        lines = ["graph gamma {"]
        for v in sorted(self.vertices):
            shape = "circle" if self.vertices[v] == VertexKind.POSITIVE else "box"
            lines.append(f'  v{v} [shape={shape}, label="{v}{"+" if shape == "circle" else "-"}"];')
        for eid in sorted(self.edges):
            e = self.edges[eid]
            lines.append(f'  v{e.a} -- v{e.b} [label="{eid}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def stats(self) -> dict:
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "positive": self.count(VertexKind.POSITIVE),
            "negative": self.count(VertexKind.NEGATIVE),
            "euler_characteristic": euler_characteristic(self) if self.is_finalized else None,
            "trivalent": self.is_finalized,
            "connected": self.is_connected(),
            "labels_consistent": self.labels_consistent(),
        }


# ---------------------------------------------------------------------------
# Construction from the dilated 4-simplex


@dataclass(frozen=True)
class FaceTriangulation:
    """Unit triangulation of ``d`` times a lattice triangle.

    Points are integer vectors ``a*v0 + b*v1 + c*v2`` with ``a + b + c = d``;
    ``bary`` keeps the barycentric triples that produced them.
    """

    face: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]
    d: int
    bary: tuple[tuple[tuple[int, int, int], ...], ...]

    @property
    def triangles(self) -> list[tuple[tuple[int, ...], ...]]:
        return [tuple(self.point(p) for p in tri) for tri in self.bary]

    def point(self, abc: tuple[int, int, int]) -> tuple[int, ...]:
        return tuple(sum(w * v[i] for w, v in zip(abc, self.face)) for i in range(len(self.face[0])))

    def boundary_segments(self) -> list[tuple[tuple[int, int], int, tuple]]:
        """Boundary unit segments as ``(face-edge (i, j), index along it, triangle index)``.

        The index counts unit steps from face vertex ``i`` towards ``j``.
        """
        out = []
        for t, tri in enumerate(self.bary):
            for p, q in combinations(tri, 2):
                for k in range(3):
                    if p[k] == 0 and q[k] == 0:
                        i, j = [m for m in range(3) if m != k]
                        s = min(p[j], q[j])
                        out.append(((i, j), s, t))
        return sorted(out)

    def internal_edges(self) -> list[tuple[int, int]]:
        owners: dict[frozenset, list[int]] = {}
        for t, tri in enumerate(self.bary):
            for p, q in combinations(tri, 2):
                owners.setdefault(frozenset((p, q)), []).append(t)
        return sorted(tuple(ts) for ts in owners.values() if len(ts) == 2)


def unit_triangulation(face=((0, 0), (1, 0), (0, 1)), d: int = 1) -> FaceTriangulation:
    """Standard unit triangulation of ``d`` times the triangle ``face``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    tris = []
    for a in range(d):
        for b in range(d - a):
            c = d - 1 - a - b
            tris.append(((a + 1, b, c), (a, b + 1, c), (a, b, c + 1)))
    for a in range(d - 1):
        for b in range(d - 1 - a):
            c = d - 2 - a - b
            tris.append(((a, b + 1, c + 1), (a + 1, b, c + 1), (a + 1, b + 1, c)))
    face = tuple(tuple(int(x) for x in v) for v in face)
    return FaceTriangulation(face, d, tuple(tris))


def dual_graph_of_face(t: FaceTriangulation, stub_prefix=()) -> GammaGraph:
    """One Negative vertex per triangle, edges across shared sides, stubs on the boundary.

    Stub keys are ``stub_prefix + ((i, j), s)`` with ``(i, j)`` a side of the
    face and ``s`` the segment index along it.
    """
    g = GammaGraph()
    for _ in t.bary:
        g.add_vertex(VertexKind.NEGATIVE)
    for s, u in t.internal_edges():
        g.add_edge(s, u)
    for side, s, tri in t.boundary_segments():
        g.add_stub(stub_prefix + (side, s), tri)
    return g


def build_gamma_simplex(d: int, dim: int = 4) -> GammaGraph:
    """Discriminant graph built from unit triangulations of the 2-faces of ``d`` times the simplex.

    Every 2-face contributes its dual graph; for every edge of the simplex and
    each of its ``d`` unit segments a Positive vertex joins the stubs of the
    ``dim - 1`` faces sharing that edge.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if dim != 4:
        raise ValueError("only the 4-simplex (trivalent gluing) is supported")
    corners = [tuple(0 for _ in range(dim))] + [
        tuple(1 if k == i else 0 for k in range(dim)) for i in range(dim)
    ]
    g = GammaGraph()
    open_stubs: dict[tuple[tuple[int, int], int], list[int]] = {}
    for face in combinations(range(dim + 1), 3):
        t = unit_triangulation(tuple(corners[i] for i in face), d)
        piece = dual_graph_of_face(t)
        offset = len(g.vertices)
        for v, kind in sorted(piece.vertices.items()):
            g.vertices[v + offset] = kind
        for eid in sorted(piece.edges):
            e = piece.edges[eid]
            g.add_edge(e.a + offset, e.b + offset)
        for (side, s), v in sorted(piece.stubs.items()):
            pedge = (face[side[0]], face[side[1]])
            open_stubs.setdefault((pedge, s), []).append(v + offset)
    for key in sorted(open_stubs):
        ends = open_stubs[key]
        if len(ends) != 3:
            raise GraphError(f"stub mismatch at {key}: {len(ends)} faces")
        p = g.add_vertex(VertexKind.POSITIVE)
        for v in ends:
            g.add_edge(p, v)
    if not g.is_finalized:
        raise GraphError("construction left a non-trivalent vertex")
    return g


# ---------------------------------------------------------------------------
# Invariants and rewrites


def euler_characteristic(g: GammaGraph) -> int:
    """Signed vertex count, Positive minus Negative."""
    if not g.is_finalized:
        raise GraphError("graph is not finalized (stubs or non-trivalent vertices)")
    return sum(SIGN[k] for k in g.vertices.values())


def _flip(kind: VertexKind) -> VertexKind:
    return VertexKind.NEGATIVE if kind == VertexKind.POSITIVE else VertexKind.POSITIVE


def mirror_graph(g: GammaGraph) -> GammaGraph:
    """Swap vertex kinds and dualize every edge label."""
    out = GammaGraph()
    out.vertices = {v: _flip(k) for v, k in g.vertices.items()}
    out.edges = {
        eid: Edge(e.a, e.b, None if e.label is None else mirror_dual(e.label))
        for eid, e in g.edges.items()
    }
    out.stubs = dict(g.stubs)
    return out


def _arms(g: GammaGraph, eid: int) -> tuple[int, int, list[int], list[int]]:
    if eid not in g.edges:
        raise GraphError(f"no edge {eid}")
    e = g.edges[eid]
    if e.a == e.b:
        raise GraphError(f"edge {eid} is a loop")
    for v in (e.a, e.b):
        if any(s == v for s in g.stubs.values()):
            raise GraphError(f"vertex {v} has a stub arm")
    a1 = [x for x in g.incident(e.a) if x != eid]
    a2 = [x for x in g.incident(e.b) if x != eid]
    if len(a1) != 2 or len(a2) != 2:
        raise GraphError(f"endpoints of edge {eid} are not trivalent")
    for x in a1 + a2:
        arm = g.edges[x]
        if arm.a == arm.b:
            raise GraphError(f"arm {x} of edge {eid} is a loop")
        if {arm.a, arm.b} == {e.a, e.b}:
            raise GraphError(f"arm {x} is parallel to edge {eid}")
    return e.a, e.b, a1, a2


def _reattach(edge: Edge, old: int, new: int) -> Edge:
    if edge.a == old:
        return Edge(new, edge.b, edge.label)
    return Edge(edge.a, new, edge.label)


def flop_move(g: GammaGraph, eid: int, swap: tuple[int, int] | None = None) -> GammaGraph:
    """Exchange one arm of each endpoint of ``eid``.

    ``swap`` names one arm at each endpoint (in either order); by default the
    higher-id arm of ``edge.a`` trades places with the lower-id arm of
    ``edge.b``. Endpoint ids, kinds, and the id of ``eid`` are kept, so
    flopping twice with the same ``swap`` restores the input. When labels are
    present the new middle label is chosen to close the triple at ``edge.a``
    and the move is rejected unless both endpoints stay consistent.

    Raises:
        GraphError: loop edge, stub arm, or degenerate neighbourhood.
        MoveRejected: labels no longer classify consistently.
    """
    v1, v2, a1, a2 = _arms(g, eid)
    if swap is None:
        x, y = a1[1], a2[0]
    else:
        p, q = swap
        if p in a1 and q in a2:
            x, y = p, q
        elif q in a1 and p in a2:
            x, y = q, p
        else:
            raise GraphError(f"swap {swap} does not name one arm at each end of edge {eid}")
    out = g.copy()
    out.edges[x] = _reattach(g.edges[x], v1, v2)
    out.edges[y] = _reattach(g.edges[y], v2, v1)
    middle = g.edges[eid]
    if middle.label is not None:
        keep = [k for k in a1 if k != x] + [y]
        mats = [out.outgoing_label(k, v1) for k in keep]
        if all(m is not None for m in mats):
            closing = (mats[0] @ mats[1]).inverse()
            label = closing if middle.a == v1 else closing.inverse()
            out.edges[eid] = Edge(middle.a, middle.b, label)
    if any(e.label is not None for e in out.edges.values()):
        reports = [out.vertex_report(v1), out.vertex_report(v2)]
        if not all(r["consistent"] for r in reports):
            raise MoveRejected(f"flop of edge {eid} breaks monodromy consistency", {"vertices": reports})
    return out


def conifold_move(g: GammaGraph, eid: int) -> GammaGraph:
    """Delete both endpoints of ``eid`` and fuse each endpoint's two arms into one edge.

    The fused edge keeps the lower id of its two arms; labels are dropped on
    fused edges because their transport is not determined locally.

    Raises:
        GraphError: as :func:`flop_move`.
    """
    v1, v2, a1, a2 = _arms(g, eid)
    out = g.copy()
    del out.vertices[v1], out.vertices[v2]
    del out.edges[eid]
    for v, (p, q) in ((v1, a1), (v2, a2)):
        end_p = g.edges[p].other(v)
        end_q = g.edges[q].other(v)
        del out.edges[p], out.edges[q]
        out.edges[min(p, q)] = Edge(end_p, end_q)
    return out


def flop_candidates(g: GammaGraph) -> list[int]:
    """Edges on which :func:`flop_move` and :func:`conifold_move` are defined."""
    ok = []
    for eid in sorted(g.edges):
        try:
            _arms(g, eid)
        except GraphError:
            continue
        ok.append(eid)
    return ok


def load_graph(path) -> GammaGraph:
    with open(path) as fh:
        return GammaGraph.from_json(json.load(fh))


__all__: Sequence[str] = [
    "GammaGraph", "Edge", "GraphError", "MoveRejected", "FaceTriangulation", "SIGN",
    "unit_triangulation", "dual_graph_of_face", "build_gamma_simplex", "euler_characteristic",
    "mirror_graph", "flop_move", "conifold_move", "flop_candidates", "load_graph",
]
