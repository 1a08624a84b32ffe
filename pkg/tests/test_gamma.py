import random

import networkx as nx
import pytest

from syz.gamma import (
    GammaGraph,
    GraphError,
    MoveRejected,
    build_gamma_simplex,
    conifold_move,
    dual_graph_of_face,
    euler_characteristic,
    flop_candidates,
    flop_move,
    load_graph,
    mirror_graph,
    unit_triangulation,
)
from syz.monodromy import POSITIVE_TRIPLE, VertexKind


def to_nx(g):
    G = nx.MultiGraph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from((e.a, e.b) for e in g.edges.values())
    return G


def theta(kind=VertexKind.POSITIVE, labels=POSITIVE_TRIPLE):
    g = GammaGraph()
    a, b = g.add_vertex(kind), g.add_vertex(kind)
    for M in labels:
        g.add_edge(a, b, M)
    return g


@pytest.fixture(scope="module")
def g5():
    return build_gamma_simplex(5)


class TestTriangulation:
    @pytest.mark.parametrize("d", range(1, 7))
    def test_counts(self, d):
        t = unit_triangulation(d=d)
        assert len(t.triangles) == d * d
        assert len(t.boundary_segments()) == 3 * d
        assert len(t.internal_edges()) == 3 * d * (d - 1) // 2

    def test_dual_graph(self):
        g = dual_graph_of_face(unit_triangulation(d=3))
        assert len(g.vertices) == 9 and len(g.stubs) == 9
        assert all(g.degree(v) == 3 for v in g.vertices)
        up = sum(1 for k in g.vertices.values() if k == VertexKind.NEGATIVE)
        assert up == 9


class TestBuild:
    @pytest.mark.parametrize("d", range(1, 7))
    def test_closed_forms(self, d):
        g = build_gamma_simplex(d)
        assert g.count(VertexKind.NEGATIVE) == 10 * d * d
        assert g.count(VertexKind.POSITIVE) == 10 * d
        assert euler_characteristic(g) == 10 * d - 10 * d * d
        assert g.is_finalized
        G = to_nx(g)
        assert nx.is_connected(G) == g.is_connected() is True
        assert all(deg == 3 for _, deg in G.degree())
        assert 2 * len(g.edges) == 3 * len(g.vertices)

    def test_quintic_stats(self, g5):
        s = g5.stats()
        assert (s["vertices"], s["positive"], s["negative"]) == (300, 50, 250)
        assert s["euler_characteristic"] == -200
        assert s["edges"] == 450 and s["trivalent"] and s["connected"]

    def test_positive_vertices_join_negatives(self, g5):
        for v, k in g5.vertices.items():
            if k == VertexKind.POSITIVE:
                nbrs = [g5.edges[e].other(v) for e in g5.incident(v)]
                assert all(g5.vertices[w] == VertexKind.NEGATIVE for w in nbrs)

    def test_invalid_degree(self):
        with pytest.raises(ValueError):
            build_gamma_simplex(0)

    def test_unfinalized(self):
        g = dual_graph_of_face(unit_triangulation(d=2))
        with pytest.raises(GraphError):
            euler_characteristic(g)


class TestMirror:
    def test_counts_swap(self, g5):
        m = mirror_graph(g5)
        assert m.count(VertexKind.POSITIVE) == 250 and m.count(VertexKind.NEGATIVE) == 50
        assert euler_characteristic(m) == 200
        assert mirror_graph(m).vertices == g5.vertices

    def test_labeled_vertex_becomes_negative(self):
        g = theta()
        assert g.labels_consistent()
        m = mirror_graph(g)
        reports = m.label_reports()
        assert all(r["labeled"] and r["consistent"] for r in reports)
        assert all(r["classified"] == ["Negative"] for r in reports)

    def test_wrong_kind_flagged(self):
        g = theta(kind=VertexKind.NEGATIVE)
        assert not g.labels_consistent()


class TestFlop:
    def test_invariants(self, g5):
        rng = random.Random(0)
        cands = flop_candidates(g5)
        assert len(cands) == 450
        for eid in rng.sample(cands, 25):
            h = flop_move(g5, eid)
            assert euler_characteristic(h) == -200
            assert len(h.edges) == 450 and len(h.vertices) == 300
            assert h.is_finalized
            assert nx.is_connected(to_nx(h))
            assert h.edges[eid] == g5.edges[eid]

    def test_double_flop_restores(self, g5):
        eid = flop_candidates(g5)[7]
        e = g5.edges[eid]
        x = [k for k in g5.incident(e.a) if k != eid][0]
        y = [k for k in g5.incident(e.b) if k != eid][1]
        h = flop_move(flop_move(g5, eid, swap=(x, y)), eid, swap=(y, x))
        assert h.edges == g5.edges and h.vertices == g5.vertices
        assert nx.is_isomorphic(to_nx(h), to_nx(g5))

    def test_bad_swap(self, g5):
        eid = flop_candidates(g5)[0]
        with pytest.raises(GraphError):
            flop_move(g5, eid, swap=(eid, eid))

    def test_loop_rejected(self):
        g = GammaGraph()
        a, b = g.add_vertex(VertexKind.POSITIVE), g.add_vertex(VertexKind.POSITIVE)
        loop = g.add_edge(a, a)
        g.add_edge(a, b)
        g.add_edge(b, b)
        with pytest.raises(GraphError):
            flop_move(g, loop)
        with pytest.raises(GraphError):
            conifold_move(g, loop)

    def test_unknown_edge(self, g5):
        with pytest.raises(GraphError):
            flop_move(g5, 10**6)

    def test_inconsistent_labels_rejected(self):
        g = GammaGraph()
        vs = [g.add_vertex(VertexKind.POSITIVE) for _ in range(4)]
        for i in range(4):
            for j in range(i + 1, 4):
                g.add_edge(vs[i], vs[j], POSITIVE_TRIPLE[0])
        with pytest.raises(MoveRejected) as exc:
            flop_move(g, 0)
        assert exc.value.report["vertices"]


class TestConifold:
    def _edge_of(self, g, ka, kb):
        for eid in flop_candidates(g):
            e = g.edges[eid]
            if {g.vertices[e.a], g.vertices[e.b]} == {ka, kb} and (ka != kb or g.vertices[e.a] == ka):
                return eid
        raise AssertionError("no such edge")

    def test_negative_negative(self, g5):
        eid = self._edge_of(g5, VertexKind.NEGATIVE, VertexKind.NEGATIVE)
        h = conifold_move(g5, eid)
        assert euler_characteristic(h) == -198
        assert len(h.vertices) == 298 and len(h.edges) == 447
        assert h.is_finalized

    def test_mixed(self, g5):
        eid = self._edge_of(g5, VertexKind.POSITIVE, VertexKind.NEGATIVE)
        h = conifold_move(g5, eid)
        assert euler_characteristic(h) == -200

    def test_positive_positive(self):
        m = mirror_graph(build_gamma_simplex(2))
        eid = self._edge_of(m, VertexKind.POSITIVE, VertexKind.POSITIVE)
        assert euler_characteristic(conifold_move(m, eid)) == euler_characteristic(m) - 2


class TestIO:
    def test_json_roundtrip(self, g5, tmp_path):
        p = tmp_path / "g.json"
        p.write_text(g5.dumps())
        h = load_graph(p)
        assert h.vertices == g5.vertices and h.edges == g5.edges
        assert h.dumps() == g5.dumps()

    def test_labeled_roundtrip(self):
        g = theta()
        h = GammaGraph.from_json(g.to_json())
        assert h.edges == g.edges

    @pytest.mark.parametrize("doc", [
        {"vertices": [{"id": 0, "kind": "Positive"}], "edges": [{"id": 0, "a": 0, "b": 1}]},
        {"vertices": [{"id": 0, "kind": "Positive"}, {"id": 0, "kind": "Negative"}], "edges": []},
        {"vertices": [{"id": 0}], "edges": []},
        {"edges": []},
    ])
    def test_malformed(self, doc):
        with pytest.raises(ValueError):
            GammaGraph.from_json(doc)

    def test_stubs_not_serialized(self):
        with pytest.raises(GraphError):
            dual_graph_of_face(unit_triangulation(d=1)).to_json()

    def test_dot(self):
        dot = theta().to_dot()
        assert dot.startswith("graph gamma {") and dot.count("--") == 3


def prism(kinds):
    """Triangular prism: triangles 0-1-2 and 3-4-5 joined by rungs i -- i+3."""
    g = GammaGraph()
    for k in kinds:
        g.add_vertex(k)
    for a, b in [(0, 3), (1, 4), (2, 5), (0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]:
        g.add_edge(a, b)
    return g


N, P = VertexKind.NEGATIVE, VertexKind.POSITIVE


def test_six_vertex_flop():
    g = prism([N, P, N, N, P, N])
    h = flop_move(g, 0)
    assert euler_characteristic(h) == euler_characteristic(g) == -2
    assert h.is_finalized and len(h.edges) == 9
    # one arm moved from vertex 0 to vertex 3 and one the other way
    moved = sorted(eid for eid in g.edges if g.edges[eid] != h.edges[eid])
    assert len(moved) == 2
    ends = [{g.edges[e].a, g.edges[e].b} & {0, 3} for e in moved]
    assert sorted(map(sorted, ends)) == [[0], [3]]
    assert [{h.edges[e].a, h.edges[e].b} & {0, 3} for e in moved] == [{0, 3} - x for x in ends]


def test_six_vertex_conifold():
    g = prism([N, P, P, N, N, N])
    assert euler_characteristic(g) == -2
    h = conifold_move(g, 0)
    assert euler_characteristic(h) == 0
    assert len(h.vertices) == 4 and len(h.edges) == 6 and h.is_finalized
