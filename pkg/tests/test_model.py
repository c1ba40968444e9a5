"""
Tests for graph construction, the instance type and serialization.
"""

import io

import networkx as nx
import numpy as np
import pytest

from core.exceptions import (
    GraphFormatError,
    InvalidParametersError,
    NonSimpleGraphError,
    SizeCapExceededError,
)
from model.builders import build, build_base, build_deleted, build_wheel, rim_edge_count, rim_edges
from model.graph import GraphInstance
from model.io import ExportFormat, export_edges, import_edges, read_instance, write_instance
from model.params import ModelParams, Variant
from model.reference import build_literal, degree_level_profile


def _profile(g: GraphInstance):
    counts = {}
    for lv, deg in zip(g.level.tolist(), g.degrees.tolist()):
        counts[(lv, deg)] = counts.get((lv, deg), 0) + 1
    return counts


class TestModelParams:
    """Tests for the parameter schema."""

    def test_base_defaults(self):
        params = ModelParams.create(m=2, t=1)

        assert params.variant is Variant.BASE
        assert params.p is None
        assert params.label == "base_m2_t1"

    def test_deleted_label(self):
        params = ModelParams.create(variant="deleted", m=3, t=2, p=0.5, seed=7)

        assert params.label == "deleted_m3_t2_p0.5_s7"
        assert params.to_dict()["seed"] == 7

    @pytest.mark.parametrize("kwargs", [
        {"m": 1, "t": 0},
        {"m": 2, "t": -1},
        {"variant": "deleted", "m": 2, "t": 1, "p": 0.5},
        {"variant": "deleted", "m": 2, "t": 1, "p": 1.5, "seed": 0},
        {"variant": "base", "m": 2, "t": 1, "p": 0.5, "seed": 0},
        {"variant": "deleted", "m": 2, "t": 1, "p": 0.5, "seed": -1},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidParametersError):
            ModelParams.create(**kwargs)

    def test_frozen(self):
        params = ModelParams.create(m=2, t=1)

        with pytest.raises(Exception):
            params.m = 3


class TestBuildBase:
    """Tests for the star-seeded family."""

    def test_seed_star(self):
        g = build_base(2, 0)

        assert g.n == 3
        assert g.num_edges == 2
        assert g.level_counts() == [1, 2]

    def test_g_1_2(self):
        g = build_base(2, 1)

        assert (g.n, g.num_edges) == (7, 8)
        assert g.degree(g.hub) == 4
        assert sorted(g.degrees[g.level == 1].tolist()) == [2, 2]
        assert sorted(g.degrees[g.level == 2].tolist()) == [2, 2, 2, 2]

    def test_g_1_3(self):
        g = build_base(3, 1)

        assert (g.n, g.num_edges) == (13, 18)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    @pytest.mark.parametrize("t", [0, 1, 2, 3, 4])
    def test_counts_grid(self, m, t):
        g = build_base(m, t)

        assert g.n == (m ** (t + 2) - 1) // (m - 1)
        assert g.num_edges == (t + 1) * m ** (t + 1)

    def test_triangle_free(self):
        g = build_base(3, 3)

        assert sum(nx.triangles(g.to_networkx()).values()) == 0

    def test_bottoms_touch_one_vertex_per_level(self):
        m, t = 3, 2
        g = build_base(m, t)

        for v in g.vertices_at_level(t + 1):
            assert sorted(g.level[g.neighbors(v)].tolist()) == list(range(t + 1))

    @pytest.mark.parametrize("m,t", [(2, 0), (2, 1), (2, 2), (3, 1), (3, 2)])
    def test_matches_literal_construction(self, m, t):
        g = build_base(m, t)
        literal = build_literal(m, t)

        assert nx.is_isomorphic(g.to_networkx(), literal)
        assert degree_level_profile(literal) == _profile(g)

    def test_size_cap(self):
        with pytest.raises(SizeCapExceededError):
            build_base(2, 10, max_vertices=100)

    def test_huge_t_rejected_without_materialising(self):
        with pytest.raises(SizeCapExceededError):
            build_base(8, 10_000)

    def test_arrays_read_only(self):
        g = build_base(2, 1)

        with pytest.raises(ValueError):
            g.indices[0] = 5


class TestBuildWheel:
    """Tests for the wheel-seeded family."""

    def test_k4(self):
        g = build_wheel(3, 0)

        assert nx.is_isomorphic(g.to_networkx(), nx.complete_graph(4))

    def test_triangle(self):
        g = build_wheel(2, 0)

        assert nx.is_isomorphic(g.to_networkx(), nx.cycle_graph(3))
        assert g.metadata["single_edge_rim"] is True

    def test_g1_1_3(self):
        g = build_wheel(3, 1)

        assert (g.n, g.num_edges) == (13, 27)

    def test_rim_edge_count(self):
        assert rim_edge_count(3, 1) == 9
        assert rim_edge_count(2, 2) == 4
        assert rim_edges(3, 1).shape == (9, 2)

    def test_rim_only_at_bottom(self):
        m, t = 4, 2
        g = build_wheel(m, t)
        rim = rim_edges(m, t)

        assert np.all(g.level[rim] == t + 1)

    @pytest.mark.parametrize("m,t", [(2, 1), (3, 1), (3, 2), (4, 1)])
    def test_matches_literal_construction(self, m, t):
        g = build_wheel(m, t)

        assert nx.is_isomorphic(g.to_networkx(), build_literal(m, t, wheel=True))


class TestBuildDeleted:
    """Tests for rim deletion."""

    def test_p_zero_is_wheel(self):
        g = build_deleted(3, 2, 0.0, seed=5)

        assert g.same_graph(build_wheel(3, 2))

    def test_p_one_is_base(self):
        g = build_deleted(3, 2, 1.0, seed=5)

        assert np.array_equal(g.edges(), build_base(3, 2).edges())

    def test_reproducible(self):
        a = build_deleted(3, 3, 0.5, seed=42)
        b = build_deleted(3, 3, 0.5, seed=42)

        assert a == b

    def test_seeds_differ(self):
        a = build_deleted(3, 4, 0.5, seed=1)
        b = build_deleted(3, 4, 0.5, seed=2)

        assert not a.same_graph(b)

    def test_hierarchy_edges_untouched(self):
        g = build_deleted(3, 2, 0.7, seed=3)
        base_edges = {tuple(e) for e in build_base(3, 2).edges().tolist()}
        edges = {tuple(e) for e in g.edges().tolist()}

        assert base_edges <= edges
        assert g.metadata["rim_edges_kept"] == len(edges - base_edges)

    def test_connected(self):
        g = build_deleted(2, 3, 0.9, seed=11)

        assert nx.is_connected(g.to_networkx())

    def test_edge_count_sample_mean(self):
        m, t, p = 3, 3, 0.5
        counts = np.array([build_deleted(m, t, p, seed=s).num_edges for s in range(200)])
        stderr = counts.std(ddof=1) / np.sqrt(counts.size)

        assert abs(counts.mean() - 364.5) < 4 * stderr

    def test_dispatch(self):
        params = ModelParams.create(variant=Variant.WHEEL_DELETED, m=2, t=1, p=0.3, seed=9)

        assert build(params) == build_deleted(2, 1, 0.3, 9)


class TestGraphInstance:
    """Tests for the instance type."""

    def setup_method(self):
        self.g = build_base(2, 1)

    def test_edges_sorted(self):
        edges = self.g.edges()

        assert np.all(edges[:, 0] < edges[:, 1])
        assert edges.tolist() == sorted(edges.tolist())

    def test_neighbors_out_of_range(self):
        with pytest.raises(IndexError):
            self.g.neighbors(7)

    def test_equality_needs_same_params(self):
        other = build_wheel(2, 1)

        assert self.g != other
        assert self.g == build_base(2, 1)

    def test_unhashable(self):
        with pytest.raises(TypeError):
            hash(self.g)

    def test_to_csr_symmetric(self):
        adj = self.g.to_csr()

        assert (adj - adj.T).nnz == 0
        assert adj.sum() == 2 * self.g.num_edges

    def test_summary(self):
        summary = self.g.summary()

        assert summary["n"] == 7
        assert summary["levels"] == [1, 2, 4]


class TestExport:
    """Tests for export formats."""

    def test_star_edge_list(self):
        assert export_edges(build_base(2, 0), ExportFormat.EDGE_LIST) == b"0 1\n0 2\n"

    def test_edge_list_line_count(self):
        text = export_edges(build_base(2, 1), ExportFormat.EDGE_LIST).decode()

        assert len(text.splitlines()) == 8

    def test_dot_carries_levels(self):
        text = export_edges(build_wheel(3, 0), ExportFormat.DOT).decode()

        assert text.startswith("graph G {")
        assert "  0 [level=0];" in text
        assert "  1 -- 2;" in text

    def test_deterministic(self):
        a = export_edges(build_deleted(3, 2, 0.5, 7), ExportFormat.JSON)
        b = export_edges(build_deleted(3, 2, 0.5, 7), ExportFormat.JSON)

        assert a == b

    def test_write_instance(self, tmp_path):
        path = write_instance(build_base(2, 1), tmp_path / "out" / "g.txt", ExportFormat.EDGE_LIST)

        assert path.read_bytes().count(b"\n") == 8


class TestImport:
    """Tests for import and level recovery."""

    @pytest.mark.parametrize("fmt", list(ExportFormat))
    def test_base_round_trip(self, fmt):
        g = build_base(2, 2)

        assert import_edges(export_edges(g, fmt)) == g

    @pytest.mark.parametrize("fmt", [ExportFormat.DOT, ExportFormat.JSON])
    def test_deleted_round_trip(self, fmt):
        g = build_deleted(3, 2, 0.4, seed=8)

        assert import_edges(export_edges(g, fmt)) == g

    def test_wheel_edge_list_with_params(self):
        g = build_wheel(3, 1)
        params = ModelParams.create(variant="wheel", m=3, t=1)

        assert import_edges(export_edges(g), params=params) == g

    def test_g_1_2_from_edge_list(self):
        g = import_edges(io.BytesIO(b"0 3\n0 4\n0 5\n0 6\n1 3\n1 4\n2 5\n2 6\n"))

        assert (g.n, g.num_edges) == (7, 8)
        assert g.params.m == 2 and g.params.t == 1
        assert g.level.tolist() == [0, 1, 1, 2, 2, 2, 2]

    def test_empty_stream(self):
        with pytest.raises(GraphFormatError):
            import_edges(b"")

    def test_self_loop(self):
        with pytest.raises(NonSimpleGraphError):
            import_edges("0 0\n")

    def test_duplicate_edge(self):
        with pytest.raises(NonSimpleGraphError):
            import_edges("0 1\n1 0\n0 2\n")

    def test_garbage_line(self):
        with pytest.raises(GraphFormatError):
            import_edges("0 1\nzero two\n")

    def test_disconnected_is_accepted(self):
        params = ModelParams.create(variant="base", m=2, t=0)
        g = import_edges(b'{"variant":"base","m":2,"t":0,"n":5,"levels":[0,1,1,1,1],"edges":[[0,1],[0,2],[3,4]]}',
                         params=params)

        assert g.metadata["connected"] is False

    def test_read_instance(self, tmp_path):
        g = build_wheel(2, 2)
        path = write_instance(g, tmp_path / "w.json", ExportFormat.JSON)

        assert read_instance(path) == g
