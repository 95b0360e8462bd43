import pytest
from hypothesis import given

from linspp.errors import (
    CycleDetected,
    DanglingVertexReference,
    EmptyArcList,
    GraphError,
    NoStPath,
    SourceEqualsSink,
    SourceHasNoNonbasicPath,
    TooManyPaths,
    VertexUnreachable,
)
from linspp.generators import layered
from linspp.graph import (
    Path,
    build_dag,
    choose_nonbasic_system,
    count_paths,
    enumerate_paths,
    iter_paths,
    nonbasic_path,
    prune_to_covered,
    restrict_to_prefix_subgraph,
    topological_arc_order,
)

from .strategies import covered_dags


class TestBuildDag:
    def test_single_arc(self, single_arc):
        assert single_arc.m == 1
        assert single_arc.n == 2
        assert count_paths(single_arc) == 1

    def test_two_cycle_is_rejected(self):
        with pytest.raises(CycleDetected) as exc:
            build_dag(2, [(0, 1), (1, 0)], 0, 1)
        assert sorted(exc.value.cycle) == [1, 2]

    def test_diamond(self, diamond):
        assert diamond.m == 4
        assert count_paths(diamond) == 2
        assert diamond.arc(3).tail == diamond.source

    def test_labels_resolve_endpoints(self, diamond):
        assert [diamond.label(v) for v in diamond.vertices] == ["s", "u", "w", "t"]

    def test_empty_arc_list(self):
        with pytest.raises(EmptyArcList):
            build_dag(2, [], 0, 1)

    def test_source_equals_sink(self):
        with pytest.raises(SourceEqualsSink):
            build_dag(2, [(0, 1)], 1, 1)

    def test_dangling_vertex(self):
        with pytest.raises(DanglingVertexReference):
            build_dag(2, [(0, 5)], 0, 1)

    def test_unknown_label(self):
        with pytest.raises(DanglingVertexReference):
            build_dag(["s", "t"], [("s", "x")], "s", "t")

    def test_parallel_arcs_are_distinct(self):
        dag = build_dag(2, [(0, 1), (0, 1)], 0, 1)
        assert [str(p) for p in iter_paths(dag)] == ["1", "2"]


class TestPath:
    def test_then_checks_endpoints(self):
        with pytest.raises(GraphError):
            Path(0, 1, (1,)).then(Path(2, 3, (2,)))

    def test_validated_path(self, diamond):
        assert diamond.path([1, 2]) == Path(0, 3, (1, 2))
        with pytest.raises(GraphError):
            diamond.path([1, 4])

    def test_empty_path_needs_start(self, diamond):
        assert diamond.path([], start=1) == Path.trivial(1)
        with pytest.raises(GraphError):
            diamond.path([])

    def test_str_joins_arc_ids(self):
        assert str(Path(0, 3, (1, 5, 7))) == "1 5 7"


class TestPrune:
    def test_removes_arc_that_misses_the_sink(self):
        dag = build_dag(
            ["s", "u", "w", "t", "x"],
            [("s", "u"), ("u", "t"), ("s", "w"), ("w", "t"), ("u", "x")],
            "s",
            "t",
        )
        pruned = prune_to_covered(dag)
        assert pruned.arc_ids == frozenset({1, 2, 3, 4})
        assert pruned.is_covered
        assert not dag.is_covered

    def test_covered_graph_is_unchanged(self, diamond):
        assert prune_to_covered(diamond) is diamond

    def test_sink_unreachable(self):
        dag = build_dag(3, [(0, 1), (2, 1)], 0, 2)
        with pytest.raises(NoStPath):
            prune_to_covered(dag)

    def test_pruned_graph_keeps_ids(self):
        dag = build_dag(4, [(2, 1), (0, 1), (1, 3)], 0, 3)
        pruned = prune_to_covered(dag)
        assert pruned.arc_ids == frozenset({2, 3})
        assert pruned.vertices == (0, 1, 3)


class TestTopologicalArcOrder:
    def test_single_path_is_forced(self, chain):
        assert topological_arc_order(chain).order == (1, 2, 3)

    def test_diamond_prefers_small_ids(self, diamond):
        assert topological_arc_order(diamond).order == (1, 2, 3, 4)

    @given(covered_dags(max_vertices=7))
    def test_every_path_is_increasing(self, dag):
        order = topological_arc_order(dag)
        assert sorted(order.order) == sorted(dag.arc_ids)
        for path in iter_paths(dag):
            for a, b in zip(path.arcs, path.arcs[1:], strict=False):
                assert order.precedes(a, b)
                assert not order.precedes(b, a)


class TestNonbasicSystem:
    def test_diamond(self, diamond):
        ns = choose_nonbasic_system(diamond)
        assert dict(ns.nonbasic_of) == {1: 2, 2: 4}
        assert [a.id for a in ns.strongly_basic_arcs()] == []

    def test_single_arc_has_empty_map(self, single_arc):
        assert dict(choose_nonbasic_system(single_arc).nonbasic_of) == {}

    def test_double_diamond_in_tree(self, double_diamond):
        ns = choose_nonbasic_system(double_diamond)
        assert ns.arcs == frozenset({3, 4, 5, 7, 8})
        assert [a.id for a in ns.strongly_basic_arcs()] == [6]
        # every vertex but the source reaches t along nonbasic arcs
        for v in double_diamond.vertices:
            if v != double_diamond.source:
                assert ns.path(v).end == double_diamond.sink

    def test_nonbasic_paths(self, diamond):
        ns = choose_nonbasic_system(diamond)
        assert nonbasic_path(ns, diamond.sink) == Path.trivial(diamond.sink)
        assert nonbasic_path(ns, 1) == Path(1, 3, (2,))
        assert nonbasic_path(ns, 2) == Path(2, 3, (4,))
        with pytest.raises(SourceHasNoNonbasicPath):
            nonbasic_path(ns, diamond.source)

    def test_nonbasic_path_follows_chosen_arcs(self, double_diamond):
        ns = choose_nonbasic_system(double_diamond)
        assert nonbasic_path(ns, 1).arcs == (3, 5, 8)
        assert nonbasic_path(ns, 4).arcs == (7,)

    def test_strongly_basic(self, double_diamond):
        ns = choose_nonbasic_system(double_diamond)
        assert ns.is_strongly_basic(6)
        assert not ns.is_strongly_basic(5)
        assert not ns.is_strongly_basic(1)

    @given(covered_dags())
    def test_one_nonbasic_arc_per_inner_vertex(self, dag):
        ns = choose_nonbasic_system(dag)
        assert len(ns.arcs) == dag.n - 2
        for v, a in ns.nonbasic_of.items():
            assert dag.arc(a).tail == v


class TestPrefixSubgraph:
    def test_sink_gives_whole_graph(self, diamond):
        assert restrict_to_prefix_subgraph(diamond, diamond.sink) is diamond

    def test_diamond_prefix(self, diamond):
        sub = restrict_to_prefix_subgraph(diamond, 1)
        assert sub.arc_ids == frozenset({1})
        assert sub.sink == 1

    def test_double_diamond_middle(self, double_diamond):
        sub = restrict_to_prefix_subgraph(double_diamond, 3)
        assert sub.arc_ids == frozenset({1, 2, 3, 4})
        assert count_paths(sub) == 2

    def test_memoized(self, double_diamond):
        first = restrict_to_prefix_subgraph(double_diamond, 3)
        assert restrict_to_prefix_subgraph(double_diamond, 3) is first

    def test_nested_prefix_shares_root(self, double_diamond):
        sub = restrict_to_prefix_subgraph(double_diamond, 3)
        assert restrict_to_prefix_subgraph(sub, 1) is restrict_to_prefix_subgraph(
            double_diamond, 1
        )

    def test_source_is_rejected(self, diamond):
        with pytest.raises(SourceEqualsSink):
            restrict_to_prefix_subgraph(diamond, diamond.source)

    def test_unknown_vertex(self, diamond):
        with pytest.raises(VertexUnreachable):
            restrict_to_prefix_subgraph(diamond, 17)


class TestPaths:
    def test_counts(self, diamond, double_diamond):
        assert count_paths(diamond) == 2
        assert count_paths(double_diamond) == 4
        assert count_paths(layered(3, 2)) == 8

    def test_lexicographic_order(self, double_diamond):
        assert [str(p) for p in enumerate_paths(double_diamond, 10)] == [
            "1 3 5 8",
            "1 3 6 7",
            "2 4 5 8",
            "2 4 6 7",
        ]

    def test_limit(self):
        with pytest.raises(TooManyPaths):
            enumerate_paths(layered(4, 2), limit=10)

    def test_inner_endpoints(self, double_diamond):
        assert [str(p) for p in iter_paths(double_diamond, 3, 6)] == ["5 8", "6 7"]
        assert list(iter_paths(double_diamond, 3, 3)) == [Path.trivial(3)]

    def test_tree_path_uses_smallest_in_arc(self, diamond):
        assert diamond.tree_path(diamond.sink) == Path(0, 3, (1, 2))
        assert diamond.tree_path(diamond.source) == Path.trivial(diamond.source)

    @given(covered_dags())
    def test_count_matches_enumeration(self, dag):
        paths = list(iter_paths(dag))
        assert len(paths) == count_paths(dag)
        assert len(set(paths)) == len(paths)
        for p in paths:
            assert dag.path(p.arcs) == p
