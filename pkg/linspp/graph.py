"""Acyclic digraphs with a source and a sink.

A ``Dag`` is immutable once built. Arc ids and vertex ids never change after
construction; pruning and prefix restriction keep the ids of the parent, so a
derived graph may have gaps in both.
"""

from __future__ import annotations

import heapq
import logging
import threading
from collections.abc import Hashable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from linspp.errors import (
    CycleDetected,
    DanglingVertexReference,
    EmptyArcList,
    GraphError,
    NoStPath,
    SourceEqualsSink,
    SourceHasNoNonbasicPath,
    TooManyPaths,
    UnknownArc,
    VertexUnreachable,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Arc:
    id: int
    tail: int
    head: int


@dataclass(frozen=True, slots=True)
class Path:
    """A directed path given as a sequence of arc ids.

    The empty sequence is the trivial path at ``start`` (then ``start == end``).
    """

    start: int
    end: int
    arcs: tuple[int, ...] = ()

    @classmethod
    def trivial(cls, vertex: int) -> Path:
        return cls(vertex, vertex)

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self) -> Iterator[int]:
        return iter(self.arcs)

    def __str__(self) -> str:
        return " ".join(str(a) for a in self.arcs)

    def then(self, other: Path) -> Path:
        """Concatenate ``self`` and ``other``; ``other`` must start where ``self`` ends."""
        if self.end != other.start:
            raise GraphError(
                f"cannot join a path ending at {self.end} to one starting at {other.start}"
            )
        return Path(self.start, other.end, self.arcs + other.arcs)

    def then_arc(self, arc: Arc) -> Path:
        if self.end != arc.tail:
            raise GraphError(f"arc {arc.id} does not leave vertex {self.end}")
        return Path(self.start, arc.head, (*self.arcs, arc.id))


class Dag:
    """Acyclic digraph with designated source and sink.

    Use :func:`build_dag` for untrusted input. The constructor checks vertex
    references and acyclicity; derived graphs skip the checks.
    """

    def __init__(
        self,
        vertex_count: int,
        arcs: Sequence[Arc],
        source: int,
        sink: int,
        labels: Sequence[str] | None = None,
    ) -> None:
        if not arcs:
            raise EmptyArcList()
        if source == sink:
            raise SourceEqualsSink(source)
        for v in (source, sink):
            if not 0 <= v < vertex_count:
                raise DanglingVertexReference(v, vertex_count)
        for arc in arcs:
            for v in (arc.tail, arc.head):
                if not 0 <= v < vertex_count:
                    raise DanglingVertexReference(v, vertex_count)

        self._setup(vertex_count, arcs, source, sink, labels)

        graph = self.graph
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            raise CycleDetected([key for _, _, key in cycle])
        order = [v for v in nx.lexicographical_topological_sort(graph) if v in self._live]
        self._set_order(order)
        self._prefix_root: Dag = self

    def _setup(
        self,
        vertex_count: int,
        arcs: Sequence[Arc],
        source: int,
        sink: int,
        labels: Sequence[str] | None,
    ) -> None:
        self.vertex_count = vertex_count
        self.arcs: tuple[Arc, ...] = tuple(sorted(arcs, key=lambda a: a.id))
        self.source = source
        self.sink = sink
        self.labels: tuple[str, ...] = (
            tuple(labels) if labels is not None else tuple(str(v) for v in range(vertex_count))
        )
        self._arc_by_id = {a.id: a for a in self.arcs}
        if len(self._arc_by_id) != len(self.arcs):
            raise GraphError("duplicate arc ids")

        out: dict[int, list[Arc]] = {}
        into: dict[int, list[Arc]] = {}
        for a in self.arcs:
            out.setdefault(a.tail, []).append(a)
            into.setdefault(a.head, []).append(a)
        self._out = {v: tuple(arcs_) for v, arcs_ in out.items()}
        self._in = {v: tuple(arcs_) for v, arcs_ in into.items()}
        self._live = {source, sink, *out, *into}

        self._lock = threading.Lock()
        self._prefixes: dict[int, Dag] = {}
        self._tree: dict[int, Path] = {source: Path.trivial(source)}

    def _set_order(self, order: list[int]) -> None:
        self.vertices: tuple[int, ...] = tuple(order)
        self.position = {v: i for i, v in enumerate(order)}

    @classmethod
    def _derived(cls, parent: Dag, arcs: Sequence[Arc], sink: int) -> Dag:
        dag = cls.__new__(cls)
        dag._setup(parent.vertex_count, arcs, parent.source, sink, parent.labels)
        dag._set_order([v for v in parent.vertices if v in dag._live])
        dag._prefix_root = dag
        return dag

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, m={self.m}, source={self.source}, sink={self.sink})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return (
            self.arcs == other.arcs
            and self.source == other.source
            and self.sink == other.sink
            and self.vertices == other.vertices
        )

    def __hash__(self) -> int:
        return hash((self.arcs, self.source, self.sink))

    @property
    def m(self) -> int:
        return len(self.arcs)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def arc_ids(self) -> frozenset[int]:
        return frozenset(self._arc_by_id)

    @cached_property
    def graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        g.add_nodes_from(self._live)
        for a in self.arcs:
            g.add_edge(a.tail, a.head, key=a.id)
        return g

    def arc(self, arc_id: int) -> Arc:
        try:
            return self._arc_by_id[arc_id]
        except KeyError:
            raise UnknownArc(arc_id) from None

    def has_arc(self, arc_id: int) -> bool:
        return arc_id in self._arc_by_id

    def out_arcs(self, v: int) -> tuple[Arc, ...]:
        return self._out.get(v, ())

    def in_arcs(self, v: int) -> tuple[Arc, ...]:
        return self._in.get(v, ())

    def source_arcs(self) -> tuple[Arc, ...]:
        return self.out_arcs(self.source)

    def label(self, v: int) -> str:
        return self.labels[v]

    @cached_property
    def is_covered(self) -> bool:
        g = self.graph
        fwd = nx.descendants(g, self.source) | {self.source}
        bwd = nx.ancestors(g, self.sink) | {self.sink}
        return all(a.tail in fwd and a.head in bwd for a in self.arcs)

    def path(self, arc_ids: Sequence[int], start: int | None = None) -> Path:
        """Validate a sequence of arc ids as a path; empty needs ``start``."""
        if not arc_ids:
            if start is None:
                raise GraphError("an empty path needs a start vertex")
            return Path.trivial(start)
        arcs = [self.arc(a) for a in arc_ids]
        if start is not None and arcs[0].tail != start:
            raise GraphError(f"path does not start at vertex {start}")
        seen = {arcs[0].tail}
        for prev, nxt in zip(arcs, arcs[1:], strict=False):
            if prev.head != nxt.tail:
                raise GraphError(f"arcs {prev.id} and {nxt.id} are not consecutive")
        for a in arcs:
            if a.head in seen:
                raise GraphError(f"path revisits vertex {a.head}")
            seen.add(a.head)
        return Path(arcs[0].tail, arcs[-1].head, tuple(arc_ids))

    def tree_path(self, v: int) -> Path:
        """Fixed s-v path; each vertex is entered through its smallest-id in-arc.

        The paths form an out-tree rooted at the source.
        """
        cached = self._tree.get(v)
        if cached is not None:
            return cached
        if v not in self.position:
            raise VertexUnreachable(v)
        with self._lock:
            for w in self.vertices[: self.position[v] + 1]:
                if w in self._tree:
                    continue
                ins = self.in_arcs(w)
                if not ins:
                    raise VertexUnreachable(w)
                arc = ins[0]
                self._tree[w] = self._tree[arc.tail].then_arc(arc)
        return self._tree[v]


@dataclass(frozen=True)
class ArcOrder:
    order: tuple[int, ...]

    @cached_property
    def rank(self) -> dict[int, int]:
        return {a: i for i, a in enumerate(self.order)}

    def precedes(self, a: int, b: int) -> bool:
        return self.rank[a] < self.rank[b]

    def __iter__(self) -> Iterator[int]:
        return iter(self.order)


@dataclass(frozen=True)
class NonbasicSystem:
    """One outgoing nonbasic arc per vertex other than source and sink."""

    dag: Dag
    nonbasic_of: Mapping[int, int]
    _paths: dict[int, Path] = field(default_factory=dict, compare=False, repr=False)

    @cached_property
    def arcs(self) -> frozenset[int]:
        return frozenset(self.nonbasic_of.values())

    def is_nonbasic(self, arc_id: int) -> bool:
        return arc_id in self.arcs

    def is_strongly_basic(self, arc_id: int) -> bool:
        arc = self.dag.arc(arc_id)
        return arc_id not in self.arcs and arc.tail != self.dag.source

    def strongly_basic_arcs(self) -> list[Arc]:
        src = self.dag.source
        return [a for a in self.dag.arcs if a.tail != src and a.id not in self.arcs]

    def path(self, v: int) -> Path:
        """The nonbasic v-t path N_v."""
        dag = self.dag
        if v == dag.source:
            raise SourceHasNoNonbasicPath()
        cached = self._paths.get(v)
        if cached is not None:
            return cached

        walk = []
        w = v
        while w not in self._paths and w != dag.sink:
            if w not in self.nonbasic_of:
                raise VertexUnreachable(w)
            walk.append(dag.arc(self.nonbasic_of[w]))
            w = walk[-1].head
            if len(walk) > dag.n:
                raise GraphError("nonbasic arcs contain a cycle")
        rest = self._paths.setdefault(w, Path.trivial(w)) if w == dag.sink else self._paths[w]
        for arc in reversed(walk):
            rest = Path(arc.tail, rest.end, (arc.id, *rest.arcs))
            self._paths[arc.tail] = rest
        return rest


def build_dag(
    vertices: int | Sequence[Hashable],
    arc_list: Sequence[tuple[Hashable, Hashable]],
    s: Hashable,
    t: Hashable,
) -> Dag:
    """Build and validate a Dag; arcs get ids 1..m in list order.

    ``vertices`` is either a count (vertex ids 0..n-1) or a sequence of labels,
    in which case arcs and endpoints are given by label.
    """
    if isinstance(vertices, int):
        count = vertices
        labels = None

        def index(v: Hashable) -> int:
            if not isinstance(v, int) or not 0 <= v < count:
                raise DanglingVertexReference(v, count)
            return v

    else:
        count = len(vertices)
        labels = [str(v) for v in vertices]
        lookup = {v: i for i, v in enumerate(vertices)}

        def index(v: Hashable) -> int:
            if v not in lookup:
                raise DanglingVertexReference(v, count)
            return lookup[v]

    if not arc_list:
        raise EmptyArcList()
    src, snk = index(s), index(t)
    if src == snk:
        raise SourceEqualsSink(src)
    arcs = [Arc(i, index(tail), index(head)) for i, (tail, head) in enumerate(arc_list, start=1)]
    return Dag(count, arcs, src, snk, labels)


def prune_to_covered(dag: Dag) -> Dag:
    """Keep the arcs lying on at least one s-t path."""
    g = dag.graph
    fwd = nx.descendants(g, dag.source) | {dag.source}
    if dag.sink not in fwd:
        raise NoStPath(dag.source, dag.sink)
    bwd = nx.ancestors(g, dag.sink) | {dag.sink}

    kept = [a for a in dag.arcs if a.tail in fwd and a.head in bwd]
    if len(kept) == dag.m:
        return dag
    dropped = sorted(a.id for a in dag.arcs if a.tail not in fwd or a.head not in bwd)
    log.warning("pruned %d arc(s) not on any s-t path: %s", len(dropped), dropped)
    return Dag._derived(dag, kept, dag.sink)


def restrict_to_prefix_subgraph(dag: Dag, u: int) -> Dag:
    """Subgraph of arcs on some s-u path, with sink ``u``.

    Results are memoized on the graph the chain of prefixes was cut from.
    """
    if u == dag.sink:
        return dag
    if u == dag.source:
        raise SourceEqualsSink(u)
    if u not in dag.position:
        raise VertexUnreachable(u)

    root = dag._prefix_root
    cached = root._prefixes.get(u)
    if cached is not None:
        return cached

    anc = nx.ancestors(root.graph, u)
    if root.source not in anc:
        raise VertexUnreachable(u)
    anc.add(u)
    kept = [a for a in root.arcs if a.head in anc and a.tail in anc]
    sub = Dag._derived(root, kept, u)
    sub._prefix_root = root
    with root._lock:
        root._prefixes.setdefault(u, sub)
    return root._prefixes[u]


def topological_arc_order(dag: Dag) -> ArcOrder:
    """Smallest arc id first among the arcs whose tail has been fully entered."""
    missing = {v: len(dag.in_arcs(v)) for v in dag.vertices}
    heap = [a.id for a in dag.out_arcs(dag.source)]
    heapq.heapify(heap)
    order = []
    while heap:
        arc = dag.arc(heapq.heappop(heap))
        order.append(arc.id)
        missing[arc.head] -= 1
        if missing[arc.head] == 0:
            for nxt in dag.out_arcs(arc.head):
                heapq.heappush(heap, nxt.id)
    if len(order) != dag.m:
        raise GraphError("graph is not covered from the source")
    return ArcOrder(tuple(order))


def choose_nonbasic_system(dag: Dag) -> NonbasicSystem:
    """Pick the smallest-id outgoing arc at every inner vertex."""
    chosen = {}
    for v in dag.vertices:
        if v in (dag.source, dag.sink):
            continue
        outs = dag.out_arcs(v)
        if not outs:
            raise GraphError(f"vertex {v} has no outgoing arc; prune the graph first")
        chosen[v] = outs[0].id
    ns = NonbasicSystem(dag, chosen)

    # in-tree rooted at the sink: every walk along chosen arcs ends there
    for v in reversed(dag.vertices):
        if v != dag.source and ns.path(v).end != dag.sink:
            raise GraphError(f"nonbasic walk from {v} misses the sink")
    return ns


def nonbasic_path(ns: NonbasicSystem, v: int) -> Path:
    return ns.path(v)


def _paths_to(dag: Dag, end: int) -> dict[int, int]:
    """Number of v-end paths for every vertex v."""
    counts = {end: 1}
    for v in reversed(dag.vertices[: dag.position[end]]):
        total = sum(counts.get(a.head, 0) for a in dag.out_arcs(v))
        if total:
            counts[v] = total
    return counts


def count_paths(dag: Dag, start: int | None = None, end: int | None = None) -> int:
    start = dag.source if start is None else start
    end = dag.sink if end is None else end
    if start not in dag.position or end not in dag.position:
        return 0
    return _paths_to(dag, end).get(start, 0)


def iter_paths(
    dag: Dag, start: int | None = None, end: int | None = None, limit: int | None = None
) -> Iterator[Path]:
    """All start-end paths in lexicographic order of their arc id sequences."""
    start = dag.source if start is None else start
    end = dag.sink if end is None else end
    if start not in dag.position or end not in dag.position:
        return
    counts = _paths_to(dag, end)
    if limit is not None and counts.get(start, 0) > limit:
        raise TooManyPaths(limit)
    if start == end:
        yield Path.trivial(start)
        return

    stack: list[tuple[int, Iterator[Arc]]] = [(start, iter(dag.out_arcs(start)))]
    trail: list[int] = []
    while stack:
        v, arcs = stack[-1]
        for arc in arcs:
            if arc.head not in counts:
                continue
            if arc.head == end:
                yield Path(start, end, (*trail, arc.id))
                continue
            trail.append(arc.id)
            stack.append((arc.head, iter(dag.out_arcs(arc.head))))
            break
        else:
            stack.pop()
            if trail:
                trail.pop()


def enumerate_paths(dag: Dag, limit: int) -> list[Path]:
    return list(iter_paths(dag, limit=limit))
