"""All-paths-equal-cost instances.

The helpers here work on plain ``{key: number}`` dictionaries so the
linearizer can run them on integers after clearing denominators. The public
operations take and return ``OrderDCost`` / ``LinearCost`` values.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from linspp.costs import Key, LinearCost, OrderDCost, Rational, common_denominator
from linspp.errors import NotStronglyBasic, OrderMismatch
from linspp.graph import Arc, Dag, NonbasicSystem, Path, restrict_to_prefix_subgraph
from linspp.verdicts import ApecVerdict

log = logging.getLogger(__name__)

Entries = Mapping[Key, Rational]


@dataclass(frozen=True)
class ApecInstance:
    """Do all source-sink paths of ``dag`` cost the same under ``q``?"""

    dag: Dag
    q: OrderDCost

    @property
    def d(self) -> int:
        return self.q.d


def _with_arc(key: Key, arc: int) -> Key:
    return tuple(sorted((*key, arc)))


class GammaTable:
    """gamma(B, x): sum of q(B ∪ C) over subsets C of N_x with |B ∪ C| <= d.

    Rows exist for every B of size <= d - 1 contained in some stored key;
    other rows are zero. A row holds one value per vertex, indexed by
    topological position.
    """

    def __init__(self, entries: Entries, d: int, ns: NonbasicSystem) -> None:
        self.entries = entries
        self.d = d
        self.ns = ns
        self.dag = dag = ns.dag

        rows: set[Key] = {()}
        for key in entries:
            for k in range(1, min(len(key), d - 1) + 1):
                rows.update(combinations(key, k))

        position = dag.position
        steps = []
        for x in reversed(dag.vertices):
            if x in (dag.source, dag.sink):
                continue
            e = dag.arc(ns.nonbasic_of[x])
            steps.append((position[x], position[e.head], e.id))
        sink = position[dag.sink]

        self.rows: dict[Key, list[Rational]] = {}
        for b in sorted(rows, key=len, reverse=True):
            row: list[Rational] = [0] * dag.n
            row[sink] = entries.get(b, 0)
            wide = len(b) + 1 == d
            for xp, yp, e in steps:
                if e in b:
                    row[xp] = row[yp]
                    continue
                be = _with_arc(b, e)
                if wide:
                    extra = entries.get(be, 0)
                else:
                    nxt = self.rows.get(be)
                    extra = nxt[yp] if nxt is not None else 0
                row[xp] = row[yp] + extra
            self.rows[b] = row

        self._by_first: dict[int, list[Key]] = {}
        for b in self.rows:
            if b:
                self._by_first.setdefault(b[0], []).append(b)
        log.debug("gamma table: %d rows over %d vertices", len(self.rows), dag.n)

    def value(self, key: Key, x: int) -> Rational:
        """gamma(key, x); keys of size d read straight from q."""
        key = tuple(sorted(key))
        if len(key) == self.d:
            return self.entries.get(key, 0)
        row = self.rows.get(key)
        return row[self.dag.position[x]] if row is not None else 0

    def __getitem__(self, item: tuple[Key, int]) -> Rational:
        return self.value(*item)

    def rows_within(self, arcs: frozenset[int]) -> list[Key]:
        """Row keys whose arcs all lie in ``arcs``, ∅ included."""
        found: list[Key] = [()]
        for first in arcs:
            for b in self._by_first.get(first, ()):
                if all(a in arcs for a in b[1:]):
                    found.append(b)
        return found

    def instance_entries(self, arc: Arc, sub: Dag) -> dict[Key, Rational]:
        """Costs of the order-(d-1) instance on ``sub`` attached to ``arc``.

        eval of the result on an s-u path P equals f(P·N_u) - f(P·a·N_v).
        """
        pu = self.dag.position[arc.tail]
        pv = self.dag.position[arc.head]
        wide = self.d
        out: dict[Key, Rational] = {}
        for b in self.rows_within(sub.arc_ids):
            row = self.rows[b]
            ba = _with_arc(b, arc.id)
            if len(ba) == wide:
                through_a = self.entries.get(ba, 0)
            else:
                nxt = self.rows.get(ba)
                through_a = nxt[pv] if nxt is not None else 0
            val = row[pu] - row[pv] - through_a
            if val:
                out[b] = val
        return out

    def source_arc_cost(self, arc: Arc) -> Rational:
        """f(a·N_v) for an arc a = (s, v)."""
        return self.value((), arc.head) + self.value((arc.id,), arc.head)


def compute_gamma(q: OrderDCost, ns: NonbasicSystem, dag: Dag | None = None) -> GammaTable:
    if dag is not None and dag is not ns.dag:
        raise ValueError("nonbasic system belongs to a different graph")
    return GammaTable(q.entries, q.d, ns)


def corresponding_apec_instance(
    a: int, q: OrderDCost, ns: NonbasicSystem, dag: Dag, gamma: GammaTable
) -> ApecInstance:
    """Order d-1 instance on the s-u prefix graph for strongly basic a = (u, v)."""
    if not ns.is_strongly_basic(a):
        raise NotStronglyBasic(a)
    arc = dag.arc(a)
    sub = restrict_to_prefix_subgraph(dag, arc.tail)
    entries = gamma.instance_entries(arc, sub)
    return ApecInstance(sub, OrderDCost(q.d - 1, entries, sub.arc_ids))


def source_beta(dag: Dag, beta: Rational) -> LinearCost:
    return LinearCost({a.id: beta for a in dag.source_arcs()}, dag.arc_ids)


def _walk_to_sink(dag: Dag, v: int) -> Path:
    path = Path.trivial(v)
    while path.end != dag.sink:
        path = path.then_arc(dag.out_arcs(path.end)[0])
    return path


def apec1(dag: Dag, entries: Entries) -> ApecVerdict:
    """Order-1 check along the smallest-in-arc out-tree; numbers are kept as given."""
    y: dict[int, Rational] = {dag.source: 0}
    for w in dag.vertices:
        if w == dag.source:
            continue
        arc = dag.in_arcs(w)[0]
        y[w] = y[arc.tail] + entries.get((arc.id,), 0)

    for arc in dag.arcs:
        if y[arc.head] != y[arc.tail] + entries.get((arc.id,), 0):
            rest = _walk_to_sink(dag, arc.head)
            witness = (
                dag.tree_path(arc.head).then(rest),
                dag.tree_path(arc.tail).then_arc(arc).then(rest),
            )
            return ApecVerdict(False, witness=witness)
    return ApecVerdict(True, beta=y[dag.sink] + entries.get((), 0))


def solve_apec1(inst: ApecInstance) -> ApecVerdict:
    if inst.q.max_key_size > 1:
        key = max(inst.q.entries, key=len)
        raise OrderMismatch(key, 1)
    verdict = apec1(inst.dag, inst.q.entries)
    if verdict.all_equal:
        return ApecVerdict(True, beta=Fraction(verdict.beta or 0))
    return verdict


def solve_apec(inst: ApecInstance, jobs: int = 1) -> ApecVerdict:
    """Decide whether every path of the instance has the same cost."""
    from linspp.linearizer import Linearizer

    if inst.q.max_key_size > inst.d:
        key = max(inst.q.entries, key=len)
        raise OrderMismatch(key, inst.d)
    if inst.d == 1:
        return solve_apec1(inst)

    scale = common_denominator(inst.q.entries.values())
    entries = {k: int(v * scale) for k, v in inst.q.entries.items()}
    verdict = Linearizer(jobs=jobs).solve_apec_entries(inst.dag, entries, inst.d)
    if verdict.all_equal:
        return ApecVerdict(True, beta=Fraction(verdict.beta or 0, scale))
    return verdict


def tree_witness(dag: Dag, arc: Arc, ns: NonbasicSystem) -> tuple[Path, Path]:
    """T_u·a·N_v against T_u·N_u for an arc a = (u, v)."""
    base = dag.tree_path(arc.tail)
    return base.then_arc(arc).then(ns.path(arc.head)), base.then(ns.path(arc.tail))
