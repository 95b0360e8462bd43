"""Decide linearizability of order-d path costs on acyclic digraphs.

For every strongly basic arc a = (u, v) the question "does the value of a
depend on the s-u path?" is an all-paths-equal instance of order d - 1 on the
s-u prefix graph. Order 1 instances are settled by a single pass over the
out-tree; higher orders recurse through this module.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from linspp.apec import (
    ApecVerdict,
    GammaTable,
    apec1,
    corresponding_apec_instance,
    tree_witness,
)
from linspp.costs import (
    Key,
    LinearCost,
    OrderDCost,
    Rational,
    common_denominator,
    eval_linear,
    eval_order_d,
    potentials,
)
from linspp.errors import OrderMismatch, PropertyPiViolated, UnknownArc
from linspp.graph import (
    Arc,
    Dag,
    NonbasicSystem,
    Path,
    choose_nonbasic_system,
    iter_paths,
    restrict_to_prefix_subgraph,
)
from linspp.verdicts import FailureWitness, LinVerdict, TwoPathSystem

log = logging.getLogger(__name__)

Entries = Mapping[Key, Rational]


@dataclass(frozen=True)
class _Outcome:
    cost: dict[int, Rational] | None = None
    witness: FailureWitness | None = None


def _eval_entries(entries: Entries, path: Path) -> Rational:
    on_path = set(path.arcs)
    return sum((v for k, v in entries.items() if on_path.issuperset(k)), start=0)


class Linearizer:
    """Recursive decision procedure with per-graph caches.

    Prefix graphs are memoized on the graph they were cut from and nonbasic
    systems per prefix sink, so arcs sharing a tail reuse both.
    """

    def __init__(self, jobs: int = 1) -> None:
        self.jobs = jobs
        self._systems: dict[tuple[int, int], NonbasicSystem] = {}

    def system(self, dag: Dag) -> NonbasicSystem:
        key = (id(dag._prefix_root), dag.sink)
        ns = self._systems.get(key)
        if ns is None or ns.dag is not dag:
            ns = choose_nonbasic_system(dag)
            self._systems[key] = ns
        return ns

    def linearize_entries(
        self, dag: Dag, ns: NonbasicSystem, entries: Entries, d: int, top: bool = False
    ) -> _Outcome:
        source = dag.source
        if d == 1:
            values: dict[int, Rational] = {}
            for a in dag.arcs:
                value = entries.get((a.id,), 0)
                if a.tail == source:
                    value += entries.get((), 0)
                values[a.id] = value
            phi = potentials(values, ns)
            return _Outcome({a.id: values[a.id] + phi[a.head] - phi[a.tail] for a in dag.arcs})

        gamma = GammaTable(entries, d, ns)
        arcs = ns.strongly_basic_arcs()
        log.debug("order %d on %r: %d strongly basic arcs", d, dag, len(arcs))

        def settle(arc: Arc) -> tuple[Arc, ApecVerdict]:
            sub = restrict_to_prefix_subgraph(dag, arc.tail)
            return arc, self.solve_apec_entries(sub, gamma.instance_entries(arc, sub), d - 1)

        cost: dict[int, Rational] = {}
        if top and self.jobs > 1 and len(arcs) > 1:
            pool = ThreadPoolExecutor(max_workers=self.jobs)
            try:
                outcome = self._collect(pool.map(settle, arcs), ns, cost)
            finally:
                pool.shutdown(wait=True, cancel_futures=True)
        else:
            outcome = self._collect(map(settle, arcs), ns, cost)
        if outcome is not None:
            return outcome

        for a in dag.source_arcs():
            cost[a.id] = gamma.source_arc_cost(a)
        for a in ns.arcs:
            cost[a] = 0
        return _Outcome(cost)

    def _collect(
        self,
        results: Iterable[tuple[Arc, ApecVerdict]],
        ns: NonbasicSystem,
        cost: dict[int, Rational],
    ) -> _Outcome | None:
        for arc, verdict in results:
            if not verdict.all_equal:
                assert verdict.witness is not None
                p, q = verdict.witness
                system = TwoPathSystem(
                    arc.tail,
                    p,
                    q,
                    ns.path(arc.tail),
                    Path(arc.tail, arc.head, (arc.id,)).then(ns.path(arc.head)),
                )
                log.info("arc %d: value depends on the path into vertex %d", arc.id, arc.tail)
                return _Outcome(witness=FailureWitness(arc.id, (p, q), system))
            cost[arc.id] = -(verdict.beta or 0)
        return None

    def solve_apec_entries(self, dag: Dag, entries: Entries, d: int) -> ApecVerdict:
        if d == 1:
            return apec1(dag, entries)

        ns = self.system(dag)
        outcome = self.linearize_entries(dag, ns, entries, d)
        if outcome.witness is not None:
            paths = outcome.witness.system.concatenations()
            costs = [_eval_entries(entries, p) for p in paths]
            for i, ci in enumerate(costs):
                for j in range(i + 1, len(costs)):
                    if costs[j] != ci:
                        return ApecVerdict(False, witness=(paths[i], paths[j]))
            raise AssertionError("failure witness does not separate any path pair")

        cost = outcome.cost or {}
        for arc in ns.strongly_basic_arcs():
            if cost.get(arc.id, 0):
                return ApecVerdict(False, witness=tree_witness(dag, arc, ns))

        first, *rest = dag.source_arcs()
        beta = cost.get(first.id, 0)
        for arc in rest:
            if cost.get(arc.id, 0) != beta:
                witness = (
                    Path(dag.source, first.head, (first.id,)).then(ns.path(first.head)),
                    Path(dag.source, arc.head, (arc.id,)).then(ns.path(arc.head)),
                )
                return ApecVerdict(False, witness=witness)
        return ApecVerdict(True, beta=beta)


def _check_cost(dag: Dag, q: OrderDCost) -> None:
    for key in q.entries:
        if len(key) > q.d:
            raise OrderMismatch(key, q.d)
        for arc in key:
            if not dag.has_arc(arc):
                raise UnknownArc(arc)


def linearize(
    dag: Dag, q: OrderDCost, ns: NonbasicSystem | None = None, jobs: int = 1
) -> LinVerdict:
    """Reduced-form linear cost with the same cost as ``q`` on every s-t path, if any."""
    _check_cost(dag, q)
    ns = ns or choose_nonbasic_system(dag)

    # integers in the inner loops, rescaled on the way out
    scale = common_denominator(q.entries.values())
    entries = {k: int(v * scale) for k, v in q.entries.items()}

    outcome = Linearizer(jobs=jobs).linearize_entries(dag, ns, entries, q.d, top=True)
    if outcome.witness is not None:
        return LinVerdict.no(outcome.witness)
    cost = outcome.cost or {}
    values = {arc: Fraction(v, scale) for arc, v in cost.items()}
    return LinVerdict.yes(LinearCost(values, dag.arc_ids))


def val_of_arc(
    a: int, q: OrderDCost, ns: NonbasicSystem, dag: Dag, gamma: GammaTable
) -> Fraction:
    """Common value f(P·a·N_v) - f(P·N_u) over all s-u paths P."""
    inst = corresponding_apec_instance(a, q, ns, dag, gamma)
    verdict = Linearizer().solve_apec_entries(inst.dag, inst.q.entries, inst.d)
    if not verdict.all_equal:
        raise PropertyPiViolated(a)
    return -Fraction(verdict.beta or 0)


def verify_linearization(dag: Dag, q: OrderDCost, c: LinearCost, limit: int) -> bool:
    """Compare both objectives on every s-t path."""
    for path in iter_paths(dag, limit=limit):
        if eval_linear(c, path) != eval_order_d(q, path):
            log.info("costs differ on path %s", path)
            return False
    return True
