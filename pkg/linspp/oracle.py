"""Brute-force deciders used as ground truth for the linearizer.

Everything here enumerates paths, so it only scales to small graphs. The
objective may be an ``OrderDCost`` or any function on s-t paths.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from fractions import Fraction
from math import comb

from linspp.costs import LinearCost, OrderDCost, Rational, eval_linear, eval_order_d, reduce_form
from linspp.errors import NotLinearizable, TooManySystems
from linspp.graph import (
    Dag,
    NonbasicSystem,
    Path,
    choose_nonbasic_system,
    count_paths,
    enumerate_paths,
    iter_paths,
    topological_arc_order,
)
from linspp.linalg import dependencies, solve
from linspp.verdicts import FailureWitness, InfeasibilityCertificate, LinVerdict, TwoPathSystem

log = logging.getLogger(__name__)

PathCost = Callable[[Path], Rational]


def as_objective(q: OrderDCost | PathCost) -> PathCost:
    if isinstance(q, OrderDCost):
        return lambda p: eval_order_d(q, p)
    return q


def two_path_linearizable(tps: TwoPathSystem, q: OrderDCost | PathCost) -> bool:
    """f(P1Q1) + f(P2Q2) == f(P1Q2) + f(P2Q1)."""
    f = as_objective(q)
    p11, p22, p12, p21 = tps.concatenations()
    return f(p11) + f(p22) == f(p12) + f(p21)


def count_two_path_systems(dag: Dag) -> int:
    total = 0
    for v in dag.vertices:
        into = count_paths(dag, dag.source, v)
        out = count_paths(dag, v, dag.sink)
        total += comb(into + 1, 2) * comb(out + 1, 2)
    return total


def enumerate_two_path_systems(dag: Dag, limit: int) -> Iterator[TwoPathSystem]:
    """Every (v, P1, P2, Q1, Q2) with P1 <= P2 and Q1 <= Q2 lexicographically."""
    if count_two_path_systems(dag) > limit:
        raise TooManySystems(limit)
    for v in dag.vertices:
        heads = list(iter_paths(dag, dag.source, v))
        tails = list(iter_paths(dag, v, dag.sink))
        for i, p1 in enumerate(heads):
            for p2 in heads[i:]:
                for j, q1 in enumerate(tails):
                    for q2 in tails[j:]:
                        yield TwoPathSystem(v, p1, p2, q1, q2)


def find_violated_system(
    dag: Dag, q: OrderDCost | PathCost, limit: int
) -> TwoPathSystem | None:
    f = as_objective(q)
    cache: dict[Path, Rational] = {}

    def cost(p: Path) -> Rational:
        if p not in cache:
            cache[p] = f(p)
        return cache[p]

    for tps in enumerate_two_path_systems(dag, limit):
        if tps.degenerate:
            continue
        p11, p22, p12, p21 = tps.concatenations()
        if cost(p11) + cost(p22) != cost(p12) + cost(p21):
            return tps
    return None


def oracle_linearize_tps(dag: Dag, q: OrderDCost | PathCost, limit: int) -> bool:
    violated = find_violated_system(dag, q, limit)
    if violated is not None:
        log.debug("two-path system at vertex %d is unbalanced", violated.v)
    return violated is None


def oracle_linearize_lp(
    dag: Dag, q: OrderDCost | PathCost, limit: int, ns: NonbasicSystem | None = None
) -> LinVerdict:
    """Solve sum_{a in P} c(a) = f(P) over all s-t paths by exact elimination."""
    f = as_objective(q)
    paths = enumerate_paths(dag, limit)
    column = {a.id: i for i, a in enumerate(dag.arcs)}
    rows: list[list[Rational]] = []
    for p in paths:
        row: list[Rational] = [0] * dag.m
        for arc in p.arcs:
            row[column[arc]] = 1
        rows.append(row)
    rhs = [Fraction(f(p)) for p in paths]

    basis, combos = dependencies(rows, dag.m)
    for j, coeffs in combos.items():
        combined = sum((c * rhs[b] for c, b in zip(coeffs, basis, strict=True)), Fraction(0))
        residual = rhs[j] - combined
        if residual:
            weights = {paths[j]: Fraction(1)}
            for c, b in zip(coeffs, basis, strict=True):
                if c:
                    weights[paths[b]] = -c
            return LinVerdict.no(certificate=InfeasibilityCertificate(weights, residual))

    x = solve([rows[b] for b in basis], [rhs[b] for b in basis], dag.m)
    if x is None:
        raise AssertionError("independent path rows turned out inconsistent")
    c = LinearCost({a.id: x[column[a.id]] for a in dag.arcs}, dag.arc_ids)
    return LinVerdict.yes(reduce_form(c, ns or choose_nonbasic_system(dag), dag))


def _representative(segment: Path, others: tuple[Path, ...]) -> int:
    used = {a for p in others for a in p.arcs}
    for arc in segment.arcs:
        if arc not in used:
            return arc
    raise NotLinearizable(f"segment {segment} has no arc of its own")


def two_path_linearizing_cost(tps: TwoPathSystem, q: OrderDCost | PathCost) -> LinearCost:
    """Cost on at most four representative arcs matching f on all concatenations."""
    if not two_path_linearizable(tps, q):
        raise NotLinearizable("two-path system is unbalanced")
    f = as_objective(q)
    p1, p2, q1, q2 = tps.p1, tps.p2, tps.q1, tps.q2

    if p1 == p2 and q1 == q2:
        whole = p1.then(q1)
        return LinearCost({whole.arcs[0]: f(whole)} if whole.arcs else {})
    if q1 == q2:
        return LinearCost(
            {
                _representative(p1, (p2, q1)): f(p1.then(q1)),
                _representative(p2, (p1, q1)): f(p2.then(q1)),
            }
        )
    if p1 == p2:
        return LinearCost(
            {
                _representative(q1, (p1, q2)): f(p1.then(q1)),
                _representative(q2, (p1, q1)): f(p1.then(q2)),
            }
        )

    a1 = _representative(p1, (p2, q1, q2))
    a2 = _representative(p2, (p1, q1, q2))
    e1 = _representative(q1, (p1, p2, q2))
    f12 = f(p1.then(q2))
    return LinearCost(
        {
            a1: f12,
            a2: f(p2.then(q2)),
            e1: f(p1.then(q1)) - f12,
        }
    )


def arc_value(dag: Dag, q: OrderDCost | PathCost, ns: NonbasicSystem, a: int, p: Path) -> Rational:
    """f(P·a·N_v) - f(P·N_u) for an s-u path P and arc a = (u, v)."""
    f = as_objective(q)
    arc = dag.arc(a)
    return f(p.then_arc(arc).then(ns.path(arc.head))) - f(p.then(ns.path(arc.tail)))


def find_arc_witness(
    dag: Dag, q: OrderDCost | PathCost, ns: NonbasicSystem, limit: int
) -> FailureWitness | None:
    """First strongly basic arc whose value depends on the path into its tail."""
    for arc in ns.strongly_basic_arcs():
        seen: dict[Rational, Path] = {}
        for p in iter_paths(dag, dag.source, arc.tail, limit=limit):
            value = arc_value(dag, q, ns, arc.id, p)
            if seen and value not in seen:
                first = next(iter(seen.values()))
                n_u = ns.path(arc.tail)
                through = Path(arc.tail, arc.head, (arc.id,)).then(ns.path(arc.head))
                tps = TwoPathSystem(arc.tail, first, p, n_u, through)
                return FailureWitness(arc.id, (first, p), tps)
            seen.setdefault(value, p)
    return None


def oracle_linearize_generic(
    dag: Dag, q: OrderDCost | PathCost, limit: int, ns: NonbasicSystem | None = None
) -> LinVerdict:
    """Arc-by-arc construction along a topological arc order, then full verification.

    Works for any path cost function, not only order-d interaction costs.
    """
    f = as_objective(q)
    ns = ns or choose_nonbasic_system(dag)
    values: dict[int, Rational] = {}
    for a in topological_arc_order(dag):
        if ns.is_nonbasic(a):
            values[a] = 0
            continue
        arc = dag.arc(a)
        into = dag.tree_path(arc.tail)
        values[a] = f(into.then_arc(arc).then(ns.path(arc.head))) - sum(
            (values[b] for b in into.arcs), Fraction(0)
        )
    c = LinearCost(values, dag.arc_ids)

    for p in iter_paths(dag, limit=limit):
        if eval_linear(c, p) != f(p):
            return LinVerdict.no(find_arc_witness(dag, f, ns, limit))
    return LinVerdict.yes(c)
