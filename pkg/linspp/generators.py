"""Seeded instance generators.

A fixed spec (family, sizes, order, mode, seed) always produces the same
instance, hence the same canonical file bytes.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Literal

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from linspp.costs import Key, OrderDCost
from linspp.errors import UnsupportedParams
from linspp.graph import Dag, Path, build_dag, choose_nonbasic_system, prune_to_covered
from linspp.verdicts import TwoPathSystem

log = logging.getLogger(__name__)

Family = Literal["random-dag", "layered", "grid", "two-path", "double-diamond"]
Mode = Literal[
    "arbitrary", "linearizable", "non-linearizable", "sum-matrix", "product-matrix"
]

# below this many arcs, linearizable instances are drawn from the full subspace
SUBSPACE_SAMPLING_MAX_ARCS = 8


class GeneratorSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    family: Family = "random-dag"
    d: int = Field(default=2, ge=1)
    seed: int = 0
    mode: Mode = "arbitrary"

    # random-dag
    m: int = Field(default=10, ge=1)
    vertices: int | None = Field(default=None, ge=2)
    # layered
    layers: int = Field(default=3, ge=1)
    width: int = Field(default=2, ge=1)
    # grid
    rows: int = Field(default=3, ge=1)
    cols: int = Field(default=3, ge=1)
    # two-path
    length: int = Field(default=2, ge=1)

    max_numerator: int = Field(default=9, ge=0)
    max_denominator: int = Field(default=3, ge=1)
    density: float = Field(default=1.0, ge=0)


@dataclass(frozen=True)
class Generated:
    dag: Dag
    q: OrderDCost
    planted: TwoPathSystem | None = None


# Graph families


def random_dag(m: int, vertices: int | None, rng: random.Random) -> Dag:
    """A spine s -> 1 -> ... -> t plus random forward arcs; arc ids shuffled."""
    n = vertices if vertices is not None else max(2, m // 2 + 1)
    if m < n - 1:
        raise UnsupportedParams(f"random-dag needs m >= vertices - 1 ({m} < {n - 1})")
    pairs = [(i, i + 1) for i in range(n - 1)]
    while len(pairs) < m:
        i = rng.randrange(n - 1)
        j = rng.randrange(i + 1, n)
        pairs.append((i, j))
    rng.shuffle(pairs)
    return build_dag(n, pairs, 0, n - 1)


def layered(layers: int, width: int) -> Dag:
    """Source, ``layers`` layers of ``width`` vertices, sink; consecutive layers fully joined."""
    n = layers * width + 2
    sink = n - 1

    def at(layer: int, k: int) -> int:
        return 1 + layer * width + k

    pairs = [(0, at(0, k)) for k in range(width)]
    for layer in range(layers - 1):
        for i in range(width):
            for j in range(width):
                pairs.append((at(layer, i), at(layer + 1, j)))
    pairs += [(at(layers - 1, k), sink) for k in range(width)]
    return build_dag(n, pairs, 0, sink)


def grid(rows: int, cols: int) -> Dag:
    """Directed grid, arcs go right and down, corner to corner."""
    if rows * cols < 2:
        raise UnsupportedParams("grid needs at least two cells")

    def at(r: int, c: int) -> int:
        return r * cols + c

    pairs = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                pairs.append((at(r, c), at(r, c + 1)))
            if r + 1 < rows:
                pairs.append((at(r, c), at(r + 1, c)))
    return build_dag(rows * cols, pairs, 0, at(rows - 1, cols - 1))


def two_path(length: int) -> Dag:
    """Two internally disjoint s-t paths with ``length`` arcs each."""
    inner = length - 1
    n = 2 + 2 * inner
    sink = n - 1
    pairs = []
    for branch in range(2):
        chain = [0, *(1 + branch * inner + k for k in range(inner)), sink]
        pairs += list(zip(chain, chain[1:], strict=False))
    return build_dag(n, pairs, 0, sink)


def double_diamond() -> Dag:
    """s -> {x1, x2} -> u -> {y1, y2} -> t.

    Arc ids: 1 (s,x1), 2 (s,x2), 3 (x1,u), 4 (x2,u), 5 (u,y2), 6 (u,y1),
    7 (y1,t), 8 (y2,t).
    """
    names = ["s", "x1", "x2", "u", "y1", "y2", "t"]
    pairs = [
        ("s", "x1"),
        ("s", "x2"),
        ("x1", "u"),
        ("x2", "u"),
        ("u", "y2"),
        ("u", "y1"),
        ("y1", "t"),
        ("y2", "t"),
    ]
    return build_dag(names, pairs, "s", "t")


def build_family(spec: GeneratorSpec, rng: random.Random) -> Dag:
    if spec.family == "random-dag":
        dag = random_dag(spec.m, spec.vertices, rng)
    elif spec.family == "layered":
        dag = layered(spec.layers, spec.width)
    elif spec.family == "grid":
        dag = grid(spec.rows, spec.cols)
    elif spec.family == "two-path":
        dag = two_path(spec.length)
    else:
        dag = double_diamond()
    return prune_to_covered(dag)


# Cost functions


def _value(spec: GeneratorSpec, rng: random.Random) -> Fraction:
    num = rng.randint(-spec.max_numerator, spec.max_numerator)
    return Fraction(num, rng.randint(1, spec.max_denominator))


def _random_walk(dag: Dag, rng: random.Random) -> list[int]:
    v, arcs = dag.source, []
    while v != dag.sink:
        arc = rng.choice(dag.out_arcs(v))
        arcs.append(arc.id)
        v = arc.head
    return arcs


def _key_budget(spec: GeneratorSpec, dag: Dag, k: int) -> int:
    return min(comb(dag.m, k), max(1, round(spec.density * dag.m)))


def arbitrary_costs(spec: GeneratorSpec, dag: Dag, rng: random.Random) -> dict[Key, Fraction]:
    """Random singletons plus higher-order keys, half of them drawn along random paths."""
    ids = sorted(dag.arc_ids)
    entries: dict[Key, Fraction] = {}
    if rng.random() < 0.5:
        entries[()] = _value(spec, rng)
    for a in ids:
        if rng.random() < 0.5:
            entries[(a,)] = _value(spec, rng)
    for k in range(2, spec.d + 1):
        for i in range(_key_budget(spec, dag, k)):
            if i % 2 == 0:
                walk = _random_walk(dag, rng)
                if len(walk) < k:
                    continue
                key = tuple(sorted(rng.sample(walk, k)))
            else:
                key = tuple(sorted(rng.sample(ids, k)))
            entries[key] = _value(spec, rng)
    return entries


def _co_occurring(dag: Dag) -> dict[int, set[int]]:
    reach = {v: nx.descendants(dag.graph, v) | {v} for v in dag.vertices}
    return {a.id: reach[a.head] for a in dag.arcs}


def dead_keys(spec: GeneratorSpec, dag: Dag, rng: random.Random) -> dict[Key, Fraction]:
    """Keys holding two arcs that share no s-t path; they never contribute."""
    if spec.d < 2 or dag.m < 2:
        return {}
    reach = _co_occurring(dag)
    arcs = list(dag.arcs)
    entries: dict[Key, Fraction] = {}
    for _ in range(_key_budget(spec, dag, 2) * 4):
        if len(entries) >= _key_budget(spec, dag, 2):
            break
        a, b = rng.sample(arcs, 2)
        if b.tail in reach[a.id] or a.tail in reach[b.id]:
            continue
        extra = rng.sample(
            [x for x in sorted(dag.arc_ids) if x not in (a.id, b.id)],
            min(rng.randint(0, spec.d - 2), dag.m - 2),
        )
        entries[tuple(sorted((a.id, b.id, *extra)))] = _value(spec, rng)
    return entries


def linearizable_costs(spec: GeneratorSpec, dag: Dag, rng: random.Random) -> dict[Key, Fraction]:
    if spec.d >= 2 and dag.m <= SUBSPACE_SAMPLING_MAX_ARCS:
        from linspp.subspace import linearizable_subspace

        basis = linearizable_subspace(dag, spec.d)
        coefficients = [_value(spec, rng) for _ in basis.vectors]
        vec = basis.combination(coefficients)
        return {k: v for k, v in zip(vec.index, vec.values, strict=True) if v}

    entries: dict[Key, Fraction] = {(): _value(spec, rng)}
    for a in sorted(dag.arc_ids):
        entries[(a,)] = _value(spec, rng)
    entries.update(dead_keys(spec, dag, rng))
    return entries


def _path_lengths(dag: Dag) -> set[int]:
    lengths: dict[int, set[int]] = {dag.source: {0}}
    for v in dag.vertices:
        for arc in dag.out_arcs(v):
            lengths.setdefault(arc.head, set()).update(x + 1 for x in lengths.get(v, ()))
    return lengths[dag.sink]


def sum_matrix_costs(spec: GeneratorSpec, dag: Dag, rng: random.Random) -> dict[Key, Fraction]:
    """q({a, b}) = w(a) + w(b); linearizable when every s-t path has the same length."""
    if spec.d != 2:
        raise UnsupportedParams("sum-matrix mode needs d = 2")
    if len(_path_lengths(dag)) != 1:
        raise UnsupportedParams(f"{spec.family}: s-t paths differ in length")
    ids = sorted(dag.arc_ids)
    w = {a: _value(spec, rng) for a in ids}
    return {(a, b): w[a] + w[b] for a, b in combinations(ids, 2) if w[a] + w[b]}


def product_matrix_costs(
    spec: GeneratorSpec, dag: Dag, rng: random.Random
) -> dict[Key, Fraction]:
    """Symmetric product matrix w w^T with w >= 0, so a path costs (sum of w on it) ** 2."""
    if spec.d != 2:
        raise UnsupportedParams("product-matrix mode needs d = 2")
    ids = sorted(dag.arc_ids)
    w = {a: abs(_value(spec, rng)) for a in ids}
    entries: dict[Key, Fraction] = {(a,): w[a] ** 2 for a in ids if w[a]}
    entries.update({(a, b): 2 * w[a] * w[b] for a, b in combinations(ids, 2) if w[a] * w[b]})
    return entries


def plant_violation(
    dag: Dag, entries: dict[Key, Fraction], rng: random.Random
) -> TwoPathSystem:
    """Add 1 to q({b, a}) for a strongly basic a = (u, v) and an in-arc b of u.

    Paths into u through b gain 1 in the value of a, the others do not.
    """
    ns = choose_nonbasic_system(dag)
    candidates = [a for a in ns.strongly_basic_arcs() if len(dag.in_arcs(a.tail)) >= 2]
    if not candidates:
        raise UnsupportedParams("no strongly basic arc leaves a vertex with two in-arcs")
    arc = rng.choice(candidates)
    b, other = dag.in_arcs(arc.tail)[:2]
    key = tuple(sorted((b.id, arc.id)))
    entries[key] = entries.get(key, Fraction(0)) + 1
    if not entries[key]:
        del entries[key]

    through_b = dag.tree_path(b.tail).then_arc(b)
    through_other = dag.tree_path(other.tail).then_arc(other)
    through_a = Path(arc.tail, arc.head, (arc.id,)).then(ns.path(arc.head))
    return TwoPathSystem(arc.tail, through_b, through_other, ns.path(arc.tail), through_a)


def generate_with_plant(spec: GeneratorSpec) -> Generated:
    rng = random.Random(spec.seed)
    dag = build_family(spec, rng)
    planted = None

    if spec.mode == "arbitrary":
        entries = arbitrary_costs(spec, dag, rng)
    elif spec.mode == "linearizable":
        entries = linearizable_costs(spec, dag, rng)
    elif spec.mode == "sum-matrix":
        entries = sum_matrix_costs(spec, dag, rng)
    elif spec.mode == "product-matrix":
        entries = product_matrix_costs(spec, dag, rng)
    else:
        if spec.d < 2:
            raise UnsupportedParams("every order-1 instance is linearizable")
        entries = {} if spec.family == "double-diamond" else linearizable_costs(spec, dag, rng)
        planted = plant_violation(dag, entries, rng)

    q = OrderDCost(spec.d, entries, dag.arc_ids)
    log.debug("generated %s/%s: m=%d, %d cost keys", spec.family, spec.mode, dag.m, len(q))
    return Generated(dag, q, planted)


def generate(spec: GeneratorSpec) -> tuple[Dag, OrderDCost]:
    result = generate_with_plant(spec)
    return result.dag, result.q
