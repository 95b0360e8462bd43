"""The subspace of linearizable order-d instances on a fixed graph.

An instance is a vector indexed by all arc subsets of size <= d. Running the
linearizer without early exit produces a list of residuals that all vanish
exactly on linearizable instances, and every residual is linear in the
instance. Applying that pipeline to the unit vectors gives the columns of a
matrix whose kernel is the subspace.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from linspp.apec import GammaTable
from linspp.costs import Key, OrderDCost, Rational, potentials
from linspp.errors import DimensionMismatch
from linspp.graph import (
    Dag,
    NonbasicSystem,
    choose_nonbasic_system,
    restrict_to_prefix_subgraph,
)
from linspp.linalg import mat_vec, nullspace, rank, solve
from linspp.linearizer import Linearizer

log = logging.getLogger(__name__)

Entries = Mapping[Key, Rational]


def subset_index(dag: Dag, d: int) -> tuple[Key, ...]:
    """All arc subsets of size <= d, ∅ first, in lexicographic order."""
    ids = sorted(dag.arc_ids)
    keys = [key for k in range(d + 1) for key in combinations(ids, k)]
    return tuple(sorted(keys))


@dataclass(frozen=True)
class CostVector:
    index: tuple[Key, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.index) != len(self.values):
            raise DimensionMismatch(len(self.index), len(self.values))

    @classmethod
    def from_cost(cls, q: OrderDCost, index: tuple[Key, ...]) -> CostVector:
        position = {k: i for i, k in enumerate(index)}
        values = [Fraction(0)] * len(index)
        for key, value in q.entries.items():
            if key not in position:
                raise DimensionMismatch(len(index), len(index) + 1)
            values[position[key]] = value
        return cls(index, tuple(values))

    def to_cost(self, d: int, arcs: frozenset[int] | None = None) -> OrderDCost:
        return OrderDCost(d, dict(zip(self.index, self.values, strict=True)), arcs)

    def __len__(self) -> int:
        return len(self.values)

    def dot(self, other: CostVector) -> Fraction:
        self._same_index(other)
        return sum((a * b for a, b in zip(self.values, other.values, strict=True)), Fraction(0))

    def _same_index(self, other: CostVector) -> None:
        if self.index != other.index:
            raise DimensionMismatch(len(self.index), len(other.index))

    def __add__(self, other: CostVector) -> CostVector:
        self._same_index(other)
        summed = tuple(a + b for a, b in zip(self.values, other.values, strict=True))
        return CostVector(self.index, summed)

    def scaled(self, factor: Rational) -> CostVector:
        return CostVector(self.index, tuple(v * factor for v in self.values))

    def is_zero(self) -> bool:
        return not any(self.values)


@dataclass(frozen=True)
class LinearMapMatrix:
    columns: tuple[Key, ...]
    rows: list[list[Fraction]] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def apply(self, x: CostVector) -> list[Fraction]:
        if x.index != self.columns:
            raise DimensionMismatch(len(self.columns), len(x.index))
        return mat_vec(self.rows, x.values)

    @cached_property
    def rank(self) -> int:
        return rank(self.rows, len(self.columns))


@dataclass(frozen=True)
class Basis:
    index: tuple[Key, ...]
    vectors: list[CostVector]
    d: int = 2

    def __len__(self) -> int:
        return len(self.vectors)

    def combination(self, coefficients: Sequence[Rational]) -> CostVector:
        if len(coefficients) != len(self.vectors):
            raise DimensionMismatch(len(self.vectors), len(coefficients))
        values = [Fraction(0)] * len(self.index)
        for lam, vec in zip(coefficients, self.vectors, strict=True):
            if lam:
                for i, v in enumerate(vec.values):
                    if v:
                        values[i] += lam * v
        return CostVector(self.index, tuple(values))


class _ResidualPipeline(Linearizer):
    """Linearizer run that records every residual instead of stopping early."""

    def lin_residuals(
        self, dag: Dag, ns: NonbasicSystem, entries: Entries, d: int, out: list[Rational]
    ) -> dict[int, Rational]:
        if d == 1:
            values: dict[int, Rational] = {}
            for a in dag.arcs:
                value = entries.get((a.id,), 0)
                if a.tail == dag.source:
                    value += entries.get((), 0)
                values[a.id] = value
            phi = potentials(values, ns)
            return {a.id: values[a.id] + phi[a.head] - phi[a.tail] for a in dag.arcs}

        gamma = GammaTable(entries, d, ns)
        cost: dict[int, Rational] = {}
        for arc in ns.strongly_basic_arcs():
            sub = restrict_to_prefix_subgraph(dag, arc.tail)
            cost[arc.id] = -self.apec_residuals(sub, gamma.instance_entries(arc, sub), d - 1, out)
        for arc in dag.source_arcs():
            cost[arc.id] = gamma.source_arc_cost(arc)
        return cost

    def apec_residuals(self, dag: Dag, entries: Entries, d: int, out: list[Rational]) -> Rational:
        if d == 1:
            y: dict[int, Rational] = {dag.source: 0}
            for w in dag.vertices:
                if w != dag.source:
                    arc = dag.in_arcs(w)[0]
                    y[w] = y[arc.tail] + entries.get((arc.id,), 0)
            for arc in dag.arcs:
                out.append(y[arc.head] - y[arc.tail] - entries.get((arc.id,), 0))
            return y[dag.sink] + entries.get((), 0)

        ns = self.system(dag)
        cost = self.lin_residuals(dag, ns, entries, d, out)
        first, *rest = dag.source_arcs()
        beta = cost[first.id]
        out.extend(cost[a.id] - beta for a in rest)
        out.extend(cost[a.id] for a in ns.strongly_basic_arcs())
        return beta


def residuals(dag: Dag, q: OrderDCost, ns: NonbasicSystem | None = None) -> list[Rational]:
    """Residual vector of one instance; all zero iff the instance is linearizable."""
    out: list[Rational] = []
    if q.d >= 2:
        pipeline = _ResidualPipeline()
        pipeline.lin_residuals(dag, ns or choose_nonbasic_system(dag), q.entries, q.d, out)
    return out


def assemble_matrix(
    dag: Dag, d: int, ns: NonbasicSystem | None = None, jobs: int = 1
) -> LinearMapMatrix:
    """Matrix whose column for subset F is the residual vector of the unit instance e_F."""
    index = subset_index(dag, d)
    if d < 2:
        return LinearMapMatrix(index, [])
    ns = ns or choose_nonbasic_system(dag)
    pipeline = _ResidualPipeline()

    def column(key: Key) -> list[Rational]:
        out: list[Rational] = []
        pipeline.lin_residuals(dag, ns, {key: 1}, d, out)
        return out

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            cols = list(pool.map(column, index))
    else:
        cols = [column(key) for key in index]

    k = len(cols[0])
    rows = [[Fraction(col[r]) for col in cols] for r in range(k)]
    log.info("assembled %d x %d residual matrix", k, len(index))
    return LinearMapMatrix(index, rows)


def compress_rows(matrix: LinearMapMatrix) -> LinearMapMatrix:
    """Drop zero rows and repeated rows; the kernel is unchanged."""
    seen = set()
    rows = []
    for row in matrix.rows:
        key = tuple(row)
        if not any(row) or key in seen:
            continue
        seen.add(key)
        rows.append(row)
    return LinearMapMatrix(matrix.columns, rows)


def kernel_basis(matrix: LinearMapMatrix, d: int | None = None) -> Basis:
    index = matrix.columns
    order = d if d is not None else max((len(k) for k in index), default=0)
    vectors = [CostVector(index, tuple(v)) for v in nullspace(matrix.rows, len(index))]
    return Basis(index, vectors, order)


def linearizable_subspace(
    dag: Dag, d: int, ns: NonbasicSystem | None = None, jobs: int = 1
) -> Basis:
    return kernel_basis(compress_rows(assemble_matrix(dag, d, ns, jobs)), d)


def project_onto_subspace(x: CostVector, basis: Basis) -> CostVector:
    """Orthogonal projection onto span(basis) under the standard inner product."""
    if x.index != basis.index:
        raise DimensionMismatch(len(basis.index), len(x.index))
    if not basis.vectors:
        return CostVector(x.index, tuple(Fraction(0) for _ in x.values))

    k = len(basis.vectors)
    gram = [[bi.dot(bj) for bj in basis.vectors] for bi in basis.vectors]
    rhs = [b.dot(x) for b in basis.vectors]
    coefficients = solve(gram, rhs, k)
    if coefficients is None:
        raise ArithmeticError("basis vectors are linearly dependent")
    return basis.combination(coefficients)
