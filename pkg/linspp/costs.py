"""Linear and order-d arc cost functions with exact rational values."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import TypeAlias

from linspp.errors import CostError, OrderMismatch, UnknownArc
from linspp.graph import Dag, NonbasicSystem, Path

Rational: TypeAlias = Fraction | int
Key: TypeAlias = tuple[int, ...]

ZERO = Fraction(0)


def parse_rational(text: str) -> Fraction:
    """Read ``p`` or ``p/q``; raises ValueError on anything else."""
    num, sep, den = text.partition("/")
    if not num.lstrip("+-").isdigit() or (sep and not den.isdigit()):
        raise ValueError(f"not a rational number: {text!r}")
    value = Fraction(int(num), int(den) if sep else 1)
    return value


def format_rational(value: Rational) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def canonical_key(arcs: Iterable[int]) -> Key:
    key = tuple(sorted(arcs))
    if len(set(key)) != len(key):
        raise CostError(f"cost key {key} repeats an arc")
    return key


def common_denominator(values: Iterable[Rational]) -> int:
    return math.lcm(1, *(Fraction(v).denominator for v in values))


class LinearCost:
    """Map arc id -> value; absent arcs cost 0."""

    def __init__(
        self, values: Mapping[int, Rational] | None = None, arcs: Iterable[int] | None = None
    ) -> None:
        self.arcs = frozenset(arcs) if arcs is not None else None
        self.values: dict[int, Fraction] = {}
        for arc, value in (values or {}).items():
            self._check(arc)
            if value:
                self.values[arc] = Fraction(value)

    def _check(self, arc: int) -> None:
        if self.arcs is not None and arc not in self.arcs:
            raise UnknownArc(arc)

    @classmethod
    def zero(cls, dag: Dag) -> LinearCost:
        return cls({}, dag.arc_ids)

    def __getitem__(self, arc: int) -> Fraction:
        self._check(arc)
        return self.values.get(arc, ZERO)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self.values.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearCost):
            return NotImplemented
        return self.values == other.values

    def __hash__(self) -> int:
        return hash(frozenset(self.values.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}: {format_rational(v)}" for a, v in self.items())
        return f"LinearCost({{{body}}})"

    def __add__(self, other: LinearCost) -> LinearCost:
        merged = dict(self.values)
        for arc, value in other.values.items():
            merged[arc] = merged.get(arc, ZERO) + value
        return LinearCost(merged, self.arcs)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.values.values())


class OrderDCost:
    """Sparse order-d interaction costs keyed by sorted arc id tuples.

    The empty tuple holds q(∅). Zero entries are not stored.
    """

    def __init__(
        self,
        d: int,
        entries: Mapping[Iterable[int], Rational] | None = None,
        arcs: Iterable[int] | None = None,
    ) -> None:
        if d < 1:
            raise CostError(f"order must be at least 1, got {d}")
        self.d = d
        self.arcs = frozenset(arcs) if arcs is not None else None
        self.entries: dict[Key, Fraction] = {}
        for raw, value in (entries or {}).items():
            key = canonical_key(raw)
            self._check(key)
            if value:
                self.entries[key] = self.entries.get(key, ZERO) + Fraction(value)
        self.entries = {k: v for k, v in self.entries.items() if v}

    def _check(self, key: Key) -> None:
        if len(key) > self.d:
            raise OrderMismatch(key, self.d)
        if self.arcs is not None:
            for arc in key:
                if arc not in self.arcs:
                    raise UnknownArc(arc)

    @classmethod
    def zero(cls, d: int, dag: Dag | None = None) -> OrderDCost:
        return cls(d, {}, dag.arc_ids if dag is not None else None)

    def __getitem__(self, arcs: Iterable[int]) -> Fraction:
        return self.entries.get(canonical_key(arcs), ZERO)

    def __len__(self) -> int:
        return len(self.entries)

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(sorted(self.entries.items(), key=lambda kv: (len(kv[0]), kv[0])))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrderDCost):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(frozenset(self.entries.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {format_rational(v)}" for k, v in self.items())
        return f"OrderDCost(d={self.d}, {{{body}}})"

    def __add__(self, other: OrderDCost) -> OrderDCost:
        merged: dict[Key, Fraction] = dict(self.entries)
        for key, value in other.entries.items():
            merged[key] = merged.get(key, ZERO) + value
        return OrderDCost(max(self.d, other.d), merged, self.arcs)

    def scaled(self, factor: Rational) -> OrderDCost:
        return OrderDCost(self.d, {k: v * factor for k, v in self.entries.items()}, self.arcs)

    @property
    def max_key_size(self) -> int:
        return max((len(k) for k in self.entries), default=0)

    def restricted_to(self, arcs: Iterable[int]) -> tuple[OrderDCost, list[Key]]:
        """Drop keys touching arcs outside ``arcs``; returns the dropped keys too."""
        keep = frozenset(arcs)
        kept = {k: v for k, v in self.entries.items() if keep.issuperset(k)}
        dropped = sorted(k for k in self.entries if k not in kept)
        return OrderDCost(self.d, kept, keep), dropped


def eval_linear(c: LinearCost, p: Path) -> Fraction:
    total = ZERO
    for arc in p.arcs:
        total += c[arc]
    return total


def eval_order_d(q: OrderDCost, p: Path) -> Fraction:
    """Sum of q(S) over all subsets S of the path's arcs, ∅ included."""
    on_path = set(p.arcs)
    if q.arcs is not None:
        for arc in on_path:
            if arc not in q.arcs:
                raise UnknownArc(arc)
    total = ZERO
    for key, value in q.entries.items():
        if on_path.issuperset(key):
            total += value
    return total


def potentials(values: Mapping[int, Rational], ns: NonbasicSystem) -> dict[int, Rational]:
    """phi(v) = cost of the nonbasic path N_v, phi(s) = phi(t) = 0."""
    dag = ns.dag
    phi: dict[int, Rational] = {dag.source: 0, dag.sink: 0}
    for v in reversed(dag.vertices):
        if v in phi:
            continue
        arc = dag.arc(ns.nonbasic_of[v])
        phi[v] = values.get(arc.id, 0) + phi[arc.head]
    return phi


def reduce_form(c: LinearCost, ns: NonbasicSystem, dag: Dag | None = None) -> LinearCost:
    """Equivalent cost function that vanishes on every nonbasic arc."""
    dag = dag or ns.dag
    phi = potentials(c.values, ns)
    reduced = {a.id: c.values.get(a.id, ZERO) + phi[a.head] - phi[a.tail] for a in dag.arcs}
    return LinearCost(reduced, c.arcs if c.arcs is not None else dag.arc_ids)


def linear_as_order_d(c: LinearCost, d: int) -> OrderDCost:
    return OrderDCost(d, {(arc,): value for arc, value in c.values.items()}, c.arcs)
