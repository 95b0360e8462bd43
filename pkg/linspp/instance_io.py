"""Text formats for instances, linear cost files and subspace bases.

Instance files are line oriented, ``#`` starts a comment::

    p linspp <n> <m> <d>
    s <vertex>
    t <vertex>
    a <arc_id> <tail> <head>                # m lines, ids 1..m
    q <k> <arc_1> ... <arc_k> <value>       # 0 <= k <= d, unlisted subsets are 0

Vertices are numbered 1..n in files and 0..n-1 in memory.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Iterator
from fractions import Fraction
from pathlib import Path as FilePath

from linspp.costs import Key, LinearCost, OrderDCost, format_rational, parse_rational
from linspp.errors import ArcIdOutOfRange, DuplicateCostKey, ParseError
from linspp.graph import Arc, Dag, prune_to_covered
from linspp.subspace import Basis, CostVector

log = logging.getLogger(__name__)


def _records(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {token!r}") from None


def _rational(token: str, lineno: int) -> Fraction:
    try:
        return parse_rational(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(lineno, f"bad rational value {token!r}") from None


def parse_instance(text: str) -> tuple[Dag, OrderDCost]:
    """Parse instance text, prune to the covered part and drop costs on pruned arcs."""
    header: tuple[int, int, int] | None = None
    source = sink = None
    arcs: dict[int, Arc] = {}
    entries: dict[Key, Fraction] = {}

    for lineno, fields in _records(text):
        kind = fields[0]
        if kind == "p":
            if header is not None:
                raise ParseError(lineno, "second problem line")
            if len(fields) != 5 or fields[1] != "linspp":
                raise ParseError(lineno, "expected 'p linspp <n> <m> <d>'")
            n, m, d = (_int(tok, lineno, "header field") for tok in fields[2:])
            if n < 2 or m < 1 or d < 1:
                raise ParseError(lineno, "need n >= 2, m >= 1 and d >= 1")
            header = (n, m, d)
            continue
        if header is None:
            raise ParseError(lineno, "problem line must come first")
        n, m, d = header

        def vertex(token: str, lineno: int = lineno, n: int = n) -> int:
            v = _int(token, lineno, "vertex")
            if not 1 <= v <= n:
                raise ParseError(lineno, f"vertex {v} outside 1..{n}")
            return v - 1

        def arc_id(token: str, lineno: int = lineno, m: int = m) -> int:
            a = _int(token, lineno, "arc id")
            if not 1 <= a <= m:
                raise ArcIdOutOfRange(lineno, a, m)
            return a

        if kind in ("s", "t"):
            if len(fields) != 2:
                raise ParseError(lineno, f"expected '{kind} <vertex>'")
            if (source if kind == "s" else sink) is not None:
                raise ParseError(lineno, f"'{kind}' given twice")
            if kind == "s":
                source = vertex(fields[1])
            else:
                sink = vertex(fields[1])
        elif kind == "a":
            if len(fields) != 4:
                raise ParseError(lineno, "expected 'a <arc_id> <tail> <head>'")
            a = arc_id(fields[1])
            if a in arcs:
                raise ParseError(lineno, f"arc {a} defined twice")
            arcs[a] = Arc(a, vertex(fields[2]), vertex(fields[3]))
        elif kind == "q":
            if len(fields) < 3:
                raise ParseError(lineno, "expected 'q <k> <arcs...> <value>'")
            k = _int(fields[1], lineno, "subset size")
            if k < 0 or k > d:
                raise ParseError(lineno, f"subset size {k} outside 0..{d}")
            if len(fields) != k + 3:
                raise ParseError(lineno, f"expected {k} arc ids and a value")
            members = [arc_id(tok) for tok in fields[2 : 2 + k]]
            key = tuple(sorted(members))
            if len(set(key)) != k:
                raise ParseError(lineno, "cost key repeats an arc")
            if key in entries:
                raise DuplicateCostKey(lineno, key)
            entries[key] = _rational(fields[-1], lineno)
        else:
            raise ParseError(lineno, f"unknown record type {kind!r}")

    if header is None:
        raise ParseError(0, "missing problem line")
    n, m, d = header
    if source is None or sink is None:
        raise ParseError(0, "source and sink must both be declared")
    if len(arcs) != m:
        missing = sorted(set(range(1, m + 1)) - set(arcs))
        raise ParseError(0, f"header declares {m} arcs, missing ids {missing[:10]}")

    labels = [str(v) for v in range(1, n + 1)]
    dag = prune_to_covered(Dag(n, list(arcs.values()), source, sink, labels))
    q = OrderDCost(d, entries)
    q, dropped = q.restricted_to(dag.arc_ids)
    if dropped:
        log.warning("dropped %d cost entr%s on pruned arcs: %s", len(dropped),
                    "y" if len(dropped) == 1 else "ies", dropped)
    return dag, q


def read_instance(path: str | FilePath) -> tuple[Dag, OrderDCost]:
    return parse_instance(FilePath(path).read_text())


def format_instance(dag: Dag, q: OrderDCost) -> str:
    """Canonical text: dense vertex and arc numbers, costs sorted by size then arcs."""
    vertex_no = {v: i for i, v in enumerate(sorted(dag.vertices), start=1)}
    arc_no = {a.id: i for i, a in enumerate(dag.arcs, start=1)}

    lines = [
        f"p linspp {len(vertex_no)} {len(arc_no)} {q.d}",
        f"s {vertex_no[dag.source]}",
        f"t {vertex_no[dag.sink]}",
    ]
    lines += [f"a {arc_no[a.id]} {vertex_no[a.tail]} {vertex_no[a.head]}" for a in dag.arcs]

    renamed = sorted(
        ((tuple(sorted(arc_no[a] for a in key)), value) for key, value in q.entries.items()),
        key=lambda kv: (len(kv[0]), kv[0]),
    )
    for key, value in renamed:
        arcs_part = "".join(f" {a}" for a in key)
        lines.append(f"q {len(key)}{arcs_part} {format_rational(value)}")
    return "\n".join(lines) + "\n"


def write_instance(dag: Dag, q: OrderDCost, path: str | FilePath) -> None:
    FilePath(path).write_text(format_instance(dag, q))


def format_cost(c: LinearCost, arcs: Iterable[int]) -> str:
    return "".join(f"c {a} {format_rational(c[a])}\n" for a in sorted(arcs))


def write_cost_file(c: LinearCost, arcs: Iterable[int], path: str | FilePath) -> None:
    FilePath(path).write_text(format_cost(c, arcs))


def parse_cost(text: str, dag: Dag) -> LinearCost:
    values = {}
    top = max(dag.arc_ids)
    for lineno, fields in _records(text):
        if fields[0] != "c" or len(fields) != 3:
            raise ParseError(lineno, "expected 'c <arc_id> <rational>'")
        a = _int(fields[1], lineno, "arc id")
        if not dag.has_arc(a):
            raise ArcIdOutOfRange(lineno, a, top)
        if a in values:
            raise ParseError(lineno, f"arc {a} given twice")
        values[a] = _rational(fields[2], lineno)
    return LinearCost(values, dag.arc_ids)


def read_cost_file(path: str | FilePath, dag: Dag) -> LinearCost:
    return parse_cost(FilePath(path).read_text(), dag)


def _format_key(key: Key) -> str:
    return ",".join(str(a) for a in key) if key else "{}"


def _parse_key(token: str, lineno: int) -> Key:
    if token == "{}":
        return ()
    return tuple(sorted(_int(tok, lineno, "arc id") for tok in token.split(",")))


def format_basis(basis: Basis) -> str:
    """One ``b`` record per vector with its nonzero ``subset=value`` pairs."""
    lines = [f"p basis {basis.d} {len(basis)} {len(basis.index)}"]
    for vec in basis.vectors:
        pairs = [
            f"{_format_key(k)}={format_rational(v)}"
            for k, v in zip(vec.index, vec.values, strict=True)
            if v
        ]
        lines.append(" ".join(["b", *pairs]))
    return "\n".join(lines) + "\n"


def write_basis(basis: Basis, path: str | FilePath) -> None:
    FilePath(path).write_text(format_basis(basis))


def parse_basis(text: str, index: tuple[Key, ...]) -> Basis:
    position = {k: i for i, k in enumerate(index)}
    d = max((len(k) for k in index), default=0)
    vectors = []
    for lineno, fields in _records(text):
        if fields[0] == "p":
            if len(fields) != 5 or fields[1] != "basis":
                raise ParseError(lineno, "expected 'p basis <d> <dim> <columns>'")
            d = _int(fields[2], lineno, "order")
            if _int(fields[4], lineno, "column count") != len(index):
                raise ParseError(lineno, "basis was computed for a different graph or order")
            continue
        if fields[0] != "b":
            raise ParseError(lineno, f"unknown record type {fields[0]!r}")
        values = [Fraction(0)] * len(index)
        for pair in fields[1:]:
            key_text, sep, value_text = pair.partition("=")
            if not sep:
                raise ParseError(lineno, f"expected subset=value, got {pair!r}")
            key = _parse_key(key_text, lineno)
            if key not in position:
                raise ParseError(lineno, f"subset {key_text} is not a column")
            values[position[key]] = _rational(value_text, lineno)
        vectors.append(CostVector(index, tuple(values)))
    return Basis(index, vectors, d)


def read_basis(path: str | FilePath, index: tuple[Key, ...]) -> Basis:
    return parse_basis(FilePath(path).read_text(), index)
