"""Command-line interface.

Exit codes: 0 yes/success, 1 no (not linearizable, unequal, verification
failed), 2 other linspp errors, 3 oracle disagreement, 64 usage errors,
74 I/O errors, 78 bad configuration.
"""

from __future__ import annotations

import logging
import sys
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path as FilePath

import click
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

from linspp.apec import ApecInstance, solve_apec
from linspp.config import Settings, configure_logging, load_settings
from linspp.costs import OrderDCost, eval_order_d, format_rational
from linspp.errors import ConfigError, LinsppError
from linspp.generators import GeneratorSpec, generate
from linspp.graph import Dag, Path
from linspp.instance_io import (
    format_cost,
    format_instance,
    read_cost_file,
    read_instance,
    write_basis,
)
from linspp.linearizer import linearize, verify_linearization
from linspp.oracle import oracle_linearize_lp, oracle_linearize_tps
from linspp.subspace import linearizable_subspace
from linspp.verdicts import FailureWitness, LinVerdict

EXIT_OK = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_DISAGREE = 3
EXIT_USAGE = 64
EXIT_IO = 74
EXIT_CONFIG = 78

console = Console(soft_wrap=True, highlight=False)
err_console = Console(stderr=True, soft_wrap=True, highlight=False)

log = logging.getLogger(__name__)


def _settings(ctx: click.Context) -> Settings:
    return ctx.find_object(Settings) or load_settings()


def _out(line: str) -> None:
    console.print(line, markup=False)


def print_paths(paths: Sequence[Path]) -> None:
    for p in paths:
        _out(f"path: {p}")


def print_witness(dag: Dag, q: OrderDCost, witness: FailureWitness) -> None:
    arc = dag.arc(witness.arc)
    tps = witness.system
    _out(f"arc: {arc.id} ({dag.label(arc.tail)} -> {dag.label(arc.head)})")
    print_paths([tps.p1, tps.p2, tps.q1, tps.q2])
    f11, f22, f12, f21 = (format_rational(eval_order_d(q, p)) for p in tps.concatenations())
    left, right = tps.balance(q)
    _out(
        f"f(P1Q1) + f(P2Q2) = {f11} + {f22} = {format_rational(left)}"
        f" != {format_rational(right)} = {f12} + {f21} = f(P1Q2) + f(P2Q1)"
    )


def print_verdict(dag: Dag, q: OrderDCost, verdict: LinVerdict) -> None:
    if verdict.linearizable:
        _out("LINEARIZABLE")
        assert verdict.cost is not None
        sign = "nonnegative" if verdict.cost.is_nonnegative() else "mixed"
        _out(f"sign: {sign}")
        return
    _out("NOT_LINEARIZABLE")
    if verdict.failure_witness is not None:
        print_witness(dag, q, verdict.failure_witness)


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="Settings YAML file")
@click.option("--log-level", help="Logging level (default from settings)")
@click.option("--jobs", "-j", type=click.IntRange(min=1), help="Worker threads")
@click.option("--max-paths", type=click.IntRange(min=1), help="Path enumeration limit")
@click.pass_context
def main(
    ctx: click.Context,
    config_path: str | None,
    log_level: str | None,
    jobs: int | None,
    max_paths: int | None,
) -> None:
    """Linearization of order-d shortest path instances on acyclic digraphs."""
    settings = load_settings(config_path, log_level=log_level, jobs=jobs, max_paths=max_paths)
    configure_logging(settings)
    ctx.obj = settings


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@click.pass_context
def check(ctx: click.Context, instance: str) -> int:
    """Decide whether INSTANCE is linearizable."""
    settings = _settings(ctx)
    dag, q = read_instance(instance)
    verdict = linearize(dag, q, jobs=settings.jobs)
    print_verdict(dag, q, verdict)
    return EXIT_OK if verdict.linearizable else EXIT_NO


@main.command(name="linearize")
@click.argument("instance", type=click.Path(dir_okay=False))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write cost file here")
@click.pass_context
def linearize_cmd(ctx: click.Context, instance: str, out_path: str | None) -> int:
    """Write the reduced-form linearizing cost function of INSTANCE."""
    settings = _settings(ctx)
    dag, q = read_instance(instance)
    verdict = linearize(dag, q, jobs=settings.jobs)
    if not verdict.linearizable:
        print_verdict(dag, q, verdict)
        return EXIT_NO

    assert verdict.cost is not None
    text = format_cost(verdict.cost, dag.arc_ids)
    if out_path:
        FilePath(out_path).write_text(text)
        err_console.print(f"[green]✓ Wrote {dag.m} arc costs to {escape(out_path)}[/green]")
    else:
        console.out(text, end="", highlight=False)
    return EXIT_OK


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@click.pass_context
def apec(ctx: click.Context, instance: str) -> int:
    """Decide whether every s-t path of INSTANCE has the same cost."""
    settings = _settings(ctx)
    dag, q = read_instance(instance)
    verdict = solve_apec(ApecInstance(dag, q), jobs=settings.jobs)
    if verdict.all_equal:
        _out(f"EQUAL beta={format_rational(verdict.beta or Fraction(0))}")
        return EXIT_OK
    _out("UNEQUAL")
    assert verdict.witness is not None
    for p in verdict.witness:
        _out(f"path: {p}")
        _out(f"cost: {format_rational(eval_order_d(q, p))}")
    return EXIT_NO


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_context
def basis(ctx: click.Context, instance: str, out_path: str) -> int:
    """Compute a basis of all linearizable instances on the graph of INSTANCE."""
    settings = _settings(ctx)
    dag, q = read_instance(instance)
    result = linearizable_subspace(dag, q.d, jobs=settings.jobs)
    write_basis(result, out_path)
    _out(f"dimension {len(result)} of {len(result.index)}")
    return EXIT_OK


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@click.argument("costfile", type=click.Path(dir_okay=False))
@click.option("--max-paths", type=click.IntRange(min=1), help="Path enumeration limit")
@click.pass_context
def verify(ctx: click.Context, instance: str, costfile: str, max_paths: int | None) -> int:
    """Check COSTFILE against INSTANCE on every s-t path."""
    limit = max_paths or _settings(ctx).max_paths
    dag, q = read_instance(instance)
    c = read_cost_file(costfile, dag)
    ok = verify_linearization(dag, q, c, limit)
    _out("VERIFIED" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_NO


FAMILIES = ["random-dag", "layered", "grid", "two-path", "double-diamond"]
MODES = ["arbitrary", "linearizable", "non-linearizable", "sum-matrix", "product-matrix"]


@main.command()
@click.option("--family", type=click.Choice(FAMILIES), default="random-dag", show_default=True)
@click.option("--mode", type=click.Choice(MODES), default="arbitrary", show_default=True)
@click.option("--d", "order", type=int, help="Interaction order (default from settings)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--m", type=int, help="Arc count (random-dag)")
@click.option("--vertices", type=int, help="Vertex count (random-dag)")
@click.option("--layers", type=int, help="Layer count (layered)")
@click.option("--width", type=int, help="Layer width (layered)")
@click.option("--rows", type=int, help="Grid rows")
@click.option("--cols", type=int, help="Grid columns")
@click.option("--length", type=int, help="Arcs per path (two-path)")
@click.option("--density", type=float, help="Higher-order keys per arc")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write instance here")
@click.pass_context
def gen(ctx: click.Context, order: int | None, out_path: str | None, **params: object) -> int:
    """Generate a seeded instance."""
    settings = _settings(ctx)
    fields = {k: v for k, v in params.items() if v is not None}
    try:
        spec = GeneratorSpec(d=order if order is not None else settings.default_order, **fields)
    except ValidationError as e:
        raise click.UsageError(str(e)) from e
    dag, q = generate(spec)
    text = format_instance(dag, q)
    if out_path:
        FilePath(out_path).write_text(text)
        err_console.print(
            f"[green]✓ Wrote {spec.family} instance (m={dag.m}) to {escape(out_path)}[/green]"
        )
    else:
        console.out(text, end="", highlight=False)
    return EXIT_OK


@main.command()
@click.argument("instance", type=click.Path(dir_okay=False))
@click.pass_context
def oracle(ctx: click.Context, instance: str) -> int:
    """Cross-check the linearizer against both brute-force deciders."""
    settings = _settings(ctx)
    dag, q = read_instance(instance)

    fast = linearize(dag, q, jobs=settings.jobs)
    lp = oracle_linearize_lp(dag, q, settings.max_paths)
    tps = oracle_linearize_tps(dag, q, settings.max_systems)

    def word(yes: bool) -> str:
        return "LINEARIZABLE" if yes else "NOT_LINEARIZABLE"

    _out(f"linearizer: {word(fast.linearizable)}")
    _out(f"linear-system: {word(lp.linearizable)}")
    _out(f"two-path-systems: {word(tps)}")

    agree = fast.linearizable == lp.linearizable == tps
    if agree and fast.linearizable and fast.cost != lp.cost:
        log.error("reduced-form costs differ between linearizer and linear-system oracle")
        agree = False
    if not agree:
        log.error("deciders disagree on %s", instance)
        _out("DISAGREE")
        return EXIT_DISAGREE
    _out(f"AGREE {word(fast.linearizable)}")
    return EXIT_OK


def cli_main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and map failures to exit codes instead of raising."""
    try:
        rv = main.main(
            args=list(argv) if argv is not None else None,
            prog_name="linspp",
            standalone_mode=False,
        )
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_ERROR
    except click.Abort:
        err_console.print("[red]Aborted[/red]")
        return EXIT_ERROR
    except ConfigError as e:
        err_console.print(f"[red]Configuration error: {escape(str(e))}[/red]")
        return EXIT_CONFIG
    except LinsppError as e:
        err_console.print(f"[red]Error: {escape(str(e))}[/red]")
        return EXIT_ERROR
    except OSError as e:
        err_console.print(f"[red]I/O error: {escape(str(e))}[/red]")
        return EXIT_IO
    return rv if isinstance(rv, int) else EXIT_OK


def run() -> None:
    sys.exit(cli_main())
