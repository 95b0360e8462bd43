#!/usr/bin/env python3
# /// script
# requires-python = ">=3.11"
# dependencies = [
#   "click",
#   "networkx",
#   "pydantic",
#   "python-dotenv",
#   "pyyaml",
#   "rich",
#   "sympy",
# ]
# ///

"""
Time the linearizer on layered graphs of growing size.

Prints one row per size plus the fitted exponent of runtime against arc count.
"""

import math
import sys
import time
from pathlib import Path

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.table import Table

sys.path.insert(0, str(Path(__file__).parent.parent))

from linspp.generators import GeneratorSpec, generate  # noqa: E402
from linspp.linearizer import linearize  # noqa: E402

# Load environment variables
env_path = Path(__file__).parent.parent / ".env"
load_dotenv(env_path)

console = Console()


@click.command()
@click.option("--width", default=6, show_default=True, help="Vertices per layer")
@click.option("--layers", "-l", multiple=True, type=int, help="Layer counts to time")
@click.option("--d", "order", default=2, show_default=True, help="Interaction order")
@click.option("--jobs", "-j", default=1, show_default=True, help="Worker threads")
@click.option("--mode", type=click.Choice(["linearizable", "non-linearizable", "arbitrary"]),
              default="linearizable", show_default=True)
def main(width: int, layers: tuple[int, ...], order: int, jobs: int, mode: str):
    """Measure linearizer runtime on layered DAGs."""
    console.print("[bold blue]Linearizer scaling envelope[/bold blue]")
    console.print("=" * 50)

    table = Table()
    table.add_column("Layers", style="cyan", justify="right")
    table.add_column("Arcs", style="cyan", justify="right")
    table.add_column("Cost keys", justify="right")
    table.add_column("Verdict", style="green")
    table.add_column("Seconds", style="yellow", justify="right")

    samples = []
    for count in layers or (8, 16, 32, 56):
        spec = GeneratorSpec(
            family="layered", layers=count, width=width, d=order, mode=mode, seed=1
        )
        dag, q = generate(spec)
        start = time.perf_counter()
        verdict = linearize(dag, q, jobs=jobs)
        elapsed = time.perf_counter() - start
        samples.append((dag.m, elapsed))
        word = "LINEARIZABLE" if verdict.linearizable else "NOT_LINEARIZABLE"
        table.add_row(str(count), str(dag.m), str(len(q)), word, f"{elapsed:.3f}")

    console.print(table)
    if len(samples) >= 2:
        (m0, t0), (m1, t1) = samples[0], samples[-1]
        exponent = math.log(max(t1, 1e-3) / max(t0, 1e-3)) / math.log(m1 / m0)
        colour = "green" if exponent <= 3 else "red"
        console.print(f"[{colour}]Fitted exponent: {exponent:.2f}[/{colour}]")


if __name__ == "__main__":
    main()
