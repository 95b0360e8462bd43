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
Generate a seeded corpus of small instances and cross-check every decider.

Each instance is written to the output directory in the canonical file format
so disagreements can be replayed with `linspp oracle <file>`.
"""

import sys
from collections import Counter
from pathlib import Path

import click
from dotenv import load_dotenv
from rich.console import Console
from rich.progress import track
from rich.table import Table

sys.path.insert(0, str(Path(__file__).parent.parent))

from linspp.errors import LimitExceeded, UnsupportedParams  # noqa: E402
from linspp.generators import GeneratorSpec, generate  # noqa: E402
from linspp.instance_io import write_instance  # noqa: E402
from linspp.linearizer import linearize  # noqa: E402
from linspp.oracle import oracle_linearize_lp, oracle_linearize_tps  # noqa: E402

# Load environment variables
env_path = Path(__file__).parent.parent / ".env"
load_dotenv(env_path)

console = Console()

MODES = ["arbitrary", "linearizable", "non-linearizable"]


@click.command()
@click.option("--count", "-n", default=500, show_default=True, help="Number of instances")
@click.option("--max-arcs", default=10, show_default=True, help="Largest arc count")
@click.option("--max-order", default=3, show_default=True, help="Largest interaction order")
@click.option("--max-paths", default=2**10, show_default=True, help="Skip larger instances")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Keep instance files here")
def main(count: int, max_arcs: int, max_order: int, max_paths: int, out_dir: str | None):
    """Cross-check linearizer, linear-system oracle and two-path oracle."""
    console.print("[bold blue]Oracle corpus[/bold blue]")
    console.print("=" * 50)

    target = Path(out_dir) if out_dir else None
    if target:
        target.mkdir(parents=True, exist_ok=True)

    tally: Counter[str] = Counter()
    disagreements = []
    for seed in track(range(count), description="Checking instances..."):
        spec = GeneratorSpec(
            family="random-dag",
            m=4 + seed % (max_arcs - 3),
            d=1 + (seed // len(MODES)) % max_order,
            mode=MODES[seed % len(MODES)],
            seed=seed,
        )
        try:
            dag, q = generate(spec)
            fast = linearize(dag, q).linearizable
            lp = oracle_linearize_lp(dag, q, max_paths).linearizable
            tps = oracle_linearize_tps(dag, q, max_paths**2)
        except UnsupportedParams:
            tally["unsupported"] += 1
            continue
        except LimitExceeded:
            tally["too large"] += 1
            continue

        if target:
            write_instance(dag, q, target / f"instance-{seed:04d}.linspp")
        if fast == lp == tps:
            tally["linearizable" if fast else "not linearizable"] += 1
        else:
            tally["DISAGREE"] += 1
            disagreements.append(spec)

    table = Table()
    table.add_column("Outcome", style="cyan")
    table.add_column("Instances", style="green", justify="right")
    for outcome, n in sorted(tally.items()):
        table.add_row(outcome, str(n))
    console.print(table)

    if disagreements:
        for spec in disagreements:
            console.print(f"[red]✗ {spec.model_dump_json()}[/red]")
        sys.exit(3)
    console.print("[green]✓ All deciders agree[/green]")


if __name__ == "__main__":
    main()
