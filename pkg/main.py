"""
dcorgraph Main Entry Point
==========================

Command line entry point for distance-correlation graph structure learning.
Loads ``config.yaml`` from the working directory (override with ``--config``),
configures logging and dispatches to the subcommands.

Usage:
    python main.py simulate --nodes 50 --avg-degree 3 --samples 400 --seed 7 --output-dir runs/sim
    python main.py estimate --input runs/sim/data_seed7.csv --edges 75 --output-dir runs/est
    python main.py eval --truth runs/sim/truth_seed7.edgelist --estimate runs/est/graph.edgelist --output-dir runs/eval
"""

from dcorgraph.cli import cli


if __name__ == "__main__":
    cli()
