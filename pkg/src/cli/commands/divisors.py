"""Divisor-class commands: chern, solve-r0, faltings, incommensurable."""

from pathlib import Path

import typer

from src.cli.dispatch import execute

OUTPUT_OPTION = typer.Option(None, "--output", "-o", help="Write to file")


def chern_command(
    g: int = typer.Option(..., "--g", help="Genus (>= 3)"),
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """First Chern class of the biextension bundle on the boundary basis."""
    execute({"subcommand": "chern", "g": g, "output_path": output})


def solve_r0_command(
    g: int = typer.Option(..., "--g", help="Genus (>= 3)"),
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Solve for the delta_0 coefficient r0."""
    execute({"subcommand": "solve-r0", "g": g, "output_path": output})


def faltings_command(
    g: int = typer.Option(..., "--g", help="Genus (>= 2)"),
    h: int = typer.Option(0, "--h", help="Boundary index, 0 for delta_0"),
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Asymptotic coefficients of the Faltings delta near delta_h."""
    execute({"subcommand": "faltings", "g": g, "h": h, "output_path": output})


def incommensurable_command(
    g: int = typer.Option(..., "--g", help="Genus (>= 3)"),
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Check that beta_g is not a multiple of the Faltings delta."""
    execute({"subcommand": "incommensurable", "g": g, "output_path": output})
