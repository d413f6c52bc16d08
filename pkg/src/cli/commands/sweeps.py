"""Degeneration sweeps and the standalone fitter."""

from pathlib import Path

import typer

from src.cli.dispatch import execute


def beta1_sweep_command(
    x_min: float | None = typer.Option(None, "--x-min", help="Smallest log(1/|t|)"),
    x_max: float | None = typer.Option(None, "--x-max", help="Largest log(1/|t|)"),
    samples: int | None = typer.Option(None, "--samples", help="Sample count"),
    output_format: str = typer.Option("json", "--format", "-f", help="json or csv"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write to file"),
) -> None:
    """Sample beta_1 along t = e^-x and fit its asymptotics."""
    execute(
        {
            "subcommand": "beta1-sweep",
            "x_min": x_min,
            "x_max": x_max,
            "samples": samples,
            "output_format": output_format,
            "output_path": output,
        }
    )


def beta2_sweep_command(
    path: str = typer.Option(..., "--path", help="fay or reducible"),
    x_min: float | None = typer.Option(None, "--x-min", help="Smallest log(1/|t|)"),
    x_max: float | None = typer.Option(None, "--x-max", help="Largest log(1/|t|)"),
    samples: int | None = typer.Option(None, "--samples", help="Sample count"),
    output_format: str = typer.Option("json", "--format", "-f", help="json or csv"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write to file"),
) -> None:
    """Sample beta_2 (or log|chi_10|) along a genus-2 degeneration."""
    execute(
        {
            "subcommand": "beta2-sweep",
            "path": path,
            "x_min": x_min,
            "x_max": x_max,
            "samples": samples,
            "output_format": output_format,
            "output_path": output,
        }
    )


def fit_command(
    input_path: Path = typer.Option(..., "--input", "-i", help="Sample CSV"),
    no_log: bool = typer.Option(
        False, "--no-log", help="Fit on {loglog, 1} only"
    ),
    output_format: str = typer.Option("json", "--format", "-f", help="json or csv"),
    output: Path | None = typer.Option(None, "--output", "-o", help="Write to file"),
) -> None:
    """Fit log|t|, log log(1/|t|) and constant coefficients to a CSV."""
    execute(
        {
            "subcommand": "fit",
            "input_path": input_path,
            "include_log": not no_log,
            "output_format": output_format,
            "output_path": output,
        }
    )
