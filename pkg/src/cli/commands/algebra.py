"""Exact-algebra commands: tau, qform, invariants, dimid."""

from pathlib import Path

import typer

from src.cli.dispatch import execute

OUTPUT_OPTION = typer.Option(None, "--output", "-o", help="Write to file")


def tau_command(
    g: int = typer.Option(..., "--g", help="Genus (>= 3)"),
    h: int = typer.Option(..., "--h", help="Genus of one side of the curve"),
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Central charge of the separating Dehn twist sigma_h."""
    execute({"subcommand": "tau", "g": g, "h": h, "output_path": output})


def qform_command(
    u: Path = typer.Argument(..., help="Wedge3 JSON lift of u"),
    v: Path = typer.Argument(..., help="Wedge3 JSON lift of v"),
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Evaluate q(u, v) on two classes of V."""
    execute({"subcommand": "qform", "lift_paths": (u, v), "output_path": output})


def invariants_command(
    g: int = typer.Option(..., "--g", help="Genus (>= 2)"),
    p: int = typer.Option(..., "--p", help="Prime modulus"),
    side: str = typer.Option(
        "invariants", "--side", help="invariants or dual"
    ),
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Dimension of the Sp_g-fixed vectors of Lambda^3 H over F_p."""
    execute(
        {
            "subcommand": "invariants",
            "g": g,
            "p": p,
            "side": side,
            "output_path": output,
        }
    )


def dimid_command(
    g: int = typer.Option(..., "--g", help="Genus (>= 3)"),
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Check C(2g,3) = 2g(g-1) + 8 C(g,3)."""
    execute({"subcommand": "dimid", "g": g, "output_path": output})


