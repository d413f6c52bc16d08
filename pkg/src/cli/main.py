"""biext - biextension asymptotics workbench CLI."""

import logging
from typing import Any

import click
import typer
from typer.core import TyperGroup

from src.cli.commands.algebra import (
    dimid_command,
    invariants_command,
    qform_command,
    tau_command,
)
from src.cli.commands.config_cmd import config_command
from src.cli.commands.divisors import (
    chern_command,
    faltings_command,
    incommensurable_command,
    solve_r0_command,
)
from src.cli.commands.sweeps import (
    beta1_sweep_command,
    beta2_sweep_command,
    fit_command,
)
from src.cli.dispatch import error_document
from src.core.serialization import dump_document


class BiextGroup(TyperGroup):
    """Writes the error document for command-line parse errors.

    Click still prints the usage message to stderr and exits 2.
    """

    def parse_args(self, ctx: click.Context, args: list[str]) -> list[str]:
        try:
            return super().parse_args(ctx, args)
        except click.UsageError as e:
            # bare `biext` shows help, not an error
            if args:
                typer.echo(dump_document(error_document(e)), nl=False)
            raise

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            typer.echo(dump_document(error_document(e)), nl=False)
            raise


app = typer.Typer(
    name="biext",
    cls=BiextGroup,
    help="biext - exact algebra and modular numerics of the biextension metric",
    add_completion=False,
    no_args_is_help=True,
)


def _setup_logging(verbose: bool) -> None:
    """Configure logging based on verbosity level.

    Args:
        verbose: If True, set DEBUG level; otherwise WARNING.
    """
    level = logging.DEBUG if verbose else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%H:%M:%S",
    )


@app.callback()
def app_callback(
    verbose: bool = typer.Option(
        False,
        "--verbose",
        "-v",
        help="Enable verbose/debug logging output",
    ),
) -> None:
    """biext - verification workbench for biextension asymptotics."""
    _setup_logging(verbose)


app.command(name="tau")(tau_command)
app.command(name="qform")(qform_command)
app.command(name="invariants")(invariants_command)
app.command(name="dimid")(dimid_command)
app.command(name="beta1-sweep")(beta1_sweep_command)
app.command(name="beta2-sweep")(beta2_sweep_command)
app.command(name="fit")(fit_command)
app.command(name="chern")(chern_command)
app.command(name="solve-r0")(solve_r0_command)
app.command(name="faltings")(faltings_command)
app.command(name="incommensurable")(incommensurable_command)
app.command(name="config")(config_command)


def main() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
