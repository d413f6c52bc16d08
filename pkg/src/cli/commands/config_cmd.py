"""Config command - view and edit configuration."""

import typer
from rich.markup import escape

from src.cli.ui import (
    console,
    print_error,
    print_header,
    print_info,
    print_success,
    print_warning,
)
from src.core.config import CONFIG_FILE, WorkbenchConfig, load_config, save_config
from src.core.exceptions import ConfigError


def _cast(current: object, value: str) -> object:
    """Cast a --set value to the type of the current setting."""
    if isinstance(current, bool):
        return value.lower() in ("true", "1", "yes")
    if isinstance(current, int):
        return int(value)
    if isinstance(current, float):
        return float(value)
    return value


def config_command(
    show: bool = typer.Option(
        False,
        "--show",
        "-s",
        help="Show current configuration",
    ),
    init: bool = typer.Option(
        False,
        "--init",
        help="Create default configuration file",
    ),
    set_value: list[str] | None = typer.Option(
        None,
        "--set",
        help="Set a config value (key=value)",
    ),
) -> None:
    """View or edit biext configuration."""
    if init:
        if CONFIG_FILE.exists():
            print_warning(f"Overwriting {CONFIG_FILE}")
        config = WorkbenchConfig()
        save_config(config)
        print_success(f"Created default config at {CONFIG_FILE}")
        return

    try:
        config = load_config()
    except ConfigError as e:
        print_error(escape(str(e)))
        raise typer.Exit(code=1) from e

    if set_value:
        data = config.model_dump()
        for kv in set_value:
            if "=" not in kv:
                print_error(f"Invalid format: {escape(kv)} (use key=value)")
                raise typer.Exit(code=1)
            key, value = kv.split("=", 1)
            key = key.strip()
            if key not in data:
                print_error(f"Unknown config key: {escape(key)}")
                console.print(f"[dim]Valid keys: {', '.join(data.keys())}[/dim]")
                raise typer.Exit(code=1)
            try:
                data[key] = _cast(data[key], value.strip())
            except ValueError as e:
                print_error(f"Invalid value for {key}: {escape(value)}")
                raise typer.Exit(code=1) from e

        try:
            config = WorkbenchConfig(**data)
        except ValueError as e:
            print_error(f"Invalid configuration: {escape(str(e))}")
            raise typer.Exit(code=1) from e
        save_config(config)
        print_success("Configuration updated")

    if show or set_value:
        print_header("Configuration")
        for key, value in config.model_dump(mode="json").items():
            console.print(f"  {key}: [bold]{value}[/bold]")
        print_info(f"Config file: {CONFIG_FILE}")
