"""CLI commands and entry points."""
