"""Scenario catalog, batch runner, artifact emission, and the CLI."""

from . import artifacts, cli, runner, scenarios

__all__ = ["artifacts", "cli", "runner", "scenarios"]
