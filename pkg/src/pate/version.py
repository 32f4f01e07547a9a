"""Package version, single source for reports and the CLI."""

__version__ = "0.1.0"
