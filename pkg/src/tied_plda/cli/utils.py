"""Console helpers and shared options for the tplda CLI."""

from pathlib import Path
from typing import Sequence

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table
from rich.theme import Theme

from ..training.estep import default_threads

custom_theme = Theme({
    "info": "cyan",
    "success": "green",
    "warning": "yellow",
    "error": "red bold",
    "muted": "dim white",
    "heading": "bold cyan",
})

# Tables and summaries go to stdout; status messages to stderr so that the
# score, classify and train streams stay clean.
console = Console(theme=custom_theme)
err_console = Console(theme=custom_theme, stderr=True)


def print_success(message: str):
    err_console.print(f"[success]✓[/success] {escape(message)}", soft_wrap=True)


def print_error(message: str):
    err_console.print(f"[error]✗[/error] {escape(message)}", highlight=False, soft_wrap=True)


def print_warning(message: str):
    err_console.print(f"[warning]⚠[/warning]  {escape(message)}", soft_wrap=True)


def print_info(message: str):
    err_console.print(f"[info]ℹ[/info]  {escape(message)}", soft_wrap=True)


def create_table(title: str, columns: Sequence[tuple[str, str]]) -> Table:
    """Create a styled table.

    Args:
        title: Table title
        columns: List of (header, style) tuples
    """
    table = Table(title=title, show_header=True, header_style="bold cyan")
    for header, style in columns:
        table.add_column(header, style=style)
    return table


def existing_file(**kwargs):
    return click.Path(exists=True, dir_okay=False, path_type=Path, **kwargs)


def output_file(**kwargs):
    return click.Path(dir_okay=False, writable=True, path_type=Path, **kwargs)


def parallel_options(func):
    """Add ``--threads`` and ``--deterministic`` to a command that runs E-steps or scoring."""
    func = click.option(
        '--deterministic', is_flag=True,
        help='Fixed shard boundaries and merge order; results do not depend on --threads.',
    )(func)
    func = click.option(
        '--threads', type=click.IntRange(min=1), default=default_threads,
        show_default='available parallelism', help='Worker threads for sharded passes.',
    )(func)
    return func
