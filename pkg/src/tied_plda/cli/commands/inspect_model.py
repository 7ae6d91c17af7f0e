"""Inspect command - model dimensions and weight summary."""

import click

from ...services import ScoringService, model_summary_rows
from ..utils import console, create_table, existing_file


@click.command('inspect')
@click.option('--model', 'model_path', type=existing_file(), required=True, help='Model file.')
def inspect_cmd(model_path):
    """Show the dimensions, sub-state counts and weight ranges of a model."""
    summary = ScoringService().inspect(model_path)
    table = create_table(model_path.name, [("Field", "cyan"), ("Value", "white")])
    for key, value in model_summary_rows(summary):
        table.add_row(key, value)
    console.print(table)
