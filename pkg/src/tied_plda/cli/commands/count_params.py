"""Count-params command - parameter-count table."""

import click

from ...eval.tables import format_param_table, param_table_tsv
from ...services import ScoringService
from ..utils import existing_file


@click.command('count-params')
@click.option('--model', 'model_paths', type=existing_file(), multiple=True, required=True,
              help='Model file (repeatable, one row each).')
@click.option('--format', 'output_format', type=click.Choice(['text', 'tsv']), default='text', help='Output format.')
def count_params_cmd(model_paths, output_format):
    """Count state-dependent and state-independent parameters.

    \b
    Example:
      tplda count-params --model tied.mdl --model mixture.mdl --format tsv
    """
    rows = ScoringService().count_params(list(model_paths))
    render = param_table_tsv if output_format == 'tsv' else format_param_table
    click.echo(render(rows), nl=False)
