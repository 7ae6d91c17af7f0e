"""Train command - EM iterations on labelled features."""

import click

from ...services import TrainingService
from ..utils import existing_file, output_file, parallel_options, print_success, print_warning


@click.command('train')
@click.option('--model', 'model_path', type=existing_file(), required=True, help='Model to start from.')
@click.option('--features', 'features_path', type=existing_file(), required=True, help='Training feature file.')
@click.option('--labels', 'labels_path', type=existing_file(), required=True, help='Training label file.')
@click.option('--config', 'config_path', type=existing_file(), default=None,
              help='Training configuration (key = value lines); defaults apply when omitted.')
@click.option('--bg', 'bg_path', type=existing_file(), default=None,
              help='Background model for top-N component selection (select-n in the config).')
@click.option('--iters', 'iterations', type=click.IntRange(min=0), default=None,
              help='Override the configured iteration count.')
@click.option('--out', type=output_file(), required=True, help='Trained model file to write.')
@parallel_options
@click.pass_obj
def train_cmd(ctx, model_path, features_path, labels_path, config_path, bg_path, iterations, out,
              threads, deterministic):
    """Train a model by EM, printing one report line per iteration.

    \b
    Example:
      tplda train --model init.mdl --features train.fea --labels train.lbl \\
                  --config train.conf --out trained.mdl --deterministic
    """
    service = TrainingService(threads=threads, deterministic=deterministic)
    _, reports = service.train(
        model_path, features_path, labels_path, out,
        config_path=config_path, bg_path=bg_path, iterations=iterations,
        on_report=lambda report: click.echo(report.to_line()),
    )
    frozen = max((r.frozen_components for r in reports), default=0)
    if frozen:
        print_warning(f"{frozen} component(s) received no frames and kept their parameters")
    if not ctx.quiet:
        print_success(f"Trained {len(reports)} iterations -> {out}")
