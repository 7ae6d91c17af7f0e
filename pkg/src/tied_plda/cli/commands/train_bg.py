"""Train-bg command - fit the background mixture of factor analysers."""

import click

from ...services import TrainingService
from ..utils import existing_file, output_file, print_success


@click.command('train-bg')
@click.option('--features', 'features_path', type=existing_file(), required=True, help='Training feature file.')
@click.option('--components', type=click.IntRange(min=1), required=True, help='Number of components M.')
@click.option('--frame-dim', type=click.IntRange(min=0), default=3,
              help='Frame variable dimension p of the models this background will initialise.')
@click.option('--rank', type=click.IntRange(min=0), default=None, show_default='--frame-dim',
              help='Loading rank of each factor analyser.')
@click.option('--iters', 'iterations', type=click.IntRange(min=0), default=20, help='EM iterations.')
@click.option('--seed', type=int, default=0, help='Seed for mean seeding and initial loadings.')
@click.option('--out', type=output_file(), required=True, help='Background model file to write.')
@click.pass_obj
def train_bg_cmd(ctx, features_path, components, frame_dim, rank, iterations, seed, out):
    """Train the background model used for initialisation and component selection.

    \b
    Example:
      tplda train-bg --features train.fea --components 4 --rank 3 --iters 20 --out bg.bgm
    """
    if rank is None:
        rank = frame_dim
    _, history = TrainingService().train_background(features_path, components, rank, iterations, seed, out)
    if not ctx.quiet:
        final = f", avg loglik {history[-1]:.4f}" if history else ""
        print_success(f"Trained background model over {iterations} iterations{final}")
