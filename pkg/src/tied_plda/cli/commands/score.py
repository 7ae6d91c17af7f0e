"""Score command - per-frame log-likelihood stream."""

import click

from ...inference.likelihood import LikelihoodMode
from ...services import ScoringService
from ..utils import existing_file, parallel_options


@click.command('score')
@click.option('--model', 'model_path', type=existing_file(), required=True, help='Model file.')
@click.option('--features', 'features_path', type=existing_file(), required=True, help='Feature file.')
@click.option('--labels', 'labels_path', type=existing_file(), required=True, help='States to score each frame under.')
@click.option('--bg', 'bg_path', type=existing_file(), default=None, help='Background model for component selection.')
@click.option('--select-n', type=click.IntRange(min=1), default=15, help='Components kept per frame with --bg.')
@click.option('--mode', type=click.Choice([m.value for m in LikelihoodMode]), default=LikelihoodMode.UNCERTAINTY.value,
              help='Point or uncertainty likelihood.')
@click.option('--out', type=click.File('w'), default='-', help='Output stream.')
@parallel_options
def score_cmd(model_path, features_path, labels_path, bg_path, select_n, mode, out, threads, deterministic):
    """Write frame<TAB>state<TAB>log-likelihood for every label entry.

    \b
    Example:
      tplda score --model trained.mdl --features test.fea --labels test.lbl > test.scores
    """
    service = ScoringService(mode=LikelihoodMode(mode), threads=threads, deterministic=deterministic)
    for line in service.score(model_path, features_path, labels_path, bg_path, select_n):
        out.write(line + "\n")
