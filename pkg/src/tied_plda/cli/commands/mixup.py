"""Mixup command - split sub-states to grow model capacity."""

import click

from ...services import TrainingService
from ..utils import existing_file, output_file, parallel_options, print_success


@click.command('mixup')
@click.option('--model', 'model_path', type=existing_file(), required=True, help='Tied PLDA model to grow.')
@click.option('--target', type=click.IntRange(min=1), required=True,
              help='Total number of sub-states over all states after splitting.')
@click.option('--out', type=output_file(), required=True, help='Model file to write.')
@click.option('--seed', type=int, default=0, help='Seed for the split directions.')
@click.option('--features', 'features_path', type=existing_file(), default=None,
              help='Features for occupancy-ranked splitting (needs --labels); sub-state weights otherwise.')
@click.option('--labels', 'labels_path', type=existing_file(), default=None, help='Labels matching --features.')
@click.option('--config', 'config_path', type=existing_file(), default=None, help='Training configuration.')
@click.option('--bg', 'bg_path', type=existing_file(), default=None, help='Background model for selection.')
@parallel_options
@click.pass_obj
def mixup_cmd(ctx, model_path, target, out, seed, features_path, labels_path, config_path, bg_path,
              threads, deterministic):
    """Split the most occupied sub-states until the model has --target in total.

    \b
    Example:
      tplda mixup --model trained.mdl --target 40 --features train.fea --labels train.lbl --out mixed.mdl
    """
    service = TrainingService(threads=threads, deterministic=deterministic)
    model = service.mixup(
        model_path, target, out, seed=seed, features_path=features_path,
        labels_path=labels_path, config_path=config_path, bg_path=bg_path,
    )
    if not ctx.quiet:
        print_success(f"Model now has {model.total_substates} sub-states -> {out}")
