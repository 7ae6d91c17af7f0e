"""Init command - initial model from a background model."""

import click

from ...models.params import ModelFamily
from ...services import TrainingService
from ..utils import existing_file, output_file, print_success


@click.command('init')
@click.option('--bg', 'bg_path', type=existing_file(), required=True, help='Background model file.')
@click.option('--states', type=click.IntRange(min=1), required=True, help='Number of states J.')
@click.option('--frame-dim', type=int, default=3, help='Frame variable dimension p.')
@click.option('--state-dim', type=int, default=3, help='State variable dimension q.')
@click.option('--family', type=click.Choice(['tied', 'mixture']), default='tied', help='Model family.')
@click.option('--seed', type=int, default=0, help='Seed for the random loadings.')
@click.option('--features', 'features_path', type=existing_file(), default=None,
              help='Features for the variance floor reference (needs --labels).')
@click.option('--labels', 'labels_path', type=existing_file(), default=None, help='Labels matching --features.')
@click.option('--out', type=output_file(), required=True, help='Model file to write.')
@click.pass_obj
def init_cmd(ctx, bg_path, states, frame_dim, state_dim, family, seed, features_path, labels_path, out):
    """Create an initial tied PLDA (or PLDA mixture) model.

    \b
    Example:
      tplda init --bg bg.bgm --states 10 --frame-dim 3 --state-dim 3 --out init.mdl
    """
    model = TrainingService().initialise(
        bg_path, states, frame_dim, state_dim, out, seed=seed,
        family=ModelFamily[family.upper()], features_path=features_path, labels_path=labels_path,
    )
    if not ctx.quiet:
        h = model.hyper
        print_success(f"Initialised model d={h.d}, p={h.p}, q={h.q}, M={h.M}, J={h.J} -> {out}")
