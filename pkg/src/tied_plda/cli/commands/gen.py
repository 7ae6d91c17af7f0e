"""Gen command - sample a synthetic corpus from a generating model."""

import click

from ...models.params import ModelFamily
from ...services import TrainingService, hyperparams_from_flags
from ..utils import output_file, print_success


@click.command('gen')
@click.option('--model', 'model_path', type=output_file(),
              required=True, help='Generating model; written first when --create is given.')
@click.option('--frames-per-state', type=click.IntRange(min=0), required=True, help='Frames sampled per state.')
@click.option('--seed', type=int, default=0, help='Seed for the model (with --create) and the samples.')
@click.option('--out-features', type=output_file(), required=True, help='Feature file to write.')
@click.option('--out-labels', type=output_file(), required=True, help='Label file to write.')
@click.option('--create', is_flag=True, help='Create a random generating model at --model.')
@click.option('--dim', type=int, default=10, help='Feature dimension d (with --create).')
@click.option('--frame-dim', type=int, default=3, help='Frame variable dimension p (with --create).')
@click.option('--state-dim', type=int, default=3, help='State variable dimension q (with --create).')
@click.option('--components', type=int, default=4, help='Number of components M (with --create).')
@click.option('--states', type=int, default=10, help='Number of states J (with --create).')
@click.option('--substates', type=click.IntRange(min=1), default=1, help='Sub-states per state (with --create).')
@click.option('--family', type=click.Choice(['tied', 'mixture']), default='tied', help='Model family (with --create).')
@click.pass_obj
def gen_cmd(ctx, model_path, frames_per_state, seed, out_features, out_labels, create,
            dim, frame_dim, state_dim, components, states, substates, family):
    """Sample features and hard labels from a generating model.

    Frame t belongs to state t mod J.

    \b
    Examples:
      tplda gen --model gen.mdl --frames-per-state 1000 --out-features a.fea --out-labels a.lbl
      tplda gen --create --dim 10 --states 10 --model gen.mdl --frames-per-state 5000 \\
                --out-features train.fea --out-labels train.lbl
    """
    hyper = None
    if create:
        hyper = hyperparams_from_flags(d=dim, p=frame_dim, q=state_dim, M=components, J=states)
    elif not model_path.exists():
        raise click.BadParameter(f"{model_path} does not exist (use --create to make it)", param_hint="'--model'")
    frames = TrainingService().generate(
        model_path, frames_per_state, seed, out_features, out_labels,
        create=hyper, substates=substates, family=ModelFamily[family.upper()],
    )
    if not ctx.quiet:
        print_success(f"Sampled {frames} frames to {out_features}")
