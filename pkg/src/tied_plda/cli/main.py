"""tplda command group and exit-code handling."""

import sys
from typing import Optional, Sequence

import click
import numpy as np
from pydantic import ValidationError

from ..errors import TiedPldaError
from ..utils.logging import setup_logging
from .commands import (
    classify_cmd,
    count_params_cmd,
    gen_cmd,
    init_cmd,
    inspect_cmd,
    mixup_cmd,
    score_cmd,
    train_bg_cmd,
    train_cmd,
)
from .utils import print_error

__version__ = "0.1.0"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

CONTEXT_SETTINGS = dict(
    help_option_names=['-h', '--help'],
    max_content_width=120,
    show_default=True,
)


class TpContext:
    """Context object for passing state between commands."""

    def __init__(self):
        self.verbose: bool = False
        self.quiet: bool = False


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option(__version__, '--version', '-V', prog_name='tplda')
@click.option('--verbose', '-v', is_flag=True, help='Log debug detail (auxiliary deltas, ridges, floors).')
@click.option('--quiet', '-q', is_flag=True, help='Log warnings and errors only.')
@click.option('--log-format', type=click.Choice(['text', 'json']), default='text', help='Log record format.')
@click.option('--log-file', type=click.Path(dir_okay=False), default=None, help='Also write logs to this file.')
@click.pass_context
def cli(ctx, verbose, quiet, log_format, log_file):
    """Tied PLDA acoustic models: train, mix up, score and classify frames.

    \b
    Pipeline:
      tplda gen --create --model gen.mdl --frames-per-state 5000 \\
                --out-features train.fea --out-labels train.lbl
      tplda train-bg --features train.fea --components 4 --rank 3 --out bg.bgm
      tplda init --bg bg.bgm --states 10 --out init.mdl
      tplda train --model init.mdl --features train.fea --labels train.lbl --out trained.mdl
      tplda classify --model trained.mdl --features test.fea
    """
    ctx.obj = TpContext()
    ctx.obj.verbose = verbose
    ctx.obj.quiet = quiet
    level = "DEBUG" if verbose else "WARNING" if quiet else "INFO"
    setup_logging(log_level=level, log_file=log_file, log_format=log_format)


cli.add_command(gen_cmd)
cli.add_command(train_bg_cmd)
cli.add_command(init_cmd)
cli.add_command(train_cmd)
cli.add_command(mixup_cmd)
cli.add_command(score_cmd)
cli.add_command(classify_cmd)
cli.add_command(count_params_cmd)
cli.add_command(inspect_cmd)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code.

    0 on success, 1 for usage errors, 2 for data and format errors, 3 for
    numerical failures.
    """
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="tplda", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        print_error("Aborted.")
        return EXIT_USAGE
    except TiedPldaError as e:
        print_error(str(e))
        return e.exit_code
    except ValidationError as e:
        print_error(str(e))
        return EXIT_DATA
    except np.linalg.LinAlgError as e:
        print_error(f"linear algebra failure: {e}")
        return EXIT_NUMERICAL
    except OSError as e:
        print_error(str(e))
        return EXIT_DATA
    return result if isinstance(result, int) else EXIT_OK


def main():
    """Entry point for the CLI."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print_error("Interrupted by user.")
        sys.exit(130)


if __name__ == "__main__":
    main()
