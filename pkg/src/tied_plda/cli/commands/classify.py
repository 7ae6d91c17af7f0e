"""Classify command - per-frame best state stream."""

import click

from ...inference.likelihood import LikelihoodMode
from ...services import ScoringService
from ..utils import err_console, existing_file, output_file, parallel_options, print_info


@click.command('classify')
@click.option('--model', 'model_path', type=existing_file(), required=True, help='Model file.')
@click.option('--features', 'features_path', type=existing_file(), required=True, help='Feature file.')
@click.option('--bg', 'bg_path', type=existing_file(), default=None, help='Background model for component selection.')
@click.option('--select-n', type=click.IntRange(min=1), default=15, help='Components kept per frame with --bg.')
@click.option('--mode', type=click.Choice([m.value for m in LikelihoodMode]), default=LikelihoodMode.UNCERTAINTY.value,
              help='Point or uncertainty likelihood.')
@click.option('--state', 'candidate_states', type=click.IntRange(min=0), multiple=True,
              help='Restrict decisions to these states (repeatable; all states when omitted).')
@click.option('--labels', 'labels_path', type=existing_file(), default=None,
              help='Reference labels; enables the evaluation report.')
@click.option('--report', 'report_path', type=output_file(), default=None,
              help='Write the evaluation report as name<TAB>value lines (needs --labels).')
@click.option('--baseline-features', 'baseline_features_path', type=existing_file(), default=None,
              help='Training features for the diagonal-Gaussian baseline in the report.')
@click.option('--baseline-labels', 'baseline_labels_path', type=existing_file(), default=None,
              help='Labels matching --baseline-features.')
@click.option('--out', type=click.File('w'), default='-', help='Output stream.')
@parallel_options
@click.pass_obj
def classify_cmd(ctx, model_path, features_path, bg_path, select_n, mode, candidate_states, labels_path,
                 report_path, baseline_features_path, baseline_labels_path, out, threads, deterministic):
    """Write frame<TAB>best state<TAB>its log-likelihood for every frame.

    \b
    Examples:
      tplda classify --model trained.mdl --features test.fea > test.best
      tplda classify --model trained.mdl --features test.fea --labels test.lbl --report test.tsv
      tplda classify --model trained.mdl --features test.fea --labels test.lbl \\
                     --baseline-features train.fea --baseline-labels train.lbl
    """
    if report_path is not None and labels_path is None:
        raise click.UsageError("--report needs --labels")
    service = ScoringService(mode=LikelihoodMode(mode), threads=threads, deterministic=deterministic)
    result = service.classify(
        model_path, features_path, bg_path, select_n,
        candidate_states=list(candidate_states) or None, labels_path=labels_path,
        baseline_features_path=baseline_features_path, baseline_labels_path=baseline_labels_path,
    )
    for line in result.lines():
        out.write(line + "\n")
    if result.report is not None:
        if report_path is not None:
            report_path.write_text(result.report.to_tsv())
        if ctx.verbose:
            err_console.print(result.report.to_text(), highlight=False, markup=False, end="")
        elif not ctx.quiet:
            print_info(f"Frame accuracy {result.report.accuracy:.4f} over {result.report.frames} frames")
