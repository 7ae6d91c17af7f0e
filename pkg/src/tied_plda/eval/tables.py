"""Parameter-count tables."""

from typing import List, Sequence, Tuple

from ..models.params import TiedPldaModel, count_params
from ..models.reports import ParamRow

HEADERS = ("System", "Dim", "State-dependent", "State-independent")


def param_table(models: Sequence[Tuple[str, TiedPldaModel]]) -> List[ParamRow]:
    """One row per named model, counting active parameters."""
    rows = []
    for name, model in models:
        dependent, independent = count_params(model)
        rows.append(
            ParamRow(system=name, d=model.hyper.d, state_dependent=dependent, state_independent=independent)
        )
    return rows


def _cells(row: ParamRow) -> Tuple[str, str, str, str]:
    return (row.system, str(row.d), f"{row.state_dependent:,}", f"{row.state_independent:,}")


def format_param_table(rows: Sequence[ParamRow]) -> str:
    """Aligned text; the system column is left-aligned and counts right-aligned."""
    if not rows:
        return ""
    table = [HEADERS] + [_cells(row) for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(HEADERS))]
    lines = []
    for n, r in enumerate(table):
        cells = [r[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def param_table_tsv(rows: Sequence[ParamRow]) -> str:
    """Tab-separated rows with a header line; empty for no rows."""
    if not rows:
        return ""
    lines = ["system\td\tstate_dependent\tstate_independent"]
    lines.extend(f"{r.system}\t{r.d}\t{r.state_dependent}\t{r.state_independent}" for r in rows)
    return "\n".join(lines) + "\n"
