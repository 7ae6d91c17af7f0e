"""Report models produced by training and evaluation."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class EmReport(BaseModel):
    """Summary of one EM iteration."""

    iteration: int = Field(..., ge=0, description="Iteration index, starting at 0")
    avg_loglik: float = Field(..., description="Average per-frame log-likelihood of the model entering the iteration")
    frames: float = Field(..., ge=0.0, description="Total state-posterior mass seen by the E-step")
    aux_deltas: Dict[str, float] = Field(
        default_factory=dict, description="Auxiliary-function change per closed-form update (U, G, b, Lambda)"
    )
    floored_weights: int = Field(0, ge=0, description="Component weights raised to the weight floor")
    floored_variances: int = Field(0, ge=0, description="Residual variances raised to the variance floor")
    ridge_count: int = Field(0, ge=0, description="Moment matrices that needed ridge regularisation")
    frozen_components: int = Field(0, ge=0, description="Components skipped for zero occupancy")
    merged_substates: int = Field(0, ge=0, description="Starved sub-states merged into a sibling")
    active_histogram: Dict[int, int] = Field(
        default_factory=dict, description="Number of states by count of active component weights"
    )
    substate_occupancy: List[List[float]] = Field(
        default_factory=list, description="Per-state, per-sub-state occupancy from the second sweep"
    )

    def to_line(self) -> str:
        """One tab-separated line for the training stream."""
        fields = [
            f"iteration={self.iteration}",
            f"avg_loglik={self.avg_loglik:.10g}",
            f"frames={self.frames:.10g}",
        ]
        for name in ("U", "G", "b", "Lambda"):
            if name in self.aux_deltas:
                fields.append(f"dQ_{name}={self.aux_deltas[name]:.6g}")
        fields.extend([
            f"floored_weights={self.floored_weights}",
            f"floored_variances={self.floored_variances}",
            f"ridge={self.ridge_count}",
            f"frozen={self.frozen_components}",
            f"merged={self.merged_substates}",
        ])
        histogram = ",".join(f"{k}:{v}" for k, v in sorted(self.active_histogram.items()))
        fields.append(f"active={histogram}")
        return "\t".join(fields)


class ParamRow(BaseModel):
    """One row of a parameter-count table."""

    system: str
    d: int = Field(..., gt=0)
    state_dependent: int = Field(..., ge=0)
    state_independent: int = Field(..., ge=0)


class EvalReport(BaseModel):
    """Frame classification and likelihood summary."""

    frames: int = Field(..., ge=0)
    accuracy: float = Field(..., ge=0.0, le=1.0)
    avg_loglik: float
    confusion: List[List[int]] = Field(..., description="Rows are reference states, columns hypotheses")
    param_rows: List[ParamRow] = Field(default_factory=list)
    baseline_accuracy: Optional[float] = Field(None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _confusion_consistent(self) -> "EvalReport":
        total = sum(sum(row) for row in self.confusion)
        if total != self.frames:
            raise ValueError(f"confusion counts sum to {total}, expected {self.frames} frames")
        if self.frames:
            correct = sum(self.confusion[i][i] for i in range(len(self.confusion)))
            if abs(correct / self.frames - self.accuracy) > 1e-12:
                raise ValueError("accuracy disagrees with the confusion matrix trace")
        return self

    def metrics(self) -> Dict[str, float]:
        values: Dict[str, float] = {
            "frames": self.frames,
            "accuracy": self.accuracy,
            "avg_loglik": self.avg_loglik,
        }
        if self.baseline_accuracy is not None:
            values["baseline_accuracy"] = self.baseline_accuracy
        for row in self.param_rows:
            values[f"params.{row.system}.state_dependent"] = row.state_dependent
            values[f"params.{row.system}.state_independent"] = row.state_independent
        return values

    def to_tsv(self) -> str:
        """One metric per line, ``name<TAB>value``."""
        lines = []
        for name, value in self.metrics().items():
            if isinstance(value, float):
                lines.append(f"{name}\t{value:.10g}")
            else:
                lines.append(f"{name}\t{value}")
        for i, row in enumerate(self.confusion):
            lines.append(f"confusion.{i}\t{','.join(str(v) for v in row)}")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            f"Frames:              {self.frames}",
            f"Frame accuracy:      {self.accuracy:.4f}",
            f"Average log-lik:     {self.avg_loglik:.4f}",
        ]
        if self.baseline_accuracy is not None:
            lines.append(f"Baseline accuracy:   {self.baseline_accuracy:.4f}")
        if self.confusion:
            width = max(len(str(v)) for row in self.confusion for v in row)
            width = max(width, len(str(len(self.confusion) - 1)))
            lines.append("Confusion (rows = reference):")
            for i, row in enumerate(self.confusion):
                cells = " ".join(str(v).rjust(width) for v in row)
                lines.append(f"  {str(i).rjust(width)} | {cells}")
        return "\n".join(lines) + "\n"
