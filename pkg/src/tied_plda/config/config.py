"""Training configuration."""

from pathlib import Path
from typing import Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from ..errors import DataFormatError
from ..inference.likelihood import LikelihoodMode

# EM driver constants that are not configuration keys.
STARVATION_PATIENCE = 3
STARVATION_OCCUPANCY = 1.0
RIDGE_SCALE = 1e-8
SHARD_SIZE = 4096


class TrainingConfig(BaseModel):
    """Configuration for EM training and scoring.

    Field aliases are the keys of the ``key = value`` configuration file.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    iterations: int = Field(default=10, ge=0, description="Number of EM iterations")
    weight_floor: float = Field(
        default=1e-5, ge=0.0, lt=1.0, alias="weight-floor", description="Floor applied to component weights"
    )
    variance_floor_scale: float = Field(
        default=1e-6, ge=0.0, alias="variance-floor-scale",
        description="Residual variance floor as a fraction of the global per-dimension data variance",
    )
    select_n: Optional[int] = Field(
        default=15, ge=1, alias="select-n",
        description="Components pre-selected per frame by the background model (None = all)",
    )
    deterministic: bool = Field(default=False, description="Fixed shard boundaries and merge order")
    seed: int = Field(default=0, ge=0, description="Seed for every random draw")
    likelihood_mode: LikelihoodMode = Field(
        default=LikelihoodMode.UNCERTAINTY, alias="likelihood-mode",
        description="Likelihood used for responsibilities and scoring",
    )

    @field_validator("select_n", mode="before")
    @classmethod
    def _all_components(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("all", "none"):
            return None
        return value

    def with_overrides(self, **changes) -> "TrainingConfig":
        return self.model_copy(update=changes)


def parse_training_config(text: str, source: str = "<config>") -> TrainingConfig:
    """Parse ``key = value`` lines; blank lines and ``#`` comments are ignored.

    Raises:
        DataFormatError: malformed line, duplicate or unknown key, invalid value.
    """
    values: Dict[str, str] = {}
    known = {field.alias or name for name, field in TrainingConfig.model_fields.items()}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataFormatError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise DataFormatError(f"{source}:{lineno}: unknown configuration key {key!r}")
        if key in values:
            raise DataFormatError(f"{source}:{lineno}: duplicate configuration key {key!r}")
        values[key] = value

    try:
        return TrainingConfig.model_validate(values)
    except ValidationError as exc:
        error = exc.errors()[0]
        key = error["loc"][0] if error["loc"] else "?"
        raise DataFormatError(f"{source}: invalid value for {key!r}: {error['msg']}") from None


def load_training_config(path: Optional[Union[str, Path]] = None) -> TrainingConfig:
    """Load a configuration file, or the defaults when ``path`` is None."""
    if path is None:
        return TrainingConfig()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataFormatError(f"{path}: configuration file not found") from None
    return parse_training_config(text, str(path))
