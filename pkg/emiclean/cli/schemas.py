import enum
from pathlib import Path

from pydantic import BaseModel, Field, model_validator

from emiclean.config import settings
from emiclean.editer.schemas import EditerConfig, EditerVariant
from emiclean.stride.schemas import StrideConfig


class Method(str, enum.Enum):
    STRIDE = "stride"
    EDITER_A = "editer_a"
    EDITER_B = "editer_b"
    NONE = "none"


_EDITER_VARIANTS = {Method.EDITER_A: EditerVariant.A, Method.EDITER_B: EditerVariant.B}


class RunConfig(BaseModel):
    """Settings of one `correct` run."""

    method: Method
    stride: StrideConfig | None = None
    editer: EditerConfig | None = None
    prewhiten: bool = False
    denoise_sensors: bool = False
    input_path: Path
    output_path: Path
    seed: int = Field(default_factory=lambda: settings.kmeans_seed)
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)

    @model_validator(mode="after")
    def match_parameter_block(self) -> "RunConfig":
        """The method's parameter block is filled in; blocks for other methods are rejected."""
        if self.method == Method.STRIDE:
            if self.editer is not None:
                raise ValueError("EDITER parameters given for method stride")
            self.stride = self.stride or StrideConfig()
        elif self.method in _EDITER_VARIANTS:
            if self.stride is not None:
                raise ValueError(f"STRIDE parameters given for method {self.method.value}")
            variant = _EDITER_VARIANTS[self.method]
            if self.editer is None:
                self.editer = EditerConfig(variant=variant, seed=self.seed)
            elif self.editer.variant != variant:
                raise ValueError(
                    f"EDITER variant {self.editer.variant.value} does not match method {self.method.value}"
                )
        elif self.stride is not None or self.editer is not None:
            raise ValueError("method none takes no correction parameters")
        return self


class RunRecord(BaseModel):
    """Contents of run.json."""

    config: RunConfig
    scenario: str
    repeats: int
    imaging_channels: int
    sensor_channels: int
