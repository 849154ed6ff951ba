import enum

from pydantic import BaseModel, Field, field_validator

from emiclean.config import settings


class CutoffScope(str, enum.Enum):
    IMAGE = "image"  # rcond x largest singular value over every column of the image
    COLUMN = "column"  # rcond x largest singular value of each column's W U


class StrideConfig(BaseModel):
    delta_y: int = Field(default_factory=lambda: settings.stride_delta_y, ge=1)
    pinv_rcond: float = Field(default_factory=lambda: settings.pinv_rcond, gt=0.0, lt=1.0)
    cutoff_scope: CutoffScope = CutoffScope.IMAGE
    sensor_denoise: bool = False

    @field_validator("delta_y")
    @classmethod
    def odd_window(cls, v: int) -> int:
        """The sensor window is centered on the target column, so its width must be odd."""
        if v % 2 == 0:
            raise ValueError(f"delta_y must be odd, got {v}")
        return v
