from typing import Any

from pydantic import BaseModel, Field, model_validator

from emiclean.core.models import Domain


class AcquisitionMetadata(BaseModel):
    """Informational acquisition parameters. None of these affect the algorithms."""

    scenario: str = "none"
    phantom: str | None = None
    fov_mm: float | None = None
    tr_s: float | None = None
    te_s: float | None = None
    seed: int | None = None
    extra: dict[str, Any] = Field(default_factory=dict)


class DatasetManifest(BaseModel):
    repeats: int = Field(ge=1)
    imaging_channels: int = Field(ge=1)
    sensor_channels: int = Field(ge=0)
    kx: int = Field(ge=1)
    ky: int = Field(ge=1)
    domain: Domain
    channel_roles: list[str]
    files: list[str]
    noise_scan: str | None = None
    metadata: AcquisitionMetadata = Field(default_factory=AcquisitionMetadata)

    @model_validator(mode="after")
    def check_counts(self) -> "DatasetManifest":
        """Channel roles and file list must agree with the declared counts."""
        n_channels = self.imaging_channels + self.sensor_channels
        expected_roles = ["imaging"] * self.imaging_channels + ["sensor"] * self.sensor_channels
        if self.channel_roles != expected_roles:
            raise ValueError(
                f"channel_roles lists {len(self.channel_roles)} entries, expected imaging channels "
                f"first then sensors ({self.imaging_channels} + {self.sensor_channels})"
            )
        if len(self.files) != self.repeats * n_channels:
            raise ValueError(f"manifest lists {len(self.files)} files, expected {self.repeats * n_channels}")
        return self
