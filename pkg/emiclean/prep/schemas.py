import enum

from pydantic import BaseModel, Field

from emiclean.config import settings


class NoiseModel(BaseModel):
    """Thermal noise std per real component, imaging coils and EMI sensors."""

    sigma_img: float = Field(default_factory=lambda: settings.sigma_img, ge=0.0)
    sigma_emi: float = Field(default_factory=lambda: settings.sigma_emi, ge=0.0)

    @property
    def sensor_entry_std(self) -> float:
        """Std of one complex sensor sample, sqrt(E|n|^2)."""
        return self.sigma_emi * 2**0.5


class SensorDenoiseLayout(str, enum.Enum):
    REPEATS = "repeats"  # rows = repeats, columns = flattened kx * ky
    READOUT = "readout"  # one kx x ky matrix per repeat
