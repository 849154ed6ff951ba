import enum

import numpy as np
from pydantic import BaseModel, Field, ValidationInfo, field_validator, model_validator

from emiclean.config import settings
from emiclean.prep.schemas import NoiseModel


class PhantomKind(str, enum.Enum):
    CONTRAST_DISCS = "contrast_discs"
    RESOLUTION_DOTS = "resolution_dots"
    UNIFORM_DISC = "uniform_disc"


class EmiKind(str, enum.Enum):
    NONE = "none"
    SQUARE_AM = "square_am"
    WHITE_AM = "white_am"
    SWEEP = "sweep"
    TONE = "tone"


class EmiScenario(BaseModel):
    """Interferer at baseband: offset from the receive center frequency plus modulation."""

    kind: EmiKind = EmiKind.NONE
    f_offset_hz: float = 0.0
    mod_rate_hz: float = Field(default=10_000.0, gt=0.0)
    sweep_span_hz: float = 10_000.0
    sweep_rate_hz: float = Field(default=1.0, gt=0.0)
    amplitude: float = Field(default=1.0, ge=0.0)

    @model_validator(mode="after")
    def check_sweep(self) -> "EmiScenario":
        if self.kind == EmiKind.SWEEP and self.sweep_span_hz <= 0:
            raise ValueError(f"sweep needs a positive span, got {self.sweep_span_hz}")
        return self

    @property
    def active(self) -> bool:
        return self.kind != EmiKind.NONE and self.amplitude > 0


class CouplingModel(BaseModel):
    """Per-channel EMI gains, MR sensitivities, thermal noise and sampling timing."""

    coil_gains: list[complex] = Field(min_length=1)
    sensor_gains: list[complex] = Field(default_factory=list)
    # MR sensitivity per imaging coil; all ones when omitted
    signal_gains: list[complex] | None = None
    sigma_img: float = Field(default_factory=lambda: settings.sigma_img, ge=0.0)
    sigma_emi: float = Field(default_factory=lambda: settings.sigma_emi, ge=0.0)
    dwell_s: float = Field(default_factory=lambda: settings.dwell_time_s, gt=0.0)
    tr_s: float = Field(default_factory=lambda: settings.tr_s, gt=0.0)
    coil_noise_correlation: float = Field(default=0.0, ge=0.0, lt=1.0)

    @field_validator("signal_gains")
    @classmethod
    def match_coils(cls, v: list[complex] | None, info: ValidationInfo) -> list[complex] | None:
        coils = info.data.get("coil_gains")
        if v is not None and coils is not None and len(v) != len(coils):
            raise ValueError(f"{len(v)} signal gains for {len(coils)} imaging coils")
        return v

    @property
    def n_coils(self) -> int:
        return len(self.coil_gains)

    @property
    def n_sensors(self) -> int:
        return len(self.sensor_gains)

    def coil_emi_gains(self) -> np.ndarray:
        return np.asarray(self.coil_gains, dtype=np.complex128)

    def sensor_emi_gains(self) -> np.ndarray:
        return np.asarray(self.sensor_gains, dtype=np.complex128).reshape(-1)

    def mr_gains(self) -> np.ndarray:
        if self.signal_gains is None:
            return np.ones(self.n_coils, dtype=np.complex128)
        return np.asarray(self.signal_gains, dtype=np.complex128)

    def noise_model(self) -> NoiseModel:
        return NoiseModel(sigma_img=self.sigma_img, sigma_emi=self.sigma_emi)

    def coil_noise_cholesky(self) -> np.ndarray:
        """Lower Cholesky factor of the uniform inter-coil correlation matrix."""
        rho = self.coil_noise_correlation
        corr = (1.0 - rho) * np.eye(self.n_coils) + rho * np.ones((self.n_coils, self.n_coils))
        return np.linalg.cholesky(corr)


def default_coupling(
    n_coils: int,
    n_sensors: int,
    sigma_img: float | None = None,
    sigma_emi: float | None = None,
    coil_noise_correlation: float = 0.0,
) -> CouplingModel:
    """Deterministic gains: coils and sensors see the interferer with distinct magnitudes and phases."""
    c = np.arange(n_coils)
    s = np.arange(n_sensors)
    coil_gains = np.exp(0.7j * (c + 1)) / (1.0 + 0.25 * c)
    sensor_gains = np.exp(0.3j * s) / (1.0 + s)
    signal_gains = np.exp(0.4j * c) / (1.0 + 0.1 * c)
    return CouplingModel(
        coil_gains=coil_gains.tolist(),
        sensor_gains=sensor_gains.tolist(),
        signal_gains=signal_gains.tolist(),
        sigma_img=settings.sigma_img if sigma_img is None else sigma_img,
        sigma_emi=settings.sigma_emi if sigma_emi is None else sigma_emi,
        coil_noise_correlation=coil_noise_correlation,
    )
