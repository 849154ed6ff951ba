import enum
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from emiclean.core.errors import NonFiniteError, ShapeMismatchError

if TYPE_CHECKING:
    from emiclean.core.schemas import AcquisitionMetadata


class Domain(str, enum.Enum):
    KSPACE = "kspace"
    IMAGE = "image"


def as_complex_array(data, ndim: int | None = None, name: str = "array") -> np.ndarray:
    """Return a read-only complex128 copy of ``data``, rejecting NaN/Inf."""
    arr = np.array(data, dtype=np.complex128, copy=True)
    if ndim is not None and arr.ndim != ndim:
        raise ShapeMismatchError(f"{name} must be {ndim}-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MultiCoilAcquisition:
    """Repeated multi-channel acquisition, shape (repeats, channels, kx, ky).

    Channels are ordered imaging coils first, then EMI sensors.
    """

    data: np.ndarray
    imaging_channels: int
    sensor_channels: int
    domain: Domain
    metadata: "AcquisitionMetadata | None" = field(default=None, compare=False)

    def __post_init__(self):
        arr = as_complex_array(self.data, ndim=4, name="acquisition data")
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "domain", Domain(self.domain))
        if self.imaging_channels < 1:
            raise ValueError("at least one imaging channel is required")
        if self.sensor_channels < 0:
            raise ValueError("sensor_channels must be non-negative")
        if arr.shape[1] != self.imaging_channels + self.sensor_channels:
            raise ShapeMismatchError(
                f"data has {arr.shape[1]} channels, expected "
                f"{self.imaging_channels} imaging + {self.sensor_channels} sensor"
            )

    @property
    def repeats(self) -> int:
        return self.data.shape[0]

    @property
    def kx(self) -> int:
        return self.data.shape[2]

    @property
    def ky(self) -> int:
        return self.data.shape[3]

    @property
    def coil_data(self) -> np.ndarray:
        """Imaging channels, shape (repeats, N_i, kx, ky)."""
        return self.data[:, : self.imaging_channels]

    @property
    def sensor_data(self) -> np.ndarray:
        """EMI sensor channels, shape (repeats, N_c, kx, ky)."""
        return self.data[:, self.imaging_channels :]

    def with_data(self, data: np.ndarray, domain: Domain | None = None) -> "MultiCoilAcquisition":
        """Same channel layout and metadata around new data."""
        return MultiCoilAcquisition(
            data=data,
            imaging_channels=self.imaging_channels,
            sensor_channels=self.sensor_channels,
            domain=domain or self.domain,
            metadata=self.metadata,
        )

    def with_metadata(self, metadata: "AcquisitionMetadata | None") -> "MultiCoilAcquisition":
        return MultiCoilAcquisition(
            data=self.data,
            imaging_channels=self.imaging_channels,
            sensor_channels=self.sensor_channels,
            domain=self.domain,
            metadata=metadata,
        )

    def to_image(self) -> "MultiCoilAcquisition":
        """ifft2c every channel. Already image-domain data is returned as is."""
        from emiclean.core.fourier import ifft2c

        if self.domain == Domain.IMAGE:
            return self
        return self.with_data(ifft2c(self.data), Domain.IMAGE)

    def to_kspace(self) -> "MultiCoilAcquisition":
        """fft2c every channel. Already k-space data is returned as is."""
        from emiclean.core.fourier import fft2c

        if self.domain == Domain.KSPACE:
            return self
        return self.with_data(fft2c(self.data), Domain.KSPACE)
