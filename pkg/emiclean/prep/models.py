from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NoiseCovariance:
    """Channel noise covariance from a noise-only scan."""

    matrix: np.ndarray
    samples: int

    @property
    def n_channels(self) -> int:
        return self.matrix.shape[0]

    def block(self, channels: slice | np.ndarray) -> "NoiseCovariance":
        """Covariance restricted to a subset of channels."""
        idx = np.arange(self.n_channels)[channels]
        return NoiseCovariance(self.matrix[np.ix_(idx, idx)], self.samples)


@dataclass(frozen=True)
class WhiteningTransform:
    """L^-1 where Psi + ridge * I = L L^H."""

    matrix: np.ndarray

    @property
    def n_channels(self) -> int:
        return self.matrix.shape[0]
