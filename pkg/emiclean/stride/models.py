from dataclasses import dataclass

import numpy as np
from scipy import sparse


@dataclass(frozen=True)
class TvMatrix:
    """(n-1) x n first-difference operator: W[i, i] = -1, W[i, i+1] = +1."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"TV matrix needs n >= 2, got {self.n}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n - 1, self.n)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """W @ v along axis 0, without forming the matrix."""
        v = np.asarray(v)
        if v.shape[0] != self.n:
            raise ValueError(f"operand has {v.shape[0]} rows, W expects {self.n}")
        return np.diff(v, axis=0)

    def as_sparse(self) -> sparse.csr_matrix:
        return sparse.diags([-1.0, 1.0], offsets=[0, 1], shape=self.shape, format="csr")

    def dense(self) -> np.ndarray:
        return self.as_sparse().toarray()


@dataclass(frozen=True)
class NoiseSubspace:
    """kx x (N_c * delta_y) matrix of EMI-sensor image columns.

    Columns are sensor-major: sensor 0's window first, then sensor 1's.
    ``columns`` holds the source image column of each window position.
    """

    matrix: np.ndarray
    columns: tuple[int, ...]
    delta_y: int
    delta_x: int = 1

    @property
    def n_sensors(self) -> int:
        return self.matrix.shape[1] // self.delta_y


@dataclass(frozen=True)
class SubspaceCoefficients:
    values: np.ndarray
