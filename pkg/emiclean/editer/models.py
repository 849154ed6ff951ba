from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TemporalGrouping:
    """PE-line index -> group id, ids contiguous from 0."""

    assignment: np.ndarray

    def __post_init__(self):
        assignment = np.asarray(self.assignment, dtype=np.int64)
        if assignment.ndim != 1 or assignment.size == 0:
            raise ValueError("assignment must be a non-empty 1-D array")
        ids = np.unique(assignment)
        if ids[0] != 0 or ids[-1] != ids.size - 1:
            raise ValueError(f"group ids must be contiguous from 0, got {ids.tolist()}")
        assignment.setflags(write=False)
        object.__setattr__(self, "assignment", assignment)

    @property
    def n_groups(self) -> int:
        return int(self.assignment.max()) + 1

    def lines(self, group: int) -> np.ndarray:
        """PE lines belonging to ``group``, ascending."""
        return np.flatnonzero(self.assignment == group)


@dataclass(frozen=True)
class TransferKernel:
    """Sensor -> coil transfer coefficients over the shift window.

    ``coefficients`` has shape (N_c, delta_kx, delta_ky); ``residual`` is the
    group's coil data after subtraction, shape (kx, n_lines).
    """

    coefficients: np.ndarray
    residual: np.ndarray

    @property
    def flat(self) -> np.ndarray:
        return self.coefficients.reshape(-1)
