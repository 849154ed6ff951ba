from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MetricMaps:
    """Voxelwise metric maps over one image grid.

    Saturated SNR voxels and voxels with an undefined removal percentage are NaN.
    """

    snr: np.ndarray
    emi_removal_pct: np.ndarray
    rmse: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        shapes = {self.snr.shape, self.emi_removal_pct.shape, self.rmse.shape, self.mask.shape}
        if len(shapes) != 1:
            raise ValueError(f"metric maps disagree in shape: {sorted(shapes)}")
