"""Centered, unitary 2-D Fourier transforms over the last two axes.

DC sits at index (n // 2) on both axes, so image columns line up with the
k-space lines they came from.
"""

import numpy as np

from emiclean.core.errors import NonFiniteError

_AXES = (-2, -1)


def _check(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.complex128)
    if arr.ndim < 2:
        raise ValueError(f"expected at least 2 dimensions, got shape {arr.shape}")
    if min(arr.shape[-2:]) < 1:
        raise ValueError("rows and cols must be >= 1")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("FFT input contains non-finite values")
    return arr


def fft2c(img: np.ndarray) -> np.ndarray:
    """Image -> k-space. Works on stacks; only the last two axes are transformed."""
    img = _check(img)
    shifted = np.fft.ifftshift(img, axes=_AXES)
    return np.fft.fftshift(np.fft.fft2(shifted, axes=_AXES, norm="ortho"), axes=_AXES)


def ifft2c(ksp: np.ndarray) -> np.ndarray:
    """k-space -> image, inverse of fft2c."""
    ksp = _check(ksp)
    shifted = np.fft.ifftshift(ksp, axes=_AXES)
    return np.fft.fftshift(np.fft.ifft2(shifted, axes=_AXES, norm="ortho"), axes=_AXES)
