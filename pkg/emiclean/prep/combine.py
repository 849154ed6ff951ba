import numpy as np


def sos_combine(coil_images: np.ndarray, axis: int = 0) -> np.ndarray:
    """Root sum of squared magnitudes over the channel axis. Real, non-negative."""
    coil_images = np.asarray(coil_images)
    return np.sqrt(np.sum(np.abs(coil_images) ** 2, axis=axis))


def complex_average(images) -> np.ndarray:
    """Elementwise mean of a sequence (or leading axis) of complex images."""
    stack = np.asarray(images, dtype=np.complex128)
    if stack.shape[0] == 0:
        raise ValueError("cannot average an empty sequence")
    return stack.mean(axis=0)
