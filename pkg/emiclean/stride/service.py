"""TV-regularized per-column EMI subtraction.

For every image column y of an imaging coil the sensor image columns in a
window around it form U, and the subtraction coefficients minimize the
first-difference energy of what is left:

    A = argmin ||W (y - U A)||_2  =  pinv(W U) W y,    corrected = y - U A

Singular values of W U below ``pinv_rcond * sigma_max`` are dropped, giving
the minimum-norm solution when U is rank deficient or carries mostly DC.
When a whole image is corrected, sigma_max is by default the largest singular
value over all of its columns, so columns whose sensor data is only round-off
get no subtraction at all. CutoffScope.COLUMN takes it per column instead,
which reproduces solve_column exactly.
"""

import logging

import numpy as np

from emiclean.core.errors import NonFiniteError, ShapeMismatchError
from emiclean.core.models import Domain, MultiCoilAcquisition
from emiclean.stride.models import NoiseSubspace, SubspaceCoefficients, TvMatrix
from emiclean.stride.schemas import CutoffScope, StrideConfig

logger = logging.getLogger(__name__)


def pinv_stack(matrices: np.ndarray, rcond: float, per_matrix: bool = False) -> np.ndarray:
    """Pseudoinverse of every matrix in a (..., m, n) stack.

    Singular values at or below ``rcond`` times the largest singular value in
    the whole stack are treated as zero, or in each matrix when ``per_matrix``.
    """
    u, s, vh = np.linalg.svd(matrices, full_matrices=False)
    if per_matrix:
        cutoff = rcond * s.max(axis=-1, keepdims=True, initial=0.0)
    else:
        cutoff = rcond * s.max(initial=0.0)
    s_inv = np.zeros_like(s)
    np.divide(1.0, s, out=s_inv, where=s > cutoff)
    return np.conj(np.swapaxes(vh, -1, -2)) * s_inv[..., None, :] @ np.conj(np.swapaxes(u, -1, -2))


def build_tv_matrix(n: int) -> TvMatrix:
    """First-difference operator for columns of length ``n`` (n >= 2)."""
    return TvMatrix(n)


def window_columns(col: int, ky: int, delta_y: int) -> np.ndarray:
    """Indices of the ``delta_y`` columns centered on ``col``, shifted inward at the edges."""
    if delta_y > ky:
        raise ValueError(f"delta_y={delta_y} exceeds the number of image columns ({ky})")
    if not 0 <= col < ky:
        raise IndexError(f"column {col} outside [0, {ky})")
    start = min(max(col - delta_y // 2, 0), ky - delta_y)
    return np.arange(start, start + delta_y)


def _window_table(ky: int, delta_y: int) -> np.ndarray:
    """(ky, delta_y) window indices for every column at once."""
    if delta_y > ky:
        raise ValueError(f"delta_y={delta_y} exceeds the number of image columns ({ky})")
    starts = np.clip(np.arange(ky) - delta_y // 2, 0, ky - delta_y)
    return starts[:, None] + np.arange(delta_y)


def _stack_sensor_images(sensor_images) -> np.ndarray:
    sensors = np.asarray(sensor_images, dtype=np.complex128)
    if sensors.ndim == 2:
        sensors = sensors[None]
    if sensors.ndim != 3:
        raise ShapeMismatchError(f"sensor images must be (N_c, kx, ky), got shape {sensors.shape}")
    return sensors


def build_noise_subspace(sensor_images, col: int, cfg: StrideConfig | None = None) -> NoiseSubspace:
    """Stack each sensor's window of image columns around ``col`` into U."""
    cfg = cfg or StrideConfig()
    sensors = _stack_sensor_images(sensor_images)
    n_sensors, kx, ky = sensors.shape
    cols = window_columns(col, ky, cfg.delta_y)
    # (N_c, kx, delta_y) -> (kx, N_c * delta_y), sensor-major
    matrix = sensors[:, :, cols].transpose(1, 0, 2).reshape(kx, n_sensors * cfg.delta_y)
    return NoiseSubspace(matrix=matrix, columns=tuple(int(c) for c in cols), delta_y=cfg.delta_y)


def solve_column(
    y_img: np.ndarray,
    subspace: NoiseSubspace,
    tv: TvMatrix | None = None,
    rcond: float | None = None,
) -> tuple[SubspaceCoefficients, np.ndarray]:
    """Closed-form coefficients and the corrected column for one image column.

    Returns (coefficients, y_img - U @ coefficients).
    """
    y = np.asarray(y_img, dtype=np.complex128)
    U = np.asarray(subspace.matrix, dtype=np.complex128)
    tv = tv or build_tv_matrix(y.shape[0])
    rcond = StrideConfig().pinv_rcond if rcond is None else rcond

    if not 0.0 < rcond < 1.0:
        raise ValueError(f"rcond must lie in (0, 1), got {rcond}")
    if y.ndim != 1 or U.shape[0] != y.shape[0] or tv.n != y.shape[0]:
        raise ShapeMismatchError(f"column length {y.shape}, U {U.shape} and W {tv.shape} disagree")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(U))):
        raise NonFiniteError("column or noise subspace contains non-finite values")

    coeffs = pinv_stack(tv.apply(U), rcond) @ tv.apply(y)
    return SubspaceCoefficients(coeffs), y - U @ coeffs


def correct_coils(coil_images, sensor_images, cfg: StrideConfig | None = None) -> np.ndarray:
    """Correct every imaging coil of one repeat.

    coil_images is (N_i, kx, ky), sensor_images (N_c, kx, ky), both image domain.
    pinv(W U) depends only on the column and the sensors, so it is computed
    once per column and shared by all coils.
    """
    cfg = cfg or StrideConfig()
    coils = np.asarray(coil_images, dtype=np.complex128)
    sensors = _stack_sensor_images(sensor_images)
    if coils.ndim != 3 or coils.shape[1:] != sensors.shape[1:]:
        raise ShapeMismatchError(f"coil images {coils.shape} and sensor images {sensors.shape} disagree")
    if not (np.all(np.isfinite(coils)) and np.all(np.isfinite(sensors))):
        raise NonFiniteError("coil or sensor images contain non-finite values")

    n_sensors, kx, ky = sensors.shape
    n_coils = coils.shape[0]
    build_tv_matrix(kx)  # rejects kx < 2
    windows = _window_table(ky, cfg.delta_y)

    # U for every column: (ky, kx, N_c * delta_y)
    U = sensors[:, :, windows].transpose(2, 1, 0, 3).reshape(ky, kx, n_sensors * cfg.delta_y)
    Y = coils.transpose(2, 1, 0)  # (ky, kx, N_i)

    pinv_wu = pinv_stack(np.diff(U, axis=1), cfg.pinv_rcond, per_matrix=cfg.cutoff_scope == CutoffScope.COLUMN)
    coeffs = pinv_wu @ np.diff(Y, axis=1)  # (ky, N_c * delta_y, N_i)
    corrected = Y - U @ coeffs

    logger.debug(f"STRIDE corrected {n_coils} coils over {ky} columns with delta_y={cfg.delta_y}")
    return np.ascontiguousarray(corrected.transpose(2, 1, 0))


def correct_image(coil_image, sensor_images, cfg: StrideConfig | None = None) -> np.ndarray:
    """Correct a single kx x ky coil image against the sensor images of the same repeat."""
    coil = np.asarray(coil_image, dtype=np.complex128)
    if coil.ndim != 2:
        raise ShapeMismatchError(f"coil image must be 2-D, got shape {coil.shape}")
    return correct_coils(coil[None], sensor_images, cfg)[0]


def correct_acquisition(acq: MultiCoilAcquisition, cfg: StrideConfig | None = None) -> MultiCoilAcquisition:
    """Image-domain acquisition with every imaging coil corrected, repeat by repeat.

    Sensor channels are carried through unchanged (denoised when
    ``cfg.sensor_denoise`` is set).
    """
    cfg = cfg or StrideConfig()
    if acq.sensor_channels == 0:
        raise ValueError("STRIDE needs at least one EMI sensor channel")

    if cfg.sensor_denoise:
        from emiclean.prep.denoise import denoise_sensors

        acq = denoise_sensors(acq)

    images = acq.to_image()
    out = np.array(images.data)
    for r in range(images.repeats):
        out[r, : acq.imaging_channels] = correct_coils(images.coil_data[r], images.sensor_data[r], cfg)

    logger.info(f"STRIDE corrected {images.repeats} repeats x {acq.imaging_channels} coils (delta_y={cfg.delta_y})")
    return images.with_data(out, Domain.IMAGE)
