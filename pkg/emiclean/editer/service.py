"""Transfer-function EMI removal in k-space.

Within each temporal group the coil data is regressed on sensor data
shifted over a (delta_kx x delta_ky) window, and the fit is subtracted.
"""

import logging

import numpy as np

from emiclean.core.models import Domain, MultiCoilAcquisition
from emiclean.editer.grouping import assign_groups_fixed, assign_groups_kmeans
from emiclean.editer.models import TemporalGrouping, TransferKernel
from emiclean.editer.schemas import EditerConfig, EditerVariant

logger = logging.getLogger(__name__)


def build_shift_regressors(sensor_ksp: np.ndarray, lines: np.ndarray, delta_kx: int, delta_ky: int) -> np.ndarray:
    """Regressor matrix for the PE lines ``lines``.

    sensor_ksp is (N_c, kx, ky). Column (s, dx, dy) holds sensor s sampled at
    (k + dx, j + dy) for every k and every j in ``lines``, flattened
    readout-major to match ``coil[:, lines].ravel()``. Shifts run over
    -w//2 .. +w//2 and read zeros outside the array.
    """
    sensors = np.asarray(sensor_ksp, dtype=np.complex128)
    if sensors.ndim == 2:
        sensors = sensors[None]
    lines = np.asarray(lines, dtype=np.int64)
    n_sensors, kx, _ = sensors.shape
    hx, hy = delta_kx // 2, delta_ky // 2
    padded = np.pad(sensors, ((0, 0), (hx, hx), (hy, hy)))

    columns = []
    for s in range(n_sensors):
        for dx in range(-hx, hx + 1):
            for dy in range(-hy, hy + 1):
                block = padded[s, hx + dx : hx + dx + kx][:, lines + hy + dy]
                columns.append(block.ravel())
    return np.stack(columns, axis=1)


def _fit_group(regressors: np.ndarray, targets: np.ndarray, rcond: float) -> tuple[np.ndarray, np.ndarray]:
    """Minimum-norm least squares for every target column. Returns (coefficients, residuals)."""
    coeffs = np.linalg.pinv(regressors, rcond=rcond) @ targets
    return coeffs, targets - regressors @ coeffs


def estimate_group_kernel(
    coil_lines: np.ndarray,
    sensor_lines: np.ndarray,
    delta_kx: int = 1,
    delta_ky: int = 1,
    rcond: float | None = None,
    lines: np.ndarray | None = None,
) -> TransferKernel:
    """Fit one coil's transfer kernel over a temporal group.

    coil_lines is (kx, n_lines). Without ``lines`` the sensor data is
    (N_c, kx, n_lines), aligned with the coil lines, and shifts past the
    group read zeros. With ``lines`` the sensor data is the full
    (N_c, kx, ky) k-space and ``lines`` picks the group's PE lines.

    Raises ValueError for an empty group.
    """
    coil = np.asarray(coil_lines, dtype=np.complex128)
    if coil.ndim == 1:
        coil = coil[:, None]
    if coil.shape[1] == 0:
        raise ValueError("temporal group is empty")
    rcond = EditerConfig().rcond if rcond is None else rcond

    sensors = np.asarray(sensor_lines, dtype=np.complex128)
    if sensors.ndim == 2:
        sensors = sensors[None]
    if lines is None:
        lines = np.arange(coil.shape[1])
    regressors = build_shift_regressors(sensors, lines, delta_kx, delta_ky)

    coeffs, residual = _fit_group(regressors, coil.ravel()[:, None], rcond)
    return TransferKernel(
        coefficients=coeffs[:, 0].reshape(sensors.shape[0], delta_kx, delta_ky),
        residual=residual[:, 0].reshape(coil.shape),
    )


def _grouping_for(coil_ksp: np.ndarray, sensor_ksp: np.ndarray, cfg: EditerConfig) -> TemporalGrouping:
    if cfg.variant == EditerVariant.A:
        return assign_groups_fixed(coil_ksp.shape[-1])
    return assign_groups_kmeans(coil_ksp, sensor_ksp, cfg.max_clusters, seed=cfg.seed, rcond=cfg.rcond)


def correct_repeat(coil_ksp: np.ndarray, sensor_ksp: np.ndarray, cfg: EditerConfig) -> np.ndarray:
    """Correct the (N_i, kx, ky) coil k-space of one repeat."""
    coils = np.array(coil_ksp, dtype=np.complex128)
    n_coils, kx, _ = coils.shape
    grouping = _grouping_for(coils, sensor_ksp, cfg)

    for g in range(grouping.n_groups):
        lines = grouping.lines(g)
        regressors = build_shift_regressors(sensor_ksp, lines, cfg.delta_kx, cfg.delta_ky)
        targets = coils[:, :, lines].reshape(n_coils, -1).T  # (kx * n_lines, N_i)
        _, residual = _fit_group(regressors, targets, cfg.rcond)
        coils[:, :, lines] = residual.T.reshape(n_coils, kx, lines.size)
    return coils


def correct_kspace(acq: MultiCoilAcquisition, cfg: EditerConfig | None = None) -> MultiCoilAcquisition:
    """k-space acquisition with every imaging coil corrected group by group."""
    cfg = cfg or EditerConfig()
    if acq.sensor_channels == 0:
        raise ValueError("EDITER needs at least one EMI sensor channel")

    ksp = acq.to_kspace()
    out = np.array(ksp.data)
    for r in range(ksp.repeats):
        out[r, : acq.imaging_channels] = correct_repeat(ksp.coil_data[r], ksp.sensor_data[r], cfg)

    logger.info(
        f"EDITER {cfg.variant.value} corrected {ksp.repeats} repeats "
        f"(delta_kx={cfg.delta_kx}, delta_ky={cfg.delta_ky})"
    )
    return ksp.with_data(out, Domain.KSPACE)
