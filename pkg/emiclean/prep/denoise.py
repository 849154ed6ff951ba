"""Hard-threshold SVD denoising of EMI sensor channels.

Singular values below the optimal hard threshold for white noise are
zeroed. With unknown noise level the threshold is omega(beta) times the
median singular value, omega(beta) = lambda*(beta) / sqrt(mu_beta) where
mu_beta is the median of the Marchenko-Pastur law with aspect ratio beta.
"""

import logging
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from emiclean.core.errors import NumericalError
from emiclean.core.models import MultiCoilAcquisition
from emiclean.prep.schemas import NoiseModel, SensorDenoiseLayout

logger = logging.getLogger(__name__)


def optimal_lambda(beta: float) -> float:
    """lambda*(beta) for the known-noise rule; beta = rows / cols in (0, 1]."""
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"aspect ratio must lie in (0, 1], got {beta}")
    return float(np.sqrt(2.0 * (beta + 1.0) + 8.0 * beta / ((beta + 1.0) + np.sqrt(beta**2 + 14.0 * beta + 1.0))))


@lru_cache(maxsize=256)
def marchenko_pastur_median(beta: float) -> float:
    """Median of the Marchenko-Pastur distribution (unit variance), found by bisection."""
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"aspect ratio must lie in (0, 1], got {beta}")
    lower = (1.0 - np.sqrt(beta)) ** 2
    upper = (1.0 + np.sqrt(beta)) ** 2

    def density(x: float) -> float:
        if x <= 0.0:
            return 0.0
        return np.sqrt(max((upper - x) * (x - lower), 0.0)) / (2.0 * np.pi * beta * x)

    def excess_mass(mu: float) -> float:
        if mu <= lower:
            return -0.5
        mass, _ = integrate.quad(density, lower, mu, limit=200)
        return mass - 0.5

    try:
        return float(optimize.bisect(excess_mass, lower, upper, xtol=1e-12))
    except ValueError as e:
        raise NumericalError(f"Marchenko-Pastur median for beta={beta} did not converge: {e}") from e


def hard_threshold_omega(beta: float) -> float:
    """omega(beta): threshold / median singular value for the unknown-noise rule."""
    return optimal_lambda(beta) / float(np.sqrt(marchenko_pastur_median(beta)))


def optimal_hard_threshold(
    beta: float,
    sigma_known: float | None = None,
    n_cols: int = 1,
    median_singular_value: float | None = None,
) -> float:
    """Hard threshold for singular values of a rows x cols matrix (rows <= cols).

    Known noise: ``sigma_known`` is the per-entry noise std and the threshold is
    lambda*(beta) * sqrt(n_cols) * sigma_known. Unknown noise: pass
    ``median_singular_value`` instead.
    """
    if sigma_known is not None:
        if sigma_known < 0:
            raise ValueError(f"sigma_known must be non-negative, got {sigma_known}")
        return optimal_lambda(beta) * float(np.sqrt(n_cols)) * sigma_known
    if median_singular_value is None:
        raise ValueError("either sigma_known or median_singular_value is required")
    return hard_threshold_omega(beta) * median_singular_value


def denoise_matrix(matrix: np.ndarray, sigma: float | None = None) -> tuple[np.ndarray, int]:
    """Zero the singular values under the optimal threshold. Returns (denoised, kept rank)."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    rows, cols = matrix.shape
    u, s, vh = np.linalg.svd(matrix, full_matrices=False)
    beta = min(rows, cols) / max(rows, cols)
    tau = optimal_hard_threshold(
        beta,
        sigma_known=sigma,
        n_cols=max(rows, cols),
        median_singular_value=float(np.median(s)),
    )
    keep = s > tau
    rank = int(keep.sum())
    if rank == 0:
        return np.zeros_like(matrix), 0
    return (u[:, keep] * s[keep]) @ vh[keep], rank


def denoise_sensors(
    acq: MultiCoilAcquisition,
    layout: SensorDenoiseLayout = SensorDenoiseLayout.REPEATS,
    noise: NoiseModel | None = None,
) -> MultiCoilAcquisition:
    """Denoise every sensor channel; imaging channels are untouched.

    REPEATS stacks the repeats of a channel as rows of a repeats x (kx * ky)
    matrix; READOUT denoises each repeat's kx x ky matrix. Fewer than two
    repeats forces READOUT. With a ``noise`` model the threshold uses the
    known sensor noise level instead of the median singular value.
    """
    sigma = None if noise is None else noise.sensor_entry_std
    if acq.sensor_channels == 0:
        raise ValueError("acquisition has no sensor channels to denoise")
    layout = SensorDenoiseLayout(layout)
    if layout == SensorDenoiseLayout.REPEATS and acq.repeats < 2:
        logger.warning("Single repeat: denoising sensors per acquisition (readout layout)")
        layout = SensorDenoiseLayout.READOUT

    out = np.array(acq.data)
    start = acq.imaging_channels
    for c in range(acq.sensor_channels):
        channel = acq.data[:, start + c]
        if layout == SensorDenoiseLayout.REPEATS:
            denoised, rank = denoise_matrix(channel.reshape(acq.repeats, -1), sigma)
            out[:, start + c] = denoised.reshape(channel.shape)
            logger.info(f"Sensor {c}: kept rank {rank} of {acq.repeats}")
        else:
            for r in range(acq.repeats):
                out[r, start + c], rank = denoise_matrix(channel[r], sigma)
                logger.debug(f"Sensor {c}, repeat {r}: kept rank {rank}")
    return acq.with_data(out)
