"""Noise pre-whitening from a noise-only scan."""

import logging

import numpy as np
from scipy import linalg

from emiclean.config import settings
from emiclean.core.errors import NonFiniteError, NotPositiveDefiniteError, ShapeMismatchError
from emiclean.core.models import MultiCoilAcquisition
from emiclean.prep.models import NoiseCovariance, WhiteningTransform

logger = logging.getLogger(__name__)


def estimate_noise_covariance(noise_samples: np.ndarray) -> NoiseCovariance:
    """Psi[i, j] = mean over samples of n_i * conj(n_j).

    noise_samples is (samples, channels). An empty scan gives a zero matrix.
    """
    noise = np.asarray(noise_samples, dtype=np.complex128)
    if noise.ndim != 2:
        raise ShapeMismatchError(f"noise samples must be (samples, channels), got shape {noise.shape}")
    if not np.all(np.isfinite(noise)):
        raise NonFiniteError("noise scan contains non-finite values")

    n_samples, n_channels = noise.shape
    if n_samples == 0:
        return NoiseCovariance(np.zeros((n_channels, n_channels), dtype=np.complex128), 0)

    psi = noise.T @ noise.conj() / n_samples
    psi = 0.5 * (psi + psi.conj().T)  # exact Hermitian symmetry
    return NoiseCovariance(psi, n_samples)


def whitening_transform(cov: NoiseCovariance, ridge: float | None = None) -> WhiteningTransform:
    """Inverse Cholesky factor of Psi + ridge * I.

    The default ridge is whitening_ridge_scale * trace(Psi) / N. Raises
    NotPositiveDefiniteError when the regularized matrix has no Cholesky factor.
    """
    psi = np.asarray(cov.matrix, dtype=np.complex128)
    n = psi.shape[0]
    if ridge is None:
        ridge = settings.whitening_ridge_scale * float(np.trace(psi).real) / n

    regularized = psi + ridge * np.eye(n)
    try:
        lower = linalg.cholesky(regularized, lower=True)
    except linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(f"noise covariance is not positive definite (ridge={ridge:g})") from e

    inverse = linalg.solve_triangular(lower, np.eye(n, dtype=np.complex128), lower=True)
    return WhiteningTransform(inverse)


def apply_prewhitening(acq: MultiCoilAcquisition, transform: WhiteningTransform) -> MultiCoilAcquisition:
    """Multiply channel vectors by L^-1 at every (repeat, kx, ky).

    A transform sized for the imaging channels leaves the sensors untouched;
    one sized for all channels mixes them all.
    """
    n_all = acq.data.shape[1]
    n = transform.n_channels
    if n not in (acq.imaging_channels, n_all):
        raise ShapeMismatchError(
            f"whitening transform is {n} x {n}; acquisition has {acq.imaging_channels} imaging / {n_all} channels"
        )

    out = np.array(acq.data)
    out[:, :n] = np.einsum("ij,rjxy->rixy", transform.matrix, acq.data[:, :n])
    logger.info(f"Pre-whitened {n} of {n_all} channels")
    return acq.with_data(out)
