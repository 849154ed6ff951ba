"""Ground-truth acquisitions: phantom -> per-coil k-space -> EMI + thermal noise.

Each channel c receives gain_c * w(t) on top of its MR signal, where w is
the scenario waveform on the acquisition time grid, then complex Gaussian
noise with std sigma per real component (sigma_img on coils, sigma_emi on
sensors). Sensors carry no MR signal.
"""

import logging
from pathlib import Path

import numpy as np

from emiclean.config import settings
from emiclean.core.dataset import save_dataset
from emiclean.core.fourier import fft2c, ifft2c
from emiclean.core.models import Domain, MultiCoilAcquisition
from emiclean.core.schemas import AcquisitionMetadata
from emiclean.sim.phantom import Phantom
from emiclean.sim.schemas import CouplingModel, EmiScenario
from emiclean.sim.waveforms import acquisition_times, gen_emi_waveform

logger = logging.getLogger(__name__)

SeedLike = int | np.random.SeedSequence


def _seed_sequence(seed: SeedLike) -> np.random.SeedSequence:
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def _complex_normal(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def synthesize_kspace(phantom: Phantom, coil_gains) -> np.ndarray:
    """fft2c of the gain-scaled phantom for every imaging coil, shape (N_i, n, n)."""
    gains = np.asarray(coil_gains, dtype=np.complex128).reshape(-1)
    if gains.size == 0:
        raise ValueError("at least one imaging coil gain is required")
    return fft2c(gains[:, None, None] * phantom.intensity[None])


def inject_emi(
    clean_ksp: np.ndarray,
    scenario: EmiScenario,
    coupling: CouplingModel,
    seed: SeedLike,
    start_s: float = 0.0,
) -> MultiCoilAcquisition:
    """One k-space repeat: clean coil data (N_i, kx, ky) plus EMI and thermal noise on every channel.

    The waveform and the noise come from independent child streams of
    ``seed``; noise is always drawn so changing a sigma rescales the same
    realisation.
    """
    clean = np.asarray(clean_ksp, dtype=np.complex128)
    if clean.ndim != 3 or clean.shape[0] != coupling.n_coils:
        raise ValueError(f"clean k-space must be ({coupling.n_coils}, kx, ky), got {clean.shape}")
    coil_gains = coupling.coil_emi_gains()
    sensor_gains = coupling.sensor_emi_gains()
    if scenario.active and coupling.n_sensors and not np.any(sensor_gains):
        raise ValueError("active EMI needs at least one nonzero sensor gain")

    wave_seq, noise_seq = _seed_sequence(seed).spawn(2)
    n_coils, kx, ky = clean.shape
    n_sensors = coupling.n_sensors

    coils = clean.copy()
    sensors = np.zeros((n_sensors, kx, ky), dtype=np.complex128)
    if scenario.active:
        times = acquisition_times(kx, ky, coupling.dwell_s, coupling.tr_s, start_s)
        wave = gen_emi_waveform(scenario, times, np.random.default_rng(wave_seq))
        coils += coil_gains[:, None, None] * wave
        sensors += sensor_gains[:, None, None] * wave

    noise_rng = np.random.default_rng(noise_seq)
    coil_noise = np.tensordot(coupling.coil_noise_cholesky(), _complex_normal(noise_rng, (n_coils, kx, ky)), axes=1)
    sensor_noise = _complex_normal(noise_rng, (n_sensors, kx, ky))
    coils += coupling.sigma_img * coil_noise
    sensors += coupling.sigma_emi * sensor_noise

    return MultiCoilAcquisition(
        data=np.concatenate([coils, sensors])[None],
        imaging_channels=n_coils,
        sensor_channels=n_sensors,
        domain=Domain.KSPACE,
    )


def generate_noise_scan(coupling: CouplingModel, samples: int, seed: SeedLike) -> np.ndarray:
    """Thermal-only samples x channels scan with the same statistics as the acquisition noise."""
    rng = np.random.default_rng(_seed_sequence(seed))
    coil = _complex_normal(rng, (samples, coupling.n_coils)) @ coupling.coil_noise_cholesky().T
    sensor = _complex_normal(rng, (samples, coupling.n_sensors))
    return np.concatenate([coupling.sigma_img * coil, coupling.sigma_emi * sensor], axis=1)


def simulate_acquisition(
    phantom: Phantom,
    scenario: EmiScenario,
    coupling: CouplingModel,
    repeats: int = 1,
    seed: SeedLike = 0,
) -> tuple[MultiCoilAcquisition, np.ndarray]:
    """In-memory k-space acquisition and the EMI-free coil images (N_i, n, n).

    Repeat r starts at r * ky * TR, so the interferer's phase runs on across
    repeats; thermal noise is fresh per repeat.
    """
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    clean = synthesize_kspace(phantom, coupling.mr_gains())
    ky = clean.shape[2]
    children = _seed_sequence(seed).spawn(repeats)
    data = np.concatenate(
        [
            inject_emi(clean, scenario, coupling, child, start_s=r * ky * coupling.tr_s).data
            for r, child in enumerate(children)
        ]
    )
    acq = MultiCoilAcquisition(
        data=data,
        imaging_channels=coupling.n_coils,
        sensor_channels=coupling.n_sensors,
        domain=Domain.KSPACE,
    )
    return acq, ifft2c(clean)


def simulate_study(
    directory: str | Path,
    phantom: Phantom,
    scenario: EmiScenario,
    repeats: int,
    coupling: CouplingModel,
    seed: int,
    noise_samples: int | None = None,
) -> Path:
    """Simulate ``repeats`` acquisitions and write them, with a noise scan, as a dataset directory."""
    noise_samples = settings.noise_scan_samples if noise_samples is None else noise_samples
    acq_seed, noise_seed = np.random.SeedSequence(seed).spawn(2)
    acq, _ = simulate_acquisition(phantom, scenario, coupling, repeats, acq_seed)
    metadata = AcquisitionMetadata(
        scenario=scenario.kind.value,
        phantom=phantom.kind.value,
        fov_mm=settings.fov_mm,
        tr_s=coupling.tr_s,
        te_s=settings.te_s,
        seed=seed,
        extra={
            "emi": scenario.model_dump(mode="json"),
            "coupling": coupling.model_dump(mode="json"),
            "dwell_s": coupling.dwell_s,
        },
    )
    noise_scan = generate_noise_scan(coupling, noise_samples, noise_seed)
    path = save_dataset(directory, acq.with_metadata(metadata), noise_scan=noise_scan)
    logger.info(
        f"Simulated {scenario.kind.value} study: {repeats} repeats, {coupling.n_coils} coils, "
        f"{coupling.n_sensors} sensors, matrix {phantom.n}, seed {seed}"
    )
    return path
