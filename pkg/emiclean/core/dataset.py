"""Dataset directories: one container per (repeat, channel) plus manifest.json."""

import json
import logging
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from emiclean.core.container import load_array, save_array
from emiclean.core.errors import DataFormatError, ManifestMismatchError
from emiclean.core.models import MultiCoilAcquisition
from emiclean.core.schemas import AcquisitionMetadata, DatasetManifest

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
NOISE_SCAN_NAME = "noise.sca"
CHANNEL_GLOB = "rep*_ch*.sca"


def channel_filename(repeat: int, channel: int) -> str:
    return f"rep{repeat:03d}_ch{channel:02d}.sca"


def save_dataset(
    directory: str | Path,
    acq: MultiCoilAcquisition,
    noise_scan: np.ndarray | None = None,
) -> Path:
    """Write ``acq`` (and an optional samples x channels noise scan) to ``directory``."""
    if noise_scan is not None:
        noise_scan = np.asarray(noise_scan)
        if noise_scan.ndim != 2 or noise_scan.shape[1] != acq.data.shape[1]:
            raise ManifestMismatchError(
                f"noise scan shape {noise_scan.shape} does not match {acq.data.shape[1]} channels"
            )

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stale = sorted(directory.glob(CHANNEL_GLOB))
    for path in stale:
        path.unlink()
    if stale:
        logger.info(f"Removed {len(stale)} channel files left in {directory}")
    (directory / NOISE_SCAN_NAME).unlink(missing_ok=True)

    files: list[str] = []
    for r in range(acq.repeats):
        for c in range(acq.data.shape[1]):
            name = channel_filename(r, c)
            save_array(directory / name, acq.data[r, c])
            files.append(name)

    noise_name = None
    if noise_scan is not None:
        save_array(directory / NOISE_SCAN_NAME, noise_scan)
        noise_name = NOISE_SCAN_NAME

    manifest = DatasetManifest(
        repeats=acq.repeats,
        imaging_channels=acq.imaging_channels,
        sensor_channels=acq.sensor_channels,
        kx=acq.kx,
        ky=acq.ky,
        domain=acq.domain,
        channel_roles=["imaging"] * acq.imaging_channels + ["sensor"] * acq.sensor_channels,
        files=files,
        noise_scan=noise_name,
        metadata=acq.metadata or AcquisitionMetadata(),
    )
    (directory / MANIFEST_NAME).write_text(manifest.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Saved dataset to {directory}: {acq.repeats} repeats x {acq.data.shape[1]} channels")
    return directory


def read_manifest(directory: str | Path) -> DatasetManifest:
    path = Path(directory) / MANIFEST_NAME
    if not path.is_file():
        raise DataFormatError(f"{directory} has no {MANIFEST_NAME}")
    try:
        return DatasetManifest.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (ValidationError, json.JSONDecodeError) as e:
        raise ManifestMismatchError(f"invalid manifest in {directory}: {e}") from e


def load_dataset(directory: str | Path) -> MultiCoilAcquisition:
    """Load a dataset directory written by save_dataset.

    Raises ManifestMismatchError when the manifest and the channel files disagree.
    """
    directory = Path(directory)
    manifest = read_manifest(directory)
    n_channels = manifest.imaging_channels + manifest.sensor_channels

    on_disk = sorted(p.name for p in directory.glob(CHANNEL_GLOB))
    if on_disk != sorted(manifest.files):
        raise ManifestMismatchError(
            f"{directory}: manifest lists {len(manifest.files)} channel files, found {len(on_disk)}"
        )

    data = np.empty((manifest.repeats, n_channels, manifest.kx, manifest.ky), dtype=np.complex128)
    for r in range(manifest.repeats):
        for c in range(n_channels):
            arr = load_array(directory / channel_filename(r, c))
            if arr.shape != (manifest.kx, manifest.ky):
                raise ManifestMismatchError(
                    f"{channel_filename(r, c)} has shape {arr.shape}, manifest says {(manifest.kx, manifest.ky)}"
                )
            data[r, c] = arr

    return MultiCoilAcquisition(
        data=data,
        imaging_channels=manifest.imaging_channels,
        sensor_channels=manifest.sensor_channels,
        domain=manifest.domain,
        metadata=manifest.metadata,
    )


def load_noise_scan(directory: str | Path) -> np.ndarray | None:
    """Return the samples x channels noise scan, or None when the dataset has none."""
    manifest = read_manifest(directory)
    if manifest.noise_scan is None:
        return None
    return load_array(Path(directory) / manifest.noise_scan)
