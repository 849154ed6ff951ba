"""Dataset directory and acquisition container tests."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from emiclean.core.dataset import (
    MANIFEST_NAME,
    channel_filename,
    load_dataset,
    load_noise_scan,
    read_manifest,
    save_dataset,
)
from emiclean.core.errors import DataFormatError, ManifestMismatchError, NonFiniteError, ShapeMismatchError
from emiclean.core.models import Domain, MultiCoilAcquisition
from emiclean.core.schemas import AcquisitionMetadata, DatasetManifest
from tests.conftest import complex_normal


@pytest.fixture
def acq(rng):
    """2 repeats x (3 coils + 1 sensor) x 8 x 6 k-space."""
    return MultiCoilAcquisition(
        data=complex_normal(rng, (2, 4, 8, 6)),
        imaging_channels=3,
        sensor_channels=1,
        domain=Domain.KSPACE,
        metadata=AcquisitionMetadata(scenario="tone", phantom="uniform_disc", seed=5),
    )


# ── MultiCoilAcquisition ─────────────────────────────────────────────────


class TestAcquisition:
    def test_views(self, acq):
        """coil_data and sensor_data split the channel axis, imaging first."""
        assert acq.coil_data.shape == (2, 3, 8, 6)
        assert acq.sensor_data.shape == (2, 1, 8, 6)
        assert (acq.repeats, acq.kx, acq.ky) == (2, 8, 6)

    def test_data_is_read_only(self, acq):
        """Stored arrays cannot be modified in place."""
        with pytest.raises(ValueError):
            acq.data[0, 0, 0, 0] = 1.0

    def test_channel_count_mismatch(self, rng):
        """Declared channel counts must add up to the channel axis."""
        with pytest.raises(ShapeMismatchError):
            MultiCoilAcquisition(complex_normal(rng, (1, 3, 4, 4)), 2, 2, Domain.KSPACE)

    def test_needs_imaging_channel(self, rng):
        with pytest.raises(ValueError):
            MultiCoilAcquisition(complex_normal(rng, (1, 2, 4, 4)), 0, 2, Domain.KSPACE)

    def test_rejects_nan(self):
        """NaN anywhere in the data raises NonFiniteError."""
        data = np.zeros((1, 1, 4, 4), dtype=complex)
        data[0, 0, 2, 2] = np.nan
        with pytest.raises(NonFiniteError):
            MultiCoilAcquisition(data, 1, 0, Domain.IMAGE)

    def test_domain_round_trip(self, acq):
        """to_image then to_kspace returns the original data."""
        image = acq.to_image()
        assert image.domain == Domain.IMAGE
        assert image.to_image() is image
        np.testing.assert_allclose(image.to_kspace().data, acq.data, atol=1e-12)

    def test_with_data_keeps_layout(self, acq):
        """with_data keeps channel counts and metadata."""
        other = acq.with_data(np.zeros_like(acq.data), Domain.IMAGE)
        assert other.imaging_channels == 3
        assert other.metadata.scenario == "tone"
        assert other.domain == Domain.IMAGE


# ── Directories ──────────────────────────────────────────────────────────


class TestDatasetDirectory:
    def test_round_trip(self, tmp_path, acq, rng):
        """Data, layout, metadata and noise scan survive save/load bit for bit."""
        noise = complex_normal(rng, (100, 4))
        save_dataset(tmp_path, acq, noise_scan=noise)

        loaded = load_dataset(tmp_path)
        assert np.array_equal(loaded.data, acq.data)
        assert loaded.imaging_channels == 3
        assert loaded.sensor_channels == 1
        assert loaded.domain == Domain.KSPACE
        assert loaded.metadata.scenario == "tone"
        assert loaded.metadata.seed == 5
        assert np.array_equal(load_noise_scan(tmp_path), noise)

    def test_manifest_contents(self, tmp_path, acq):
        """The manifest lists every channel file and the channel roles."""
        save_dataset(tmp_path, acq)
        manifest = read_manifest(tmp_path)
        assert manifest.channel_roles == ["imaging", "imaging", "imaging", "sensor"]
        assert channel_filename(1, 3) in manifest.files
        assert len(manifest.files) == 8
        assert manifest.noise_scan is None
        assert load_noise_scan(tmp_path) is None

    def test_extra_channel_file(self, tmp_path, acq):
        """A channel file the manifest does not list raises ManifestMismatchError."""
        save_dataset(tmp_path, acq)
        (tmp_path / channel_filename(2, 0)).write_bytes((tmp_path / channel_filename(0, 0)).read_bytes())
        with pytest.raises(ManifestMismatchError):
            load_dataset(tmp_path)

    def test_missing_channel_file(self, tmp_path, acq):
        """A listed channel file that is gone raises ManifestMismatchError."""
        save_dataset(tmp_path, acq)
        (tmp_path / channel_filename(1, 2)).unlink()
        with pytest.raises(ManifestMismatchError):
            load_dataset(tmp_path)

    def test_corrupt_manifest(self, tmp_path, acq):
        """Invalid JSON in the manifest raises ManifestMismatchError."""
        save_dataset(tmp_path, acq)
        (tmp_path / MANIFEST_NAME).write_text("{not json", encoding="utf-8")
        with pytest.raises(ManifestMismatchError):
            load_dataset(tmp_path)

    def test_manifest_count_disagreement(self, tmp_path, acq):
        """A manifest whose counts disagree with its file list is rejected."""
        save_dataset(tmp_path, acq)
        manifest = json.loads((tmp_path / MANIFEST_NAME).read_text(encoding="utf-8"))
        manifest["repeats"] = 3
        (tmp_path / MANIFEST_NAME).write_text(json.dumps(manifest), encoding="utf-8")
        with pytest.raises(ManifestMismatchError):
            load_dataset(tmp_path)

    def test_no_manifest(self, tmp_path):
        """A directory without a manifest raises DataFormatError."""
        with pytest.raises(DataFormatError):
            load_dataset(tmp_path)

    def test_noise_scan_channel_mismatch(self, tmp_path, acq, rng):
        """A noise scan must have one column per channel."""
        with pytest.raises(ManifestMismatchError):
            save_dataset(tmp_path, acq, noise_scan=complex_normal(rng, (10, 3)))

    def test_overwrite_with_smaller_dataset(self, tmp_path, acq, rng):
        """Saving fewer repeats over a larger dataset leaves no stale channel files or noise scan behind."""
        save_dataset(tmp_path, acq, noise_scan=complex_normal(rng, (10, 4)))
        smaller = acq.with_data(acq.data[:1])
        save_dataset(tmp_path, smaller)

        assert not (tmp_path / channel_filename(1, 0)).exists()
        assert load_noise_scan(tmp_path) is None
        assert not (tmp_path / "noise.sca").exists()
        assert np.array_equal(load_dataset(tmp_path).data, smaller.data)

    def test_bad_noise_scan_keeps_existing_dataset(self, tmp_path, acq, rng):
        save_dataset(tmp_path, acq)
        with pytest.raises(ManifestMismatchError):
            save_dataset(tmp_path, acq, noise_scan=complex_normal(rng, (10, 3)))
        assert np.array_equal(load_dataset(tmp_path).data, acq.data)


def test_manifest_roles_order():
    """Sensors listed before imaging channels are rejected."""
    with pytest.raises(ValidationError):
        DatasetManifest(
            repeats=1,
            imaging_channels=1,
            sensor_channels=1,
            kx=4,
            ky=4,
            domain=Domain.KSPACE,
            channel_roles=["sensor", "imaging"],
            files=["a", "b"],
        )
