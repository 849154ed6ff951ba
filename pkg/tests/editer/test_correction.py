"""EDITER k-space correction tests."""

import numpy as np
import pytest

from emiclean.core.models import Domain, MultiCoilAcquisition
from emiclean.editer.schemas import EditerConfig, EditerVariant
from emiclean.editer.service import correct_kspace, correct_repeat
from tests.conftest import complex_normal


def test_requires_sensors(rng):
    """EDITER needs at least one sensor channel."""
    acq = MultiCoilAcquisition(complex_normal(rng, (1, 2, 8, 8)), 2, 0, Domain.KSPACE)
    with pytest.raises(ValueError):
        correct_kspace(acq)


def test_variant_b_two_regimes_exact(rng):
    """Interference with two transfer regimes is removed once the lines are grouped."""
    sensor = complex_normal(rng, (1, 32, 16))
    clean = np.zeros((2, 32, 16), dtype=complex)
    coils = clean.copy()
    coils[:, :, :8] += np.array([1.0, 0.5j])[:, None, None] * sensor[:, :, :8]
    coils[:, :, 8:] += np.array([-2.0j, 0.3])[:, None, None] * sensor[:, :, 8:]
    out = correct_repeat(coils, sensor, EditerConfig(variant=EditerVariant.B, seed=0))
    np.testing.assert_allclose(out, clean, atol=1e-9)


def test_variant_a_removes_stationary_gain(rng):
    """Per-line groups also remove a stationary single-tap interference."""
    sensor = complex_normal(rng, (1, 32, 8))
    coils = (0.4 + 0.9j) * np.repeat(sensor, 3, axis=0)
    out = correct_repeat(coils, sensor, EditerConfig(variant=EditerVariant.A))
    np.testing.assert_allclose(out, 0.0, atol=1e-9)


def test_correct_kspace_shapes(rng):
    """Output is k-space with the sensor channels untouched."""
    data = complex_normal(rng, (2, 3, 16, 8))
    acq = MultiCoilAcquisition(data, 2, 1, Domain.KSPACE)
    out = correct_kspace(acq, EditerConfig(variant=EditerVariant.A))
    assert out.domain == Domain.KSPACE
    assert out.data.shape == data.shape
    np.testing.assert_array_equal(out.sensor_data, acq.sensor_data)


def test_image_domain_input_converted(rng):
    """Image-domain acquisitions are moved to k-space before fitting."""
    sensor_ksp = complex_normal(rng, (1, 1, 16, 8))
    data = np.concatenate([2.0 * sensor_ksp, sensor_ksp], axis=1)
    acq = MultiCoilAcquisition(data, 1, 1, Domain.KSPACE).to_image()
    out = correct_kspace(acq, EditerConfig(variant=EditerVariant.B))
    np.testing.assert_allclose(out.coil_data, 0.0, atol=1e-9)


@pytest.mark.parametrize("variant", [EditerVariant.A, EditerVariant.B])
def test_zero_sensors_leave_input_unchanged(rng, variant):
    """All-zero sensor k-space: every coil comes back exactly as it went in."""
    data = np.concatenate([complex_normal(rng, (2, 2, 16, 8)), np.zeros((2, 1, 16, 8))], axis=1)
    acq = MultiCoilAcquisition(data, 2, 1, Domain.KSPACE)
    out = correct_kspace(acq, EditerConfig(variant=variant))
    assert np.array_equal(out.data, acq.data)
