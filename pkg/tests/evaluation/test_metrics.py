"""Voxelwise metric map tests."""

import numpy as np
import pytest

from emiclean.evaluation.metrics import (
    background_std,
    compute_metric_maps,
    emi_removal_map,
    make_mask,
    rmse_map,
    rmse_total,
    snr_map,
    summarize,
)
from emiclean.evaluation.models import MetricMaps
from emiclean.sim.phantom import make_phantom


# ── SNR ──────────────────────────────────────────────────────────────────


class TestSnrMap:
    def test_two_point(self):
        """Series [1, 3]: mean 2, std sqrt(2), SNR sqrt(2)."""
        stack = np.array([1.0, 3.0]).reshape(2, 1, 1)
        assert snr_map(stack)[0, 0] == pytest.approx(np.sqrt(2))

    def test_constant_series_saturated(self):
        """Zero std is flagged with NaN."""
        assert np.isnan(snr_map(np.full((5, 2, 2), 4.0))).all()

    def test_monte_carlo(self, rng):
        """Mean 10, std 2 over 10^4 repeats gives SNR 5 within 3%."""
        stack = rng.normal(10.0, 2.0, size=(10_000, 4))
        np.testing.assert_allclose(snr_map(stack), 5.0, rtol=0.03)

    def test_needs_two_repeats(self):
        with pytest.raises(ValueError):
            snr_map(np.ones((1, 3, 3)))


# ── EMI removal ──────────────────────────────────────────────────────────


class TestEmiRemovalMap:
    def test_ninety_percent(self, rng):
        """Corrupted std 10, corrected std 1: 90% removed."""
        z = rng.standard_normal((20, 3, 3))
        np.testing.assert_allclose(emi_removal_map(z, 10.0 * z), 90.0)

    def test_unchanged(self, rng):
        z = rng.standard_normal((10, 4))
        np.testing.assert_allclose(emi_removal_map(z, z), 0.0, atol=1e-12)

    def test_noisier_is_negative(self, rng):
        z = rng.standard_normal((10, 4))
        assert (emi_removal_map(3.0 * z, z) < 0).all()

    def test_constant_corrupted_undefined(self, rng):
        assert np.isnan(emi_removal_map(rng.standard_normal((5, 2)), np.ones((5, 2)))).all()

    def test_at_most_one_hundred(self, rng):
        out = emi_removal_map(rng.standard_normal((8, 10)) * 1e-3, rng.standard_normal((8, 10)))
        assert (out <= 100.0).all()


# ── RMSE ─────────────────────────────────────────────────────────────────


class TestRmseMap:
    def test_zero_when_equal(self, rng):
        gt = rng.standard_normal((4, 4))
        assert not rmse_map(np.stack([gt, gt, gt]), gt).any()

    def test_two_point(self):
        """Repeats [1, 3] against 2 give 1."""
        assert rmse_map(np.array([1.0, 3.0]).reshape(2, 1), np.array([2.0]))[0] == pytest.approx(1.0)

    def test_bias_floor(self, rng):
        """A constant bias b gives RMSE >= |b|."""
        gt = rng.standard_normal((3, 3))
        jitter = np.array([0.1, -0.1] * 3).reshape(6, 1, 1)
        stack = gt + 0.5 + jitter
        assert (rmse_map(stack, gt) >= 0.5).all()

    def test_mean_minimizes(self, rng):
        """The repeat mean is the RMSE-minimizing ground truth."""
        stack = rng.standard_normal((12, 5, 5))
        best = rmse_map(stack, stack.mean(axis=0))
        other = rmse_map(stack, stack.mean(axis=0) + rng.normal(0, 0.1, (5, 5)))
        assert (best <= other + 1e-12).all()

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            rmse_map(np.ones((2, 3, 3)), np.ones((4, 4)))


# ── Masks and summaries ──────────────────────────────────────────────────


class TestMask:
    def test_disc_support(self):
        """The uniform disc's mask is its support."""
        phantom = make_phantom("uniform_disc", 32)
        np.testing.assert_array_equal(make_mask(phantom.intensity), phantom.intensity > 0)

    def test_zero_image_empty(self):
        assert not make_mask(np.zeros((4, 4))).any()

    def test_zero_threshold_full(self, rng):
        assert make_mask(rng.uniform(0.1, 1.0, (4, 4)), threshold_frac=0.0).all()

    def test_threshold_range(self):
        with pytest.raises(ValueError):
            make_mask(np.ones((2, 2)), threshold_frac=1.5)


def test_rmse_total():
    """Root mean square over the masked voxels."""
    rmse = np.array([[3.0, 4.0], [100.0, 0.0]])
    mask = np.array([[True, True], [False, False]])
    assert rmse_total(rmse, mask) == pytest.approx(np.sqrt(12.5))
    with pytest.raises(ValueError):
        rmse_total(rmse, np.zeros((2, 2), dtype=bool))


def test_background_std(rng):
    """Only voxels outside the mask count."""
    stack = np.zeros((10, 4, 4))
    mask = np.zeros((4, 4), dtype=bool)
    mask[1:3, 1:3] = True
    stack[:, ~mask] = rng.normal(0.0, 2.0, (10, 12))
    stack[:, mask] = 1e6
    assert background_std(stack, mask) == pytest.approx(stack[:, ~mask].std(ddof=1))


def test_maps_share_shape():
    with pytest.raises(ValueError):
        MetricMaps(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((3, 3)), np.zeros((2, 2), dtype=bool))


def test_compute_and_summarize(rng):
    """End to end: maps from stacks, masked means skip NaN voxels."""
    truth = make_phantom("uniform_disc", 16).intensity * 10.0
    baseline = truth + rng.normal(0, 0.1, (8, 16, 16))
    corrupted = truth + rng.normal(0, 2.0, (8, 16, 16))
    corrected = truth + rng.normal(0, 0.2, (8, 16, 16))
    maps = compute_metric_maps(corrected, corrupted, baseline)
    np.testing.assert_array_equal(maps.mask, truth > 0)

    summary = summarize(maps, "stride", "white_am")
    assert summary.method == "stride"
    assert summary.scenario == "white_am"
    assert summary.run == "stride"
    assert summarize(maps, "stride", "white_am", run="stride_dy1").run == "stride_dy1"
    assert 80.0 < summary.mean_removal_pct < 100.0
    assert summary.mean_snr > 20.0
    assert summary.rmse_total == pytest.approx(0.2, rel=0.2)


def test_missing_corrupted_reference(rng):
    """Without a corrupted stack the removal map is undefined."""
    stack = rng.normal(5.0, 1.0, (4, 6, 6))
    maps = compute_metric_maps(stack, None, stack)
    assert np.isnan(maps.emi_removal_pct).all()
    assert np.isnan(summarize(maps, "none", "tone").mean_removal_pct)
