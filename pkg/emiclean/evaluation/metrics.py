"""Voxelwise quality metrics over stacks of repeated magnitude images.

Stacks are (repeats, ...) real arrays; every statistic is taken along the
repeat axis with ddof=1.
"""

import logging

import numpy as np

from emiclean.config import settings
from emiclean.evaluation.models import MetricMaps
from emiclean.evaluation.schemas import MetricSummary

logger = logging.getLogger(__name__)


def _stack(image_stack, name: str = "stack") -> np.ndarray:
    stack = np.asarray(image_stack, dtype=np.float64)
    if stack.ndim < 2 or stack.shape[0] < 2:
        raise ValueError(f"{name} needs at least 2 repeats along axis 0, got shape {stack.shape}")
    return stack


def snr_map(image_stack, eps: float | None = None) -> np.ndarray:
    """Mean / std across repeats; NaN where std < eps (saturated)."""
    eps = settings.saturation_eps if eps is None else eps
    stack = _stack(image_stack)
    mean = stack.mean(axis=0)
    std = stack.std(axis=0, ddof=1)
    out = np.full(mean.shape, np.nan)
    np.divide(mean, std, out=out, where=std >= eps)
    return out


def emi_removal_map(corrected_stack, corrupted_stack, eps: float | None = None) -> np.ndarray:
    """100 * (std_corrupted - std_corrected) / std_corrupted; NaN where std_corrupted < eps."""
    eps = settings.saturation_eps if eps is None else eps
    corrected = _stack(corrected_stack, "corrected stack")
    corrupted = _stack(corrupted_stack, "corrupted stack")
    if corrected.shape[1:] != corrupted.shape[1:]:
        raise ValueError(f"image shapes differ: {corrected.shape[1:]} vs {corrupted.shape[1:]}")
    std_corrected = corrected.std(axis=0, ddof=1)
    std_corrupted = corrupted.std(axis=0, ddof=1)
    out = np.full(std_corrupted.shape, np.nan)
    np.divide(100.0 * (std_corrupted - std_corrected), std_corrupted, out=out, where=std_corrupted >= eps)
    return out


def rmse_map(image_stack, ground_truth) -> np.ndarray:
    stack = np.asarray(image_stack)
    gt = np.asarray(ground_truth)
    if stack.shape[1:] != gt.shape:
        raise ValueError(f"ground truth {gt.shape} does not match images {stack.shape[1:]}")
    return np.sqrt(np.mean(np.abs(stack - gt) ** 2, axis=0))


def make_mask(baseline_mean_image, threshold_frac: float | None = None) -> np.ndarray:
    """Voxels whose magnitude reaches threshold_frac of the maximum. A zero image gives an empty mask."""
    threshold_frac = settings.mask_threshold_frac if threshold_frac is None else threshold_frac
    if not 0.0 <= threshold_frac <= 1.0:
        raise ValueError(f"threshold_frac must lie in [0, 1], got {threshold_frac}")
    magnitude = np.abs(np.asarray(baseline_mean_image))
    peak = magnitude.max(initial=0.0)
    if peak == 0.0:
        return np.zeros(magnitude.shape, dtype=bool)
    return magnitude >= threshold_frac * peak


def rmse_total(rmse: np.ndarray, mask: np.ndarray) -> float:
    """sqrt of the mean squared RMSE over the mask."""
    if not mask.any():
        raise ValueError("mask is empty")
    return float(np.sqrt(np.mean(rmse[mask] ** 2)))


def background_std(image_stack, mask: np.ndarray) -> float:
    """Std (ddof=1) of every background voxel of every repeat."""
    stack = np.asarray(image_stack, dtype=np.float64)
    background = stack[:, ~mask]
    if background.size < 2:
        raise ValueError("fewer than 2 background samples")
    return float(background.std(ddof=1))


def compute_metric_maps(corrected_stack, corrupted_stack, baseline_stack, mask: np.ndarray | None = None) -> MetricMaps:
    """SNR, removal and RMSE maps of one run; ground truth is the baseline mean.

    Without a corrupted reference the removal map is all NaN.
    """
    baseline_mean = _stack(baseline_stack, "baseline stack").mean(axis=0)
    mask = make_mask(baseline_mean) if mask is None else mask
    if corrupted_stack is None:
        removal = np.full(baseline_mean.shape, np.nan)
    else:
        removal = emi_removal_map(corrected_stack, corrupted_stack)
    return MetricMaps(
        snr=snr_map(corrected_stack),
        emi_removal_pct=removal,
        rmse=rmse_map(corrected_stack, baseline_mean),
        mask=mask,
    )


def _masked_mean(values: np.ndarray, mask: np.ndarray) -> float:
    finite = values[mask & np.isfinite(values)]
    return float(finite.mean()) if finite.size else float("nan")


def summarize(
    maps: MetricMaps,
    method: str,
    scenario: str,
    mask: np.ndarray | None = None,
    run: str | None = None,
) -> MetricSummary:
    """Masked means of the maps; flagged (NaN) voxels are left out. ``run`` defaults to the method name."""
    mask = maps.mask if mask is None else mask
    return MetricSummary(
        run=run or method,
        method=method,
        scenario=scenario,
        mean_snr=_masked_mean(maps.snr, mask),
        mean_removal_pct=_masked_mean(maps.emi_removal_pct, mask),
        rmse_total=rmse_total(maps.rmse, mask),
    )
