"""Temporal grouping of phase-encode lines.

Variant A treats every PE line as its own group. Variant B clusters lines
whose sensor -> coil transfer looks alike, picking the cluster count by
silhouette score.
"""

import logging
import warnings

import numpy as np
from sklearn.cluster import KMeans
from sklearn.exceptions import ConvergenceWarning
from sklearn.metrics import silhouette_score

from emiclean.config import settings
from emiclean.editer.models import TemporalGrouping

logger = logging.getLogger(__name__)


def assign_groups_fixed(ky: int) -> TemporalGrouping:
    """One group per PE line; group id == line index."""
    if ky < 1:
        raise ValueError(f"ky must be >= 1, got {ky}")
    return TemporalGrouping(np.arange(ky))


def line_transfer_features(coil_ksp: np.ndarray, sensor_ksp: np.ndarray, rcond: float | None = None) -> np.ndarray:
    """Per-line single-tap transfer estimates, as real features.

    coil_ksp is (N_i, kx, ky), sensor_ksp (N_c, kx, ky). For each line the
    (N_c x N_i) least-squares transfer from sensors to coils is flattened and
    split into real and imaginary parts, giving a (ky, 2 * N_c * N_i) array.
    """
    rcond = settings.pinv_rcond if rcond is None else rcond
    coils = np.asarray(coil_ksp, dtype=np.complex128).transpose(2, 1, 0)  # (ky, kx, N_i)
    sensors = np.asarray(sensor_ksp, dtype=np.complex128).transpose(2, 1, 0)  # (ky, kx, N_c)
    transfer = np.linalg.pinv(sensors, rcond=rcond) @ coils  # (ky, N_c, N_i)
    flat = transfer.reshape(transfer.shape[0], -1)
    return np.concatenate([flat.real, flat.imag], axis=1)


def _relabel_by_first_appearance(labels: np.ndarray) -> np.ndarray:
    _, first = np.unique(labels, return_index=True)
    order = labels[np.sort(first)]
    mapping = {int(old): new for new, old in enumerate(order)}
    return np.array([mapping[int(v)] for v in labels], dtype=np.int64)


def cluster_features(
    features: np.ndarray,
    max_clusters: int,
    seed: int | None = None,
) -> tuple[np.ndarray, float | None]:
    """k-means over rows of ``features`` with silhouette-selected k.

    Returns (labels, best silhouette). Falls back to k = 1 when fewer than
    two distinct rows exist or when no k reaches the silhouette floor.
    """
    seed = settings.kmeans_seed if seed is None else seed
    n = features.shape[0]
    single = np.zeros(n, dtype=np.int64)

    if n < 2 or np.allclose(features, features[0], rtol=1e-9, atol=1e-12):
        return single, None

    n_distinct = np.unique(features, axis=0).shape[0]
    # silhouette is only defined for 2 <= k <= n - 1
    k_max = min(max_clusters, n_distinct, n - 1)

    best_labels, best_score = single, None
    for k in range(2, k_max + 1):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            km = KMeans(n_clusters=k, init="k-means++", n_init=settings.kmeans_n_init, random_state=seed)
            labels = km.fit_predict(features)
        if np.unique(labels).size < 2:
            continue
        score = float(silhouette_score(features, labels))
        logger.debug(f"k={k}: silhouette={score:.4f}")
        if best_score is None or score > best_score:
            best_labels, best_score = labels, score

    if best_score is None or best_score < settings.silhouette_floor:
        return single, best_score
    return _relabel_by_first_appearance(best_labels), best_score


def assign_groups_kmeans(
    coil_ksp: np.ndarray,
    sensor_ksp: np.ndarray,
    max_clusters: int | None = None,
    seed: int | None = None,
    rcond: float | None = None,
) -> TemporalGrouping:
    """Cluster PE lines of one repeat by their sensor -> coil transfer."""
    max_clusters = settings.editer_max_clusters if max_clusters is None else max_clusters
    features = line_transfer_features(coil_ksp, sensor_ksp, rcond)
    labels, score = cluster_features(features, max_clusters, seed)
    grouping = TemporalGrouping(labels)
    logger.info(f"k-means grouping: {grouping.n_groups} groups over {labels.size} lines (silhouette={score})")
    return grouping
