"""Evaluation outputs: metrics.csv, ttest.csv, 16-bit PGM metric maps and the text report."""

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from emiclean.evaluation.schemas import MetricSummary, TTestRow

logger = logging.getLogger(__name__)

METRICS_NAME = "metrics.csv"
TTEST_NAME = "ttest.csv"
METRIC_COLUMNS = ["run", "method", "scenario", "mean_snr", "mean_removal_pct", "rmse_total"]
TTEST_COLUMNS = ["scenario", "metric", "run_a", "run_b", "method_a", "method_b", "t", "dof", "p_value"]
REPORT_VALUES = ["rmse_total", "mean_snr", "mean_removal_pct"]
PGM_MAXVAL = 65535


def write_metrics_csv(rows: list[MetricSummary], directory: str | Path) -> Path:
    path = Path(directory) / METRICS_NAME
    df = pd.DataFrame([r.model_dump() for r in rows], columns=METRIC_COLUMNS)
    df.to_csv(path, index=False)
    return path


def write_ttest_csv(rows: list[TTestRow], directory: str | Path) -> Path:
    path = Path(directory) / TTEST_NAME
    df = pd.DataFrame([r.model_dump() for r in rows], columns=TTEST_COLUMNS)
    df.to_csv(path, index=False)
    return path


def write_pgm(path: str | Path, image: np.ndarray) -> Path:
    """Binary 16-bit PGM, min-max scaled over finite values; NaN maps to 0.

    The scaling is written to a ``.txt`` sidecar next to the image.
    """
    path = Path(path)
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"PGM needs a 2-D image, got shape {img.shape}")
    finite = np.isfinite(img)
    lo = float(img[finite].min()) if finite.any() else 0.0
    hi = float(img[finite].max()) if finite.any() else 0.0

    scaled = np.zeros(img.shape)
    if hi > lo:
        scaled[finite] = (img[finite] - lo) / (hi - lo) * PGM_MAXVAL
    pixels = np.rint(scaled).astype(">u2")

    rows, cols = img.shape
    path.write_bytes(f"P5\n{cols} {rows}\n{PGM_MAXVAL}\n".encode("ascii") + pixels.tobytes())
    path.with_suffix(".txt").write_text(f"min {lo!r}\nmax {hi!r}\n", encoding="utf-8")
    return path


def report_table(metrics: pd.DataFrame) -> pd.DataFrame:
    """(method, run) x (metric, scenario) table.

    Raises ValueError when a run appears twice for one scenario.
    """
    table = metrics.pivot(index=["method", "run"], columns="scenario", values=REPORT_VALUES)
    return table.reindex(columns=REPORT_VALUES, level=0)


def render_report(metrics: pd.DataFrame) -> str:
    """Method x scenario table of rmse_total, mean SNR and mean removal %, one row per run."""
    if metrics.empty:
        return "no runs evaluated\n"
    return report_table(metrics).to_string(float_format=lambda v: f"{v:.4g}") + "\n"


def read_metrics(directory: str | Path) -> pd.DataFrame:
    path = Path(directory) / METRICS_NAME
    if not path.is_file():
        raise FileNotFoundError(f"{directory} has no {METRICS_NAME}")
    return pd.read_csv(path)
