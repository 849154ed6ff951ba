"""The simulate / correct / evaluate / report pipeline behind the command line."""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from emiclean.cli.schemas import Method, RunConfig, RunRecord
from emiclean.core.container import load_array, save_array
from emiclean.core.dataset import load_dataset, load_noise_scan, save_dataset
from emiclean.core.errors import DataFormatError
from emiclean.core.models import Domain, MultiCoilAcquisition
from emiclean.editer.service import correct_kspace
from emiclean.evaluation.metrics import compute_metric_maps, make_mask, summarize
from emiclean.evaluation.models import MetricMaps
from emiclean.evaluation.output import read_metrics, render_report, write_metrics_csv, write_pgm, write_ttest_csv
from emiclean.evaluation.schemas import MetricSummary, TTestRow
from emiclean.evaluation.stats import welch_t_test
from emiclean.prep.combine import complex_average, sos_combine
from emiclean.prep.denoise import denoise_sensors
from emiclean.prep.whitening import apply_prewhitening, estimate_noise_covariance, whitening_transform
from emiclean.sim.phantom import make_phantom
from emiclean.sim.schemas import CouplingModel, EmiScenario, PhantomKind
from emiclean.sim.service import simulate_study
from emiclean.stride.service import correct_acquisition

logger = logging.getLogger(__name__)

RUN_RECORD_NAME = "run.json"
COMBINED_NAME = "combined.sca"
AVERAGE_NAME = "average.sca"


def cmd_simulate(
    out: Path,
    phantom: PhantomKind,
    matrix: int,
    scenario: EmiScenario,
    coupling: CouplingModel,
    repeats: int,
    seed: int,
) -> Path:
    path = simulate_study(out, make_phantom(phantom, matrix), scenario, repeats, coupling, seed)
    print(
        f"{path}: {repeats} repeats x ({coupling.n_coils} coils + {coupling.n_sensors} sensors), "
        f"{matrix}x{matrix}, scenario {scenario.kind.value}, seed {seed}"
    )
    return path


def _split_repeats(acq: MultiCoilAcquisition) -> list[MultiCoilAcquisition]:
    return [acq.with_data(acq.data[r : r + 1]) for r in range(acq.repeats)]


def _correct_one(single: MultiCoilAcquisition, cfg: RunConfig) -> np.ndarray:
    """Image-domain data of one corrected repeat, shape (channels, kx, ky)."""
    if cfg.method == Method.STRIDE:
        corrected = correct_acquisition(single, cfg.stride)
    elif cfg.method in (Method.EDITER_A, Method.EDITER_B):
        corrected = correct_kspace(single, cfg.editer).to_image()
    else:
        corrected = single.to_image()
    return corrected.data[0]


def _prewhiten(acq: MultiCoilAcquisition, directory: Path) -> MultiCoilAcquisition:
    noise = load_noise_scan(directory)
    if noise is None:
        raise DataFormatError(f"{directory} has no noise scan; pre-whitening needs one")
    cov = estimate_noise_covariance(noise).block(slice(0, acq.imaging_channels))
    return apply_prewhitening(acq, whitening_transform(cov))


def cmd_correct(cfg: RunConfig) -> Path:
    """Run one correction method over every repeat and write the run directory.

    Order: sensor denoising, pre-whitening, correction, SoS combination.
    """
    acq = load_dataset(cfg.input_path)
    if cfg.method != Method.NONE and acq.sensor_channels == 0:
        raise DataFormatError(f"{cfg.input_path} has no EMI sensor channels; method {cfg.method.value} needs them")

    if cfg.denoise_sensors and acq.sensor_channels:
        acq = denoise_sensors(acq)
    if cfg.prewhiten:
        acq = _prewhiten(acq, cfg.input_path)

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        repeats = list(pool.map(_correct_one, _split_repeats(acq), itertools.repeat(cfg)))
    images = acq.with_data(np.stack(repeats), Domain.IMAGE)

    combined = sos_combine(images.coil_data, axis=1)
    average = sos_combine(complex_average(images.coil_data))

    out = Path(cfg.output_path)
    save_dataset(out, images)
    save_array(out / COMBINED_NAME, combined)
    save_array(out / AVERAGE_NAME, average)
    record = RunRecord(
        config=cfg,
        scenario=acq.metadata.scenario if acq.metadata else "none",
        repeats=acq.repeats,
        imaging_channels=acq.imaging_channels,
        sensor_channels=acq.sensor_channels,
    )
    (out / RUN_RECORD_NAME).write_text(record.model_dump_json(indent=2), encoding="utf-8")
    logger.info(f"Run {cfg.method.value} on {cfg.input_path} written to {out}")
    return out


def read_run_record(run_dir: Path) -> RunRecord:
    path = Path(run_dir) / RUN_RECORD_NAME
    if not path.is_file():
        raise DataFormatError(f"{run_dir} is not a run directory (no {RUN_RECORD_NAME})")
    return RunRecord.model_validate_json(path.read_text(encoding="utf-8"))


def load_combined(run_dir: Path) -> np.ndarray:
    """SoS magnitude stack (repeats, kx, ky) of a run."""
    return load_array(Path(run_dir) / COMBINED_NAME).real


def _discover_runs(runs_dir: Path, exclude: Path) -> dict[str, list[tuple[Path, RunRecord]]]:
    by_scenario: dict[str, list[tuple[Path, RunRecord]]] = {}
    for run_dir in sorted(p for p in Path(runs_dir).iterdir() if (p / RUN_RECORD_NAME).is_file()):
        if run_dir.resolve() == exclude.resolve():
            continue
        record = read_run_record(run_dir)
        by_scenario.setdefault(record.scenario, []).append((run_dir, record))
    return by_scenario


def _pairwise_tests(scenario: str, maps_by_run: dict[str, tuple[str, MetricMaps]]) -> list[TTestRow]:
    rows: list[TTestRow] = []
    for (name_a, (method_a, maps_a)), (name_b, (method_b, maps_b)) in itertools.combinations(maps_by_run.items(), 2):
        for metric in ("snr", "emi_removal_pct"):
            a = getattr(maps_a, metric)[maps_a.mask]
            b = getattr(maps_b, metric)[maps_b.mask]
            a, b = a[np.isfinite(a)], b[np.isfinite(b)]
            if a.size < 2 or b.size < 2:
                logger.warning(f"{scenario}: too few {metric} voxels to compare {name_a} and {name_b}")
                continue
            result = welch_t_test(a, b)
            rows.append(
                TTestRow(
                    scenario=scenario,
                    metric=metric,
                    run_a=name_a,
                    run_b=name_b,
                    method_a=method_a,
                    method_b=method_b,
                    t=result.t,
                    dof=result.dof,
                    p_value=result.p_value,
                )
            )
    return rows


def cmd_evaluate(runs_dir: Path, baseline: Path, out: Path) -> Path:
    """Metric maps, metrics.csv and ttest.csv for every run under ``runs_dir``.

    The baseline run's mean combined image is the ground truth and defines the
    mask; within a scenario the method-none run is the corrupted reference.
    """
    read_run_record(baseline)
    baseline_stack = load_combined(baseline)
    mask = make_mask(baseline_stack.mean(axis=0))
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)

    summaries: list[MetricSummary] = []
    tests: list[TTestRow] = []
    for scenario, runs in _discover_runs(runs_dir, baseline).items():
        corrupted = next((load_combined(d) for d, r in runs if r.config.method == Method.NONE), None)
        if corrupted is None:
            logger.warning(f"Scenario {scenario} has no method-none run; EMI removal is left undefined")

        maps_by_run: dict[str, tuple[str, MetricMaps]] = {}
        for run_dir, record in runs:
            method = record.config.method.value
            maps = compute_metric_maps(load_combined(run_dir), corrupted, baseline_stack, mask)
            summaries.append(summarize(maps, method, scenario, run=run_dir.name))
            for label, image in (("snr", maps.snr), ("removal", maps.emi_removal_pct), ("rmse", maps.rmse)):
                write_pgm(out / f"{scenario}_{run_dir.name}_{label}.pgm", image)
            maps_by_run[run_dir.name] = (method, maps)
        tests.extend(_pairwise_tests(scenario, maps_by_run))

    write_metrics_csv(summaries, out)
    write_ttest_csv(tests, out)
    logger.info(f"Evaluated {len(summaries)} runs into {out}")
    return out


def cmd_report(eval_dir: Path, out: Path | None = None) -> str:
    report = render_report(read_metrics(eval_dir))
    if out is not None:
        Path(out).write_text(report, encoding="utf-8")
    print(report, end="")
    return report
