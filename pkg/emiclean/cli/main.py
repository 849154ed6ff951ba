"""emiclean command line: simulate, correct, evaluate, report.

Exit codes: 0 success, 2 usage error, 3 data-format error, 4 numerical failure.
"""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from emiclean.cli.schemas import Method, RunConfig
from emiclean.cli.service import cmd_correct, cmd_evaluate, cmd_report, cmd_simulate
from emiclean.config import settings
from emiclean.core.errors import DataFormatError, NumericalError, ShapeMismatchError
from emiclean.editer.schemas import EditerConfig, EditerVariant
from emiclean.sim.schemas import EmiKind, EmiScenario, PhantomKind, default_coupling
from emiclean.stride.schemas import CutoffScope, StrideConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

SCENARIO_FLAGS = {
    "none": EmiKind.NONE,
    "square": EmiKind.SQUARE_AM,
    "white": EmiKind.WHITE_AM,
    "sweep": EmiKind.SWEEP,
    "tone": EmiKind.TONE,
}
METHOD_FLAGS = {
    "stride": Method.STRIDE,
    "editer-a": Method.EDITER_A,
    "editer-b": Method.EDITER_B,
    "none": Method.NONE,
}


def _scenario_from_args(args: argparse.Namespace) -> EmiScenario:
    if args.scenario_file is not None:
        return EmiScenario.model_validate_json(Path(args.scenario_file).read_text(encoding="utf-8"))
    return EmiScenario(
        kind=SCENARIO_FLAGS[args.scenario],
        f_offset_hz=settings.emi_offset_hz if args.f_offset is None else args.f_offset,
        amplitude=settings.emi_amplitude if args.amplitude is None else args.amplitude,
    )


def run_simulate(args: argparse.Namespace) -> None:
    coupling = default_coupling(args.coils, args.sensors, sigma_img=args.sigma_img, sigma_emi=args.sigma_emi)
    cmd_simulate(
        Path(args.out),
        PhantomKind(args.phantom),
        args.matrix,
        _scenario_from_args(args),
        coupling,
        args.repeats,
        args.seed,
    )


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    method = METHOD_FLAGS[args.method]
    stride = editer = None
    if method == Method.STRIDE:
        if args.dkx is not None or args.dky is not None:
            raise ValueError("--dkx/--dky apply to the EDITER methods only")
        overrides = {"delta_y": args.dy, "cutoff_scope": args.cutoff}
        stride = StrideConfig(**{k: v for k, v in overrides.items() if v is not None})
    elif method in (Method.EDITER_A, Method.EDITER_B):
        if args.dy is not None or args.cutoff is not None:
            raise ValueError("--dy/--cutoff apply to method stride only")
        variant = EditerVariant.A if method == Method.EDITER_A else EditerVariant.B
        editer = EditerConfig(variant=variant, delta_kx=args.dkx, delta_ky=args.dky, seed=args.seed)
    elif any(v is not None for v in (args.dy, args.cutoff, args.dkx, args.dky)):
        raise ValueError("method none takes no window flags")
    return RunConfig(
        method=method,
        stride=stride,
        editer=editer,
        prewhiten=args.prewhiten,
        denoise_sensors=args.denoise_sensors,
        input_path=Path(args.input),
        output_path=Path(args.out),
        seed=args.seed,
        workers=args.workers,
    )


def run_correct(args: argparse.Namespace) -> None:
    cmd_correct(run_config_from_args(args))


def run_evaluate(args: argparse.Namespace) -> None:
    cmd_evaluate(Path(args.input), Path(args.baseline), Path(args.out))


def run_report(args: argparse.Namespace) -> None:
    cmd_report(Path(args.input), None if args.out is None else Path(args.out))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emiclean", description="Sensor-based EMI removal for multi-coil MRI")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="write a synthetic dataset")
    sim.add_argument("--scenario", choices=list(SCENARIO_FLAGS), default="none")
    sim.add_argument("--scenario-file", metavar="PATH", help="JSON EMI scenario, overrides --scenario")
    sim.add_argument("--phantom", choices=[k.value for k in PhantomKind], default=PhantomKind.CONTRAST_DISCS.value)
    sim.add_argument("--matrix", type=int, default=64, metavar="N")
    sim.add_argument("--coils", type=int, default=4, metavar="N")
    sim.add_argument("--sensors", type=int, default=2, metavar="N")
    sim.add_argument("--repeats", type=int, default=64, metavar="N")
    sim.add_argument("--seed", type=int, default=0, metavar="N")
    sim.add_argument("--amplitude", type=float, metavar="X")
    sim.add_argument("--f-offset", type=float, metavar="HZ")
    sim.add_argument("--sigma-img", type=float, metavar="X")
    sim.add_argument("--sigma-emi", type=float, metavar="X")
    sim.add_argument("--out", required=True, metavar="PATH")
    sim.set_defaults(handler=run_simulate)

    corr = sub.add_parser("correct", help="remove EMI from a dataset")
    corr.add_argument("--method", choices=list(METHOD_FLAGS), required=True)
    corr.add_argument("--dy", type=int, metavar="N")
    corr.add_argument("--cutoff", choices=[s.value for s in CutoffScope], help="STRIDE pseudoinverse cutoff scope")
    corr.add_argument("--dkx", type=int, metavar="N")
    corr.add_argument("--dky", type=int, metavar="N")
    corr.add_argument("--prewhiten", action="store_true")
    corr.add_argument("--denoise-sensors", action="store_true")
    corr.add_argument("--seed", type=int, default=settings.kmeans_seed, metavar="N")
    corr.add_argument("--workers", type=int, default=settings.workers, metavar="N")
    corr.add_argument("--in", dest="input", required=True, metavar="PATH")
    corr.add_argument("--out", required=True, metavar="PATH")
    corr.set_defaults(handler=run_correct)

    ev = sub.add_parser("evaluate", help="metrics of corrected runs against a baseline run")
    ev.add_argument("--in", dest="input", required=True, metavar="PATH")
    ev.add_argument("--baseline", required=True, metavar="PATH")
    ev.add_argument("--out", required=True, metavar="PATH")
    ev.set_defaults(handler=run_evaluate)

    rep = sub.add_parser("report", help="method x scenario table from an evaluation directory")
    rep.add_argument("--in", dest="input", required=True, metavar="PATH")
    rep.add_argument("--out", metavar="PATH")
    rep.set_defaults(handler=run_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=settings.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except (DataFormatError, ShapeMismatchError, FileNotFoundError) as e:
        logger.exception(f"Data error: {e}")
        return EXIT_DATA
    except (NumericalError, np.linalg.LinAlgError) as e:
        logger.exception(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except (ValidationError, ValueError) as e:
        logger.exception(f"Invalid arguments: {e}")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
