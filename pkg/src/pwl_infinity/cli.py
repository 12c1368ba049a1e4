"""Command-line front end."""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from . import __version__
from .analyzer import InfinityAnalyzer
from .config import settings
from .exceptions import InputError, NumericalError
from .flow import trace_orbit
from .models import UnfoldingTarget, Window
from .params import load_spec, parse_number
from .serialization import (
    REGION_HEADER,
    csv_text,
    dumps,
    region_rows,
    to_jsonable,
    trajectory_rows,
    write_trajectory_csv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_CHECK = 4


def _number(text: str) -> float:
    """argparse type accepting decimals and rationals such as -1/8."""
    try:
        value, _ = parse_number(text, "argument")
    except InputError as e:
        raise argparse.ArgumentTypeError(str(e)) from e
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwl-infinity",
        description="Analyze the periodic orbit at infinity of two-zone piecewise linear systems.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.log_level, help="Logging level")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", type=Path, default=None, help="Write the report to FILE")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("--input", type=Path, required=True, help="Parameter file (JSON)")

    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", parents=[with_input], help="Classify infinity")
    classify.add_argument("--tolerance", type=float, default=None)

    coeffs = sub.add_parser("coeffs", parents=[with_input], help="Series coefficients")
    coeffs.add_argument("--order", type=int, default=4)

    cycles = sub.add_parser("cycles", parents=[with_input], help="Find big limit cycles")
    cycles.add_argument("--u0-max", type=float, default=None)
    cycles.add_argument("--grid", type=int, default=None)
    cycles.add_argument("--emit-trace", action="store_true", help="Write one polyline per cycle")

    trace = sub.add_parser("trace", parents=[with_input], help="Sample an orbit")
    trace.add_argument("--start", type=_number, nargs=2, metavar=("X", "Y"), required=True)
    trace.add_argument("--turns", type=float, default=1.0)
    trace.add_argument("--samples", type=int, default=256, help="Samples per turn")

    unfold = sub.add_parser("unfold", parents=[common], help="Third-order unfolding")
    unfold.add_argument("--gamma-L", dest="gamma_L", type=_number, required=True)
    unfold.add_argument("--x-L", dest="x_L", type=_number, required=True)
    unfold.add_argument(
        "--target", type=_number, nargs=3, metavar=("D1", "D2", "D3"), default=(0.0, 0.0, 0.0)
    )

    region = sub.add_parser("region", parents=[common], help="Model-map regions")
    region.add_argument("--delta3", type=_number, required=True)
    region.add_argument(
        "--window",
        type=_number,
        nargs=4,
        metavar=("D1MIN", "D1MAX", "D2MIN", "D2MAX"),
        default=(-0.1, 0.1, -0.1, 0.1),
    )
    region.add_argument("--resolution", type=int, default=32)

    reproduce = sub.add_parser(
        "reproduce-example", parents=[common], help="Rerun the worked example with checks"
    )
    reproduce.add_argument("--tolerance", type=float, default=None)
    reproduce.add_argument("--emit-trace", action="store_true", help="Write the cycle polylines")

    serve = sub.add_parser("serve", help="Run the HTTP API")
    serve.add_argument("--host", default="0.0.0.0")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _trace_dir(args: argparse.Namespace) -> Path:
    return args.output.parent if args.output is not None else Path.cwd()


def _key_value_rows(data: Dict[str, Any], prefix: str = "") -> List[Tuple[str, Any]]:
    rows: List[Tuple[str, Any]] = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(_key_value_rows(value, f"{name}."))
        elif isinstance(value, list):
            rows.extend((f"{name}[{i}]", v) for i, v in enumerate(value, start=1))
        else:
            rows.append((name, value))
    return rows


def _run(
    args: argparse.Namespace, analyzer: InfinityAnalyzer
) -> Tuple[Dict[str, Any], Dict[str, Any], Optional[Tuple[Sequence[str], list]], int]:
    """Dispatch one sub-command.

    Returns:
        (inputs, outputs, csv table or None for key/value output, exit code)
    """
    inputs: Dict[str, Any] = {}
    spec = None
    if getattr(args, "input", None) is not None:
        loaded = load_spec(args.input)
        spec = loaded.spec
        inputs["file"] = str(args.input)
        inputs["spec"] = analyzer.describe_spec(loaded)

    if args.command == "classify":
        inputs["tolerance"] = args.tolerance
        verdict = analyzer.classify(spec, args.tolerance)
        return inputs, {"verdict": verdict}, None, EXIT_OK

    if args.command == "coeffs":
        inputs["order"] = args.order
        result = analyzer.coefficients(spec, args.order)
        columns = ("deltas", "L", "R", "time_L", "time_R")
        rows = [
            (i, *values)
            for i, values in enumerate(zip(*(result[c] for c in columns)), start=1)
        ]
        table = (("index", "delta", "L", "R", "time_L", "time_R"), rows)
        return inputs, result, table, EXIT_OK

    if args.command == "cycles":
        inputs.update(u0_max=args.u0_max, grid=args.grid)
        scan = analyzer.cycles(spec, args.u0_max, args.grid)
        outputs: Dict[str, Any] = {"scan": scan}
        if args.emit_trace:
            directory = _trace_dir(args)
            paths = []
            for i, cycle in enumerate(scan.cycles, start=1):
                path = directory / f"cycle_{i}.csv"
                write_trajectory_csv(trace_orbit(spec, (0.0, cycle.y_top), turns=1), path)
                paths.append(str(path))
            outputs["traces"] = paths
        header = (
            "u0_root", "y_top", "y_bottom", "tau_L", "tau_R", "slope", "multiplier", "stability"
        )
        rows = [
            (
                c.u0_root,
                c.y_top,
                c.y_bottom,
                c.tau_L,
                c.tau_R,
                c.displacement_slope,
                c.multiplier_proxy,
                c.stability.value,
            )
            for c in scan.cycles
        ]
        table = (header, rows)
        return inputs, outputs, table, EXIT_OK

    if args.command == "trace":
        inputs.update(start=list(args.start), turns=args.turns, samples=args.samples)
        trajectory = analyzer.trace(spec, args.start, args.turns, args.samples)
        return (
            inputs,
            {"trajectory": trajectory},
            (("t", "x", "y", "event"), trajectory_rows(trajectory)),
            EXIT_OK,
        )

    if args.command == "unfold":
        target = UnfoldingTarget(
            delta1=args.target[0], delta2=args.target[1], delta3=args.target[2]
        )
        inputs.update(gamma_L=args.gamma_L, x_L=args.x_L, target=target)
        return inputs, analyzer.unfold(args.gamma_L, args.x_L, target), None, EXIT_OK

    if args.command == "region":
        window = Window(
            delta1_min=args.window[0],
            delta1_max=args.window[1],
            delta2_min=args.window[2],
            delta2_max=args.window[3],
        )
        inputs.update(delta3=args.delta3, window=window, resolution=args.resolution)
        region = analyzer.region(args.delta3, window, args.resolution)
        return inputs, {"region": region}, (REGION_HEADER, region_rows(region)), EXIT_OK

    if args.command == "reproduce-example":
        inputs.update(tolerance=args.tolerance, emit_trace=args.emit_trace)
        outputs, passed = analyzer.reproduce_example(
            args.tolerance, _trace_dir(args) if args.emit_trace else None
        )
        table = (
            ("name", "value", "expected", "error", "kind", "tolerance", "passed"),
            [tuple(check.values()) for check in outputs["checks"]],
        )
        return inputs, outputs, table, EXIT_OK if passed else EXIT_CHECK

    raise InputError(f"unknown command {args.command!r}")


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text + "\n")
    else:
        output.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Report written to {output}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the pwl-infinity command."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    if args.command == "serve":
        import uvicorn

        uvicorn.run("pwl_infinity.main:app", host=args.host, port=args.port)
        return EXIT_OK

    analyzer = InfinityAnalyzer()
    started = time.perf_counter()
    try:
        inputs, outputs, table, code = _run(args, analyzer)
    except (InputError, ValidationError) as e:
        logger.error(f"Input error: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_INPUT
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        sys.stderr.write(f"numerical failure: {type(e).__name__}: {e}\n")
        return EXIT_NUMERIC

    if args.format == "csv":
        if table is None:
            table = (("field", "value"), _key_value_rows(to_jsonable(outputs)))
        _emit(csv_text(*table).rstrip("\n"), args.output)
    else:
        report = analyzer.report(args.command, inputs, outputs, started)
        _emit(dumps(report), args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
