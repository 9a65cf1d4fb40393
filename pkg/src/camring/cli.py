"""Command-line interface: partition exports, MSE sweeps, bounds, figures,
and the explorer service.

Exit codes: 0 success, 2 invalid flags (argparse), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CamringError
from .experiments import (
    GROWTH_SAMPLES,
    run_growth_preset,
    sweep_cameras,
    write_mse_csv,
)
from .geometry import CameraArray, Projection
from .localise import worst_case_bound
from .partition import build_partition, partition_to_dict
from .svgplot import render_growth_svg, render_partition_svg


def _projection_from_flags(parser: argparse.ArgumentParser, args) -> Projection:
    if args.projection == "orth":
        return Projection.orthogonal()
    if args.focal is None:
        parser.error("--focal is required with --projection persp")
    if args.focal <= 0:
        parser.error("--focal must be positive")
    return Projection.perspective(args.focal)


def _add_common_flags(sub: argparse.ArgumentParser, with_pixels: bool = True) -> None:
    sub.add_argument("--radius", type=float, default=1.0, help="disc radius")
    sub.add_argument(
        "--projection", choices=["orth", "persp"], default="orth",
        help="projection model",
    )
    sub.add_argument("--focal", type=float, help="focal length (persp only)")
    if with_pixels:
        sub.add_argument("--pixels", type=int, required=True, help="pixels per sensor")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camring",
        description="Localisation accuracy of circular camera arrays",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_part = subs.add_parser("partition", help="export the cell partition")
    p_part.add_argument("--cameras", type=int, required=True)
    _add_common_flags(p_part)
    p_part.add_argument("--disc-sides", type=int, default=720)
    p_part.add_argument("--out", type=Path, required=True, help=".json or .svg file")

    p_mse = subs.add_parser("mse", help="Monte-Carlo MSE sweep to CSV")
    p_mse.add_argument("--cameras-from", type=int, required=True)
    p_mse.add_argument("--cameras-to", type=int, required=True)
    _add_common_flags(p_mse)
    p_mse.add_argument(
        "--estimator", choices=["centroid", "lsq", "twoview"], default="centroid"
    )
    p_mse.add_argument("--samples", type=int, default=10_000)
    p_mse.add_argument("--seed", type=int, default=0)
    p_mse.add_argument("--workers", type=int, default=1)
    p_mse.add_argument("--out", type=Path, required=True, help=".csv file")

    p_bound = subs.add_parser("bound", help="print the worst-case error bound")
    p_bound.add_argument("--cameras", type=int, required=True)
    p_bound.add_argument("--radius", type=float, default=1.0)

    p_fig = subs.add_parser("figure", help="render preset figures")
    p_fig.add_argument("name", choices=["growth"], help="figure preset")
    p_fig.add_argument("--samples", type=int, default=GROWTH_SAMPLES)
    p_fig.add_argument("--seed", type=int, default=0)
    p_fig.add_argument("--workers", type=int, default=1)
    p_fig.add_argument("--out", type=Path, required=True, help=".svg file")

    p_serve = subs.add_parser("serve", help="start the explorer service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")

    return parser


def _cmd_partition(parser, args) -> int:
    proj = _projection_from_flags(parser, args)
    array = CameraArray(m=args.cameras, r=args.radius, n=args.pixels, projection=proj)
    part = build_partition(array, disc_sides=args.disc_sides)
    suffix = args.out.suffix.lower()
    if suffix == ".json":
        payload = json.dumps(partition_to_dict(part))
    elif suffix == ".svg":
        payload = render_partition_svg(part)
    else:
        parser.error("--out must end in .json or .svg")
    args.out.write_text(payload)
    return 0


def _cmd_mse(parser, args) -> int:
    proj = _projection_from_flags(parser, args)
    if args.cameras_to < args.cameras_from:
        parser.error("--cameras-to must be >= --cameras-from")
    if args.out.suffix.lower() != ".csv":
        parser.error("--out must end in .csv")
    m_values = list(range(args.cameras_from, args.cameras_to + 1))
    tables = sweep_cameras(
        m_values,
        args.pixels,
        args.radius,
        [proj],
        estimator=args.estimator,
        samples=args.samples,
        seed=args.seed,
        workers=args.workers,
    )
    args.out.write_text(write_mse_csv(tables))
    return 0


def _cmd_bound(args) -> int:
    print(repr(worst_case_bound(args.cameras, args.radius)))
    return 0


def _cmd_figure(parser, args) -> int:
    if args.out.suffix.lower() != ".svg":
        parser.error("--out must end in .svg")
    tables, fits = run_growth_preset(
        samples=args.samples, seed=args.seed, workers=args.workers
    )
    args.out.write_text(render_growth_svg(tables, fits))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "partition":
            return _cmd_partition(parser, args)
        if args.command == "mse":
            return _cmd_mse(parser, args)
        if args.command == "bound":
            return _cmd_bound(args)
        if args.command == "figure":
            return _cmd_figure(parser, args)
        if args.command == "serve":
            return _cmd_serve(args)
    except (CamringError, ValueError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
