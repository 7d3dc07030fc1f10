"""dulab-fig: render one figure from sweep outputs.

    dulab-fig <kind> --in <paths...> --out <image> [--bins N] [--log]

kind is one of density, trajectories, velocity, radii, fidelity.  CSV
paths under --in carry the data; a JSON path among them is the run's
metadata and feeds the analytic overlays.  The figure is written both
as PNG and as SVG at the requested path's stem.
"""

from __future__ import annotations

import argparse
import sys

from .plots import (
    DEFAULT_DPI,
    plot_density,
    plot_fidelity,
    plot_radii,
    plot_trajectories,
    plot_velocity,
    save_figure,
)
from .readers import (
    SchemaError,
    read_fidelity_csv,
    read_meta_json,
    read_spectrum_csv,
    read_velocity_csv,
)

KINDS = ("density", "trajectories", "velocity", "radii", "fidelity")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dulab-fig", description="Render figures from dulab CSV/JSON outputs"
    )
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument(
        "--in", dest="inputs", nargs="+", required=True,
        help="input CSV files plus (optionally) one metadata JSON",
    )
    parser.add_argument("--out", required=True, help="output image path (.png or .svg)")
    parser.add_argument("--bins", type=int, default=200, help="density histogram bins")
    parser.add_argument("--log", action="store_true", help="logarithmic value axis")
    parser.add_argument("--dpi", type=int, default=DEFAULT_DPI)
    return parser


def _split_inputs(paths: list[str]):
    csvs = [p for p in paths if not p.endswith(".json")]
    jsons = [p for p in paths if p.endswith(".json")]
    if len(jsons) > 1:
        raise SchemaError(f"at most one metadata JSON is allowed, got {len(jsons)}")
    meta = read_meta_json(jsons[0]) if jsons else None
    return csvs, meta


def run(args: argparse.Namespace) -> dict:
    csvs, meta = _split_inputs(args.inputs)
    if args.kind == "density":
        tables = [read_spectrum_csv(p) for p in csvs]
        fig, info = plot_density(tables, meta, bins=args.bins)
    elif args.kind == "trajectories":
        tables = [read_spectrum_csv(p) for p in csvs]
        fig, info = plot_trajectories(tables)
    elif args.kind == "velocity":
        if len(csvs) != 2:
            raise SchemaError(
                f"velocity needs exactly two curve CSVs (model, baseline), got {len(csvs)}"
            )
        fig, info = plot_velocity(
            read_velocity_csv(csvs[0]), read_velocity_csv(csvs[1]), meta, log=args.log
        )
    elif args.kind == "radii":
        tables = [read_spectrum_csv(p) for p in csvs]
        fig, info = plot_radii(tables, meta)
    else:
        tables = [read_fidelity_csv(p) for p in csvs]
        fig, info = plot_fidelity(tables, meta)
    info["written"] = save_figure(fig, args.out, dpi=args.dpi)
    return info


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        info = run(args)
    except SchemaError as exc:
        print(f"dulab-fig: {exc}", file=sys.stderr)
        return 2
    pieces = ", ".join(f"{k}={v}" for k, v in info.items() if k != "written")
    for path in info["written"]:
        print(f"wrote {path}")
    if pieces:
        print(pieces)
    return 0


if __name__ == "__main__":
    sys.exit(main())
