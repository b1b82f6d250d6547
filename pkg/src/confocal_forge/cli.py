"""Command-line interface: analyze, simulate, compare, make-truth.

Exit codes: 0 success, 1 usage error (bad flags, conflicting noise
sources), 2 domain or runtime error; domain failures print one line
naming the error case.
"""
from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import io as cfio
from .errors import ConfocalForgeError
from .pipeline import DEFAULT_BIT_DEPTH, DEFAULT_SEED, SimConfig, simulate
from .psfconv import DEFAULT_TRUNCATION
from .segmentstats import DEFAULT_BINS, DEFAULT_BLUR_SIGMA, analyze_stack, segment
from .stack import Moments3, central_moments
from .synth import RingSpec, make_points, make_ring


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _floats3(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 comma-separated values, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a numeric triple: {text!r}")


def _ints3(text: str) -> tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 3 comma-separated integers, got {text!r}")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer triple: {text!r}")


def _positions(text: str) -> list[tuple[int, int, int]]:
    return [_ints3(part) for part in text.split(";") if part]


def _print_stats(stats, label: str = "") -> None:
    prefix = f"{label} " if label else ""
    print(f"{prefix}threshold: {stats.threshold:g}")
    print(
        f"{prefix}noise : n={stats.n_noise}  mean={stats.noise.mean:g}  "
        f"variance={stats.noise.variance:g}  third_central={stats.noise.third_central:g}"
    )
    print(f"{prefix}signal: n={stats.n_signal}  mean={stats.signal_mean:g}")


def _cmd_analyze(args) -> int:
    stack = cfio.read_stack(args.sample)
    stats = analyze_stack(stack, args.blur_sigma, args.bins)
    cfio.write_stats(stats, args.out)
    _print_stats(stats)
    print(f"wrote {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    sources = [s for s in ("stats", "noise", "sample") if getattr(args, s) is not None]
    if len(sources) != 1:
        _simulate_usage_error(args, sources)
    if args.noise is not None and args.signal_mean is None:
        args.parser.error("--signal-mean is required with --noise")
    if args.noise is None and args.signal_mean is not None:
        args.parser.error("--signal-mean only applies with --noise")

    if args.stats is not None:
        stats = cfio.read_stats(args.stats)
        noise, signal_mean = stats.noise, stats.signal_mean
    elif args.sample is not None:
        stats = analyze_stack(cfio.read_stack(args.sample), args.blur_sigma, args.bins)
        noise, signal_mean = stats.noise, stats.signal_mean
    else:
        noise = Moments3(*args.noise)
        signal_mean = args.signal_mean

    truth = cfio.read_stack(args.truth)
    try:
        config = SimConfig(
            psf=args.psf,
            bin_factors=args.bin,
            noise=noise,
            signal_mean=signal_mean,
            seed=args.seed,
            bit_depth=args.bit_depth,
            blur_sigma_voxels=args.blur_sigma,
            truncation=args.truncation,
        )
    except ValueError as exc:
        args.parser.error(str(exc))
    out = simulate(truth, config)
    cfio.write_stack(out.image, args.out, config.bit_depth)
    if args.save_noiseless:
        cfio.write_stack(out.noiseless, args.save_noiseless, config.bit_depth)
    nx, ny, nz = out.image.dims
    print(f"scale: {out.scale:g}")
    print(f"threshold: {out.threshold:g}")
    print(f"output dims: {nx}x{ny}x{nz} ({config.bit_depth}-bit)")
    print(f"wrote {args.out}")
    return 0


def _simulate_usage_error(args, sources) -> None:
    if sources:
        args.parser.error(f"give exactly one noise source, got: {', '.join('--' + s for s in sources)}")
    args.parser.error("one of --stats, --noise or --sample is required")


def _cmd_compare(args) -> int:
    stack_a = cfio.read_stack(args.image_a)
    stack_b = cfio.read_stack(args.image_b)
    populations = []
    for name, stack in (("a", stack_a), ("b", stack_b)):
        mask, _ = segment(stack, args.blur_sigma, args.bins)
        populations.append((f"{name} noise ", stack.data[~mask]))
        populations.append((f"{name} signal", stack.data[mask]))

    lo = min(float(p.min()) for _, p in populations)
    hi = max(float(p.max()) for _, p in populations)
    if lo == hi:
        hi = lo + 1.0
    edges = np.histogram_bin_edges([], bins=args.bins, range=(lo, hi))
    centers = 0.5 * (edges[:-1] + edges[1:])
    freqs = [np.histogram(p, bins=edges)[0] / p.size for _, p in populations]

    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["bin_center", "a_noise_freq", "a_signal_freq", "b_noise_freq", "b_signal_freq"]
        )
        for i, center in enumerate(centers):
            writer.writerow([repr(float(center))] + [repr(float(f[i])) for f in freqs])

    for name, pop in populations:
        m = central_moments(pop)
        print(
            f"{name}: n={pop.size}  mean={m.mean:g}  variance={m.variance:g}  "
            f"third_central={m.third_central:g}"
        )
    print(f"wrote {args.out}")
    return 0


def _cmd_make_truth(args) -> int:
    if args.shape == "ring":
        spec = RingSpec(
            dims=args.dims,
            major_radius=args.radius,
            tube_radius=args.tube,
            center=args.center,
            plane=args.plane,
            voxel_size=args.voxel_size,
        )
        stack = make_ring(spec)
    else:
        stack = make_points(args.dims, args.voxel_size, args.positions or [])
    cfio.write_stack(stack, args.out, bit_depth=16)
    nx, ny, nz = stack.dims
    print(f"wrote {args.out} ({nx}x{ny}x{nz}, {int(np.count_nonzero(stack.data))} nonzero voxels)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="confocal-forge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[], help="extract noise/signal stats from a sample stack")
    p.add_argument("sample", help="sample image (multi-page TIFF)")
    p.add_argument("--blur-sigma", type=_floats3, default=DEFAULT_BLUR_SIGMA, metavar="SX,SY,SZ")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--out", required=True, help="output stats file (.stats.json)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("simulate", help="simulate a confocal stack from a ground truth")
    p.add_argument("--truth", required=True, help="ground-truth stack (TIFF)")
    p.add_argument("--psf", type=_floats3, required=True, metavar="SX,SY,SZ",
                   help="Gaussian PSF sigmas in physical units")
    p.add_argument("--bin", type=_ints3, required=True, metavar="BX,BY,BZ",
                   help="integer binning factors")
    p.add_argument("--stats", help="stats file from analyze")
    p.add_argument("--noise", type=_floats3, metavar="M1,M2,M3",
                   help="noise mean, variance, third central moment")
    p.add_argument("--signal-mean", type=float, help="target raw signal mean (with --noise)")
    p.add_argument("--sample", help="sample image to analyze for noise/signal")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--bit-depth", type=int, choices=(8, 16), default=DEFAULT_BIT_DEPTH)
    p.add_argument("--blur-sigma", type=_floats3, default=DEFAULT_BLUR_SIGMA, metavar="SX,SY,SZ",
                   help="blur (voxels) for the internal scaling segmentation")
    p.add_argument("--truncation", type=float, default=DEFAULT_TRUNCATION)
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--save-noiseless", metavar="PATH", help="also write the pre-noise stack")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="segmented histograms of two stacks over shared bins")
    p.add_argument("image_a")
    p.add_argument("image_b")
    p.add_argument("--blur-sigma", type=_floats3, default=DEFAULT_BLUR_SIGMA, metavar="SX,SY,SZ")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--out", required=True, help="output CSV")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("make-truth", help="generate a synthetic ground-truth stack")
    shape_sub = p.add_subparsers(dest="shape", required=True)
    ring = shape_sub.add_parser("ring", help="torus in an axis-aligned plane")
    ring.add_argument("--dims", type=_ints3, required=True, metavar="NX,NY,NZ")
    ring.add_argument("--radius", type=float, required=True, help="major radius (voxels)")
    ring.add_argument("--tube", type=float, required=True, help="tube radius (voxels)")
    ring.add_argument("--center", type=_floats3, default=None, metavar="CX,CY,CZ")
    ring.add_argument("--plane", choices=("xy", "xz", "yz"), default="xy")
    ring.add_argument("--voxel-size", type=_floats3, default=(1.0, 1.0, 1.0), metavar="VX,VY,VZ")
    ring.add_argument("--out", required=True)
    ring.set_defaults(func=_cmd_make_truth)
    points = shape_sub.add_parser("points", help="isolated unit-intensity voxels")
    points.add_argument("--dims", type=_ints3, required=True, metavar="NX,NY,NZ")
    points.add_argument("--positions", type=_positions, default=[],
                        metavar="X,Y,Z[;X,Y,Z...]")
    points.add_argument("--voxel-size", type=_floats3, default=(1.0, 1.0, 1.0), metavar="VX,VY,VZ")
    points.add_argument("--out", required=True)
    points.set_defaults(func=_cmd_make_truth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.parser = parser
    try:
        return args.func(args)
    except ConfocalForgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main(sys.argv[1:]))
