#!/usr/bin/env python3
"""
CLI: quarter Laplacian smoothing, detail and low-light enhancement, response maps,
kernel spectra, diffusion profiles, benchmark, and synthetic test images.

Exit status: 0 success, 1 usage error, 2 image I/O error, 3 processing error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Sequence

from image_core import (
    ImageBuffer,
    ImageIOException,
    ImageProcessingException,
    load_image,
    map_channels,
    save_image,
)
from image_core.synthetic import (
    DEFAULT_HIGH,
    DEFAULT_LOW,
    DEFAULT_NOISE_AMPLITUDE,
    DEFAULT_NOISE_LEVEL,
    Pattern,
    generate_pattern,
)
from quarter_laplacian.applications import (
    DEFAULT_ALPHA,
    DEFAULT_GAMMA,
    DEFAULT_MAX_GAIN,
    DEFAULT_SCALES,
    EnhanceConfig,
    LowLightConfig,
    enhance_detail,
    enhance_lowlight,
    smooth,
)
from quarter_laplacian.benchmark import (
    DEFAULT_BENCH_ITERATIONS,
    DEFAULT_BENCH_REPEATS,
    DEFAULT_BENCH_SIZE,
    LAPLACIAN_NAIVE,
    QUARTER_FAST,
    QUARTER_NAIVE,
    BenchReport,
    run_benchmark,
)
from quarter_laplacian.diffusion import DEFAULT_C, DEFAULT_ITERATIONS, DiffusionConfig, DiffusionVariant, diffusion_profiles
from quarter_laplacian.kernels import DEFAULT_LAPLACIAN, KernelVariant, laplacian_kernel
from quarter_laplacian.quarter_filter import ResponsePath, feature_map_image, quarter_response
from quarter_laplacian.spectrum import DEFAULT_ANGLES, DEFAULT_RADII, DEFAULT_SPECTRUM_SIZE, isotropy_score, kernel_spectrum, spectrum_image_plane

logger = logging.getLogger("quarter_filter")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_PROCESSING = 3

DEFAULT_THREADS = os.cpu_count() or 1


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; usage errors here are 1."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _add_io_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("-i", "--input", type=Path, required=True, help="Input PNG / PGM (P5) / PPM (P6)")
    p.add_argument("-o", "--output", type=Path, required=True, help="Output image; format from extension (.png, .pgm, .ppm)")
    p.add_argument("--drop-alpha", action="store_true", help="Discard an alpha channel instead of rejecting the file")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        description="Quarter Laplacian filtering toolkit.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=(
            "Examples:\n"
            "  %(prog)s gen --pattern step --size 8 -o s.pgm\n"
            "  %(prog)s smooth -i s.pgm -o t.pgm --iters 50\n"
            "  %(prog)s response -i photo.png -o dm.png --maps\n"
            "  %(prog)s bench --size 1024 --json"
        ),
    )
    parser.add_argument(
        "--threads", type=int, default=DEFAULT_THREADS, help=f"Worker threads for per-channel work (default: hardware threads, {DEFAULT_THREADS})"
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="INFO logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("smooth", help="Edge-preserving smoothing by diffusion")
    _add_io_args(p)
    p.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS, help=f"Diffusion iterations (default: {DEFAULT_ITERATIONS})")
    p.add_argument("--c", type=float, default=DEFAULT_C, help=f"Step size in (0, 1] (default: {DEFAULT_C})")
    p.add_argument("--variant", choices=[v.value for v in DiffusionVariant], default=DiffusionVariant.QUARTER.value)
    p.add_argument("--kernel", choices=[k.value for k in KernelVariant], default=DEFAULT_LAPLACIAN.value, help="Kernel for --variant laplacian")
    p.add_argument("--path", choices=[r.value for r in ResponsePath], default=ResponsePath.FAST.value, help="Quarter response path")

    p = sub.add_parser("enhance", help="Detail enhancement: structure + alpha * texture")
    _add_io_args(p)
    p.add_argument("--iters", type=int, default=DEFAULT_ITERATIONS, help=f"Smoothing iterations (default: {DEFAULT_ITERATIONS})")
    p.add_argument("--alpha", type=float, default=DEFAULT_ALPHA, help=f"Texture gain (default: {DEFAULT_ALPHA:g})")

    p = sub.add_parser("lowlight", help="Multi-scale low-light enhancement (RGB input)")
    _add_io_args(p)
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA, help=f"Base-layer gamma in (0, 1] (default: {DEFAULT_GAMMA})")
    p.add_argument(
        "--scales", type=_int_list, default=DEFAULT_SCALES, help=f"Ascending diffusion iteration counts (default: {','.join(map(str, DEFAULT_SCALES))})"
    )
    p.add_argument("--max-gain", type=float, default=DEFAULT_MAX_GAIN, help=f"Per-pixel gain cap (default: {DEFAULT_MAX_GAIN:g})")
    p.add_argument("--detail-gains", type=_float_list, default=None, help="One weight per detail band (default: all 1)")

    p = sub.add_parser("response", help="Quarter response d_m as an image (value + 128)")
    _add_io_args(p)
    p.add_argument("--path", choices=[r.value for r in ResponsePath], default=ResponsePath.FAST.value)
    p.add_argument("--maps", action="store_true", help="Also write <stem>_d1..d4<ext> next to the output")

    p = sub.add_parser("spectrum", help="Kernel magnitude spectrum image + isotropy scores")
    p.add_argument("--kernel", choices=[k.value for k in KernelVariant], required=True)
    p.add_argument("-o", "--output", type=Path, required=True, help="Spectrum image (.png, .pgm, .ppm)")
    p.add_argument("--n", type=int, default=DEFAULT_SPECTRUM_SIZE, help=f"Even grid size >= 32 (default: {DEFAULT_SPECTRUM_SIZE})")
    p.add_argument(
        "--radii", type=_float_list, default=DEFAULT_RADII, help=f"Radii in cycles/sample (default: {','.join(map(str, DEFAULT_RADII))})"
    )
    p.add_argument("--json", action="store_true", help="Machine-readable JSON on stdout")

    p = sub.add_parser("profile", help="Row profile after every diffusion iteration, as CSV")
    p.add_argument("-i", "--input", type=Path, required=True)
    p.add_argument("-o", "--output", type=Path, required=True, help="CSV file: iteration,x,value")
    p.add_argument("--drop-alpha", action="store_true")
    p.add_argument("--row", type=int, required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--channel", type=int, default=0)
    p.add_argument("--c", type=float, default=DEFAULT_C)
    p.add_argument("--variant", choices=[v.value for v in DiffusionVariant], default=DiffusionVariant.QUARTER.value)

    p = sub.add_parser("bench", help="Median per-iteration time of Laplacian and quarter diffusion")
    p.add_argument("--size", type=int, default=DEFAULT_BENCH_SIZE)
    p.add_argument("--iters", type=int, default=DEFAULT_BENCH_ITERATIONS)
    p.add_argument("--repeats", type=int, default=DEFAULT_BENCH_REPEATS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="Machine-readable JSON on stdout")

    p = sub.add_parser("gen", help="Synthetic test image")
    p.add_argument("--pattern", choices=[s.value for s in Pattern], required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.add_argument("--channels", type=int, choices=(1, 3), default=1)
    p.add_argument("--seed", type=int, default=0, help="Noise seed")
    p.add_argument("--low", type=float, default=DEFAULT_LOW, help="step/corner background")
    p.add_argument("--high", type=float, default=DEFAULT_HIGH, help="step/corner foreground")
    p.add_argument("--level", type=float, default=DEFAULT_NOISE_LEVEL, help="noise mean level")
    p.add_argument("--amplitude", type=float, default=DEFAULT_NOISE_AMPLITUDE, help="noise half-range")
    return parser


def _cmd_smooth(args: argparse.Namespace) -> int:
    img = load_image(args.input, drop_alpha=args.drop_alpha)
    cfg = DiffusionConfig(variant=args.variant, c=args.c, iterations=args.iters, kernel=args.kernel, path=args.path)
    save_image(smooth(img, cfg, max_workers=args.threads), args.output)
    return EXIT_OK


def _cmd_enhance(args: argparse.Namespace) -> int:
    img = load_image(args.input, drop_alpha=args.drop_alpha)
    cfg = EnhanceConfig(iterations=args.iters, alpha=args.alpha)
    save_image(enhance_detail(img, cfg, max_workers=args.threads), args.output)
    return EXIT_OK


def _cmd_lowlight(args: argparse.Namespace) -> int:
    img = load_image(args.input, drop_alpha=args.drop_alpha)
    cfg = LowLightConfig(scales=args.scales, gamma=args.gamma, max_gain=args.max_gain, detail_gains=args.detail_gains)
    save_image(enhance_lowlight(img, cfg, max_workers=args.threads), args.output)
    return EXIT_OK


def _cmd_response(args: argparse.Namespace) -> int:
    img = load_image(args.input, drop_alpha=args.drop_alpha)
    path = ResponsePath(args.path)
    per_channel = map_channels(img, lambda ch: quarter_response(ch, path), max_workers=args.threads)
    save_image(ImageBuffer.stack([feature_map_image(m.selected) for m in per_channel]), args.output)
    if args.maps:
        out: Path = args.output
        for i in range(1, 5):
            target = out.with_name(f"{out.stem}_d{i}{out.suffix}")
            save_image(ImageBuffer.stack([feature_map_image(m.d(i)) for m in per_channel]), target)
    return EXIT_OK


def _print_isotropy_table(rows: List[Dict[str, Any]], radii: Sequence[float]) -> None:
    name_w = max(len("Kernel"), *(len(r["kernel"]) for r in rows))
    col_w = 10
    header_parts = [f"{'':1}", f"{'Kernel':<{name_w}}"] + [f"{f'CV@{r:g}':>{col_w}}" for r in radii] + [f"{'Score':>{col_w}}"]
    header = " ".join(header_parts)
    print(header)
    print("-" * len(header))
    for row in rows:
        mark = "*" if row["selected"] else " "
        parts = [mark, f"{row['kernel']:<{name_w}}"] + [f"{cv:>{col_w}.6f}" for cv in row["cv_by_radius"]] + [f"{row['score']:>{col_w}.6f}"]
        print(" ".join(parts))


def _cmd_spectrum(args: argparse.Namespace) -> int:
    selected = KernelVariant(args.kernel)
    rows: List[Dict[str, Any]] = []
    for variant in KernelVariant:
        s = kernel_spectrum(laplacian_kernel(variant), args.n)
        rows.append(
            {
                "kernel": variant.value,
                "selected": variant == selected,
                "cv_by_radius": [isotropy_score(s, [r], DEFAULT_ANGLES) for r in args.radii],
                "score": isotropy_score(s, args.radii, DEFAULT_ANGLES),
            }
        )
        if variant == selected:
            save_image(ImageBuffer.from_array(spectrum_image_plane(s)), args.output)

    if args.json:
        print(json.dumps({"n": args.n, "radii": list(args.radii), "angles": DEFAULT_ANGLES, "rows": rows}, indent=2))
        return EXIT_OK

    print(f"Isotropy (mean angular CV of |H|, lower is more isotropic), N={args.n}, {DEFAULT_ANGLES} angles")
    _print_isotropy_table(rows, args.radii)
    return EXIT_OK


def _cmd_profile(args: argparse.Namespace) -> int:
    img = load_image(args.input, drop_alpha=args.drop_alpha)
    cfg = DiffusionConfig(variant=args.variant, c=args.c, iterations=args.iters)
    profiles = diffusion_profiles(img.channel(args.channel), args.row, cfg)
    try:
        with open(args.output, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["iteration", "x", "value"])
            for it, values in enumerate(profiles):
                for x, v in enumerate(values):
                    writer.writerow([it, x, repr(float(v))])
    except OSError as e:
        raise ImageIOException(f"unwritable path: {args.output}: {e}") from e
    return EXIT_OK


def _print_bench_table(report: BenchReport) -> None:
    name_w = max(len("Filter"), *(len(r.name) for r in report.results))
    ms_w = 14
    header = f"{'Filter':<{name_w}} {'ms / iter':>{ms_w}}"
    print(header)
    print("-" * len(header))
    for r in report.results:
        print(f"{r.name:<{name_w}} {r.median_ms_per_iter:>{ms_w}.3f}")
    print("-" * len(header))
    print(f"quarter fast / laplacian:     {report.ratio(QUARTER_FAST, LAPLACIAN_NAIVE):.2f}x")
    print(f"quarter fast / quarter naive: {report.ratio(QUARTER_FAST, QUARTER_NAIVE):.2f}x")


def _cmd_bench(args: argparse.Namespace) -> int:
    report = run_benchmark(size=args.size, iterations=args.iters, repeats=args.repeats, seed=args.seed)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
        return EXIT_OK
    print(f"Diffusion step timing: {report.size}x{report.size}, {report.iters} iterations, median of {report.repeats} repeats")
    _print_bench_table(report)
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    img = generate_pattern(
        Pattern(args.pattern),
        args.size,
        channels=args.channels,
        low=args.low,
        high=args.high,
        level=args.level,
        amplitude=args.amplitude,
        seed=args.seed,
    )
    save_image(img, args.output)
    return EXIT_OK


COMMANDS = {
    "smooth": _cmd_smooth,
    "enhance": _cmd_enhance,
    "lowlight": _cmd_lowlight,
    "response": _cmd_response,
    "spectrum": _cmd_spectrum,
    "profile": _cmd_profile,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.threads < 1:
        parser.error("--threads must be >= 1")

    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    logger.info(f"{args.command}: threads={args.threads}")
    try:
        return COMMANDS[args.command](args)
    except ImageIOException as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO
    except ImageProcessingException as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_PROCESSING


if __name__ == "__main__":
    raise SystemExit(main())
