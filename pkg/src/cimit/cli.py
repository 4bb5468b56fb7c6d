"""Command-line front end.

Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import imaging
from .metrics import comparator_efficiency, energy_saving, throughput
from .modem import spectral_efficiency
from .simkit import LinkConfig, SweepConfig, run_ber_sweep, run_image_link

FILTERS = ("median", "majority", "morph", "wiener", "wavelet", "nlm", "pipeline")


class UsageError(Exception):
    pass


def parse_snr_range(text: str) -> list[float]:
    """``start:step:stop`` (inclusive), a comma list, or a single value."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"expected start:step:stop, got {text!r}")
        try:
            start, step, stop = (float(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad SNR range {text!r}") from None
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"empty SNR range {text!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + k * step for k in range(n)]
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR value {text!r}") from None


def _snr_value(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR value {text!r}") from None
    if math.isnan(value) or value == -math.inf:
        raise argparse.ArgumentTypeError(f"bad SNR value {text!r}")
    return value


def _add_link_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", type=str.upper, choices=("CIM", "QAM", "PSK"), default="CIM")
    p.add_argument("--m", type=int, required=True, help="constellation order M")
    p.add_argument("--nw", type=int, help="code index bits per branch (CIM)")
    p.add_argument("--l", type=int, help="chips per spreading code (CIM)")
    p.add_argument("--nr", type=int, default=1, help="receive antennas")


def _link_from_args(args) -> LinkConfig:
    if args.scheme == "CIM" and (args.nw is None or args.l is None):
        raise UsageError("CIM needs --nw and --l")
    try:
        return LinkConfig(args.scheme, args.m, args.nr, args.nw or 0, args.l)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config_line(args, keys) -> str:
    fields = " ".join(f"{k}={getattr(args, k)}" for k in keys if getattr(args, k, None) is not None)
    return f"config: {args.command} {fields}"


def cmd_ber(args) -> int:
    link = _link_from_args(args)
    try:
        cfg = SweepConfig(link.scheme, link.order, link.n_r, link.n_w, link.chip_len,
                          snr_points=args.snr, min_bit_errors=args.min_errors,
                          max_bits=args.max_bits, master_seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = run_ber_sweep(cfg, workers=args.workers)
    text = result.to_csv(_config_line(
        args, ("scheme", "m", "nw", "l", "nr", "seed", "min_errors", "max_bits")))
    _emit(text, args.out)
    return 0


def cmd_send_image(args) -> int:
    link = _link_from_args(args)
    image = imaging.load_pgm(args.inp)
    res = run_image_link(image, link, args.snr, seed=args.seed)
    imaging.save_pgm(args.out, res.received)
    buf = io.StringIO()
    buf.write("# " + _config_line(args, ("scheme", "m", "nw", "l", "nr", "snr", "seed")) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("ber", "psnr"))
    writer.writerow((repr(res.ber), repr(res.psnr)))
    _emit(buf.getvalue(), args.report)
    return 0


def apply_filter(img: np.ndarray, args) -> np.ndarray:
    name = args.filter
    if name == "median":
        return imaging.median_filter(img, args.radius)
    if name == "majority":
        return imaging.majority_filter(img, args.radius)
    if name == "morph":
        fp = np.ones((2 * args.radius + 1,) * 2, dtype=bool)
        return imaging.morph_filter(img, fp)
    if name == "wiener":
        return imaging.wiener_local(img, args.window)
    if name == "wavelet":
        return imaging.wavelet_denoise(img, args.threshold)
    if name == "nlm":
        return imaging.nlm_denoise(img, args.patch, args.search, args.h, args.sigma)
    return imaging.enhance_pipeline(img)


def cmd_enhance(args) -> int:
    img = imaging.load_pgm(args.inp)
    try:
        out = apply_filter(img, args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    imaging.save_pgm(args.out, out)
    if args.ref is not None:
        ref = imaging.load_pgm(args.ref)
        print("filter,psnr_in,psnr_out")
        print(f"{args.filter},{imaging.psnr(ref, img):.4f},{imaging.psnr(ref, out):.4f}")
    return 0


def cmd_metrics(args) -> int:
    try:
        eta = spectral_efficiency(args.nw, args.m)
        if args.quantity == "eta":
            print("m,nw,eta")
            print(f"{args.m},{args.nw},{eta}")
        elif args.quantity == "throughput":
            print("eta,aber,ts,throughput")
            for aber in args.aber:
                print(f"{eta},{aber!r},{args.ts!r},{throughput(aber, eta, args.ts):.6g}")
        else:
            versus = [args.vs] if args.vs else ["SM", "QAM", "PSK"]
            print("vs,n_c,eta,energy_saving_pct")
            for name in versus:
                n_c = comparator_efficiency(name, args.m, args.nt)
                print(f"{name.lower()},{n_c},{eta},{energy_saving(n_c, eta):.1f}")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return 0


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as f:
            f.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cimit", description="Code index modulation image-transmission simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ber", help="Monte Carlo BER sweep, written as CSV")
    _add_link_flags(p)
    p.add_argument("--snr", type=parse_snr_range, required=True, metavar="START:STEP:STOP")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-errors", type=int, default=100)
    p.add_argument("--max-bits", type=int, default=10 ** 7)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("send-image", help="transmit a PGM image over the link")
    _add_link_flags(p)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--snr", type=_snr_value, required=True, help="dB, or 'inf' for no noise")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--report", help="CSV path for ber,psnr (default stdout)")
    p.set_defaults(func=cmd_send_image)

    p = sub.add_parser("enhance", help="apply an enhancement filter to a PGM image")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--filter", choices=FILTERS, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ref", help="reference image for PSNR reporting")
    p.add_argument("--radius", type=int, default=1, help="median/majority/morph radius")
    p.add_argument("--window", type=int, default=3, help="wiener window size")
    p.add_argument("--threshold", type=float, help="wavelet threshold override")
    p.add_argument("--patch", type=int, default=1, help="nlm patch radius")
    p.add_argument("--search", type=int, default=5, help="nlm search radius")
    p.add_argument("--h", type=float, default=10.0, help="nlm filter strength")
    p.add_argument("--sigma", type=float, help="nlm noise std (default: estimated)")
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("metrics", help="closed-form efficiency figures")
    p.add_argument("quantity", choices=("throughput", "energy", "eta"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--nw", type=int, required=True)
    p.add_argument("--aber", type=float, nargs="+", default=[0.0])
    p.add_argument("--ts", type=float, default=1.0)
    p.add_argument("--vs", type=str.upper, choices=("SM", "QAM", "PSK", "QPSK"))
    p.add_argument("--nt", type=int, default=2, help="transmit antennas of the SM comparator")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, imaging.PgmFormatError) as exc:
        print(f"cimit: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
