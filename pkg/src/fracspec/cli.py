"""
Command-line front end.

Subcommands: ``gen`` (tones, coupled, noise, bandpass), ``analyze``,
``kscan``, ``verify`` and ``noisestudy``. Every flag can also come from a
JSON file passed with ``--config``; its keys are the flag names with dashes
replaced by underscores, and flags given on the command line win.

Exit codes: 0 success, 1 verification or detection failure, 2 usage or
input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .core import EstimatorConfig, averaged_fractional_bispectrum
from .cumulant import MAX_VERIFY_LENGTH, verify_fourier_pair
from .detection import DETECTION_THRESHOLD, k_grid, k_scan, peak_statistic
from .errors import FracspecError
from .io import atomic_write, dumps_json, format_signal, read_signal, write_grid
from .noise_study import (
    StudyConfig,
    contaminated_signal_study,
    default_contaminated_config,
    gaussian_null_study,
)
from .signals import (
    NoiseSpec,
    ToneSpec,
    bandpass_noise,
    coupled_triple,
    gaussian_noise,
    multi_tone,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_ESTIMATION_DEFAULTS = dict(
    interp="linear", window="rect", detrend="mean", segments=0, overlap=0.0, extent=None,
)

DEFAULTS = {
    "gen": dict(n=64, fs=1.0, out="-", freq=[], f1=None, f2=None, phases="0,0",
                sigma=1.0, seed=0, band=None),
    "analyze": dict(input=None, out=None, k=1.0, rational=None, complex=False, margin=1,
                    **_ESTIMATION_DEFAULTS),
    "kscan": dict(input=None, out=None, kmin=1.0, kmax=2.0, kstep=0.05,
                  threshold=DETECTION_THRESHOLD, margin=1, **_ESTIMATION_DEFAULTS),
    "verify": dict(input=None, n=32, seed=0, rational="1/1", tol=1e-9, max_n=MAX_VERIFY_LENGTH),
    "noisestudy": dict(mode="null", seed=0, trials=32, segments="4,16,64", sigma=1.0, k=1.5,
                       tone=[], segment_length=64, fs=64.0, extent=None, window="rect",
                       interp="linear", out=None, csv=None),
}


class UsageError(Exception):
    pass


def _add_estimation_flags(p: argparse.ArgumentParser):
    p.add_argument("--interp", choices=["nearest", "linear", "exact"],
                   help="fractional-index evaluation (default linear; 'exact' needs rational k)")
    p.add_argument("--window", choices=["rect", "hann"], help="segment window (default rect)")
    p.add_argument("--detrend", choices=["none", "mean"], help="per-segment detrending (default mean)")
    p.add_argument("--segments", type=int, metavar="L",
                   help="segment length, a power of two; 0 = whole signal (default)")
    p.add_argument("--overlap", type=float, metavar="F", help="segment overlap fraction in [0, 0.9]")
    p.add_argument("--extent", type=int, metavar="E", help="grid side in bins (default L/2)")
    p.add_argument("--margin", type=int, help="rows/columns excluded from peak search (default 1)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", metavar="JSON", help="read flag values from a JSON object")

    parser = argparse.ArgumentParser(
        prog="fracspec",
        description="Bispectrum and fractional bispectrum analysis.",
        argument_default=argparse.SUPPRESS,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic signal file")
    gsub = gen.add_subparsers(dest="kind", required=True)
    for kind, helptext in [
        ("tones", "sum of cosines"),
        ("coupled", "three phase-coupled tones at f1, f2, f1+f2"),
        ("noise", "white Gaussian noise"),
        ("bandpass", "Gaussian noise masked to a frequency band"),
    ]:
        g = gsub.add_parser(kind, help=helptext, parents=[common], argument_default=argparse.SUPPRESS)
        g.add_argument("--n", type=int, help="number of samples (default 64)")
        g.add_argument("--fs", type=float, help="sample rate in Hz (default 1)")
        g.add_argument("--out", help="output file (default stdout)")
        if kind == "tones":
            g.add_argument("--freq", action="append", metavar="F[:AMP[:PHASE]]",
                           help="tone in Hz with amplitude and phase in radians; repeatable")
        elif kind == "coupled":
            g.add_argument("--f1", type=float, help="first frequency in Hz")
            g.add_argument("--f2", type=float, help="second frequency in Hz")
            g.add_argument("--phases", metavar="PHI1,PHI2", help="phases in radians (default 0,0)")
        else:
            g.add_argument("--sigma", type=float, help="standard deviation (default 1)")
            g.add_argument("--seed", type=int, help="generator seed (default 0)")
            if kind == "bandpass":
                g.add_argument("--band", metavar="LO:HI", help="pass band in Hz")

    a = sub.add_parser("analyze", help="compute a (fractional) bispectrum grid", parents=[common],
                       argument_default=argparse.SUPPRESS)
    a.add_argument("--in", dest="input", metavar="FILE", help="signal file")
    a.add_argument("--out", metavar="FILE", help="grid CSV; sidecar goes to FILE.json")
    a.add_argument("--k", type=float, help="coupling ratio (default 1)")
    a.add_argument("--rational", metavar="P/Q", help="exact rational k; overrides --k and --interp")
    a.add_argument("--complex", action="store_true", help="store complex values in the sidecar")
    _add_estimation_flags(a)

    ks = sub.add_parser("kscan", help="scan k for the strongest coupling", parents=[common],
                        argument_default=argparse.SUPPRESS)
    ks.add_argument("--in", dest="input", metavar="FILE", help="signal file")
    ks.add_argument("--out", metavar="FILE", help="JSON file for all scan entries")
    ks.add_argument("--kmin", type=float, help="first k (default 1.0)")
    ks.add_argument("--kmax", type=float, help="last k (default 2.0)")
    ks.add_argument("--kstep", type=float, help="k step (default 0.05)")
    ks.add_argument("--threshold", type=float,
                    help=f"minimum contrast for a detection (default {DETECTION_THRESHOLD:g})")
    _add_estimation_flags(ks)

    v = sub.add_parser("verify", help="check the time/frequency Fourier-pair identity", parents=[common],
                       argument_default=argparse.SUPPRESS)
    v.add_argument("--in", dest="input", metavar="FILE", help="signal file (default: random vector)")
    v.add_argument("--n", type=int, help="length of the random vector (default 32)")
    v.add_argument("--seed", type=int, help="seed of the random vector (default 0)")
    v.add_argument("--rational", metavar="P/Q", help="k as a reduced fraction (default 1/1)")
    v.add_argument("--tol", type=float, help="pass threshold on the discrepancy (default 1e-9)")
    v.add_argument("--max-n", dest="max_n", type=int,
                   help=f"brute-force length cap (default {MAX_VERIFY_LENGTH})")

    ns = sub.add_parser("noisestudy", help="Monte Carlo noise-suppression study", parents=[common],
                        argument_default=argparse.SUPPRESS)
    ns.add_argument("--mode", choices=["null", "contaminated"], help="pure noise or tones plus noise")
    ns.add_argument("--seed", type=int, help="base seed (default 0)")
    ns.add_argument("--trials", type=int, help="trials per segment count (default 32)")
    ns.add_argument("--segments", metavar="M1,M2,...", help="segment counts (default 4,16,64)")
    ns.add_argument("--sigma", type=float, help="noise standard deviation (default 1)")
    ns.add_argument("--k", type=float, help="coupling ratio (default 1.5)")
    ns.add_argument("--tone", action="append", metavar="F[:AMP[:PHASE]]",
                    help="tone of the deterministic component (contaminated mode; default 8 and 20 Hz)")
    ns.add_argument("--segment-length", dest="segment_length", type=int, help="samples per segment (default 64)")
    ns.add_argument("--fs", type=float, help="sample rate in Hz (default 64)")
    ns.add_argument("--extent", type=int, help="grid side in bins (default L/2)")
    ns.add_argument("--window", choices=["rect", "hann"], help="segment window (default rect)")
    ns.add_argument("--interp", choices=["nearest", "linear"], help="fractional-index evaluation")
    ns.add_argument("--out", metavar="FILE", help="JSON output (default stdout)")
    ns.add_argument("--csv", metavar="FILE", help="also write the curve as CSV")
    return parser


def _resolve(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    given = vars(parser.parse_args(argv))
    command = given["command"]
    params = dict(DEFAULTS[command])
    config_path = given.pop("config", None)
    if config_path is not None:
        try:
            cfg = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config {config_path}: {exc}")
        if not isinstance(cfg, dict):
            parser.error("config file must hold a JSON object")
        unknown = sorted(set(cfg) - set(params))
        if unknown:
            parser.error(f"unknown config keys for {command}: {', '.join(unknown)}")
        params.update(cfg)
    params.update(given)
    return argparse.Namespace(**params)


def _parse_tone(text) -> ToneSpec:
    if isinstance(text, dict):
        return ToneSpec(**text)
    parts = str(text).split(":")
    if not 1 <= len(parts) <= 3:
        raise UsageError(f"bad tone {text!r}; expected F[:AMP[:PHASE]]")
    try:
        vals = [float(s) for s in parts]
    except ValueError:
        raise UsageError(f"bad tone {text!r}; expected numbers") from None
    return ToneSpec(*vals)


def _parse_pair(text, sep: str, what: str, conv=float):
    parts = str(text).split(sep)
    if len(parts) != 2:
        raise UsageError(f"bad {what} {text!r}")
    try:
        return conv(parts[0]), conv(parts[1])
    except ValueError:
        raise UsageError(f"bad {what} {text!r}") from None


def _parse_rational(text) -> tuple[int, int]:
    return _parse_pair(text, "/", "rational k (expected P/Q)", int)


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def _estimator(args, rational=None) -> EstimatorConfig:
    interp = args.interp
    if rational is not None:
        interp = "exact"
    return EstimatorConfig(
        window={"rect": "rectangular", "hann": "hann"}[args.window],
        segment_length=args.segments,
        overlap_fraction=args.overlap,
        detrend={"none": "none", "mean": "remove_mean"}[args.detrend],
        interp="exact_rational" if interp == "exact" else interp,
        rational_k=rational,
    )


def _require_input(args):
    if args.input is None:
        raise UsageError("--in FILE is required")
    return read_signal(args.input)


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "tones":
        if not args.freq:
            raise UsageError("gen tones needs at least one --freq")
        sig = multi_tone([_parse_tone(f) for f in args.freq], args.n, args.fs)
    elif kind == "coupled":
        if args.f1 is None or args.f2 is None:
            raise UsageError("gen coupled needs --f1 and --f2")
        sig = coupled_triple(args.f1, args.f2, args.n, args.fs, _parse_pair(args.phases, ",", "phases"))
    elif kind == "noise":
        sig = gaussian_noise(NoiseSpec(args.sigma, args.seed), args.n, args.fs)
    else:
        if args.band is None:
            raise UsageError("gen bandpass needs --band LO:HI")
        lo, hi = _parse_pair(args.band, ":", "band")
        sig = bandpass_noise(lo, hi, NoiseSpec(args.sigma, args.seed), args.n, args.fs)
    _emit(format_signal(sig), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    sig = _require_input(args)
    rational = _parse_rational(args.rational) if args.rational is not None else None
    if rational is None and args.interp == "exact":
        raise UsageError("--interp exact needs --rational P/Q")
    k = rational[0] / rational[1] if rational is not None else args.k
    config = _estimator(args, rational)
    grid = averaged_fractional_bispectrum(sig, k, config, args.extent)
    peak = peak_statistic(grid, args.margin)
    if args.out is not None:
        write_grid(args.out, grid, include_complex=args.complex, source=str(args.input))
    u, v = peak.location
    res = grid.bin_resolution
    print(f"k = {grid.k!r}, segments = {grid.segments_averaged}, bin_resolution = {res!r} Hz")
    print(f"peak |F| = {peak.value!r} at bins ({u}, {v}) = ({u * res!r} Hz, {v * res!r} Hz)")
    print(f"background = {peak.background!r}, contrast = {peak.contrast!r}")
    return EXIT_OK


def cmd_kscan(args) -> int:
    sig = _require_input(args)
    ks = k_grid(args.kmin, args.kmax, args.kstep)
    config = _estimator(args)
    result = k_scan(sig, ks, config, args.extent, args.margin)
    res = sig.sample_rate / (config.segment_length or len(sig))
    detected = result.best_peak.contrast >= args.threshold
    report = result.to_dict(res)
    report["detected"] = detected
    report["threshold"] = args.threshold
    if args.out is not None:
        atomic_write(args.out, dumps_json(report))
    u, v = result.best_peak.location
    print(f"best_k = {result.best_k!r}")
    print(f"peak at ({u * res!r} Hz, {v * res!r} Hz), contrast = {result.best_peak.contrast!r}")
    print("detected" if detected else "no detection")
    return EXIT_OK if detected else EXIT_FAIL


def cmd_verify(args) -> int:
    p, q = _parse_rational(args.rational)
    if args.input is not None:
        sig = read_signal(args.input)
    else:
        sig = gaussian_noise(NoiseSpec(1.0, args.seed), args.n)
    if len(sig) > args.max_n:
        raise UsageError(f"N = {len(sig)} exceeds the brute-force cap {args.max_n}; reduce --n")
    disc = verify_fourier_pair(sig, p, q, args.max_n)
    ok = disc < args.tol
    print(f"N = {len(sig)}, k = {p}/{q}, discrepancy = {disc!r}, tol = {args.tol!r}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_noisestudy(args) -> int:
    try:
        counts = tuple(int(s) for s in str(args.segments).split(","))
    except ValueError:
        raise UsageError(f"bad --segments {args.segments!r}") from None
    common = dict(
        base_seed=args.seed, trials=args.trials, segment_counts=counts, sigma=args.sigma, k=args.k,
        grid_extent=args.extent, segment_length=args.segment_length, sample_rate=args.fs,
        window={"rect": "rectangular", "hann": "hann"}[args.window], interp=args.interp,
    )
    if args.mode == "null":
        if args.tone:
            raise UsageError("--tone only applies to --mode contaminated")
        curve = gaussian_null_study(StudyConfig(**common))
    else:
        if args.tone:
            common["signal"] = tuple(_parse_tone(t) for t in args.tone)
        curve = contaminated_signal_study(default_contaminated_config(**common))
    report = curve.to_dict()
    report["mode"] = args.mode
    _emit(dumps_json(report), args.out)
    if args.csv is not None:
        rows = ["segments,mean_abs,peak_contrast"]
        rows += [f"{p.segments},{p.mean_abs!r},{p.peak_contrast!r}" for p in curve.points]
        atomic_write(args.csv, "\n".join(rows) + "\n")
    if args.out not in (None, "-"):
        slope = "n/a" if curve.slope_estimate is None else repr(curve.slope_estimate)
        print(f"slope_estimate = {slope}")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "analyze": cmd_analyze,
    "kscan": cmd_kscan,
    "verify": cmd_verify,
    "noisestudy": cmd_noisestudy,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = _resolve(parser, argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fracspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FracspecError, OSError) as exc:
        print(f"fracspec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
