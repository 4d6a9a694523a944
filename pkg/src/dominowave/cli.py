"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 I/O or parse error, 3 the request
falls outside the model's physical domain (or an analysis produced no
reliable estimate).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import export
from .acoustics import (
    SynthesisParams,
    read_wav,
    synthesize_collapse,
    wave_speed_from_recording,
    write_wav,
)
from .errors import (
    DataFormatError,
    EmptyOverlap,
    InsufficientData,
    PhysicalDomainError,
    UnknownDataset,
)
from .geometry import DominoGeometry, array_from_ratios, denormalize_speed, make_array_spec
from .validation import load_dataset, validate_model
from .wave_model import (
    DEFAULT_RESTITUTION,
    DEFAULT_T_OVER_H,
    CollisionParams,
    calibrate_restitution,
    limiting_speed,
    simulate_chain,
    speed_curve,
)

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _pair(text: str) -> tuple[float, float]:
    lo, hi = (float(x) for x in text.split(":"))
    return lo, hi


def parse_grid(text: str) -> list[float]:
    """``lo:hi:step`` inclusive of ``hi`` (to rounding)."""
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be lo:hi:step, got {text!r}") from None
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("grid needs step > 0 and hi >= lo")
    n = int(math.floor((hi - lo) / step + 1e-9))
    return [round(lo + k * step, 12) for k in range(n + 1)]


def read_config(path: str) -> dict[str, str]:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataFormatError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dominowave", description="Domino-wave speed model and acoustic measurement.")
    p.add_argument("--config", help="key=value file; explicit flags win")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def model_flags(sp):
        sp.add_argument("--e", type=float, default=DEFAULT_RESTITUTION, help="restitution coefficient")
        sp.add_argument("--t-over-h", type=float, default=DEFAULT_T_OVER_H)

    sp = sub.add_parser("predict", help="limiting wave speed at one spacing")
    sp.add_argument("--d-over-h", type=float)
    model_flags(sp)
    sp.add_argument("--height", type=float, help="domino height in m for absolute speed")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("curve", help="normalized speed over a d/H grid")
    sp.add_argument("--grid", type=parse_grid, default="0.05:0.85:0.05")
    model_flags(sp)
    sp.add_argument("--out")
    sp.add_argument("--workers", type=int, default=None)

    sp = sub.add_parser("simulate", help="impact times of a finite chain")
    sp.add_argument("--height", type=float, default=0.05)
    sp.add_argument("--gap", type=float)
    sp.add_argument("--thickness", type=float, default=0.0075)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--omega-init", type=float, default=1.0)
    sp.add_argument("--e", type=float, default=DEFAULT_RESTITUTION)
    sp.add_argument("--out")

    sp = sub.add_parser("synth", help="render impacts as a WAV recording")
    sp.add_argument("--impacts")
    sp.add_argument("--rate", type=int, default=44100)
    sp.add_argument("--snr-db", type=float, default=math.inf)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = sub.add_parser("analyze", help="measure wave speed from a recording")
    sp.add_argument("recording")
    sp.add_argument("--pitch", type=float)
    sp.add_argument("--height", type=float)
    sp.add_argument("--band", type=_pair, default="4:100")
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("calibrate", help="fit restitution to a dataset")
    sp.add_argument("--dataset", default="larham_vertical")
    sp.add_argument("--t-over-h", type=float, default=DEFAULT_T_OVER_H)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("validate", help="residuals of the model against a dataset")
    sp.add_argument("--dataset", default="larham_vertical")
    model_flags(sp)
    sp.add_argument("--out")
    sp.add_argument("--svg")
    sp.add_argument("--json", action="store_true")
    return p


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"{args.command}: missing required {flags}")


def _emit(data: bytes | str, out: str | None, stdout) -> None:
    if out:
        Path(out).write_bytes(data if isinstance(data, bytes) else data.encode())
    else:
        stdout.write(data.decode() if isinstance(data, bytes) else data)


def cmd_predict(args, out) -> int:
    _require(args, "d_over_h")
    spec = array_from_ratios(args.d_over_h, args.t_over_h)
    pred = limiting_speed(spec, CollisionParams(args.e))
    result = {"d_over_H": args.d_over_h, "t_over_H": args.t_over_h, "e": args.e,
              "normalized_speed": pred.normalized_speed}
    if args.height is not None:
        result["wave_speed_mps"] = denormalize_speed(pred.normalized_speed, args.height)
    if args.json:
        out.write(json.dumps(result, indent=2) + "\n")
    else:
        out.write("".join(f"{k}={export.fmt(v)}\n" for k, v in result.items()))
    return EXIT_OK


def cmd_curve(args, out) -> int:
    curve = speed_curve(args.grid, args.t_over_h, args.e, workers=args.workers)
    _emit(export.curve_csv(curve), args.out, out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    _require(args, "gap")
    spec = make_array_spec(DominoGeometry(args.height, args.thickness), args.gap, args.count)
    series = simulate_chain(spec, CollisionParams(args.e), args.omega_init)
    _emit(export.impacts_csv(series), args.out, out)
    return EXIT_OK


def cmd_synth(args, out) -> int:
    _require(args, "impacts", "out")
    times = export.read_impact_times(Path(args.impacts).read_text())
    params = SynthesisParams(snr_db=args.snr_db, noise_seed=args.seed)
    Path(args.out).write_bytes(write_wav(synthesize_collapse(times, params, args.rate)))
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    _require(args, "pitch", "height")
    signal = read_wav(Path(args.recording).read_bytes())
    m = wave_speed_from_recording(signal, args.pitch, args.height, args.band)
    out.write(m.to_json() + "\n" if args.json else m.to_text())
    return EXIT_OK if m.estimate.reliable else EXIT_DOMAIN


def cmd_calibrate(args, out) -> int:
    fit = calibrate_restitution(load_dataset(args.dataset), args.t_over_h)
    if args.json:
        out.write(json.dumps({"e_star": fit.restitution, "rms": fit.rms}, indent=2) + "\n")
    else:
        out.write(f"e_star={fit.restitution:.4f}\nrms={export.fmt(fit.rms)}\n")
    return EXIT_OK


def cmd_validate(args, out) -> int:
    dataset = load_dataset(args.dataset)
    report = validate_model(dataset, args.e, args.t_over_h)
    if args.out:
        Path(args.out).write_bytes(export.report_csv(report))
    if args.svg:
        curve = speed_curve(parse_grid("0.02:0.86:0.02"), args.t_over_h, args.e)
        Path(args.svg).write_text(export.svg_plot(curve, [dataset]))
    if args.json:
        out.write(export.report_json(report) + "\n")
    else:
        out.write(
            f"model={report.model_label}\ndataset={report.dataset_name}\n"
            f"points={len(report.residuals)}\nexcluded={len(report.excluded_points)}\n"
            f"rms={export.fmt(report.rms)}\nrange_check_pass={str(report.range_check_pass).lower()}\n"
        )
    return EXIT_OK


COMMANDS = {
    "predict": cmd_predict,
    "curve": cmd_curve,
    "simulate": cmd_simulate,
    "synth": cmd_synth,
    "analyze": cmd_analyze,
    "calibrate": cmd_calibrate,
    "validate": cmd_validate,
}


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
    if args.config:
        config = read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        unknown = set(config) - known
        if unknown:
            raise UsageError(f"unknown config keys for {args.command}: {sorted(unknown)}")
        sub.set_defaults(**config)
        args = parser.parse_args(argv)
    return args


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = parse_args(sys.argv[1:] if argv is None else list(argv))
        return COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (PhysicalDomainError, InsufficientData, EmptyOverlap) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_DOMAIN
    except (OSError, DataFormatError, UnknownDataset) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_IO
    except (ValueError, argparse.ArgumentTypeError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
