"""Command-line entry point: ``osht {design,analyze,forward,inverse,bench}``.

Exit codes: 0 success, 1 domain or I/O error, 2 usage error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time

from . import io
from .bench import TrialConfig, run_bench
from .errors import OshtError
from .multipass import DEFAULT_MAX_PASSES, multipass_sht
from .sampling import METHODS, condition_report, design
from .transform import forward_sht, inverse_sht


def parse_int_list(text):
    """Comma-separated ints; an item ``a:s:b`` is a..b step s (inclusive),
    ``a:xf:b`` multiplies by f from a up to b (e.g. ``8:x2:64``)."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise argparse.ArgumentTypeError(f"empty item in list {text!r}")
        parts = item.split(":")
        try:
            if len(parts) == 1:
                out.append(int(item))
                continue
            if len(parts) != 3:
                raise ValueError
            start, step, stop = parts
            start, stop = int(start), int(stop)
            if step.startswith("x"):
                factor = int(step[1:])
                if factor < 2 or start < 1:
                    raise ValueError
                v = start
                while v <= stop:
                    out.append(v)
                    v *= factor
            else:
                step = int(step)
                if step < 1:
                    raise ValueError
                out.extend(range(start, stop + 1, step))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad list item {item!r}") from None
    return out


def parse_methods(text):
    methods = tuple(m.strip() for m in text.split(","))
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {', '.join(bad)}; choose from {', '.join(METHODS)}")
    return methods


def positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="osht", description="Optimal-dimensionality spherical harmonic transforms.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("design", help="place rings and write a scheme file")
    d.add_argument("--bandlimit", type=positive_int, required=True)
    d.add_argument("--method", choices=METHODS, default="elimination")
    d.add_argument("--output", required=True)

    a = sub.add_parser("analyze", help="condition numbers of a scheme's per-order matrices")
    a.add_argument("--scheme", required=True)
    a.add_argument("--output", help="write m,kappa CSV here instead of stdout")

    f = sub.add_parser("forward", help="samples -> coefficients")
    f.add_argument("--scheme", required=True)
    f.add_argument("--signal", required=True)
    f.add_argument("--output", required=True)
    f.add_argument("--multipass", action="store_true")
    f.add_argument("--max-passes", type=positive_int, default=DEFAULT_MAX_PASSES)

    i = sub.add_parser("inverse", help="coefficients -> samples")
    i.add_argument("--scheme", required=True)
    i.add_argument("--coeff", required=True)
    i.add_argument("--output", required=True)

    b = sub.add_parser("bench", help="conditioning and accuracy experiments")
    b.add_argument("--bandlimits", type=parse_int_list, required=True)
    b.add_argument("--trials", type=positive_int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--methods", type=parse_methods, default=("elimination",))
    b.add_argument("--multipass", action="store_true")
    b.add_argument("--max-passes", type=positive_int, default=DEFAULT_MAX_PASSES)
    b.add_argument("--outdir", required=True)
    return p


def cmd_design(args):
    t0 = time.perf_counter()
    scheme = design(args.bandlimit, args.method)
    elapsed = time.perf_counter() - t0
    io.write_scheme(scheme, args.output)
    report = condition_report(scheme, allow_singular=True)
    print(f"kappa_max={io.fmt_float(report.kappa_max)} wall_time={elapsed:.3f}s", file=sys.stderr)


def cmd_analyze(args):
    scheme = io.read_scheme(args.scheme)
    report = condition_report(scheme, allow_singular=True)
    lines = ["m,kappa"] + [f"{m},{io.fmt_float(k)}" for m, k in enumerate(report.kappa)]
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"kappa_max={io.fmt_float(report.kappa_max)}", file=sys.stderr)


def cmd_forward(args):
    scheme = io.read_scheme(args.scheme)
    signal = io.read_signal(args.signal)
    if args.multipass:
        res = multipass_sht(scheme, signal, args.max_passes)
        coeffs = res.coeffs
        history = " ".join(io.fmt_float(r) for r in res.residual_history)
        print(f"passes={res.passes} residual_history={history}", file=sys.stderr)
    else:
        coeffs = forward_sht(scheme, signal)
    io.write_coeffs(coeffs, args.output)


def cmd_inverse(args):
    scheme = io.read_scheme(args.scheme)
    coeffs = io.read_coeffs(args.coeff)
    io.write_signal(inverse_sht(scheme, coeffs), args.output)


def cmd_bench(args):
    try:
        config = TrialConfig(
            bandlimits=args.bandlimits,
            trials=args.trials,
            seed=args.seed,
            methods=args.methods,
            multipass=args.multipass,
            max_passes=args.max_passes,
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    run_bench(config, args.outdir)


class _UsageError(Exception):
    pass


COMMANDS = {
    "design": cmd_design,
    "analyze": cmd_analyze,
    "forward": cmd_forward,
    "inverse": cmd_inverse,
    "bench": cmd_bench,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.error(str(exc))
    except OshtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
