"""``primelab`` command line: verify, scan and table subcommands.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys

from primelab import runs

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        out = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")
    if not out:
        raise argparse.ArgumentTypeError("no points given")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="primelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--from", dest="start", type=int, required=True)
        p.add_argument("--to", dest="stop", type=int, required=True)
        p.add_argument("--emit", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--allow-large", action="store_true", help=f"permit --to above {runs.DEFAULT_SIEVE_BUDGET}")

    v = sub.add_parser("verify", help="check an identity at every grid point")
    v.add_argument("identity")
    common(v)
    v.add_argument("--points", type=int, default=None, help="geometric grid size (default: every integer)")

    s = sub.add_parser("scan", help="measure an estimator's error on a geometric grid")
    s.add_argument("identity")
    common(s)
    s.add_argument("--points", type=int, default=runs.DEFAULT_SCAN_POINTS)

    t = sub.add_parser("table", help="all quantities at the listed points")
    t.add_argument("--x", dest="xs", type=_int_list, required=True)
    t.add_argument("--emit", choices=("csv", "json"), default="csv")
    t.add_argument("--out", default=None)
    t.add_argument("--allow-large", action="store_true")
    return parser


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.mode == "table":
            config = runs.ScanConfig(
                "table", "table", min(args.xs), max(args.xs),
                format=args.emit, output_path=args.out, allow_large=args.allow_large,
            ).validate()
            primes, omegas = runs.build_tables(config)
            payload = runs.table_rows(args.xs, primes, omegas)
            summary = None
        else:
            config = runs.ScanConfig(
                args.mode, args.identity, args.start, args.stop, points=args.points,
                format=args.emit, output_path=args.out, allow_large=args.allow_large,
            ).validate()
            primes, omegas = runs.build_tables(config)
            run = runs.run_verify if args.mode == "verify" else runs.run_scan
            summary, payload = run(config, primes, omegas)
        text = runs.render_report(payload, config.format)
    except runs.ConfigError as exc:
        print(f"primelab: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _write(text, config.output_path)
    except OSError as exc:
        print(f"primelab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    if summary is None:
        return EXIT_OK
    print(
        f"{summary.identity}: rows={summary.rows_evaluated} mismatches={summary.mismatches} "
        f"max_abs_diff={summary.max_abs_diff:.3g} max_scaled_diff={summary.max_scaled_diff:.3g} "
        f"time={summary.wall_time_seconds:.2f}s",
        file=sys.stderr,
    )
    return EXIT_OK if summary.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
