"""Command-line entry point: ``gedyn {sweep,rates,tsep,verify}``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .qmatrix import InvalidStateError
from .runner import (
    METHODS,
    ConfigError,
    NumericInvariantError,
    SweepConfig,
    cross_check_violations,
    detect_t_sep,
    emit_csv,
    emit_rates_csv,
    emit_t_sep_csv,
    fit_decay_rate,
    group_curves,
    method_discrepancies,
    read_curve_csv,
    run_sweep,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

log = logging.getLogger("gedyn")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _method_list(text: str) -> list[str]:
    methods = [v.strip() for v in text.split(",") if v.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown method(s) {', '.join(bad)}; choose from {', '.join(METHODS)}")
    return methods


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gedyn", description="Global entanglement of GHZ and W states under decoherence.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sweep = sub.add_parser("sweep", help="compute E_gl curves and write a curve CSV")
    sweep.add_argument("--state", choices=("ghz", "w"), required=True)
    sweep.add_argument("--channel", choices=("dissipative", "dephasing", "noisy"), required=True)
    sweep.add_argument("--n", type=_int_list, required=True, help="qubit counts, e.g. 2,4,6,8")
    sweep.add_argument("--gamma-t-max", type=float, default=3.0)
    sweep.add_argument("--points", type=int, default=101)
    sweep.add_argument("--method", type=_method_list, default=["closed"], help="e.g. closed,kraus,ode")
    sweep.add_argument("--out", type=Path, required=True)

    rates = sub.add_parser("rates", help="fit decay rates to every curve in a curve CSV")
    rates.add_argument("--in", dest="inp", type=Path, required=True)
    rates.add_argument("--out", type=Path, required=True)

    tsep = sub.add_parser("tsep", help="sudden-death times for every curve in a curve CSV")
    tsep.add_argument("--in", dest="inp", type=Path, required=True)
    tsep.add_argument("--out", type=Path, required=True)

    sub.add_parser("verify", help="run the acceptance suite and print a PASS/FAIL table")
    return parser


def _sweep(args) -> int:
    config = SweepConfig(
        state=args.state,
        channel=args.channel,
        n_list=tuple(args.n),
        methods=tuple(args.method),
        gamma_t_max=args.gamma_t_max,
        grid_points=args.points,
        out=args.out,
    )
    points = run_sweep(config)
    emit_csv(points, args.out)
    print(f"wrote {len(points)} points to {args.out}")
    discrepancies = method_discrepancies(points)
    for (a, b), d in sorted(discrepancies.items()):
        print(f"max |{a} - {b}| = {d:.3e}")
    violations = cross_check_violations(discrepancies)
    for v in violations:
        print(f"cross-check failed: {v}", file=sys.stderr)
    return EXIT_NUMERIC if violations else EXIT_OK


def _rates(args) -> int:
    fits = []
    for curve in group_curves(read_curve_csv(args.inp)).values():
        try:
            fits.append(fit_decay_rate(curve))
        except ConfigError as exc:
            log.warning("skipping curve: %s", exc)
    emit_rates_csv(fits, args.out)
    print(f"wrote {len(fits)} rate fits to {args.out}")
    return EXIT_OK


def _tsep(args) -> int:
    results = [(key, detect_t_sep(curve)) for key, curve in group_curves(read_curve_csv(args.inp)).items()]
    emit_t_sep_csv(results, args.out)
    for (state, channel, n, method), t in results:
        shown = "none" if t is None else repr(t)
        print(f"{state}/{channel.value} n={n} ({method}): t_sep = {shown}")
    return EXIT_OK


def _verify(args) -> int:
    from .acceptance import CRITERIA

    ok = True
    for check in CRITERIA:
        result = check()
        ok &= result.passed
        print(result.line(), flush=True)
    print("ALL PASS" if ok else "SOME CRITERIA FAILED")
    return EXIT_OK if ok else EXIT_NUMERIC


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    handler = {"sweep": _sweep, "rates": _rates, "tsep": _tsep, "verify": _verify}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericInvariantError, InvalidStateError, ArithmeticError) as exc:
        print(f"numeric invariant violated: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
