"""Command-line interface.

Subcommands::

    socentropy fit <input.csv> [--config FILE] [--out report.json]
                   [--plot-data FILE] [--pin-peak-min] [--max-segments K]
    socentropy gini <input.csv>
    socentropy oracle --entities N --states G --statistics mbg|fd|be [--enumerate]

Exit status: 0 success, 2 input error, 3 fit failure.
"""

from __future__ import annotations

import argparse
import sys

from . import combinatorics, io
from .distribution import normalize
from .entropy import inequality_index
from .errors import FitError, InvalidInputError, SocEntropyError
from .fitting import fit
from .lorenz import classify_symmetry, lorenz_points

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FIT = 3


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _series_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="CSV with columns benefit,count[,states]")
    p.add_argument("--period", default="1 year", help="reporting period label")
    p.add_argument(
        "--unit-states",
        action="store_true",
        help="without a states column, use one state per bin instead of G_k = count_k",
    )


def run_fit(args) -> int:
    try:
        series = io.load_distribution(args.input, args.period, args.unit_states)
        dist = normalize(series)
        cfg_dict = io.load_config(args.config) if args.config else {}
        if args.pin_peak_min:
            cfg_dict["pin_peak_to_min"] = True
        if args.max_segments is not None:
            cfg_dict["max_segments"] = args.max_segments
        cfg = io.config_from_dict(cfg_dict)
    except InvalidInputError as exc:
        return _fail(EXIT_INPUT, str(exc))
    try:
        report = fit(dist, cfg)
    except FitError as exc:
        return _fail(EXIT_FIT, f"fit failed at stage {exc}")
    except SocEntropyError as exc:
        return _fail(EXIT_FIT, f"fit failed: {exc}")
    text = io.dumps_report(io.report_to_dict(report, cfg, dist.w_bar))
    plot = io.plot_data_csv(dist, report) if args.plot_data else None
    try:
        if args.out:
            io.write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
        if plot is not None:
            io.write_atomic(args.plot_data, plot)
    except OSError as exc:
        return _fail(EXIT_INPUT, f"cannot write output: {exc}")
    if args.out:
        p = report.global_params
        print(
            f"alpha={p.alpha:.6g} beta={p.beta:.6g} lambda={p.lam:.6g} theta={p.theta:.6g} "
            f"segments={len(report.segments)} gini={report.gini:.6g}"
        )
    return EXIT_OK


def run_gini(args) -> int:
    try:
        dist = normalize(io.load_distribution(args.input, args.period, args.unit_states))
        gi = lorenz_points(dist).gini
    except InvalidInputError as exc:
        return _fail(EXIT_INPUT, str(exc))
    verdict = classify_symmetry(gi)
    ineq = inequality_index(dist)
    print(f"gini: {gi!r}")
    print(f"symmetry: {verdict.kind}")
    ratio = "undefined" if verdict.equivalent_ratio is None else repr(verdict.equivalent_ratio)
    print(f"equivalent_ratio: {ratio}")
    print(f"inequality_index: {ineq.index_I!r}")
    print(f"welfare: {ineq.welfare_U!r}")
    return EXIT_OK


def run_oracle(args) -> int:
    try:
        result = combinatorics.count(args.entities, args.states, args.statistics)
        print(f"statistics: {result.statistics}")
        print(f"entities: {result.entities}")
        print(f"states: {result.states}")
        print(f"count: {result.value}")
        if args.enumerate:
            brute = combinatorics.enumerate_configs(args.entities, args.states, args.statistics)
            print(f"enumerated: {brute}")
            print(f"match: {'yes' if brute == result.value else 'NO'}")
    except InvalidInputError as exc:
        return _fail(EXIT_INPUT, str(exc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="socentropy", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit the occupation law and segment into classes")
    _series_args(p)
    p.add_argument("--config", help="JSON file of fit settings")
    p.add_argument("--out", help="write the JSON report here (default: stdout)")
    p.add_argument("--plot-data", help="write per-bin plot data CSV here")
    p.add_argument("--pin-peak-min", action="store_true", help="place the peak at the lowest benefit")
    p.add_argument("--max-segments", type=int)
    p.set_defaults(func=run_fit)

    p = sub.add_parser("gini", help="Gini coefficient, symmetry verdict and inequality index")
    _series_args(p)
    p.set_defaults(func=run_gini)

    p = sub.add_parser("oracle", help="exact configuration counts")
    p.add_argument("--entities", type=int, required=True)
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--statistics", choices=combinatorics.STATISTICS, required=True)
    p.add_argument("--enumerate", action="store_true", help="also count by brute force")
    p.set_defaults(func=run_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
