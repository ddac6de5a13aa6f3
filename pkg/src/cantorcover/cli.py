"""Command-line front end.

Subcommands mirror the library: encode/decode between rationals and
digit words, faithfulness diagnostics, set construction, covering
volumes, measure reports and sampling, and the reproduce bundles.  Every
run is fully determined by its arguments; outputs embed the
configuration so results can be traced back to it.

Numbers in CSV output carry 15 significant digits; exact rationals are
emitted as "p/q" strings alongside.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bases import BaseSequence
from .codec import DigitWord, cylinder_of, decode, encode
from .digit_sets import DigitRuleSet, full_set, power_set, select_heavy_levels, sqrt_set
from .digit_sets import boosted_set as _boosted_set
from .digit_sets import thinned_set as _thinned_set
from .dimension import (
    covering_report,
    dp_optimal_cylinder_cover,
    dp_optimal_cut,
    default_alpha_grid,
)
from .faithfulness import faithfulness_report
from .measure import ProductMeasure, cdf, entropy_dimension, entropy_sequence, sample
from .reproduce import TARGETS, reproduce


def _json_arg(text: str) -> dict:
    """Inline JSON, or @path to a JSON file."""
    if text.startswith("@"):
        return json.loads(Path(text[1:]).read_text())
    return json.loads(text)


def _emit(text: str, path) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _csv_text(header, rows) -> str:
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([f"{v:.15g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_encode(args) -> int:
    bases = BaseSequence.from_dict(_json_arg(args.bases))
    word = encode(Fraction(args.x), bases, args.depth)
    cyl = cylinder_of(word)
    _emit(
        json.dumps(
            {
                "digits": list(word.digits),
                "left": str(cyl.left),
                "length": str(cyl.length),
                "log_length": cyl.log_length,
            },
            sort_keys=True,
            indent=2,
        ),
        args.out,
    )
    return 0


def _cmd_decode(args) -> int:
    bases = BaseSequence.from_dict(_json_arg(args.bases))
    digits = tuple(int(d) for d in args.digits.split(",")) if args.digits else ()
    word = DigitWord(digits, bases)
    cyl = cylinder_of(word)
    _emit(
        json.dumps(
            {
                "value": str(decode(word)),
                "length": str(cyl.length),
                "log_length": cyl.log_length,
            },
            sort_keys=True,
            indent=2,
        ),
        args.out,
    )
    return 0


def _cmd_faithfulness(args) -> int:
    bases = BaseSequence.from_dict(_json_arg(args.bases))
    report = faithfulness_report(bases, args.depth, args.tol, args.window)
    _emit(report.to_json(), args.out)
    if args.csv:
        Path(args.csv).write_text(report.to_csv())
    return 0


def _cmd_construct(args) -> int:
    if args.rule == "full":
        rs = full_set(BaseSequence.from_dict(_json_arg(args.bases)), args.depth)
    elif args.rule == "sqrt":
        rs = sqrt_set(args.depth)
    elif args.rule == "boosted":
        rs = _boosted_set(args.depth)
    elif args.rule == "power":
        rs = power_set(args.p, args.q, args.depth)
    elif args.rule == "thinned":
        bases = BaseSequence.from_dict(_json_arg(args.bases))
        sel = select_heavy_levels(bases, args.c, args.delta, args.epsilon, args.depth)
        rs = _thinned_set(bases, sel, args.depth)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.rule)
    _emit(json.dumps(rs.to_dict(), sort_keys=True, indent=2), args.out)
    return 0


def _cmd_dimension(args) -> int:
    ruleset = DigitRuleSet.from_dict(_json_arg(args.set))
    grid = default_alpha_grid(args.alpha_grid)
    if args.covering == "dp":
        rows = []
        for a in grid:
            cost = dp_optimal_cylinder_cover(ruleset, args.depth, a)
            cut, pieces = dp_optimal_cut(ruleset, args.depth, a)
            rows.append([a, cost, cut, pieces])
        payload = {
            "depth": args.depth,
            "covering_kind": "dp_antichain",
            "rows": [
                {"alpha": a, "log_volume": c, "cut_rank": k, "piece_count": p}
                for a, c, k, p in rows
            ],
        }
        _emit(json.dumps(payload, sort_keys=True, indent=2), args.out)
        if args.csv:
            Path(args.csv).write_text(
                _csv_text(["alpha", "log_volume", "cut_rank", "piece_count"], rows)
            )
        return 0
    kind = "merged_runs" if args.covering == "runs" else "cylinders"
    report = covering_report(ruleset, args.depth, kind, grid)
    _emit(json.dumps(report.to_dict(), sort_keys=True, indent=2), args.out)
    if args.csv:
        Path(args.csv).write_text(
            _csv_text(
                ["alpha", "log_volume"],
                list(zip(report.alphas, report.log_volumes)),
            )
        )
    return 0


def _cmd_measure(args) -> int:
    measure = ProductMeasure.from_dict(_json_arg(args.spec))
    if args.entropy:
        rep = entropy_dimension(measure, args.entropy)
        h = entropy_sequence(measure, args.entropy)
        _emit(json.dumps(rep.to_dict(), sort_keys=True, indent=2), args.out)
        if args.csv:
            rows = [
                [k, h[k - 1], rep.values[k - 1], rep.condition_partials[k - 1]]
                for k in range(1, args.entropy + 1)
            ]
            Path(args.csv).write_text(
                _csv_text(["k", "entropy", "dimension_value", "square_sum_partial"], rows)
            )
        return 0
    if args.sample:
        rng = random.Random(args.seed)
        rows = []
        for i in range(args.sample):
            word = sample(measure, rng, args.depth)
            x = decode(word)
            rows.append([i, str(x), float(x)])
        text = _csv_text(["index", "value", "value_float"], rows)
        _emit(text, args.csv or args.out)
        return 0
    if args.cdf is not None:
        lo, hi = cdf(measure, Fraction(args.cdf), args.depth)
        _emit(
            json.dumps(
                {
                    "x": args.cdf,
                    "lower": str(lo),
                    "upper": str(hi),
                    "lower_float": float(lo),
                    "upper_float": float(hi),
                },
                sort_keys=True,
                indent=2,
            ),
            args.out,
        )
        return 0
    raise SystemExit("measure: one of --entropy, --sample, --cdf is required")


def _cmd_reproduce(args) -> int:
    bundle = reproduce(
        args.target,
        depth=args.depth,
        splits=args.splits,
        c=args.c,
        delta=args.delta,
        epsilon=args.epsilon,
        tol=args.tol,
        seed=args.seed,
    )
    for line in bundle.check_lines():
        print(line)
    if args.out_dir:
        for p in bundle.write(args.out_dir):
            print(f"wrote {p}")
    return 0 if bundle.passed else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cantorcover",
        description="Cantor series expansions, cylinder coverings, and singular measures",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="rational -> digit word")
    p.add_argument("--bases", required=True, help="base sequence JSON (or @file)")
    p.add_argument("--x", required=True, help="rational in [0,1), e.g. 5/8")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="digit word -> rational")
    p.add_argument("--bases", required=True)
    p.add_argument("--digits", default="", help="comma-separated digits, e.g. 2,8")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("faithfulness", help="ratio tail diagnostics and verdict")
    p.add_argument("--bases", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--window", type=int)
    p.add_argument("--out", help="JSON report path (stdout if omitted)")
    p.add_argument("--csv", help="CSV table path")
    p.set_defaults(func=_cmd_faithfulness)

    p = sub.add_parser("construct", help="build a digit rule set as JSON")
    p.add_argument("--rule", required=True, choices=["full", "sqrt", "boosted", "power", "thinned"])
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--bases", help="required for full and thinned")
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("dimension", help="alpha-volume tables for one covering")
    p.add_argument("--set", required=True, help="digit rule set JSON (or @file)")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--covering", choices=["cylinders", "runs", "dp"], default="cylinders")
    p.add_argument("--alpha-grid", type=int, default=512)
    p.add_argument("--out", help="JSON report path (stdout if omitted)")
    p.add_argument("--csv", help="CSV table path")
    p.set_defaults(func=_cmd_dimension)

    p = sub.add_parser("measure", help="entropy dimension, sampling, CDF")
    p.add_argument("--spec", required=True, help="product measure JSON (or @file)")
    p.add_argument("--entropy", type=int, help="entropy-dimension report to this depth")
    p.add_argument("--sample", type=int, help="number of sample points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=16)
    p.add_argument("--cdf", help="evaluate the CDF bracket at this rational")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_measure)

    p = sub.add_parser("reproduce", help="run a full report bundle")
    p.add_argument("--target", required=True, choices=list(TARGETS))
    p.add_argument("--depth", type=int)
    p.add_argument("--splits", type=int, default=8)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", help="write report.json and CSV tables here")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
