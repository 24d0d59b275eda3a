"""Command-line front end.

Exit codes (stable):
    0  success / function is a weighted plurality / all inequalities hold
    1  an applicable aggregation inequality failed
    2  unreadable or malformed input
    3  function is not a weighted plurality (certificate written)
    4  neutral mode on a non-neutral function
    5  enumeration guard exceeded
    6  weights do not realize the function
    70 internal certificate inconsistency
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import io
from .decide import Verdict, build_primal, canonical_labels, decide
from .dist import InvalidDistribution, ProductDistribution
from .effects import (
    AggregationViolation,
    MonteCarlo,
    aggregation_report,
    effect_scaling_experiment,
    effect_vector,
    experiment_csv,
)
from .errors import (
    InvalidWeights,
    NotAWeightedPlurality,
    NotNeutral,
    SolverInconsistency,
    TooLarge,
)
from .lp import dump_lp
from .scf import (
    build_weighted_plurality,
    constant,
    dictator,
    is_neutral,
    parity,
    parse_tiebreak,
    random_neutral_function,
)

EXIT_OK = 0
EXIT_INEQUALITY = 1
EXIT_INPUT = 2
EXIT_NOT_WP = 3
EXIT_NOT_NEUTRAL = 4
EXIT_TOO_LARGE = 5
EXIT_BAD_WEIGHTS = 6
EXIT_INTERNAL = 70

SEED_ENV = "WPCHECK_SEED"


class InputError(Exception):
    pass


def _emit(data, out):
    text = io.dump_json(data)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _pair(text):
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from None
    return a, b


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _default_seed():
    return int(os.environ.get(SEED_ENV, "0"))


def _read_tt(path):
    try:
        return io.read_tt(path)
    except (OSError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_dist(path, f):
    try:
        P = io.read_distribution(path, f.k)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    if (P.k, P.n) != (f.k, f.n):
        raise InputError(f"{path}: distribution is on [{P.k}]^{P.n}, function on [{f.k}]^{f.n}")
    return P


def _read_weights(path):
    try:
        return io.read_weights(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _check_one(path, mode, labels, dump):
    f = _read_tt(path)
    if dump:
        lp = build_primal(f, None if mode == "general" else (labels or canonical_labels(f.k)))
        Path(dump).write_text(dump_lp(lp))
    outcome = decide(f, mode, labels)
    return outcome.to_json()


def _check_worker(args):
    path, mode, labels = args
    try:
        return path, _check_one(path, mode, labels, None), None
    except NotNeutral as exc:
        return path, None, (EXIT_NOT_NEUTRAL, str(exc))
    except InputError as exc:
        return path, None, (EXIT_INPUT, str(exc))
    except TooLarge as exc:
        return path, None, (EXIT_TOO_LARGE, str(exc))


def cmd_check(args):
    src = Path(args.function)
    if src.is_dir():
        return _check_corpus(src, args)
    report = _check_one(src, args.mode, args.labels, args.dump_lp)
    _emit(report, args.output)
    return EXIT_OK if report["verdict"] == Verdict.WP.value else EXIT_NOT_WP


def _check_corpus(src, args):
    """Decide every .tt file in a directory; reports go to the -o directory."""
    files = sorted(str(p) for p in src.glob("*.tt"))
    outdir = Path(args.output) if args.output else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    jobs = [(p, args.mode, args.labels) for p in files]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_check_worker, jobs))
    else:
        results = [_check_worker(j) for j in jobs]
    summary, code = {}, EXIT_OK
    for path, report, err in results:
        name = Path(path).name
        if err:
            summary[name] = {"error": err[1], "exit": err[0]}
            code = max(code, err[0])
            continue
        summary[name] = report["verdict"]
        if outdir:
            io.dump_json(report, outdir / (Path(path).stem + ".json"))
        if report["verdict"] != Verdict.WP.value:
            code = max(code, EXIT_NOT_WP)
    sys.stdout.write(io.dump_json(summary))
    return code


def cmd_neutral(args):
    f = _read_tt(args.function)
    ok, bad = is_neutral(f)
    out = {"neutral": ok}
    if bad:
        out["counterexample"] = {"sigma": list(bad[0]), "x": list(bad[1])}
    _emit(out, args.output)
    return EXIT_OK if ok else EXIT_NOT_NEUTRAL


def cmd_effects(args):
    f = _read_tt(args.function)
    P = _read_dist(args.dist, f) if args.dist else ProductDistribution.uniform(f.k, f.n)
    if args.samples is not None:
        if args.samples <= 0:
            raise InputError("--samples must be positive")
        seed = args.seed if args.seed is not None else _default_seed()
        method = MonteCarlo(args.samples, seed)
    else:
        method = "exact"
    try:
        ev = effect_vector(f, P, method)
    except TooLarge as exc:
        raise TooLarge(f"{exc}; rerun with --samples N") from None
    _emit(ev.to_json(), args.output)
    return EXIT_OK


def cmd_verify_a(args):
    f = _read_tt(args.function)
    w = _read_weights(args.weights)
    P = _read_dist(args.dist, f)
    report = aggregation_report(f, w, P, args.set)
    _emit(report.to_json(), args.output)
    if report.vacuous:
        print("delta <= 0: inequality flags are vacuous", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_INEQUALITY


def cmd_gen(args):
    k, n = args.k, args.n
    if k < 2 or n < 1:
        raise InputError("need -k >= 2 and -n >= 1")
    if k**n > 10**7:
        raise TooLarge(f"k^n = {k**n} exceeds the table guard")
    rule = args.rule
    if rule == "weighted-plurality":
        w = _read_weights(args.weights) if args.weights else [Fraction(1, n)] * n
        f = build_weighted_plurality(k, n, w, parse_tiebreak(args.tiebreak))
    elif rule == "plurality":
        f = build_weighted_plurality(k, n, [Fraction(1, n)] * n, parse_tiebreak(args.tiebreak))
    elif rule == "dictator":
        f = dictator(k, n)
    elif rule == "parity":
        if k != 2:
            raise InputError("parity needs -k 2")
        f = parity(n)
    elif rule == "constant":
        f = constant(k, n, args.value)
    else:
        seed = args.seed if args.seed is not None else _default_seed()
        f = random_neutral_function(k, n, seed)
    text = io.format_tt(f, compact=args.compact)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_experiment(args):
    seed = args.seed if args.seed is not None else _default_seed()
    delta = Fraction(args.delta) if args.delta is not None else None
    if args.family == "biased" and delta is None:
        raise InputError("--family biased needs --delta")
    points = effect_scaling_experiment(args.k, args.family, args.n, args.samples, seed, delta)
    text = experiment_csv(points)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wpcheck",
        description="Decide weighted-plurality membership with exact LP certificates; "
        "compute voter effects and aggregation reports.",
        epilog=__doc__.split("\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide whether a truth table is a weighted plurality")
    p.add_argument("function", help=".tt file, or a directory of .tt files")
    p.add_argument("--mode", choices=["neutral", "general"], default="neutral")
    p.add_argument("--labels", type=_pair, help="label pair a,b (default 1,2 for k>=3, 1,0 for k=2)")
    p.add_argument("-o", "--output", help="report JSON path (directory in corpus mode)")
    p.add_argument("--dump-lp", help="write the primal LP as text to this path")
    p.add_argument("--jobs", type=int, default=1, help="worker processes in corpus mode")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("neutral", help="check neutrality of a truth table")
    p.add_argument("function")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_neutral)

    p = sub.add_parser("effects", help="voter effects under a distribution")
    p.add_argument("function")
    p.add_argument("--dist", help="distribution JSON (default: uniform product)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="exact rational enumeration (default)")
    g.add_argument("--samples", type=int, help="Monte Carlo sample count")
    p.add_argument("--seed", type=int, help=f"Monte Carlo seed (default ${SEED_ENV} or 0)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_effects)

    p = sub.add_parser("verify-a", help="exact aggregation report for weights, distribution and set A")
    p.add_argument("function")
    p.add_argument("--weights", required=True)
    p.add_argument("--dist", required=True)
    p.add_argument("--set", type=_int_list, required=True, help="comma-separated alternatives in A")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_verify_a)

    p = sub.add_parser("gen", help="write a truth table")
    p.add_argument(
        "--rule",
        choices=["weighted-plurality", "plurality", "dictator", "parity", "constant", "random-neutral"],
        default="weighted-plurality",
    )
    p.add_argument("--weights", help="weights JSON (default uniform)")
    p.add_argument("--tiebreak", default="first-match", help="first-match or fixed:a")
    p.add_argument("--value", type=int, default=0, help="output of the constant rule")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--compact", action="store_true", help="undelimited digit table (k <= 10)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("experiment", help="Monte Carlo effect of voter 1 versus n, as CSV")
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--family", choices=["uniform", "biased"], default="uniform")
    p.add_argument("--delta", help="lead of alternative 1 in the biased family, e.g. 3/10")
    p.add_argument("--n", type=_int_list, required=True, help="ascending comma-separated voter counts")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotNeutral as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_NEUTRAL
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (NotAWeightedPlurality, InvalidWeights) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_WEIGHTS
    except (SolverInconsistency, AggregationViolation) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (InputError, InvalidDistribution, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
