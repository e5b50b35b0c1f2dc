"""Command-line interface: ``taylorshift <command> [options]``.

Exit codes: 0 success, 1 goal or property failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import cmath
import sys
from fractions import Fraction

from .approximant import find_n0, write_atomic, write_decay_svg
from .config import config_from_parser, load_config
from .errors import ConfigError, NotReached, TaylorShiftError
from .geometry import leja_points, preset, theta_estimate
from .identities import run_identity_suite
from .laurent import DEFAULT_PRECISION, LaurentPoly, format_sci, parse_complex, precision
from .sequences import (
    EXP_K_MIN,
    POLY_K_MIN,
    GrowthModel,
    exp_growth_subsequence,
    poly_growth_subsequence,
    subsequence_csv,
    t_a_identity_suite,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
T_A_TOLERANCE = Fraction(1, 10**30)


def _emit(text: str, path: str | None) -> None:
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def cmd_identities(args) -> int:
    results = run_identity_suite(args.seed, args.cases)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.name:6s} {status} ({r.cases} cases)")
        for detail in r.failures[:5]:
            print(f"    {detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _default_parser(args):
    import configparser

    parser = configparser.ConfigParser()
    parser.read_dict(
        {
            "geometry": {"preset": args.preset},
            "targets": {"p": "1", "R1": "1", "R2": "0, 1"},
            "sequences": {"lambda1": "power 1", "lambda2": "power 2"},
            "run": {"epsilon": args.epsilon or "1e-2", "n_max": str(args.n_max or 40)},
        }
    )
    return parser


def cmd_construct(args) -> int:
    if args.config:
        cfg = load_config(args.config, samples=args.samples, precision=args.precision)
    else:
        cfg = config_from_parser(_default_parser(args), samples=args.samples, precision=args.precision)
    epsilon = Fraction(args.epsilon) if args.epsilon is not None else cfg.epsilon
    if epsilon <= 0:
        raise ConfigError("epsilon must be positive")
    n_max = args.n_max or cfg.n_max
    csv_path = args.out or cfg.csv_path
    with precision(cfg.precision):
        try:
            report = find_n0(cfg.geometry, cfg.targets, cfg.sequences, epsilon, n_max, expand=False)
            code = EXIT_OK
        except NotReached as exc:
            report = exc.report
            code = EXIT_FAIL
        _emit(report.to_csv(), csv_path)
        if cfg.svg_path:
            write_decay_svg(report.decay_table, cfg.svg_path)
    names = ["err_U"] + [f"err_{s}" for s in range(1, len(cfg.sequences) + 1)]
    errs = ", ".join(f"{k}={format_sci(v, 6)}" for k, v in zip(names, report.decay_table[-1].errors))
    if code == EXIT_OK:
        print(f"n0 = {report.n0}: {errs}", file=sys.stderr)
    else:
        best = min(report.decay_table, key=lambda r: r.max_error())
        best_errs = ", ".join(f"{k}={format_sci(v, 6)}" for k, v in zip(names, best.errors))
        print(f"not reached within n_max = {n_max}; best at n = {best.n}: {best_errs}", file=sys.stderr)
    return code


def _fractions(text: str) -> list:
    try:
        return [Fraction(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"bad number list {text!r}") from None


def cmd_sequences(args) -> int:
    rates = _fractions(args.rates)
    scales = _fractions(args.scales) if args.scales else ()
    try:
        model = GrowthModel(args.model, tuple(rates), tuple(scales))
    except TaylorShiftError as exc:
        raise ConfigError(str(exc)) from None
    k_min = POLY_K_MIN if args.model == "polynomial" else EXP_K_MIN
    if args.k_count < k_min:
        print(f"warning: k_count {args.k_count} is below k_min = {k_min}; no checks run", file=sys.stderr)
    build = poly_growth_subsequence if args.model == "polynomial" else exp_growth_subsequence
    pair = build(None, model, args.k_count)
    _emit(subsequence_csv(pair), args.out)
    bad = pair.failures()
    for k, c in bad[:10]:
        print(f"k={k}: {c.name} failed ({c.lhs} {c.relation} {c.rhs})", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_theta(args) -> int:
    geom = preset(args.preset, samples=args.samples)
    K = geom.compact.refine(max(geom.compact.sample_count, 2 * args.n))
    est = theta_estimate(K, geom.contour, args.n, leja_points(K, args.n))
    print(f"theta_hat({args.n}) = {est.theta:.17e}")
    return EXIT_OK


def cmd_t_a_check(args) -> int:
    a = parse_complex(args.a)
    coeffs = {}
    for item in args.f.split(","):
        if item.strip():
            k, _, c = item.partition(":")
            coeffs[int(k)] = parse_complex(c)
    f = LaurentPoly(coeffs)
    center, radius = parse_complex(args.center), Fraction(args.radius)
    grid = [complex(center) + float(radius) * cmath.exp(2j * cmath.pi * j / args.grid) for j in range(args.grid)]
    with precision(args.precision or DEFAULT_PRECISION):
        report = t_a_identity_suite(f, a, args.n_max, grid)
    print(f"max |S_n(f,z)((a+1)z) - T_(a,n)(f)(z)| = {format_sci(report.max_abs_diff, 6)} over {report.cases} cases")
    return EXIT_OK if report.max_abs_diff <= T_A_TOLERANCE else EXIT_FAIL


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags without defaults so they do not
    # overwrite values given before the command name
    def default(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=default(None), help="working precision in bits")
    common.add_argument("--samples", type=int, default=default(None), help="boundary samples of K")
    common.add_argument("--out", default=default(None), help="output CSV path (stdout if omitted)")
    common.add_argument("--seed", type=int, default=default(1), help="seed for random test inputs")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(prog="taylorshift", description=__doc__, parents=[_global_flags(False)])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("identities", parents=[common], help="exact operator identity suite")
    p.add_argument("--cases", type=int, default=100)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("construct", parents=[common], help="build f and search for the smallest n")
    p.add_argument("config", nargs="?", help="experiment INI file")
    p.add_argument("--preset", default="disk-default", help="geometry preset when no config is given")
    p.add_argument("--epsilon", default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("sequences", parents=[common], help="growth subsequence inequality checks")
    p.add_argument("--model", choices=("polynomial", "exponential"), required=True)
    p.add_argument("--rates", required=True, help="degrees d_1<d_2<... or bases a_1<a_2<...")
    p.add_argument("--scales", default=None, help="scale constants c_s (default 1)")
    p.add_argument("--k-count", type=int, default=30)
    p.set_defaults(func=cmd_sequences)

    p = sub.add_parser("theta", parents=[common], help="measured decay ratio of Leja nodal polynomials")
    p.add_argument("--preset", default="disk-default")
    p.add_argument("--n", type=int, default=64)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("t-a-check", parents=[common], help="S_n(f,z)((a+1)z) = T_(a,n)(f)(z) check")
    p.add_argument("--a", default="1")
    p.add_argument("--f", default="-1:1", help="terms exponent:coefficient, comma separated")
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--center", default="2")
    p.add_argument("--radius", default="1/2")
    p.add_argument("--grid", type=int, default=16)
    p.set_defaults(func=cmd_t_a_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, TaylorShiftError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
