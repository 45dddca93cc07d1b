"""``ca`` command-line entry point."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction

from diamca import analysis, constructions, engine, verify
from diamca.config import ConfigParseError, Configuration, Window, format_config, parse_config
from diamca.rules import RULES
from diamca.symbols import A1, A3, PRODUCT, STACKED

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_RULE_ALPHABET = {"t1": A1, "t": PRODUCT, "t3": A3, "ts": STACKED}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _config(args) -> Configuration:
    return parse_config(args.config, _RULE_ALPHABET[args.rule])


def _horizon(value: int | None) -> int:
    return engine.default_horizon() if value is None else value


def _columns(text: str) -> list[int]:
    """``0``, ``-2,3`` or ``-2:2``."""
    if ":" in text:
        return list(Window.parse(text))
    return [int(c) for c in text.split(",")]


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# ------------------------------------------------------------------ commands


def cmd_trace(args) -> int:
    x = _config(args)
    trace = engine.trace_table(x, RULES[args.rule], Window.parse(args.window), args.steps)
    _emit(engine.render_trace(trace, _RULE_ALPHABET[args.rule], args.format, args.ascii), args.out)
    return EXIT_OK


def cmd_period(args) -> int:
    x = _config(args)
    window = Window.parse(args.window) if args.window else Window(args.column, args.column)
    report = engine.detect_eventual_period(x, RULES[args.rule], window, _horizon(args.horizon))
    print(report)
    return EXIT_OK if report.confirmed else EXIT_FAIL


def cmd_sensitivity(args) -> int:
    x = _config(args)
    rule = RULES[args.rule]
    cols = _columns(args.columns)
    horizon = _horizon(args.horizon)
    reports = []
    if args.rule == "t1" and args.method != "brute":
        raise UsageError("the arrow-extremal oracle needs an arrow layer; use --method brute for t1")
    if args.method in ("brute", "both"):
        reports.append(analysis.sensitivity_set_bruteforce(x, args.n, cols, horizon, args.suffix_depth, rule, args.jobs))
    if args.method in ("extremal", "both"):
        reports.append(analysis.sensitivity_set_arrow_extremal(x, args.n, cols, horizon, rule))
    rows = []
    for r in reports:
        present = set(r.times)
        rows += [(t, int(t in present), r.method) for t in range(horizon + 1)]
    _emit(_rows_csv(["time", "present", "method"], rows), args.out)
    if len(reports) == 2 and reports[0].times != reports[1].times:
        print("methods disagree", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_density(args) -> int:
    horizon = _horizon(args.horizon)
    if args.config:
        x, n = _config(args), args.n
        if n is None:
            raise UsageError("--n is required with --config")
    elif args.l is not None:
        x, n = constructions.build_wall_point(args.l), 2**args.l + 1
    else:
        raise UsageError("give --l or --config")
    cols = _columns(args.columns)
    r = analysis.sensitivity_set_arrow_extremal(x, n, cols, horizon, RULES[args.rule])
    d = r.upper_density()
    print(f"density {d} ({float(d):.6f}) horizon {horizon} columns {','.join(map(str, sorted(cols)))} n {n}")
    return EXIT_OK


def cmd_certify(args) -> int:
    x = _config(args)
    horizon = _horizon(args.horizon)
    slack = Fraction(2, horizon) if args.slack else Fraction(0)
    rule = RULES[args.rule]
    if args.mprime is not None:
        cert = analysis.diam_mean_certificate(x, args.m, args.mprime, horizon, rule, args.left_columns, slack)
    else:
        n, cert = constructions.search_mprime(x, args.m, horizon, rule=rule, slack=slack)
        if cert is None:
            print(f"no admissible m' certifies m={args.m}")
            return EXIT_FAIL
    _emit(cert.to_text(), args.out)
    return EXIT_OK if cert.passed else EXIT_FAIL


def cmd_build(args) -> int:
    kind = args.kind
    if kind == "block":
        points = [constructions.build_block_point(args.l, args.j)]
    elif kind == "wall":
        points = [constructions.build_wall_point(args.l)]
    elif kind == "two-block":
        points = [constructions.build_two_block_point(args.l)]
    elif kind == "cascade":
        points = [constructions.build_cascade_point(constructions.CascadeSpec(args.prefix, args.depth))]
    elif kind == "pair":
        if not args.word:
            raise UsageError("pair needs --word")
        points = list(constructions.build_divergence_pair(tuple(args.word)))
    else:  # ts-pair
        if not args.word:
            raise UsageError("ts-pair needs --word (space-separated stacked tokens)")
        points = list(constructions.build_ts_pair(tuple(args.word.split())))
    _emit("".join(format_config(p) + "\n" for p in points), args.out)
    return EXIT_OK


def cmd_rules_dump(args) -> int:
    _emit(RULES[args.rule].to_csv(), args.out)
    return EXIT_OK


def _parse_corruption(spec: str) -> dict:
    """``RULE:CENTER,RIGHT=OUT`` -> rule set with that single entry replaced."""
    try:
        name, _, entry = spec.partition(":")
        key, _, out = entry.partition("=")
        center, right = key.split(",")
        rules = dict(RULES)
        rules[name] = rules[name].replace(center, right, out)
        return rules
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad --corrupt spec {spec!r}: {exc}") from exc


def cmd_verify(args) -> int:
    rules = _parse_corruption(args.corrupt) if args.corrupt else None
    flags = f" --corrupt '{args.corrupt}'" if args.corrupt else ""
    try:
        results = verify.run_checks(args.suite, rules, args.check, flags, args.seed)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    if args.check and not results:
        raise UsageError(f"unknown check {args.check!r}")
    for r in results:
        print(r.line())
    failed = sum(r.status == verify.FAIL for r in results)
    print(f"{len(results) - failed}/{len(results)} passed")
    return EXIT_FAIL if failed else EXIT_OK


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ca", description="Exact experiments with one-sided cellular automata.")
    p.add_argument("--ascii", action="store_true", help="plain text-format symbols instead of UTF-8 glyphs")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_rule(sp, choices=("t1", "t", "ts"), default=None):
        sp.add_argument("--rule", choices=choices, default=default, required=default is None)

    sp = sub.add_parser("trace", help="orbit table over a window")
    with_rule(sp)
    sp.add_argument("--config", required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--window", required=True, help="LO:HI")
    sp.add_argument("--format", choices=("table", "csv"), default="table")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("period", help="certified eventual period of a window")
    with_rule(sp)
    sp.add_argument("--config", required=True)
    sp.add_argument("--column", type=int, default=0)
    sp.add_argument("--window", help="LO:HI (overrides --column)")
    sp.add_argument("--horizon", type=int)
    sp.set_defaults(func=cmd_period)

    sp = sub.add_parser("sensitivity", help="sensitivity set S_J(x, n) as CSV")
    with_rule(sp, ("t1", "t", "ts"), "t")
    sp.add_argument("--config", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--columns", default="0", help="J as '0', '-1,2' or '-2:2'")
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--method", choices=("brute", "extremal", "both"), default="extremal")
    sp.add_argument("--suffix-depth", type=int, default=6)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_sensitivity)

    sp = sub.add_parser("density", help="finite-horizon upper density of S_J")
    with_rule(sp, ("t",), "t")
    sp.add_argument("--l", type=int, help="use the wall point with block length 2^l")
    sp.add_argument("--config")
    sp.add_argument("--n", type=int)
    sp.add_argument("--columns", default="0")
    sp.add_argument("--horizon", type=int)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("certify", help="diam-mean certificate")
    with_rule(sp, ("t", "ts"), "t")
    sp.add_argument("--config", required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--mprime", type=int)
    sp.add_argument("--horizon", type=int)
    sp.add_argument("--left-columns", choices=("extremal", "bounded-by-right"), default="extremal")
    sp.add_argument("--no-slack", dest="slack", action="store_false", help="drop the 2/horizon slack")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("build", help="print a named configuration")
    sp.add_argument("kind", choices=("block", "wall", "cascade", "pair", "ts-pair", "two-block"))
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--j", type=int, default=0)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--prefix", default="")
    sp.add_argument("--word")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_build)

    for name in ("rules-dump",):
        sp = sub.add_parser(name, help="full rule table as CSV")
        with_rule(sp, tuple(RULES))
        sp.add_argument("--out")
        sp.set_defaults(func=cmd_rules_dump)
    sp = sub.add_parser("rules", help="rule tables")
    rsub = sp.add_subparsers(dest="action", required=True, parser_class=_Parser)
    dp = rsub.add_parser("dump", help="full rule table as CSV")
    with_rule(dp, tuple(RULES))
    dp.add_argument("--out")
    dp.set_defaults(func=cmd_rules_dump)

    sp = sub.add_parser("verify", help="re-run the lemma checks")
    sp.add_argument("suite", nargs="?", default="all", help=f"all or one of: {', '.join(verify.SUITES)}")
    sp.add_argument("--check", help="run a single named check")
    sp.add_argument("--corrupt", help="fault injection: RULE:CENTER,RIGHT=OUT")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"ca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigParseError as exc:
        print(f"ca: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, RuntimeError) as exc:
        print(f"ca: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
