"""Command-line interface.

Exit status: 0 feasible / fair / done, 1 usage error, 2 input error,
3 infeasible / unfair.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

from .audit import audit, parse_partition
from .constructive import (
    ConstructionError,
    almost_uniform_partition,
    guarantee_check,
    partition_clustered,
)
from .core import FairnessParams, FairPartError, Instance, Topology, parse_instance, parse_rational
from .exact import DEFAULT_ORACLE_CAP, brute_force_solve, dp_solve
from .generators import (
    gen_adversarial,
    gen_clustered,
    gen_mostly_clustered,
    gen_multi_sigma_adversarial,
    gen_uniform_random,
)
from .render import render_ascii, render_svg

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _int_list(text):
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _params_parent(require_beta=True):
    pp = argparse.ArgumentParser(add_help=False)
    g = pp.add_argument_group("fairness parameters")
    g.add_argument("--sigma", type=_positive_int, required=True, help="ideal part size")
    g.add_argument("--epsilon", type=_rational, required=True, help="size slack, p/q or decimal")
    if require_beta:
        g.add_argument("--beta", type=_rational, default=_rational("1/2"),
                       help="deviation bar (default 1/2)")
        g.add_argument("--beta-mode", choices=["strict", "inclusive"], default="inclusive")
    return pp


def _io_parent():
    pp = argparse.ArgumentParser(add_help=False)
    pp.add_argument("--format", choices=["json", "text"], default="json")
    pp.add_argument("-o", "--output", help="write to this file instead of stdout")
    return pp


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairpart", description="Locally fair balanced partitions of R/B sequences.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    params, io = _params_parent(), _io_parent()

    p = sub.add_parser("solve", parents=[params, io], help="exact solver (line); oracle on a circle")
    p.add_argument("instance", help="instance file, or - for stdin")
    p.add_argument("--topology", choices=["line", "circle"], default="line")
    p.add_argument("--fair4-cache", choices=["on", "off", "auto"], default="auto")
    p.add_argument("--oracle-cap", type=_positive_int, default=DEFAULT_ORACLE_CAP)
    p.add_argument("--force", action="store_true", help="run the oracle above its cap")
    p.add_argument("--no-timing", action="store_true", help="report elapsed_ms as 0")

    p = sub.add_parser("oracle", parents=[params, io], help="brute-force enumeration")
    p.add_argument("instance")
    p.add_argument("--topology", choices=["line", "circle"], default="line")
    p.add_argument("--oracle-cap", type=_positive_int, default=DEFAULT_ORACLE_CAP)
    p.add_argument("--force", action="store_true")
    p.add_argument("--no-timing", action="store_true")

    p = sub.add_parser("audit", parents=[params, io], help="check a given partition")
    p.add_argument("instance")
    p.add_argument("--partition", required=True, help="boundary list or partition JSON file")
    p.add_argument("--topology", choices=["line", "circle"], default="line")
    p.add_argument("--first-only", action="store_true", help="stop at the first witness")

    p = sub.add_parser("partition", help="constructive partitions")
    psub = p.add_subparsers(dest="strategy", required=True, parser_class=_Parser)
    q = psub.add_parser("uniform", parents=[params, io], help="near-equal parts of size >= lo")
    q.add_argument("instance", nargs="?", help="instance (only its length is used)")
    q.add_argument("--n", type=_positive_int, help="point count instead of an instance")
    q = psub.add_parser("clustered", parents=[_params_parent(False), io],
                        help="run-following partition")
    q.add_argument("instance")

    p = sub.add_parser("gen", help="generate instances")
    gsub = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output")
    q = gsub.add_parser("adversarial", parents=[out])
    q.add_argument("--sigma", type=_positive_int, required=True)
    q.add_argument("--epsilon", type=_rational, required=True)
    q.add_argument("--beta", type=_rational, required=True)
    q.add_argument("--n", type=_positive_int, required=True)
    q = gsub.add_parser("multi-sigma", parents=[out])
    q.add_argument("--sigmas", type=_int_list, required=True, help="e.g. 4,8")
    q.add_argument("--epsilon", type=_rational, required=True)
    q.add_argument("--beta", type=_rational, required=True)
    q.add_argument("--n", type=_positive_int, required=True)
    q = gsub.add_parser("clustered", parents=[out])
    q.add_argument("--n", type=_positive_int, required=True)
    q.add_argument("--min-run", type=_positive_int, required=True)
    q.add_argument("--max-run", type=_positive_int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q = gsub.add_parser("mostly-clustered", parents=[out])
    q.add_argument("--n", type=_positive_int, required=True)
    q.add_argument("--sigma", type=_positive_int, required=True)
    q.add_argument("--gamma", type=_rational, required=True)
    q.add_argument("--min-run", type=_positive_int, required=True)
    q.add_argument("--max-run", type=_positive_int)
    q.add_argument("--seed", type=int, default=0)
    q = gsub.add_parser("random", parents=[out])
    q.add_argument("--n", type=_positive_int, required=True)
    q.add_argument("--p-red", type=_rational, default=_rational("1/2"))
    q.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("render", help="ASCII strip and optional SVG")
    p.add_argument("instance")
    p.add_argument("--partition", help="boundary list or partition JSON file")
    p.add_argument("--svg", help="also write an SVG drawing here")
    p.add_argument("-o", "--output")
    return parser


# --- helpers -------------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(path: str) -> Instance:
    try:
        return parse_instance(_read_text(path))
    except FairPartError as exc:
        raise InputError(f"{path}: {exc}") from None


def _params(args) -> FairnessParams:
    beta = getattr(args, "beta", _rational("1/2"))
    mode = getattr(args, "beta_mode", "inclusive")
    try:
        return FairnessParams(args.sigma, args.epsilon, beta, mode)
    except FairPartError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, path: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _solve_text(result) -> str:
    if not result.feasible:
        return "infeasible"
    part = result.partition
    line = "feasible: " + part.to_text()
    if part.offset:
        line += f" (offset {part.offset})"
    return line


# --- commands ------------------------------------------------------------------


def cmd_solve(args) -> int:
    p = _params(args)
    x = _load_instance(args.instance)
    topology = Topology(args.topology)
    try:
        if args.command == "oracle" or topology is Topology.CIRCLE:
            result = brute_force_solve(x, p, topology, cap=args.oracle_cap, force=args.force)
        else:
            result = dp_solve(x, p, fair4_cache=args.fair4_cache)
    except FairPartError as exc:
        raise InputError(str(exc)) from None
    if args.no_timing if hasattr(args, "no_timing") else False:
        result.elapsed_ms = 0.0
    body = result.to_json() if args.format == "json" else _solve_text(result)
    _emit(body, args.output)
    return EXIT_OK if result.feasible else EXIT_NEGATIVE


def _audit_text(report) -> str:
    lines = [f"fair: {'yes' if report.is_fair else 'no'}", f"alpha: {report.alpha}"]
    for s in report.per_interval:
        flag = "" if s.allowable else "  (not allowable)"
        lines.append(f"  part ({s.start},{s.start + s.size}] size {s.size} "
                     f"majority {s.majority.letter} unhappy {s.unhappy}{flag}")
    for g in report.groups:
        lines.append(f"  deviating {g.interval.render()} {g.color.letter} unhappy {g.unhappy_count}")
    return "\n".join(lines)


def cmd_audit(args) -> int:
    p = _params(args)
    x = _load_instance(args.instance)
    try:
        part = parse_partition(_read_text(args.partition), n=x.n)
        report = audit(x, part, p, args.topology, first_only=args.first_only)
    except FairPartError as exc:
        raise InputError(str(exc)) from None
    body = report.to_json() if args.format == "json" else _audit_text(report)
    _emit(body, args.output)
    return EXIT_OK if report.is_fair else EXIT_NEGATIVE


def cmd_partition(args) -> int:
    p = _params(args)
    if args.strategy == "uniform":
        if (args.n is None) == (args.instance is None):
            raise UsageError("give exactly one of an instance or --n")
        n = args.n if args.n is not None else _load_instance(args.instance).n
        try:
            part = almost_uniform_partition(n, p)
            certified = guarantee_check(n, p)
        except ConstructionError as exc:
            raise InputError(str(exc)) from None
        if not certified:
            warnings.warn("size bounds do not certify this partition fair for every coloring "
                          f"at beta={p.beta} ({p.beta_mode.value})", stacklevel=1)
        body = json.dumps(part.to_dict(), indent=2) if args.format == "json" else part.to_text()
    else:
        x = _load_instance(args.instance)
        res = partition_clustered(x, p)
        if args.format == "json":
            body = res.to_json()
        else:
            body = res.partition.to_text()
            if res.non_allowable:
                body += f"\n# alpha {res.alpha}"
    _emit(body, args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        if args.kind == "adversarial":
            g = gen_adversarial(args.sigma, args.epsilon, args.beta, args.n)
        elif args.kind == "multi-sigma":
            g = gen_multi_sigma_adversarial(args.sigmas, args.epsilon, args.beta, args.n)
        elif args.kind == "clustered":
            g = gen_clustered(args.n, args.min_run, args.max_run, args.seed)
        elif args.kind == "mostly-clustered":
            g = gen_mostly_clustered(args.n, args.sigma, args.gamma, args.min_run, args.seed,
                                     max_run=args.max_run)
        else:
            g = gen_uniform_random(args.n, args.p_red, args.seed)
    except FairPartError as exc:
        raise UsageError(str(exc)) from None
    _emit(g.to_text(), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    x = _load_instance(args.instance)
    part = None
    if args.partition:
        try:
            part = parse_partition(_read_text(args.partition), n=x.n)
        except FairPartError as exc:
            raise InputError(str(exc)) from None
    _emit(render_ascii(x, part), args.output)
    if args.svg:
        try:
            with open(args.svg, "w", encoding="utf-8") as fh:
                fh.write(render_svg(x, part))
        except OSError as exc:
            raise InputError(f"cannot write {args.svg}: {exc.strerror}") from None
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "oracle": cmd_solve,
    "audit": cmd_audit,
    "partition": cmd_partition,
    "gen": cmd_gen,
    "render": cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on --help and on bad flags; report that as a status
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"fairpart: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"fairpart: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
