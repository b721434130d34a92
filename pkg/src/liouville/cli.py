"""Command-line entry point.

Exit status: 0 on success, 1 on invalid input or usage, 2 when a request
exceeds a budget.  Payload goes to stdout (or ``--output``); diagnostics go
to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import artin
from .constructions import ConstructionRecipe, StageSchedule, make_stream, parse_dilution, take_prefix
from .debruijn import generate_debruijn
from .digits import BUDGET_ENV, BudgetExceededError, as_digits, max_digits, to_str
from .dimension import entropy_rate_profile, profile_digits
from .exact import verify_liouville

INT64_MAX = 2**63 - 1


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    max_digits: int = 0
    json: bool = False
    output: str | None = None


def jsonable(obj):
    """Recursively convert to JSON types; integers beyond 64 bits become decimal strings."""
    if isinstance(obj, np.generic):
        obj = obj.item()
    if obj is None or isinstance(obj, (bool, str, float)):
        return obj
    if isinstance(obj, int):
        return obj if -INT64_MAX - 1 <= obj <= INT64_MAX else str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, no insignificant whitespace."""
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ":"))


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _add_recipe_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--construction", required=True, choices=["psi1", "psi2", "alpha", "diluted"])
    p.add_argument("--base", type=int, default=2)
    p.add_argument("--dilution", help="M/N in lowest terms, for the diluted construction")


def _recipe(args) -> ConstructionRecipe:
    dilution = parse_dilution(args.dilution) if args.dilution else None
    return ConstructionRecipe(args.construction, base=args.base, dilution=dilution)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="liouville", description="Liouville digit streams, certificates and block entropy.")
    parser.add_argument("-o", "--output", help="write the payload here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="emit construction digits")
    _add_recipe_args(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--digits", type=int)
    g.add_argument("--stage", type=int, help="emit exactly stages 1..STAGE")

    p = sub.add_parser("verify", help="exact Liouville certificates per stage")
    _add_recipe_args(p)
    p.add_argument("--stages", type=int, required=True)
    p.add_argument("--stage-cap", type=int, help="override the per-construction stage budget")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("fsdim", help="block-entropy rates of a construction")
    _add_recipe_args(p)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--prefixes", help="comma-separated prefix lengths (default: stage boundaries)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("analyze", help="block-entropy rates of external digits")
    p.add_argument("--stdin", action="store_true", required=True)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--prefixes")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("debruijn", help="print the canonical de Bruijn sequence B(k, n)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("artin", help="primitive-root tools")
    asub = p.add_subparsers(dest="artin_command", required=True, parser_class=_Parser)
    q = asub.add_parser("find", help="primes with every base as primitive root")
    q.add_argument("--bases", required=True)
    q.add_argument("--limit", type=int, required=True)
    q.add_argument("--json", action="store_true")
    q = asub.add_parser("gamma", help="build the multi-base construction")
    q.add_argument("--bases", required=True)
    q.add_argument("--stages", type=int, default=3)
    q.add_argument("--max-stages", type=int, default=3)
    q.add_argument("--f", help="comma-separated repetition counts f(1),f(2),...")
    q.add_argument("--emit-base", type=int)
    q.add_argument("--digits", type=int, default=0)
    q.add_argument("--strict", action="store_true", help="fail when digit stability does not hold")
    q.add_argument("--json", action="store_true")
    return parser


# ---------------------------------------------------------------- commands


def _cmd_gen(args) -> str:
    recipe = _recipe(args)
    if recipe.base > 10:
        raise ValueError("ASCII output supports bases up to 10")
    if args.stage is not None:
        if args.stage < 0:
            raise ValueError("stage must be nonnegative")
        count = StageSchedule(recipe).boundary(args.stage)
    else:
        if args.digits < 0:
            raise ValueError("digit count must be nonnegative")
        count = args.digits
    return to_str(take_prefix(make_stream(recipe), count)) + "\n"


def _cmd_verify(args) -> str:
    recipe = _recipe(args)
    if args.stages < recipe.first_stage:
        raise ValueError(f"{recipe.kind.value} starts at stage {recipe.first_stage}")
    reports = verify_liouville(recipe, args.stages, stage_cap=args.stage_cap)
    if args.json:
        return dumps([r.as_json() for r in reports]) + "\n"
    lines = [f"{'stage':>5} {'q_bits':>10} {'agreement':>10} {'required':>10}  holds"]
    for r in reports:
        lines.append(f"{r.stage:>5} {r.q_bits:>10} {r.agreement:>10} {r.required:>10}  {r.holds}")
    return "\n".join(lines) + "\n"


def _format_report(report) -> str:
    lines = [f"# {report.source}, base {report.base}"]
    lines.append(f"{'prefix':>10} {'m':>3} {'mode':>9} {'H (bits)':>12} {'rate':>10}")
    for e in report.entries:
        lines.append(f"{e.prefix_length:>10} {e.m:>3} {e.mode:>9} {e.entropy_bits:>12.6f} {e.normalized_rate:>10.6f}")
    for mode, v in report.dimension_estimate.items():
        lines.append(f"dimension estimate ({mode}, smallest sampled rate): {v:.6f}")
    return "\n".join(lines) + "\n"


def _cmd_fsdim(args) -> str:
    recipe = _recipe(args)
    prefixes = _int_list(args.prefixes) if args.prefixes else None
    report = entropy_rate_profile(recipe, args.m_max, prefixes)
    return dumps(report.as_json()) + "\n" if args.json else _format_report(report)


def _cmd_analyze(args, stdin) -> str:
    text = stdin.read().strip()
    if not text:
        raise ValueError("no digits on stdin")
    digits = as_digits(text, base=args.base)
    prefixes = _int_list(args.prefixes) if args.prefixes else None
    report = profile_digits(digits, args.base, args.m_max, prefixes, source="stdin")
    return dumps(report.as_json()) + "\n" if args.json else _format_report(report)


def _cmd_debruijn(args) -> str:
    if args.k > 10:
        raise ValueError("ASCII output supports alphabets up to 10 symbols")
    return str(generate_debruijn(args.k, args.n)) + "\n"


def _cmd_artin(args) -> str:
    bases = _int_list(args.bases)
    if args.artin_command == "find":
        primes = artin.find_simultaneous_primes(bases, args.limit)
        if args.json:
            return dumps({"bases": bases, "limit": args.limit, "primes": primes}) + "\n"
        return " ".join(map(str, primes)) + "\n"

    f = tuple(_int_list(args.f)) if args.f else None
    recipe = artin.GammaRecipe(tuple(bases), args.stages, f, max_stages=args.max_stages)
    build = artin.build_gamma(recipe, strict=args.strict)
    payload = build.as_json()
    if args.emit_base is not None:
        if args.emit_base > 10:
            raise ValueError("ASCII output supports bases up to 10")
        payload["emit_base"] = args.emit_base
        payload["digits"] = to_str(build.digits(args.emit_base, args.digits))
    if args.json:
        return dumps(payload) + "\n"
    lines = [f"bases {bases}, primes {build.primes[: recipe.stages]}, f {build.schedule}"]
    for r in build.liouville:
        lines.append(f"stage {r.stage}: q_bits {r.q_bits}, distance < 2^-{r.distance_bound_bits}, holds {r.holds}")
    for c in build.digit_checks:
        lines.append(
            f"stage {c.stage} base {c.base}: {c.digits} digits stable {c.stable}, block repeats {c.block_repeats}"
        )
    if "digits" in payload:
        lines.append(payload["digits"])
    return "\n".join(lines) + "\n"


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = RunConfig(args.command, vars(args), max_digits(), getattr(args, "json", False), args.output)
        if config.subcommand == "gen":
            out = _cmd_gen(args)
        elif config.subcommand == "verify":
            out = _cmd_verify(args)
        elif config.subcommand == "fsdim":
            out = _cmd_fsdim(args)
        elif config.subcommand == "analyze":
            out = _cmd_analyze(args, stdin)
        elif config.subcommand == "debruijn":
            out = _cmd_debruijn(args)
        else:
            out = _cmd_artin(args)
    except BudgetExceededError as exc:
        print(f"liouville: budget exceeded: {exc} (raise {BUDGET_ENV} to allow more)", file=stderr)
        return 2
    except (ValueError, artin.DigitStabilityError) as exc:
        print(f"liouville: error: {exc}", file=stderr)
        return 1
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(out)
    else:
        stdout.write(out)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
