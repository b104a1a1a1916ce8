"""Command-line front end.

Exit codes: 0 success or positive verdict, 3 negative verdict (irreversible,
a diamond failure), 4 a search bound was exhausted, 1 usage or parse error,
2 invalid system or configuration.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import analysis, lab, rewrite, unrewrite
from .core import PreconditionError, validate_config, validate_system
from .textio import ParseError, SourceFile, parse_config, parse_system, print_config, print_report, to_json

OK, USAGE, INVALID, NEGATIVE, EXHAUSTED = 0, 1, 2, 3, 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def load_source(spec: str) -> SourceFile:
    """A ``.ins`` path or a builtin system name."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
        try:
            return parse_system(text)
        except ParseError as err:
            raise _Fail(USAGE, f"{spec}:{err}") from None
    if spec in lab.BUILTINS:
        return lab.builtin(spec)
    raise _Fail(USAGE, f"{spec}: no such file or builtin system ({', '.join(lab.BUILTINS)})")


def _system(args) -> SourceFile:
    src = load_source(args.system)
    v = validate_system(src.system)
    for w in v.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if not v.ok:
        raise _Fail(INVALID, "invalid system:\n" + "\n".join(f"  {e}" for e in v.errors))
    return src


def _config(args, src: SourceFile):
    text = args.config
    if text is None:
        raise _Fail(USAGE, "this command needs -c CONFIG (a declared name or '< ... | ... >')")
    if text in src.configs:
        c = src.configs[text]
    else:
        try:
            c = parse_config(text, src.system)
        except ParseError as err:
            raise _Fail(USAGE, f"-c: {err}") from None
    v = validate_config(src.system, c)
    if not v.ok:
        raise _Fail(INVALID, "invalid configuration:\n" + "\n".join(f"  {e}" for e in v.errors))
    return c


def _emit(args, data: dict, text: str) -> None:
    print(to_json(data) if args.json else text)


# -- subcommands ---------------------------------------------------------------

def cmd_check(args) -> int:
    rep = analysis.reversibility_report(_system(args).system, args.strict)
    print(print_report(rep, machine=args.json))
    return OK if rep.reversible else NEGATIVE


def cmd_reduce(args) -> int:
    src = _system(args)
    trace = rewrite.normalize(src.system, _config(args, src), args.strategy, args.fuel)
    data = {
        "status": trace.status,
        "steps": len(trace),
        "final": print_config(trace.final),
    }
    lines = [print_config(trace.final), f"{trace.status} after {len(trace)} steps"]
    if args.trace:
        data["trace"] = [{"kind": st.kind, "equation": repr(st.equation)} for st in trace.steps]
        lines[1:1] = [f"  {i + 1}. {st.kind}: {st.equation!r}" for i, st in enumerate(trace.steps)]
    _emit(args, data, "\n".join(lines))
    return EXHAUSTED if trace.status == "fuel-exhausted" else OK


def cmd_expand(args) -> int:
    src = _system(args)
    c = _config(args, src)
    preds = unrewrite.expansions(src.system, c, args.kind)
    data = {
        "config": print_config(c),
        "kind": args.kind,
        "predecessors": [{"kind": e.kind, "config": print_config(e.config)} for e in preds],
    }
    text = "\n".join([f"{len(preds)} predecessors of {print_config(c)}"] +
                     [f"  [{e.kind}] {print_config(e.config)}" for e in preds])
    _emit(args, data, text)
    return OK


def cmd_diamond(args) -> int:
    src = _system(args)
    rep = lab.diamond_check(src.system, _config(args, src), args.mode, args.depth)
    print(print_report(rep, machine=args.json))
    return {"joinable": OK, "failure": NEGATIVE, "inconclusive": EXHAUSTED}[rep.status]


def cmd_witness(args) -> int:
    w = lab.strong_failure_witness(_system(args).system, args.strict)
    _emit(args, {"witness": None if w is None else w.as_dict()}, "none" if w is None else w.describe())
    return OK


def cmd_search(args) -> int:
    src = _system(args)
    rep = lab.counterexample_search(src.system, args.size, args.samples, args.depth, args.seed)
    print(print_report(rep, machine=args.json))
    return {"joinable": OK, "failure": NEGATIVE, "inconclusive": EXHAUSTED}[rep.status]


def _positive(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="intercalc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, help_text, config=False):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("system", help=f".ins file or builtin ({', '.join(lab.BUILTINS)})")
        if config:
            sp.add_argument("-c", "--config", help="declared configuration name or inline '< ... | ... >'")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    strict = "forbid clash arguments that mention any rule's wiring names"
    sp = command("check", cmd_check, "reversibility report")
    sp.add_argument("--strict", action="store_true", help=strict)
    sp = command("reduce", cmd_reduce, "normalize a configuration", config=True)
    sp.add_argument("--strategy", choices=rewrite.STRATEGIES, default="interaction-first")
    sp.add_argument("--fuel", type=_positive, default=10_000)
    sp.add_argument("--trace", action="store_true")
    sp = command("expand", cmd_expand, "one-step predecessors", config=True)
    sp.add_argument("--kind", choices=("all", rewrite.INTERACTION, rewrite.INDIRECTION), default="all")
    sp = command("diamond", cmd_diamond, "upward diamond check", config=True)
    sp.add_argument("--mode", choices=lab.MODES, default="one")
    sp.add_argument("--depth", type=_positive, default=2)
    sp = command("witness", cmd_witness, "refute strong upward confluence")
    sp.add_argument("--strict", action="store_true", help=strict)
    sp = command("search", cmd_search, "random counterexample search")
    sp.add_argument("--samples", type=_positive, default=50)
    sp.add_argument("--size", type=_positive, default=4)
    sp.add_argument("--depth", type=_positive, default=2)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except _Fail as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except PreconditionError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
