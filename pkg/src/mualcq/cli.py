"""Command-line front end.

Exit codes: 0 success (holds, satisfiable, well-formed), 1 refuted or a
failed check, 2 unknown up to the size bound, 64 usage error, 65 input that
does not parse or is not well-formed.

Settings may also come from the environment; command-line flags win:

    MUALCQ_MAX_SIZE   default size bound (3)
    MUALCQ_BRUTE_CAP  domain-size cap of the brute-force fixpoint oracle (4)
    MUALCQ_SEED       seed of the random suites (0)
    MUALCQ_FORMAT     "text" or "json"

File arguments that do not exist on disk are looked up among the bundled
corpus files by name, so ``--tbox mgm.tbx`` works from any directory.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import corpus, mucalc, reasoning, suites
from . import syntax as s
from .errors import (
    ClosednessError,
    MuALCQError,
    NumberRestrictionPresent,
    ParseError,
    UnsupportedRole,
    WellFormednessError,
)
from .models import Signature, evaluate, format_model, missing_symbols, parse_model
from .parser import parse_concept, parse_tbox
from .search import find_models

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


@dataclass(frozen=True)
class Config:
    max_size: int = reasoning.DEFAULT_MAX_SIZE
    brute_cap: int = 4
    seed: int = 0
    output: str = "text"


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def config_from(args, environ_defaults: Config) -> Config:
    cfg = Config(
        max_size=args.max if getattr(args, "max", None) is not None else environ_defaults.max_size,
        brute_cap=args.cap if getattr(args, "cap", None) is not None else environ_defaults.brute_cap,
        seed=args.seed if getattr(args, "seed", None) is not None else environ_defaults.seed,
        output=args.format or environ_defaults.output,
    )
    if cfg.max_size < 1:
        raise UsageError("the size bound must be at least 1")
    if cfg.output not in ("text", "json"):
        raise UsageError(f"unknown output format {cfg.output!r}")
    return cfg


def environment_config() -> Config:
    return Config(
        max_size=_env_int("MUALCQ_MAX_SIZE", reasoning.DEFAULT_MAX_SIZE),
        brute_cap=_env_int("MUALCQ_BRUTE_CAP", 4),
        seed=_env_int("MUALCQ_SEED", 0),
        output=os.environ.get("MUALCQ_FORMAT") or "text",
    )


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), help="output format")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--cap", type=int, help="brute-force oracle domain cap")

    parser = _Parser(prog="mualcq", description="Reason about ALCQ concepts with fixpoints.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="parse a TBox file and check well-formedness")
    p.add_argument("file")
    p.add_argument("--concept", action="store_true", help="the file holds a single concept")

    p = sub.add_parser("sat", parents=[common], help="bounded satisfiability")
    p.add_argument("concept")
    p.add_argument("--tbox")
    p.add_argument("--max", type=int)
    p.add_argument("--method", choices=("search", "enumerate"), default="search")

    p = sub.add_parser("implies", parents=[common], help="bounded TBox implication C <= D")
    p.add_argument("--tbox", required=True)
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--max", type=int)
    p.add_argument("--strategy", choices=reasoning.STRATEGIES, default="both")

    p = sub.add_parser("eval", parents=[common], help="extension of a concept in a model file")
    p.add_argument("--model", required=True)
    p.add_argument("concept")
    p.add_argument("--free", action="append", default=[], metavar="X=s1,s2")

    p = sub.add_parser("translate", parents=[common], help="translate to the modal mu-calculus")
    p.add_argument("concept")
    p.add_argument("--target", choices=("mu", "detmu"), default="mu")

    p = sub.add_parser("models", parents=[common], help="list all models of a TBox of a given size")
    p.add_argument("--tbox", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--limit", type=int, help="stop after this many models")

    p = sub.add_parser("suite", parents=[common], help="run the randomized property suites")
    p.add_argument("--samples", type=int)
    p.add_argument("--only", action="append", choices=sorted(suites.SUITES))
    return parser


class _Out:
    def __init__(self, cfg, out, err):
        self.cfg = cfg
        self.out = out
        self.err = err

    def text(self, line=""):
        if self.cfg.output == "text":
            print(line, file=self.out)

    def record(self, rec):
        if self.cfg.output == "json":
            print(json.dumps(rec, sort_keys=True), file=self.out)

    def warn(self, msg):
        print(f"warning: {msg}", file=self.err)


def _read(path):
    try:
        return corpus.resolve(path)
    except FileNotFoundError:
        raise UsageError(f"cannot read {path}") from None


def _verdict_headline(v) -> str:
    if v.kind == "satisfiable":
        return f"satisfiable: {v.element} in a model of size {len(v.witness.domain)}"
    if v.kind == "unknown":
        return f"unknown up to size {v.bound}"
    if v.kind == "refuted":
        return f"refuted: {v.element} is a counterexample in a model of size {len(v.counter_model.domain)}"
    suffix = " (both strategies agree)" if v.strategy == "both" else f" ({v.strategy})"
    return f"holds up to size {v.bound}{suffix}"


def _emit_verdict(o: _Out, v, advisory=None):
    o.text(_verdict_headline(v))
    model = getattr(v, "witness", None) or getattr(v, "counter_model", None)
    if model is not None:
        o.text(format_model(model).rstrip("\n"))
    if advisory is not None:
        o.text(f"advisory: search would be complete if the bound were at least {advisory}")
    rec = reasoning.verdict_record(v)
    if advisory is not None:
        rec["closure_bound"] = advisory
    o.record(rec)


def cmd_check(args, o):
    text = _read(args.file)
    try:
        if args.concept:
            c = parse_concept(text)
            o.text(f"ok: well-formed concept of size {s.size(c)}")
            o.record({"ok": True, "kind": "concept", "size": s.size(c)})
        else:
            k = parse_tbox(text)
            o.text(f"ok: {len(k)} inclusion(s)")
            o.record({"ok": True, "kind": "tbox", "inclusions": len(k)})
    except MuALCQError as exc:
        print(f"{args.file}:{exc}", file=o.err)
        o.record({"ok": False, "error": str(exc)})
        return EXIT_NO
    return EXIT_OK


def cmd_sat(args, o):
    c = parse_concept(args.concept)
    k = parse_tbox(_read(args.tbox)) if args.tbox else None
    v = reasoning.sat_bounded(c, o.cfg.max_size, tbox=k, method=args.method)
    _emit_verdict(o, v, reasoning.closure_bound(c) if v.kind == "unknown" else None)
    return EXIT_OK if v.kind == "satisfiable" else EXIT_UNKNOWN


def cmd_implies(args, o):
    k = parse_tbox(_read(args.tbox))
    c, d = parse_concept(args.lhs), parse_concept(args.rhs)
    v = reasoning.implies_bounded(k, c, d, o.cfg.max_size, args.strategy)
    _emit_verdict(o, v)
    return EXIT_OK if v.kind == "holds" else EXIT_NO


def _parse_free(items):
    rho = {}
    for item in items:
        name, sep, rest = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--free expects X=s1,s2 but got {item!r}")
        rho[name.strip()] = frozenset(x.strip() for x in rest.split(",") if x.strip())
    return rho


def cmd_eval(args, o):
    m = parse_model(_read(args.model))
    rho = _parse_free(args.free)
    c = parse_concept(args.concept, free=rho)
    unknown = {x for e in rho.values() for x in e} - m.universe
    if unknown:
        raise UsageError(f"--free names unknown individuals: {', '.join(sorted(unknown))}")
    concepts, roles = missing_symbols(c, m)
    for a in concepts:
        o.warn(f"concept {a} is not in the model; taking it as empty")
    for r in roles:
        o.warn(f"role {r} is not in the model; taking it as empty")
    ext = evaluate(c, m, rho)
    members = [x for x in m.domain if x in ext]
    o.text(f"[{', '.join(members)}]")
    o.record({"extension": members})
    return EXIT_OK


def cmd_translate(args, o):
    c = parse_concept(args.concept)
    if args.target == "mu":
        phi = mucalc.translate_q(c)
        o.text(mucalc.print_formula(phi))
        o.record({"formula": mucalc.print_formula(phi), "target": "mu"})
        return EXIT_OK
    res = mucalc.translate_u(c)
    o.text(mucalc.print_formula(res.formula))
    for r, rn in res.fresh_roles.items():
        o.text(f"fresh {r} -> {rn}")
    o.record({"formula": mucalc.print_formula(res.formula), "fresh_roles": res.fresh_roles, "target": "detmu"})
    return EXIT_OK


def cmd_models(args, o):
    k = parse_tbox(_read(args.tbox))
    if args.size < 1:
        raise UsageError("--size must be at least 1")
    axioms = [s.Or(s.Not(lhs), rhs) for lhs, rhs in k]
    count = 0
    for m in find_models(Signature.of(k), args.size, axioms):
        if args.limit is not None and count >= args.limit:
            break
        count += 1
        o.text(f"# model {count}")
        o.text(format_model(m).rstrip("\n"))
        o.record(reasoning.model_record(m))
    o.text(f"# {count} model(s)")
    return EXIT_OK


def cmd_suite(args, o):
    names = args.only or ["theorems", "laws"]
    failed = False
    for name in names:
        fn = suites.SUITES[name]
        kwargs = {"seed": o.cfg.seed}
        if args.samples is not None:
            kwargs["samples"] = args.samples
        if name == "oracle":
            kwargs["cap"] = o.cfg.brute_cap
        report = fn(**kwargs)
        o.text(report.summary())
        for v in report.violations:
            o.text(f"  violation {v}")
        o.record({
            "suite": report.name,
            "instances": report.instances,
            "checks": dict(sorted(report.checks.items())),
            "violations": report.violations,
        })
        failed |= not report.ok
    return EXIT_NO if failed else EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "sat": cmd_sat,
    "implies": cmd_implies,
    "eval": cmd_eval,
    "translate": cmd_translate,
    "models": cmd_models,
    "suite": cmd_suite,
}


def run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from(args, environment_config())
        return COMMANDS[args.command](args, _Out(cfg, out, err))
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return EXIT_USAGE
    except (ParseError, WellFormednessError, UnsupportedRole, NumberRestrictionPresent, ClosednessError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DATA
    except MuALCQError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
