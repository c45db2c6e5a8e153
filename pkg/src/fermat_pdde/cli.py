"""Command-line entry point: ``fermat-pdde <command> ...``.

Exit codes: 0 success, 1 verified false / invalid family / probe failed,
2 usage, parse or config error.  The default seed comes from the
``FERMAT_PDDE_SEED`` environment variable (0 when unset).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import tomli

from .calculus import ShiftVector
from .corpus import load_corpus, load_system_config
from .errors import ClassifierMismatch, FermatError, InvalidFamily, SpannedError
from .families import build, classify, load_family, solve_admissible_AB, validate
from .normal_form import NUMERIC_PASS, VerificationReport, verify_system
from .parser import parse_constant, print_expr
from .search import (
    DEFAULT_RESTARTS,
    POSITIVE_THRESHOLD,
    AnsatzSpec,
    minimize,
    nonexistence_probe,
    system_from_quadruple,
)

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2
SEED_ENV = "FERMAT_PDDE_SEED"


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _parsing(label: str, text: str, fn):
    """Run ``fn(text)`` and turn span errors into a diagnostic naming ``label``."""
    try:
        return fn(text)
    except SpannedError as exc:
        where = f" at {exc.span.start}..{exc.span.end}" if exc.span else ""
        raise UsageError(f"{label}{where}: {exc.render(text)}") from None


def _read_expr(inline: str | None, path: str | None, label: str) -> str:
    if (inline is None) == (path is None):
        raise UsageError(f"give exactly one of --{label} or --{label}-file")
    return inline if inline is not None else Path(path).read_text().strip()


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text + "\n")
    else:
        print(text)


def _shift_arg(text: str, m: int | None = None) -> ShiftVector:
    parts = [p.strip() for p in text.strip().strip("()").split(",")]
    dim = m if m is not None else len(parts)
    return ShiftVector([_parsing("--c", p, lambda t: parse_constant(t, dim)) for p in parts])


# ---------------------------------------------------------------------------
# commands


def cmd_verify(args) -> int:
    cfg = load_system_config(args.spec)
    f1_text = _read_expr(args.f1, args.f1_file, "f1")
    f2_text = _read_expr(args.f2, args.f2_file, "f2")
    f1 = _parsing("f1", f1_text, cfg.parse)
    f2 = _parsing("f2", f2_text, cfg.parse)
    seed = args.seed if args.seed is not None else default_seed()
    report = verify_system(
        cfg.spec, f1, f2, cfg.models or None, args.samples, args.radius, seed, args.workers, args.tol
    )
    _emit(report.to_json(indent=2), args.output)
    return EXIT_OK if report.passed else EXIT_FALSE


def cmd_examples(args) -> int:
    entries = load_corpus(args.corpus)
    seed = args.seed if args.seed is not None else default_seed()
    reports, failed = [], []
    for entry in entries:
        report = entry.verify(seed)
        problems = entry.check(report)
        reports.append(report)
        if problems:
            failed.append((entry.name, problems))
        if not args.json:
            status = "FAIL" if problems else "PASS"
            print(f"{status} {entry.name}: {report.mode} {report.verdict}" + (f" ({'; '.join(problems)})" if problems else ""))
    if args.json:
        _emit(json.dumps([json.loads(r.to_json()) for r in reports], sort_keys=True, indent=2), args.output)
    for name, problems in failed:
        print(f"failing example: {name}: {'; '.join(problems)}", file=sys.stderr)
    return EXIT_FALSE if failed else EXIT_OK


def cmd_classify(args) -> int:
    q = tuple(args.quadruple)
    if any(x < 1 for x in q):
        raise UsageError(f"exponents must be positive integers, got {q}")
    verdict = classify(*q)
    if args.json:
        d = verdict.to_dict()
        d["quadruple"] = list(q)
        _emit(json.dumps(d, sort_keys=True), args.output)
    else:
        _emit(f"{verdict}  [{verdict.clause}]", args.output)
    return EXIT_OK


def cmd_family(args) -> int:
    with open(args.config, "rb") as fh:
        doc = tomli.load(fh)
    spec = load_family(doc)
    checks = validate(spec)
    result = {"family": spec.family, "checks": [ch.to_dict() for ch in checks], "valid": all(ch.passed for ch in checks)}
    if result["valid"]:
        f1, f2 = build(spec)
        result["f1"], result["f2"] = print_expr(f1), print_expr(f2)
        system = spec.system()
        report = verify_system(system, f1, f2)
        result["verification"] = report.to_dict()
        result["valid"] = report.passed
    if args.json:
        _emit(json.dumps(result, sort_keys=True, indent=2), args.output)
    else:
        lines = [f"{'ok  ' if ch.passed else 'FAIL'} {ch.name}: {ch.lhs} vs {ch.rhs}" for ch in checks]
        if "f1" in result:
            lines += [f"f1 = {result['f1']}", f"f2 = {result['f2']}", f"verdict: {result['verification']['verdict']}"]
        _emit("\n".join(lines), args.output)
    return EXIT_OK if result["valid"] else EXIT_FALSE


def cmd_solve_ab(args) -> int:
    m = args.m
    a = [_parsing("--a", x, lambda t: parse_constant(t, m)) for x in args.a.split(",")] if args.a else []
    b = [_parsing("--b", x, lambda t: parse_constant(t, m)) for x in args.b.split(",")] if args.b else []
    c = _shift_arg(args.c, m)
    try:
        pairs = sorted(solve_admissible_AB(m, a, b, c, args.variant), reverse=True)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(json.dumps([list(p) for p in pairs]), args.output)
    return EXIT_OK


def cmd_search(args) -> int:
    q = tuple(args.quadruple)
    if any(x < 1 for x in q):
        raise UsageError(f"exponents must be positive integers, got {q}")
    c = _shift_arg(args.c)
    seed = args.seed if args.seed is not None else default_seed()
    if args.probe:
        try:
            report = nonexistence_probe(q, c, args.restarts, seed, workers=args.workers)
        except ClassifierMismatch as exc:
            raise UsageError(str(exc)) from None
        _emit(report.to_json(include_time=not args.no_time, indent=2), args.output)
        return EXIT_OK if report.passed else EXIT_FALSE
    spec = system_from_quadruple(q, c)
    ansatz = AnsatzSpec(spec.m, args.degree, args.bound)
    report = minimize(spec, ansatz, args.restarts, seed, args.workers)
    _emit(report.to_json(include_time=not args.no_time, indent=2), args.output)
    return EXIT_OK if report.best_residual < POSITIVE_THRESHOLD else EXIT_FALSE


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fermat-pdde", description="Verify, build, classify and search solutions of Fermat-type PDDE systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")
        if seed:
            sp.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or 0)")

    v = sub.add_parser("verify", help="check that a pair solves a system")
    v.add_argument("--spec", required=True, help="system config (TOML)")
    v.add_argument("--f1")
    v.add_argument("--f1-file")
    v.add_argument("--f2")
    v.add_argument("--f2-file")
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--radius", type=float, default=2.0)
    v.add_argument("--tol", type=float, default=NUMERIC_PASS, help="numeric pass threshold; exact verdicts ignore it")
    v.add_argument("--workers", type=int, default=None)
    common(v)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("family", help="validate a family config and build its pair")
    f.add_argument("--config", required=True)
    f.add_argument("--json", action="store_true")
    common(f, seed=False)
    f.set_defaults(func=cmd_family)

    c = sub.add_parser("classify", help="feasibility of an exponent quadruple n1 m1 n2 m2")
    c.add_argument("quadruple", type=int, nargs=4, metavar=("n1", "m1", "n2", "m2"))
    c.add_argument("--json", action="store_true")
    common(c, seed=False)
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("solve-ab", help="admissible signs (A, B) of the sine family")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--a", default="", help="comma separated coefficients of z2..zm in the first phase")
    s.add_argument("--b", default="", help="same for the second phase")
    s.add_argument("--c", required=True, help="shift, e.g. '0,1/2*pi,1/2*pi'")
    s.add_argument("--variant", choices=("i", "ii"), default="i")
    common(s, seed=False)
    s.set_defaults(func=cmd_solve_ab)

    r = sub.add_parser("search", help="numerical search or non-existence probe")
    r.add_argument("quadruple", type=int, nargs=4, metavar=("n1", "m1", "n2", "m2"))
    r.add_argument("--c", required=True, help="shift, e.g. '2*pi,0'")
    r.add_argument("--probe", action="store_true", help="run the ansatz ladder with a paired control")
    r.add_argument("--degree", type=int, default=1)
    r.add_argument("--bound", type=int, default=1)
    r.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    r.add_argument("--workers", type=int, default=None)
    r.add_argument("--no-time", action="store_true", help="omit wall times so reports are byte-stable")
    common(r)
    r.set_defaults(func=cmd_search)

    e = sub.add_parser("examples", help="verify the built-in corpus")
    e.add_argument("--corpus", default=None, help="corpus directory (default: bundled)")
    e.add_argument("--json", action="store_true")
    common(e)
    e.set_defaults(func=cmd_examples)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidFamily as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except (FermatError, ValueError, OSError, tomli.TOMLDecodeError, KeyError) as exc:
        msg = exc.render("") if isinstance(exc, SpannedError) else str(exc)
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
