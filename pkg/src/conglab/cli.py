"""Command-line front end.

Subcommands: analyze, screen-perm, screen-subspace, enumerate-modular,
verify-suite.  JSON is the output contract (byte-identical for a fixed
config and seed); text output is derived from the JSON.  The env var
CONGLAB_CAPS ("ring=65536,group=5000000,factor=18446744073709551616")
overrides the default caps; explicit flags win over the environment.

Exit codes: 0 success, 1 suite failure, 2 parse/validation error,
3 cap exceeded, 4 internal verifier contradiction.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .analyzer import (
    Caps,
    EXAMPLE_NAMES,
    InternalCheckError,
    TranslationSubspace,
    analyze,
    build_example,
    frame_subgroup,
    screen_translation_subspace,
)
from .domains import CapExceeded, ParseError, parse_domain
from .matgroups import Mat2
from .modular import (
    cusp_split,
    low_index_enumerate,
    parse_permrep,
    screen_permrep,
)
from .quotients import build_quotient
from .suites import DEFAULT_SUITE_NAMES, SUITE_ALIASES, SUITES, run_suite

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_INTERNAL = 4


@dataclass
class RunConfig:
    command: str
    caps: Caps
    fmt: str
    seed: int
    args: argparse.Namespace


def _parse_caps(args):
    ring = 2 ** 16
    group = 5 * 10 ** 6
    factor = 2 ** 64
    env = os.environ.get("CONGLAB_CAPS")
    if env:
        for part in env.split(","):
            part = part.strip()
            if not part:
                continue
            key, _, value = part.partition("=")
            if key not in ("ring", "group", "factor"):
                raise ParseError(f"unknown cap {key!r} in CONGLAB_CAPS")
            try:
                value = int(value)
            except ValueError:
                raise ParseError(f"bad cap value in CONGLAB_CAPS: {part!r}")
            if key == "ring":
                ring = value
            elif key == "group":
                group = value
            else:
                factor = value
    if getattr(args, "ring_cap", None):
        ring = args.ring_cap
    if getattr(args, "group_cap", None):
        group = args.group_cap
    if getattr(args, "factor_cap", None):
        factor = args.factor_cap
    if ring <= 0 or group <= 0 or factor <= 0:
        raise ParseError("caps must be positive")
    return Caps(ring=ring, group=group, factor=factor)


def _emit(payload, fmt, stream=None):
    stream = sys.stdout if stream is None else stream
    if fmt == "json":
        stream.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
        stream.write("\n")
    else:
        _emit_text(payload, stream, prefix="")


def _emit_text(value, stream, prefix):
    if isinstance(value, dict):
        for key in sorted(value):
            sub = value[key]
            if isinstance(sub, (dict, list)):
                stream.write(f"{prefix}{key}:\n")
                _emit_text(sub, stream, prefix + "  ")
            else:
                stream.write(f"{prefix}{key}: {sub}\n")
    elif isinstance(value, list):
        for i, sub in enumerate(value):
            if isinstance(sub, (dict, list)):
                stream.write(f"{prefix}- [{i}]\n")
                _emit_text(sub, stream, prefix + "  ")
            else:
                stream.write(f"{prefix}- {sub}\n")
    else:
        stream.write(f"{prefix}{value}\n")


def _load_json_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON in {path}: {exc}") from exc


def _gens_from_file(path, ring):
    data = _load_json_file(path)
    if not isinstance(data, list):
        raise ParseError("generators file must hold a JSON list of matrices")
    gens = []
    for entry in data:
        try:
            (a, b), (c, d) = entry
        except (TypeError, ValueError):
            raise ParseError(f"bad matrix entry {entry!r}")
        idx = [ring.reduce(ring.domain.parse_element(str(v))) for v in (a, b, c, d)]
        try:
            gens.append(Mat2(ring, *idx))
        except ValueError as exc:
            raise ParseError(f"matrix {entry!r}: {exc}") from exc
    return gens


def cmd_analyze(config):
    args = config.args
    if args.example:
        if args.example not in EXAMPLE_NAMES:
            raise ParseError(
                f"unknown example {args.example!r}; known: {', '.join(EXAMPLE_NAMES)}"
            )
        frame = build_example(args.example, config.caps)
    else:
        if not args.domain or not args.modulus:
            raise ParseError("analyze needs --example or both --domain and --modulus")
        domain = parse_domain(args.domain)
        modulus = domain.parse_ideal(args.modulus)
        ring = build_quotient(domain, modulus, ring_cap=config.caps.ring)
        gens = _gens_from_file(args.gens, ring) if args.gens else []
        frame = frame_subgroup(domain, modulus, gens, config.caps)
    report = analyze(frame).to_json()
    if frame.info:
        report["info"] = {k: v for k, v in sorted(frame.info.items())}
    _emit(report, config.fmt)
    return EXIT_OK


def cmd_screen_perm(config):
    args = config.args
    rep = parse_permrep(_load_json_file(args.permrep))
    out = screen_permrep(rep, run_all=args.all, cap=config.caps.group)
    _emit(out, config.fmt)
    return EXIT_OK


def cmd_screen_subspace(config):
    args = config.args
    data = _load_json_file(args.subspace)
    if not isinstance(data, dict) or not {"k", "f", "basis"} <= set(data):
        raise ParseError('subspace JSON needs keys "k", "f", "basis"')
    kspec = data["k"]
    domain = parse_domain(kspec if isinstance(kspec, str) else f"Fq[t] q={kspec}")
    if domain.kind != "polynomials":
        raise ParseError("subspace screening needs a polynomial domain")
    f = domain.parse_element(str(data["f"]))
    if domain.deg(f) < 1:
        raise ParseError("modulus polynomial must be non-constant")
    basis = tuple(domain.parse_element(str(b)) for b in data["basis"])
    report = screen_translation_subspace(TranslationSubspace(domain, f, basis))
    _emit(report.to_json(), config.fmt)
    return EXIT_OK


def cmd_enumerate_modular(config):
    args = config.args
    reps = low_index_enumerate(args.max_index)
    payload = []
    for rep in reps:
        entry = rep.to_json()
        split = cusp_split(rep)
        entry["cusp_split"] = list(split.lengths)
        entry["level"] = split.level
        if args.screen:
            entry["screens"] = screen_permrep(rep, run_all=True, cap=config.caps.group)[
                "screens"
            ]
        payload.append(entry)
    _emit({"max_index": args.max_index, "count": len(reps), "reps": payload}, config.fmt)
    return EXIT_OK


def _run_suite_job(job):
    name, caps, seed, families = job
    result = run_suite(name, caps, seed, families)
    return (result.name, result.checks, result.failures)


def cmd_verify_suite(config):
    args = config.args
    if args.suite:
        names = [args.suite]
    else:
        names = list(DEFAULT_SUITE_NAMES)
    for name in names:
        if SUITE_ALIASES.get(name, name) not in SUITES:
            raise ParseError(f"unknown suite {name!r}; known: {sorted(SUITES)}")
    families = args.exhaustive or None
    jobs = [(name, config.caps, config.seed, families) for name in names]
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_suite_job, jobs))
    else:
        results = [_run_suite_job(job) for job in jobs]
    payload = {"seed": config.seed, "suites": []}
    failed = False
    for name, checks, failures in results:
        payload["suites"].append(
            {
                "name": name,
                "checks": checks,
                "passed": checks - len(failures),
                "failures": failures,
            }
        )
        if failures:
            failed = True
    _emit(payload, config.fmt)
    return EXIT_SUITE_FAILURE if failed else EXIT_OK


def _add_global_options(parser, suppress):
    # the same options are accepted before and after the subcommand; the
    # per-subcommand copies must not clobber earlier values with defaults
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=("text", "json"), default=dflt("json"))
    parser.add_argument("--seed", type=int, default=dflt(0))
    parser.add_argument("--ring-cap", type=int, default=dflt(None))
    parser.add_argument("--group-cap", type=int, default=dflt(None))
    parser.add_argument("--factor-cap", type=int, default=dflt(None))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="conglab",
        description=(
            "Exact congruence-subgroup invariants over Z, Fq[t], and "
            "imaginary quadratic maximal orders"
        ),
    )
    _add_global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_command(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        _add_global_options(p, suppress=True)
        return p

    p = add_command("analyze", help="full invariant report for a framed subgroup")
    p.add_argument("--domain", help='domain spec, e.g. "Z" or "Fq[t] q=9 mod=u^2+1"')
    p.add_argument("--modulus", help='ideal text, e.g. "(6)" or "(t^2+t)"')
    p.add_argument("--gens", help="JSON file with generator matrices")
    p.add_argument("--example", help=f"built-in frame: {', '.join(EXAMPLE_NAMES)}")
    p.set_defaults(func=cmd_analyze)

    p = add_command("screen-perm", help="congruence screens for a permutation rep")
    p.add_argument("--permrep", required=True, help='JSON file {"n", "S", "T"}')
    p.add_argument("--all", action="store_true", help="run every screen")
    p.set_defaults(func=cmd_screen_perm)

    p = add_command("screen-subspace", help="translation-subspace screen")
    p.add_argument("--subspace", required=True, help='JSON file {"k", "f", "basis"}')
    p.set_defaults(func=cmd_screen_subspace)

    p = add_command("enumerate-modular", help="low-index subgroups up to conjugacy")
    p.add_argument("--max-index", type=int, required=True)
    p.add_argument("--screen", action="store_true", help="attach screen results")
    p.set_defaults(func=cmd_enumerate_modular)

    p = add_command("verify-suite", help="run the bundled verification suites")
    p.add_argument("--suite", help="run a single suite by name")
    p.add_argument(
        "--exhaustive",
        action="append",
        help="restrict exhaustive suites to a family, e.g. Z/12 (repeatable)",
    )
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify_suite)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        caps = _parse_caps(args)
        config = RunConfig(args.command, caps, args.format, args.seed, args)
        return args.func(config)
    except ParseError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"error: cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InternalCheckError as exc:
        print(f"error: internal-check: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: parse: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
