"""Command-line surface.

Exit codes: 0 success, 1 invalid spec, 2 verification failure
(a counterexample was found), 3 resource guard exceeded.

The --guard flag (or the UNRAMIFIED_GUARD environment variable) takes
"BYTES" or "BYTES/SECONDS": the byte budget bounds any dense table the run
may materialize, the seconds budget bounds the opt-in heavy eliminations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import bar, cochains, obstruction, structure
from .catalog import BUILTIN_NOTES, BUILTINS, builtin
from .errors import GuardExceededError, SpecError, UnramifiedError
from .exterior import render_multivector
from .groups import GroupSpec, load_spec, validate_spec

EXIT_OK = 0
EXIT_INVALID_SPEC = 1
EXIT_VERIFY_FAILED = 2
EXIT_GUARD = 3


def _emit_json(data: dict) -> None:
    print(json.dumps(data, sort_keys=True, separators=(",", ":")))


def parse_guard(text: str | None) -> tuple[int, float]:
    default_bytes = cochains.DEFAULT_GUARD_BYTES
    default_seconds = bar.DEFAULT_TIME_LIMIT
    if not text:
        return default_bytes, default_seconds
    parts = text.split("/")
    gbytes = int(float(parts[0])) if parts[0] else default_bytes
    gsecs = float(parts[1]) if len(parts) > 1 and parts[1] else default_seconds
    return gbytes, gsecs


def _resolve_spec(args) -> GroupSpec:
    if bool(args.builtin) == bool(args.spec):
        raise SpecError("exactly one of --builtin NAME or --spec PATH is required")
    if args.builtin:
        try:
            return builtin(args.builtin)
        except KeyError as exc:
            raise SpecError(str(exc)) from exc
    return load_spec(args.spec)


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--builtin", help="builtin spec name (see `builtins`)")
    p.add_argument("--spec", help="path to a spec JSON file")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--guard", default=os.environ.get("UNRAMIFIED_GUARD"),
                   help="resource guard BYTES[/SECONDS]")


def cmd_builtins(args) -> int:
    if args.json:
        _emit_json({name: BUILTIN_NOTES[name] for name in sorted(BUILTINS)})
    else:
        for name in sorted(BUILTINS):
            print(f"{name:12s} {BUILTIN_NOTES[name]}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    spec = _resolve_spec(args)
    rep = obstruction.analyze(spec, strict=args.strict)
    if args.json:
        _emit_json(obstruction.report_to_json_dict(rep, seed=args.seed))
    else:
        print(obstruction.report_text(rep))
    return EXIT_OK


def cmd_verify_group(args) -> int:
    spec = _resolve_spec(args)
    validate_spec(spec, strict=args.strict)
    results = structure.verify_group_structure(spec, seed=args.seed,
                                               samples=args.samples)
    if args.json:
        _emit_json({"results": [r.to_json_dict() for r in results],
                    "seed": args.seed})
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def cmd_verify_lemmas(args) -> int:
    spec = _resolve_spec(args)
    gbytes, _ = parse_guard(args.guard)
    results = [cochains.verify_identity(spec, which, guard_bytes=gbytes)
               for which in cochains.IDENTITIES]
    if args.json:
        _emit_json({"results": [r.to_json_dict() for r in results]})
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed or r.skipped for r in results) \
        else EXIT_VERIFY_FAILED


def cmd_oracle_cohomology(args) -> int:
    spec = _resolve_spec(args)
    _, gsecs = parse_guard(args.guard)
    time_limit = args.time_limit if args.time_limit is not None else gsecs
    orders = bar.qz_orders(spec, degmax=args.degree,
                           allow_heavy=args.allow_heavy,
                           time_limit=time_limit)
    payload = orders.to_json_dict()
    if args.modulus is not None:
        k = 0
        q = args.modulus
        while q % spec.p == 0 and q > 1:
            q //= spec.p
            k += 1
        if q != 1 or k < 1:
            raise SpecError(f"--modulus must be a positive power of p={spec.p}")
        payload["requested_modulus"] = args.modulus
        payload["mod_orders_requested"] = {
            str(i): spec.p ** bar.cohomology_order_exp(
                spec, i, k, args.allow_heavy, time_limit)
            for i in range(1, args.degree + 1)}
    if args.json:
        _emit_json(payload)
    else:
        print(f"group {payload['group']}  |G| = {payload['order']}  "
              f"modulus {payload['modulus']}")
        for i in range(1, args.degree + 1):
            print(f"|H^{i}(G, Z/{payload['modulus']})| = "
                  f"{payload['mod_orders'][str(i)]}    "
                  f"|H^{i}(G, Q/Z)| = {payload['qz_orders'][str(i)]}")
    return EXIT_OK


def cmd_oracle_decomposables(args) -> int:
    spec = _resolve_spec(args)
    rep = obstruction.analyze(spec, strict=args.strict)
    deg = args.degree
    S = rep.deg2.si if deg == 2 else rep.deg3.si
    fast = obstruction.dec_subgroup(S, deg, spec.n)
    brute = obstruction.dec_subgroup_bruteforce(S, deg, spec.n,
                                                max_work=args.max_work)
    agree = fast == brute
    text = [render_multivector(row, spec.n, deg, spec.p)
            for row in fast.basis]
    if args.json:
        _emit_json({"degree": deg, "agree": agree,
                    "fast_dim": fast.dim, "brute_dim": brute.dim,
                    "basis": [[int(x) for x in row] for row in fast.basis],
                    "text": text})
    else:
        span = "span{" + ", ".join(text) + "}" if text else "0"
        if agree:
            print(f"fast = brute = {span}")
        else:
            print(f"MISMATCH: fast dim {fast.dim}, brute dim {brute.dim}")
    return EXIT_OK if agree else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="unramified",
        description="Rationality obstructions for invariant fields of "
                    "p-group central extensions")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("builtins", help="list builtin specs")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_builtins)

    p = sub.add_parser("analyze", help="run the obstruction pipeline")
    _add_spec_args(p)
    p.add_argument("--strict", dest="strict", action="store_true", default=True)
    p.add_argument("--no-strict", dest="strict", action="store_false",
                   help="analyze even if gamma is not surjective / has radical")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify-group", help="group axioms, exponent, structure")
    _add_spec_args(p)
    p.add_argument("--strict", dest="strict", action="store_true", default=True)
    p.add_argument("--no-strict", dest="strict", action="store_false")
    p.add_argument("--samples", type=int, default=100_000,
                   help="sample count above the exhaustive tier")
    p.set_defaults(func=cmd_verify_group)

    p = sub.add_parser("verify-lemmas", help="cochain identity suite")
    _add_spec_args(p)
    p.set_defaults(func=cmd_verify_lemmas)

    po = sub.add_parser("oracle", help="independent ground-truth computations")
    osub = po.add_subparsers(dest="oracle_command", required=True)

    p = osub.add_parser("cohomology", help="bar-resolution cohomology orders")
    _add_spec_args(p)
    p.add_argument("--degree", type=int, default=3, choices=(1, 2, 3))
    p.add_argument("--modulus", type=int, default=None,
                   help="also report |H^i(G, Z/modulus)| (power of p)")
    p.add_argument("--allow-heavy", action="store_true",
                   help="permit the large opt-in eliminations")
    p.add_argument("--time-limit", type=float, default=None,
                   help="seconds budget for heavy eliminations")
    p.set_defaults(func=cmd_oracle_cohomology)

    p = osub.add_parser("decomposables",
                        help="fast vs brute-force decomposable subgroup")
    _add_spec_args(p)
    p.add_argument("--degree", type=int, default=3, choices=(2, 3))
    p.add_argument("--strict", dest="strict", action="store_true", default=True)
    p.add_argument("--no-strict", dest="strict", action="store_false")
    p.add_argument("--max-work", type=int, default=10 ** 8,
                   help="membership-test budget for the brute force")
    p.set_defaults(func=cmd_oracle_decomposables)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.func(args)
    except GuardExceededError as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        code = EXIT_GUARD
    except SpecError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        code = EXIT_INVALID_SPEC
    except UnramifiedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INVALID_SPEC
    return code


if __name__ == "__main__":
    sys.exit(main())
