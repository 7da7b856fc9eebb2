"""Command-line surface.

Exit codes: 0 success, 1 check/verification failure, 2 usage error,
3 budget exceeded.  Structured output (--format json) is canonical and
round-trips byte-identically.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import serialization as ser
from .arith import PrimeFactorization, factor_squarefree
from .errors import BudgetExceeded, PortCalcError, ResumeMismatch
from .known import PORT_ALIASES
from .ports import (
    Port,
    ambient_port,
    delta,
    induced_port,
    port_congruences,
    port_primitive_audit,
    transition,
)
from .primality import certify_prime, pocklington_verify
from .search import (
    PrefixSearchConfig,
    build_discriminant_problem,
    build_exclusion_certificate,
    enumerate_prefixes,
    h6_channel_audit,
    run_prefix_scan,
    scan_last_two,
    verify_exclusion_certificate,
)
from .verification import CHECK_IDS, build_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _parse_primes(text: str) -> PrimeFactorization:
    return PrimeFactorization(tuple(sorted(int(x) for x in text.split(","))))


def _resolve_port(args) -> Port:
    if getattr(args, "port", None):
        name = args.port
        if name not in PORT_ALIASES:
            raise SystemExit(f"unknown port alias {name!r} (known: {', '.join(PORT_ALIASES)})")
        return PORT_ALIASES[name]
    if args.R is None or args.c is None:
        raise SystemExit("either --port NAME or both --R and --c are required")
    R_fact = None
    try:
        R_fact = factor_squarefree(args.R, budget=5.0)
    except PortCalcError:
        pass
    if R_fact is not None:
        try:
            port = ambient_port(R_fact)
            if port.c == args.c:
                return port
        except PortCalcError:
            pass
        return Port(args.R, args.c, R_fact)
    return Port(args.R, args.c)


def _emit(args, obj, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(ser.canonical_json_bytes(obj).decode())
    else:
        print(text)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_verify(args) -> int:
    report = build_report(only=args.only, corrupt=args.corrupt, budget=args.budget)
    if args.format == "json":
        sys.stdout.write(ser.canonical_json_bytes(report.to_obj()).decode())
    else:
        print(report.to_text())
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def _cmd_port(args) -> int:
    port = _resolve_port(args) if args.action != "ambient" else None
    if args.action == "delta":
        value = delta(port, _parse_primes(args.B))
        _emit(args, {"delta": str(value)}, str(value))
    elif args.action == "transition":
        out = transition(port, args.q)
        _emit(args, {"R": str(out.R), "c": str(out.c)}, f"({out.R}, {out.c})")
    elif args.action == "induced":
        out = induced_port(port, _parse_primes(args.A))
        _emit(args, {"R": str(out.R), "c": str(out.c)}, f"({out.R}, {out.c})")
    elif args.action == "ambient":
        out = ambient_port(_parse_primes(args.primes))
        _emit(args, {"R": str(out.R), "c": str(out.c)}, f"({out.R}, {out.c})")
    elif args.action == "congruences":
        b_res, d_res = port_congruences(port)
        _emit(
            args,
            {"filling_mod_R": str(b_res), "derivative_mod_c": str(d_res)},
            f"filling = {b_res} (mod {port.R}); derivative = {d_res} (mod {port.c})",
        )
    elif args.action == "audit":
        audit = port_primitive_audit(port, _parse_primes(args.B))
        obj = {
            "rows": [
                {"divisor": str(r.divisor), "primes": [str(p) for p in r.primes], "delta": str(r.residual)}
                for r in audit.rows
            ],
            "verdict": audit.verdict,
            "inherited_via": [str(d) for d in audit.inherited_via],
        }
        width = max(len(str(r.divisor)) for r in audit.rows)
        table = "\n".join(f"{r.divisor:>{width}}  {r.residual}" for r in audit.rows)
        _emit(args, obj, f"{table}\nverdict: {audit.verdict}")
    return EXIT_OK


def _cmd_search(args) -> int:
    if args.action == "two-prime":
        port = _resolve_port(args)
        prob = build_discriminant_problem(port, args.m)
        hi = prob.T if prob.T < 0 else min(prob.T, args.t_cap)
        hits = scan_last_two(prob, range(0, hi + 1) if hi >= 0 else range(0))
        obj = {
            "problem": {"P0": str(prob.P0), "S0": str(prob.S0), "U": str(prob.U), "T": str(prob.T)},
            "scanned_t_up_to": str(hi),
            "hits": [{"t": str(t), "u": str(u), "v": str(v)} for t, u, v in hits],
        }
        text = [f"P0={prob.P0} S0={prob.S0} U={prob.U} T={prob.T}"]
        text += [f"t={t}: {u} * {v}" for t, u, v in hits] or ["no completions"]
        _emit(args, obj, "\n".join(text))
        return EXIT_OK
    if args.action == "sieve":
        if args.check:
            cert = ser.exclusion_from_bytes(Path(args.check).read_bytes())
            ok, why = verify_exclusion_certificate(cert)
            _emit(args, {"valid": ok, "reason": why}, "valid" if ok else f"invalid: {why}")
            return EXIT_OK if ok else EXIT_CHECK_FAILED
        port = _resolve_port(args)
        if args.prefix:
            prefix = _parse_primes(args.prefix)
            port = induced_port(port, prefix)
            m = max(prefix.primes)
        elif args.m is not None:
            m = args.m
        else:
            raise SystemExit("sieve needs --prefix or --m")
        prob = build_discriminant_problem(port, m)
        moduli = [int(x) for x in args.moduli.split(",")] if args.moduli else None
        cert = build_exclusion_certificate(prob, moduli)
        if cert is None:
            _emit(args, {"excluded": False}, "not excluded: some t survives the sieve")
            return EXIT_CHECK_FAILED
        data = ser.exclusion_to_bytes(cert)
        if args.out:
            Path(args.out).write_bytes(data)
            print(f"exclusion certificate written to {args.out}")
        else:
            sys.stdout.write(data.decode())
        return EXIT_OK
    if args.action == "prefixes":
        port = _resolve_port(args)
        if args.m is None:
            raise SystemExit("prefixes needs --m (the floor prime)")
        config = PrefixSearchConfig(
            port, k=args.k, m=args.m, t_cap=args.t_cap, workers=args.workers
        )
        if args.depth is not None:
            nodes = list(enumerate_prefixes(config, depth=args.depth))
            obj = {"prefixes": [[str(p) for p in n.prefix.primes] for n in nodes]}
            _emit(args, obj, "\n".join(",".join(map(str, n.prefix.primes)) for n in nodes))
            return EXIT_OK
        resume_state = None
        if args.resume:
            if not args.snapshot or not Path(args.snapshot).exists():
                raise ResumeMismatch("--resume needs an existing --snapshot file")
            resume_state = ser.snapshot_resume_state(Path(args.snapshot).read_bytes(), config)
        result = run_prefix_scan(config, budget=args.budget, resume_state=resume_state)
        if args.snapshot:
            Path(args.snapshot).write_bytes(ser.snapshot_to_bytes(result))
        obj = ser.snapshot_to_obj(result)
        text = [
            f"q1={b.q1}: prefixes={b.prefixes_seen} t_checked={b.t_checked} "
            f"square_hits={b.square_hits}{'' if b.complete else ' (incomplete)'}"
            for b in result.branches
        ]
        text += [f"hit: prefix={prefix} t={t}: {u} * {v}" for prefix, t, u, v in result.hits]
        _emit(args, obj, "\n".join(text) if text else "no branches")
        if not result.complete:
            print("budget exceeded; snapshot saved" if args.snapshot else "budget exceeded", file=sys.stderr)
            return EXIT_BUDGET
        return EXIT_OK
    if args.action == "audit-h6":
        audit = h6_channel_audit()
        obj = {
            "one_prime": {
                "value": str(audit.one_prime_value),
                "composite": audit.one_prime_composite,
                "factors": [[str(p), str(e)] for p, e in audit.one_prime_factorization.factors],
            },
            "two_prime": {
                "candidates": [
                    {
                        "d": str(c.d),
                        "p_prime": c.p_prime,
                        "q_prime": c.q_prime,
                        "witness": None if c.reject_witness is None else str(c.reject_witness),
                    }
                    for c in audit.two_prime_candidates
                ],
                "prime_pairs": len(audit.two_prime_hits),
            },
            "four_prime_subproblem": {
                "K": str(audit.four_prime_subproblem.K),
                "omega": str(audit.four_prime_subproblem.omega),
            },
            "caveat": audit.caveat,
        }
        text = [
            f"one-prime channel: {audit.one_prime_value} is "
            f"{'composite' if audit.one_prime_composite else 'prime'}",
            "  = " + " * ".join(str(p) for p, _ in audit.one_prime_factorization.factors),
            f"two-prime channel: {len(audit.two_prime_candidates)} candidate pairs, "
            f"{len(audit.two_prime_hits)} prime pairs",
            f"four-prime subproblem: C - {audit.four_prime_subproblem.K}*derivative(C) = 1 "
            f"with omega(C) = {audit.four_prime_subproblem.omega} (open)",
            f"caveat: {audit.caveat}",
        ]
        _emit(args, obj, "\n".join(text))
        return EXIT_OK
    raise SystemExit(f"unknown search action {args.action!r}")


def _cmd_certify(args) -> int:
    kwargs = {}
    if args.budget is not None:
        kwargs["budget"] = args.budget
    if args.seed is not None:
        kwargs["seed"] = args.seed
    cert = certify_prime(args.p, **kwargs)
    data = ser.certificate_to_bytes(cert)
    if args.out:
        Path(args.out).write_bytes(data)
        print(f"certificate for {args.p} (base {cert.base}) written to {args.out}")
    else:
        sys.stdout.write(data.decode())
    return EXIT_OK


def _cmd_check_cert(args) -> int:
    try:
        cert = ser.certificate_from_bytes(Path(args.file).read_bytes())
    except (ValueError, KeyError, TypeError) as e:
        print(f"invalid: unparseable certificate file ({e})")
        return EXIT_CHECK_FAILED
    res = pocklington_verify(cert)
    if res.valid:
        status = "valid" if res.unconditional else (
            "conditionally verified (probable-prime leaves: "
            + ", ".join(str(p) for p in res.conditional)
            + ")"
        )
        print(status)
        return EXIT_OK
    print(f"invalid: {res.failure}")
    return EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand-level omission from clobbering a top-level value
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(
        prog="portcalc",
        description="Exact verification and search for primary pseudoperfect numbers.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the full claim-verification suite", parents=[common])
    p_verify.add_argument("--only", choices=CHECK_IDS, default=None, metavar="CHECKID")
    p_verify.add_argument("--corrupt", choices=CHECK_IDS, default=None, metavar="CHECKID",
                          help="test mode: perturb one pinned constant of the named check")
    p_verify.add_argument("--budget", type=float, default=None, metavar="SECONDS")
    p_verify.set_defaults(func=_cmd_verify)

    p_port = sub.add_parser("port", help="port operations", parents=[common])
    p_port.add_argument("action", choices=("delta", "transition", "induced", "ambient", "congruences", "audit"))
    p_port.add_argument("primes", nargs="?", default=None, help="prime list for `ambient`")
    p_port.add_argument("--port", default=None, help="named port alias (e.g. H)")
    p_port.add_argument("--R", type=int, default=None)
    p_port.add_argument("--c", type=int, default=None)
    p_port.add_argument("--B", default=None, help="comma-separated primes of the block")
    p_port.add_argument("--A", default=None, help="comma-separated primes of the absorbed block")
    p_port.add_argument("--q", type=int, default=None, help="transition prime")
    p_port.set_defaults(func=_cmd_port)

    p_search = sub.add_parser("search", help="discriminant scans, sieve certificates, prefix enumeration", parents=[common])
    p_search.add_argument("action", choices=("two-prime", "sieve", "prefixes", "audit-h6"))
    p_search.add_argument("--port", default=None, help="named port alias (e.g. H)")
    p_search.add_argument("--R", type=int, default=None)
    p_search.add_argument("--c", type=int, default=None)
    p_search.add_argument("--m", type=int, default=None, help="floor prime")
    p_search.add_argument("--k", type=int, default=6, help="total primes in the sought filling")
    p_search.add_argument("--depth", type=int, default=None, help="stop prefix enumeration at this depth")
    p_search.add_argument("--prefix", default=None, help="comma-separated prefix primes")
    p_search.add_argument("--moduli", default=None, help="comma-separated sieve moduli")
    p_search.add_argument("--check", default=None, metavar="FILE", help="verify an exclusion certificate file")
    p_search.add_argument("--out", default=None, metavar="FILE")
    p_search.add_argument("--snapshot", default=None, metavar="FILE")
    p_search.add_argument("--resume", action="store_true")
    p_search.add_argument("--t-cap", dest="t_cap", type=int, default=1000)
    p_search.add_argument("--workers", type=int, default=1)
    p_search.add_argument("--budget", type=float, default=None, metavar="SECONDS")
    p_search.set_defaults(func=_cmd_search)

    p_certify = sub.add_parser("certify", help="build a primality certificate file", parents=[common])
    p_certify.add_argument("p", type=int)
    p_certify.add_argument("--out", default=None, metavar="FILE")
    p_certify.add_argument("--budget", type=float, default=None, metavar="SECONDS")
    p_certify.add_argument("--seed", type=int, default=None)
    p_certify.set_defaults(func=_cmd_certify)

    p_check = sub.add_parser("check-cert", help="verify a primality certificate file", parents=[common])
    p_check.add_argument("file")
    p_check.set_defaults(func=_cmd_check_cert)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "format"):
        args.format = "text"
    try:
        return args.func(args)
    except ResumeMismatch as e:
        print(f"resume mismatch: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except PortCalcError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    except SystemExit as e:
        if isinstance(e.code, str):
            print(e.code, file=sys.stderr)
            return EXIT_USAGE
        raise


if __name__ == "__main__":
    sys.exit(main())
