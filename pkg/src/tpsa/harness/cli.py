"""Command line entry point: ``tpsa <command> ...``."""

from __future__ import annotations

import argparse
import sys

from .. import goldie, ideals
from ..errors import (
    BudgetExceeded,
    CapExceeded,
    IncompatibleFixture,
    NotSemiprime,
    ParseError,
    SchemaError,
    UnknownCheck,
)
from ..report import VerificationReport, emit_report
from .cache import LatticeCache
from .checks import REGISTRY, CheckContext, run_all, run_check
from .fixtures import load_fixture
from .search import QUESTIONS, search_open_question

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _global_flags(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--json-out", metavar="PATH", default=d, help="also write the JSON report to PATH")
    p.add_argument("--cache-dir", metavar="PATH", default=d, help="lattice cache directory")
    p.add_argument("--no-cache", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="recompute lattices without reading or writing the cache")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tpsa", description="Verify twisted partial actions and their series rings.")
    _global_flags(parser, False)
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        _global_flags(p, True)
        return p

    p = cmd("validate", "check the twisted partial action axioms of a fixture")
    p.add_argument("fixture")
    p = cmd("radicals", "prime, alpha-nil and strongly-alpha radicals with the series formulas")
    p.add_argument("fixture")
    p = cmd("primes", "list prime ideals of the base ring or a materialized series ring")
    p.add_argument("fixture")
    p.add_argument("--ring", choices=("base", "power", "laurent"), default="base")
    p = cmd("rank", "uniform dimension certificate and rank comparison")
    p.add_argument("fixture")
    p.add_argument("--truncation", type=int, default=8)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p = cmd("verify", "run one registered check, or all compatible checks")
    p.add_argument("check", help="check id or 'all'")
    p.add_argument("fixture")
    p.add_argument("--truncation", type=int, default=8)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p = cmd("search", "search for witnesses bearing on an open question")
    p.add_argument("question", choices=QUESTIONS)
    p.add_argument("--budget", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    cmd("checks", "list registered check ids")
    return parser


def _ideal(I):
    return {"size": I.size, "members": I.members}


def _validate(args, cache):
    from ..paction import check_axioms

    fx = load_fixture(args.fixture)
    return check_axioms(fx.action, fx.name)


def _radicals(args, cache):
    fx = load_fixture(args.fixture)
    ctx = CheckContext(fx, cache=cache)
    b = ctx.bundle
    det = {"radicals": b.to_json(),
           "powerseries_formula": ideals.powerseries_radical_formula(
               fx.action, b, ctx.power if ctx.materializable() else None).to_json()}
    if ctx.materializable():
        det["laurent_formula"] = _ideal(ideals.laurent_radical_formula(fx.action, b, materialized=ctx.laurent))
    return VerificationReport("RADICALS", "reported", fx.name, [], det)


def _primes(args, cache):
    fx = load_fixture(args.fixture)
    ctx = CheckContext(fx, cache=cache)
    if args.ring != "base" and not ctx.materializable():
        raise IncompatibleFixture(f"{fx.name} has no finite {args.ring} series ring within the caps")
    ps = ctx.primes(args.ring)
    ring = fx.action.ring if args.ring == "base" else ctx.series_ring(args.ring)
    det = {"ring": args.ring, "ring_size": ring.cardinality, "count": len(ps)}
    if args.ring == "base":
        det["primes"] = [_ideal(P) for P in ps]
    else:
        det["primes"] = [{"size": P.size, "contraction": ideals.contraction(ring, P).members} for P in ps]
    return VerificationReport("PRIMES", "reported", fx.name, [], det)


def _rank(args, cache):
    fx = load_fixture(args.fixture)
    cert = goldie.uniform_dim(fx.action.ring)
    det = {"base": cert.to_json(), "certificate": cert.validate()}
    try:
        comp = goldie.rank_comparison(fx.action, args.truncation, args.samples, args.seed)
        det["comparison"] = comp.to_json()
        status = comp.status
    except NotSemiprime as exc:
        det["comparison"] = str(exc)
        status = "reported"
    return VerificationReport("RANK", status, fx.name, [], det,
                              {"truncation": args.truncation, "samples": args.samples, "seed": args.seed})


def _verify(args, cache):
    fx = load_fixture(args.fixture)
    params = {"truncation": args.truncation, "samples": args.samples, "seed": args.seed}
    if args.check == "all":
        return run_all(fx, params, cache)
    return run_check(args.check, fx, params, cache)


def _search(args, cache):
    return search_open_question(args.question, args.budget, args.seed, cache)


def _checks(args, cache):
    return VerificationReport("CHECKS", "reported", None, [],
                              {cid: spec.requirement for cid, spec in REGISTRY.items()})


COMMANDS = {"validate": _validate, "radicals": _radicals, "primes": _primes, "rank": _rank,
            "verify": _verify, "search": _search, "checks": _checks}


def _exit_code(reports) -> int:
    reports = reports if isinstance(reports, list) else [reports]
    if any(r.status in ("fail", "error") for r in reports):
        return EXIT_FAIL
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cache = LatticeCache(args.cache_dir, enabled=not args.no_cache)
    try:
        result = COMMANDS[args.command](args, cache)
    except (ParseError, SchemaError, UnknownCheck, IncompatibleFixture) as exc:
        print(f"tpsa: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"tpsa: BudgetExceeded: {exc}", file=sys.stderr)
        if exc.report is not None:
            sys.stdout.write(emit_report(exc.report, args.json_out))
        return EXIT_CAP
    except CapExceeded as exc:
        print(f"tpsa: CapExceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    sys.stdout.write(emit_report(result, args.json_out))
    return _exit_code(result)


if __name__ == "__main__":
    sys.exit(main())
