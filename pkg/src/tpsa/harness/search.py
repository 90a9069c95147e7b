"""Counterexample searches and surveys for questions the theory leaves open.

Every search returns a ``reported`` report: findings are data, never a
verdict.  Counterexample hunts (OQ-2.5, OQ-2.16i, OQ-2.16ii) raise
:class:`BudgetExceeded` with the partial report attached when the fixture
budget runs out before a single witness turns up; the OQ-3.14 survey always
scans its whole budget and tabulates agreement.
"""

from __future__ import annotations

import itertools
import time

from .. import ideals, skewseries
from ..errors import BudgetExceeded, CapExceeded, UnknownCheck
from ..report import VerificationReport
from .checks import CheckContext
from .fixtures import load_fixture
from .generator import GeneratorCaps, GeneratorStats, fixture_generator

QUESTIONS = ("OQ-2.5", "OQ-2.16i", "OQ-2.16ii", "OQ-3.14")
CANONICAL = ("f3", "f3p", "f3n2", "f1", "f2", "trivial_global", "f4")


def _stream(seed, finite_only, stats):
    names = [n for n in CANONICAL if not finite_only or load_fixture(n).presentation == "finite_support"]
    canon = (load_fixture(n) for n in names)
    kinds = ("finite_support",) if finite_only else None
    return itertools.chain(canon, fixture_generator(seed, GeneratorCaps(), stats, presentations=kinds))


def _alpha_ideal_gap(ctx):
    act = ctx.action
    inv = {I.bits for I in ideals.alpha_invariant_ideals(act, ctx.lattice("base"))}
    out = []
    for S in ideals.alpha_ideals(act, ctx.lattice("base")):
        if S.bits not in inv:
            out.append({"ideal": {"size": S.size, "members": S.members},
                        "invariance_failure": ideals.alpha_invariance_witness(act, S)})
    return out


def _converse_maximality(ctx, flavor):
    """Primes ``P`` not of extension form that are not maximal over their contraction."""
    M = ctx.series_ring(flavor)
    L = ctx.lattice(flavor)
    out = []
    for P in ideals.prime_ideals(M, L):
        Q = skewseries.contraction(M, P)
        if skewseries.ideal_extension(Q, M).bits == P.bits:
            continue
        if flavor == "power":
            if not ideals.dichotomy_branch(M, P)["missing_units"]:
                continue
            try:
                if not ideals.is_strongly_alpha_prime(ctx.action, Q):
                    continue
            except Exception:
                continue
        if not ideals.maximal_same_contraction(M, P, L):
            out.append({"prime_size": P.size, "contraction": Q.members, "ring": flavor})
    return out


def _radical_comparison(ctx):
    M = ctx.power
    brute = ideals.intersect_all(M, ideals.prime_ideals(M, ctx.lattice("power")))
    formula = ideals.powerseries_radical_formula(ctx.action, ctx.bundle, M)
    return {"power_ring_size": M.cardinality, "nil_star_size": brute.size,
            "formula_size": formula.ideal.size, "agree": brute.bits == formula.ideal.bits}


def search_open_question(question: str, budget: int = 50, seed: int = 0, cache=None) -> VerificationReport:
    if question not in QUESTIONS:
        raise UnknownCheck(f"unknown question {question!r}; known: {', '.join(QUESTIONS)}")
    stats = GeneratorStats()
    finite_only = question != "OQ-2.5"
    scanned, skipped, witnesses, table = 0, 0, [], []
    t0 = time.perf_counter()
    for fx in _stream(seed, finite_only, stats):
        if scanned >= budget:
            break
        scanned += 1
        ctx = CheckContext(fx, {"seed": seed}, cache)
        try:
            if question == "OQ-2.5":
                found = _alpha_ideal_gap(ctx)
            elif not ctx.materializable():
                skipped += 1
                continue
            elif question == "OQ-3.14":
                row = {"fixture": fx.name, **_radical_comparison(ctx)}
                table.append(row)
                found = [] if row["agree"] else [row]
            else:
                found = _converse_maximality(ctx, "laurent" if question == "OQ-2.16i" else "power")
        except CapExceeded:
            skipped += 1
            continue
        witnesses.extend({"fixture": fx.name, **w} for w in found)
        if question == "OQ-2.5" and witnesses:
            break
    details = {"question": question, "fixtures_scanned": scanned, "skipped_over_cap": skipped,
               "generator": stats.to_json()}
    if question == "OQ-3.14":
        details["table"] = table
        details["agree"] = sum(r["agree"] for r in table)
        details["disagree"] = sum(not r["agree"] for r in table)
    report = VerificationReport(question, "reported", None, witnesses, details, {"budget": budget, "seed": seed})
    report.timing = time.perf_counter() - t0
    if question != "OQ-3.14" and not witnesses:
        raise BudgetExceeded(f"{question}: budget of {budget} fixtures exhausted after scanning {scanned} "
                             f"without a witness", report)
    return report
