"""Registry of verification checks and the code that runs them on a fixture."""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .. import goldie, ideals, paction, skewseries
from ..errors import IncompatibleFixture, NotAlphaInvariant, UnknownCheck
from ..report import VerificationReport
from ..ringcore import IdealSet, from_mask, zero_ideal
from .cache import LatticeCache
from .fixtures import Fixture

DEFAULTS = {"truncation": 8, "samples": 1000, "seed": 0}


def check_seed(check_id: str, seed: int) -> int:
    """Per-check seed so that reports do not depend on which other checks ran."""
    return (int(seed) * 1_000_003 + zlib.crc32(check_id.encode())) % 2**32


class CheckContext:
    """Fixture plus memoised materializations and lattices shared by the checks."""

    def __init__(self, fixture: Fixture, params=None, cache: LatticeCache | None = None):
        self.fixture = fixture
        self.action = fixture.action
        self.params = {**DEFAULTS, **(params or {})}
        self.cache = cache or LatticeCache(enabled=False)

    @property
    def name(self):
        return self.fixture.name

    @property
    def finite(self) -> bool:
        return not self.action.periodic

    def materialized_size(self, flavor: str) -> int:
        act = self.action
        lo = 0 if flavor == "power" else -act.bound
        return int(np.prod([len(act.domain_indices(d)) for d in range(lo, act.bound + 1)], dtype=object))

    def materializable(self) -> bool:
        cap = self.fixture.caps.table
        return self.finite and all(self.materialized_size(f) <= cap for f in skewseries.FLAVORS)

    @cached_property
    def power(self):
        return skewseries.materialize_finite(skewseries.SeriesRing(self.action, "power", self.action.bound + 1),
                                             self.fixture.caps.table)

    @cached_property
    def laurent(self):
        return skewseries.materialize_finite(skewseries.SeriesRing(self.action, "laurent", self.action.bound + 1),
                                             self.fixture.caps.table)

    def series_ring(self, flavor):
        return self.power if flavor == "power" else self.laurent

    def lattice(self, which: str = "base"):
        ring = self.action.ring if which == "base" else self.series_ring(which)
        return self.cache.lattice(ring, self.fixture.digest(), f"lattice:{which}")

    @cached_property
    def envelope(self):
        """The global action over ``T`` viewed as a partial action with ``e = 1``."""
        g = self.action.global_action
        full = paction.restrict_global(g, g.ring.one)
        self.cache.lattice(full.ring, self.fixture.digest(), "lattice:envelope")
        return full

    @cached_property
    def bundle(self):
        return ideals.radicals(self.action, self.lattice("base"))

    @cached_property
    def invariant_proper(self):
        return [P for P in ideals.alpha_invariant_ideals(self.action, self.lattice("base")) if not P.is_whole()]

    def primes(self, which: str):
        ring = self.series_ring(which) if which != "base" else self.action.ring
        return ideals.prime_ideals(ring, self.lattice(which))

    @cached_property
    def semiprime(self) -> bool:
        return ideals.prime_radical(self.action.ring).is_zero()

    def rng(self, check_id):
        return np.random.default_rng(check_seed(check_id, self.params["seed"]))


@dataclass
class CheckSpec:
    check_id: str
    run: Callable
    compatible: Callable = field(default=lambda ctx: True)
    requirement: str = "any fixture"


REGISTRY: dict[str, CheckSpec] = {}


def register(check_id, requirement="any fixture", compatible=None):
    def deco(fn):
        REGISTRY[check_id] = CheckSpec(check_id, fn, compatible or (lambda ctx: True), requirement)
        return fn

    return deco


def _finite(ctx):
    return ctx.materializable()


def _periodic(ctx):
    return not ctx.finite


def _semiprime(ctx):
    return ctx.semiprime and (not ctx.finite or ctx.materializable())


def _report(check_id, ok, ctx, witnesses=(), details=None, status=None):
    return VerificationReport(check_id, status or ("pass" if ok else "fail"), ctx.name, list(witnesses), details or {})


def _ideal_json(I: IdealSet):
    return {"size": I.size, "members": I.members}


# ---------------------------------------------------------------------------
# partial actions and series rings


@register("AX-1.1")
def ax_check(ctx):
    return paction.check_axioms(ctx.action, ctx.name)


@register("ISO-2.1")
def iso_check(ctx):
    p = ctx.params
    parts, witnesses = [], []
    for k, I in enumerate(ideals.alpha_invariant_ideals(ctx.action, ctx.lattice("base"))):
        rep = skewseries.quotient_iso_check(ctx.action, I, p["samples"], p["truncation"],
                                            check_seed("ISO-2.1", p["seed"] + k))
        parts.append({"ideal_size": I.size, "status": rep.status, "mode": rep.details.get("mode")})
        if not rep.passed:
            witnesses.append({"ideal": _ideal_json(I), "witnesses": rep.witnesses})
    return _report("ISO-2.1", not witnesses, ctx, witnesses, {"ideals": parts})


# ---------------------------------------------------------------------------
# primality of the base and of the series rings


@register("CRIT-2.3", "base ring with at most 256 elements", lambda ctx: ctx.action.ring.cardinality <= 256)
def crit_check(ctx):
    L = ctx.lattice("base")
    rows, witnesses = [], []
    for P in ctx.invariant_proper:
        ap = (ideals.is_alpha_prime(ctx.action, P), ideals.is_alpha_prime_by_ideals(ctx.action, P, L),
              ideals.is_alpha_prime_by_quotient(ctx.action, P))
        sp = (ideals.is_strongly_alpha_prime(ctx.action, P),
              ideals.is_strongly_alpha_prime_by_ideals(ctx.action, P, L),
              ideals.is_strongly_alpha_prime_by_quotient(ctx.action, P))
        row = {"ideal": _ideal_json(P), "alpha_prime": ap, "strongly_alpha_prime": sp}
        rows.append(row)
        if len(set(ap)) > 1 or len(set(sp)) > 1:
            witnesses.append(row)
    return _report("CRIT-2.3", not witnesses, ctx, witnesses,
                   {"order": ["element", "ideal_pairs", "quotient"], "ideals": rows})


def _zero_prime_pair(ctx, flavor):
    M = ctx.series_ring(flavor)
    return ideals.prime_witness(M, zero_ideal(M))


@register("PRIME-2.4a", "finite-support fixture within the table cap", _finite)
def prime_a(ctx):
    Z = zero_ideal(ctx.action.ring)
    base_w = ideals.alpha_prime_witness(ctx.action, Z)
    ring_w = _zero_prime_pair(ctx, "laurent")
    ok = (base_w is None) == (ring_w is None)
    wit = [{"alpha_prime_pair": base_w, "laurent_zero_divisor_pair": ring_w}]
    return _report("PRIME-2.4a", ok, ctx, wit, {"alpha_prime": base_w is None, "laurent_prime": ring_w is None})


@register("PRIME-2.4b", "finite-support fixture within the table cap", _finite)
def prime_b(ctx):
    Z = zero_ideal(ctx.action.ring)
    base_w = ideals.strongly_alpha_prime_witness(ctx.action, Z)
    ring_w = _zero_prime_pair(ctx, "power")
    ok = (base_w is None) == (ring_w is None)
    wit = [{"strongly_alpha_prime_pair": base_w, "power_zero_divisor_pair": ring_w}]
    return _report("PRIME-2.4b", ok, ctx, wit,
                   {"strongly_alpha_prime": base_w is None, "power_prime": ring_w is None})


@register("PRIME-2.4c", "finite-support fixture within the table cap", _finite)
def prime_c(ctx):
    pw = _zero_prime_pair(ctx, "power")
    lw = _zero_prime_pair(ctx, "laurent")
    ok = pw is not None or lw is None
    return _report("PRIME-2.4c", ok, ctx, [] if ok else [{"laurent_zero_divisor_pair": lw}],
                   {"power_prime": pw is None, "laurent_prime": lw is None})


@register("COR-2.6", "finite-support fixture within the table cap", _finite)
def cor26(ctx):
    R = ctx.action.ring
    base_prime = ideals.is_prime_ideal(R, zero_ideal(R))
    power_prime = _zero_prime_pair(ctx, "power") is None
    ok = power_prime or not base_prime
    return _report("COR-2.6", ok, ctx, [], {"base_prime": base_prime, "power_prime": power_prime,
                                           "hypothesis_holds": base_prime})


@register("COR-2.7", "finite-support fixture within the table cap", _finite)
def cor27(ctx):
    rows, witnesses = [], []
    for P in ctx.invariant_proper:
        ap = ideals.is_alpha_prime(ctx.action, P)
        sp = ideals.is_strongly_alpha_prime(ctx.action, P)
        lp = ideals.is_prime_ideal(ctx.laurent, skewseries.ideal_extension(P, ctx.laurent))
        pp = ideals.is_prime_ideal(ctx.power, skewseries.ideal_extension(P, ctx.power))
        row = {"ideal": _ideal_json(P), "alpha_prime": ap, "laurent_extension_prime": lp,
               "strongly_alpha_prime": sp, "power_extension_prime": pp}
        rows.append(row)
        if ap != lp or sp != pp:
            witnesses.append(row)
    return _report("COR-2.7", not witnesses, ctx, witnesses, {"ideals": rows})


@register("COR-2.8", "finite-support fixture within the table cap", _finite)
def cor28(ctx):
    contracted = {f: {skewseries.contraction(ctx.series_ring(f), K).bits for K in ctx.primes(f)}
                  for f in skewseries.FLAVORS}
    rows, witnesses = [], []
    for P in ctx.invariant_proper:
        row = {"ideal": _ideal_json(P)}
        if ideals.is_strongly_alpha_prime(ctx.action, P):
            row["power_prime_above"] = P.bits in contracted["power"]
        if ideals.is_alpha_prime(ctx.action, P):
            row["laurent_prime_above"] = P.bits in contracted["laurent"]
        rows.append(row)
        if False in (row.get("power_prime_above"), row.get("laurent_prime_above")):
            witnesses.append(row)
    return _report("COR-2.8", not witnesses, ctx, witnesses, {"ideals": rows})


@register("CONTR-2.8", "finite-support fixture within the table cap", _finite)
def contr(ctx):
    witnesses, sizes = [], []
    for K in ctx.primes("laurent"):
        Q = skewseries.contraction(ctx.laurent, K)
        sizes.append(Q.size)
        try:
            ok = not Q.is_whole() and ideals.is_alpha_prime(ctx.action, Q)
        except NotAlphaInvariant:
            ok = False
        if not ok:
            witnesses.append({"prime_size": K.size, "contraction": _ideal_json(Q)})
    return _report("CONTR-2.8", not witnesses, ctx, witnesses,
                   {"laurent_primes": len(sizes), "contraction_sizes": sizes})


@register("RAD-2.9", "finite-support fixture within the table cap", _finite)
def rad29(ctx):
    M = ctx.laurent
    brute = ideals.intersect_all(M, ctx.primes("laurent"))
    formula = ideals.laurent_radical_formula(ctx.action, ctx.bundle, materialized=M)
    ok = brute.bits == formula.bits
    det = {"ring_size": M.cardinality, "nil_star_size": brute.size, "formula_size": formula.size,
           "nil_alpha": _ideal_json(ctx.bundle.nil_alpha),
           "nil_star_in_nil_alpha": ctx.bundle.nil_star_in_nil_alpha}
    wit = [] if ok else [{"brute_force": brute.members, "formula": formula.members}]
    return _report("RAD-2.9", ok, ctx, wit, det)


@register("SEMI-2.10")
def semi210(ctx):
    R = ctx.action.ring
    if not ctx.semiprime:
        return _report("SEMI-2.10", False, ctx, [], {"base_semiprime": False,
                                                    "nil_star": _ideal_json(ideals.prime_radical(R))},
                       status="reported")
    witnesses, found = [], 0
    if ctx.finite:
        M = ctx.laurent
        items = (M.to_series(k) for k in range(M.cardinality) if k != M.tables.zero)
        mode, total = "exact", M.cardinality - 1
    else:
        h = skewseries.SeriesRing(ctx.action, "laurent", ctx.params["truncation"])
        rng = ctx.rng("SEMI-2.10")
        pool = []
        while len(pool) < ctx.params["samples"]:
            f = h.random(rng, lower=int(rng.integers(-2, 3)))
            if not f.is_zero():
                pool.append(f)
        items, mode, total = pool, "sampled", len(pool)
    for f in items:
        w = ideals.semiprime_witness(ctx.action, f)
        if w is not None and w["confirmed"] is not False:
            found += 1
        elif len(witnesses) < 5:
            witnesses.append({"f": f, "witness": w})
    ideal_rows = []
    if ctx.finite:
        for I in ctx.invariant_proper:
            if ideals.semiprime_ideal_witness(R, I) is None:
                ext = skewseries.ideal_extension(I, ctx.laurent)
                w = ideals.semiprime_ideal_witness(ctx.laurent, ext)
                ideal_rows.append({"ideal": _ideal_json(I), "extension_semiprime": w is None})
                if w is not None:
                    witnesses.append({"ideal": _ideal_json(I), "element": w})
    ok = not witnesses
    return _report("SEMI-2.10", ok, ctx, witnesses,
                   {"mode": mode, "elements": total, "witnessed": found, "semiprime_ideals": ideal_rows})


@register("DICH-2.11", "finite-support fixture within the table cap", _finite)
def dich(ctx):
    rows, witnesses = [], []
    for P in ctx.primes("power"):
        b = ideals.dichotomy_branch(ctx.power, P)
        rows.append(b)
        if b["branch_i"] == b["branch_ii"]:
            witnesses.append({"prime": _ideal_json(P), **b})
    return _report("DICH-2.11", not witnesses, ctx, witnesses,
                   {"primes": len(rows), "branch_i": sum(r["branch_i"] for r in rows),
                    "branch_ii": sum(r["branch_ii"] for r in rows), "classification": rows})


def _maximality_scan(ctx, flavor, hypothesis):
    M = ctx.series_ring(flavor)
    L = ctx.lattice(flavor)
    applicable, witnesses = 0, []
    for P in L:
        if P.is_whole():
            continue
        Q = skewseries.contraction(M, P)
        if Q.is_whole() or not ideals.is_alpha_invariant(ctx.action, Q) or not hypothesis(M, P, Q):
            continue
        shaped = skewseries.ideal_extension(Q, M).bits == P.bits
        if not shaped and not ideals.maximal_same_contraction(M, P, L):
            continue
        applicable += 1
        w = ideals.prime_witness(M, P)
        if w is not None:
            witnesses.append({"ideal": _ideal_json(P), "extension_form": shaped, "pair": w})
    return applicable, witnesses


@register("MAX-2.12", "finite-support fixture within the table cap", _finite)
def max212(ctx):
    n, wit = _maximality_scan(ctx, "laurent", lambda M, P, Q: ideals.is_alpha_prime(ctx.action, Q))
    return _report("MAX-2.12", not wit, ctx, wit, {"applicable_ideals": n})


@register("MAX-2.13", "finite-support fixture within the table cap", _finite)
def max213(ctx):
    def hyp(M, P, Q):
        missing = ideals.dichotomy_branch(M, P)["missing_units"]
        return bool(missing) and ideals.is_prime_ideal(ctx.action.ring, Q)

    n, wit = _maximality_scan(ctx, "power", hyp)
    return _report("MAX-2.13", not wit, ctx, wit, {"applicable_ideals": n})


# ---------------------------------------------------------------------------
# right modules and Goldie rank


@register("CHAIN-3.1")
def chain(ctx):
    p = ctx.params
    rows, witnesses = [], []
    for k, V in enumerate(goldie.simple_right_ideals(ctx.action.ring)):
        rep = goldie.uniform_chain_check(V, ctx.action, p["truncation"], min(p["samples"], 200),
                                         check_seed("CHAIN-3.1", p["seed"] + k))
        rows.append({"generator": V.generators, "status": rep.status, **rep.details})
        if not rep.passed:
            witnesses.append({"generator": V.generators, "witnesses": rep.witnesses})
    return _report("CHAIN-3.1", not witnesses, ctx, witnesses, {"simple_right_ideals": rows})


@register("UNIF-3.2", "finite-support fixture within the table cap", _finite)
def unif(ctx):
    rows, witnesses = [], []
    for V in goldie.simple_right_ideals(ctx.action.ring):
        row = {"generator": V.generators}
        for flavor in skewseries.FLAVORS:
            M = ctx.series_ring(flavor)
            VM = goldie.right_ideal_closure(M, M.base_embedding()[V.indices])
            row[flavor] = goldie.is_uniform_right_ideal(M, VM)
        rows.append(row)
        if not (row["power"] and row["laurent"]):
            witnesses.append(row)
    return _report("UNIF-3.2", not witnesses, ctx, witnesses, {"simple_right_ideals": rows})


@register("RANK-3.3", "semiprime base ring", _semiprime)
def rank(ctx):
    p = ctx.params
    rep = goldie.rank_comparison(ctx.action, p["truncation"], min(p["samples"], 200),
                                 check_seed("RANK-3.3", p["seed"]), ctx.name)
    return rep


@register("GOLDIE-3.4", "semiprime base ring", _semiprime)
def goldie_check(ctx):
    rank_rep = rank(ctx)
    semi_rep = semi210(ctx)
    details = {"rank": rank_rep.details, "laurent_semiprime": semi_rep.status}
    if ctx.finite:
        details["power_nil_star_size"] = ideals.intersect_all(ctx.power, ctx.primes("power")).size
    ok = rank_rep.passed and semi_rep.passed
    wit = [] if ok else [{"rank": rank_rep.to_json(), "semiprime": semi_rep.to_json()}]
    return _report("GOLDIE-3.4", ok, ctx, wit, details)


@register("ENV-3.5")
def env(ctx):
    return paction.enveloping_via_decomposition(ctx.action, fixture=ctx.name)


@register("MORITA-3.6", "restricted-global fixture", _periodic)
def morita(ctx):
    p = ctx.params
    M = skewseries.MoritaContextRing(ctx.action, min(p["truncation"], 6))
    return M.check(p["samples"], check_seed("MORITA-3.6", p["seed"]), ctx.name)


# ---------------------------------------------------------------------------
# power-series radicals


def _sampled_ideal_closure(h, coeff_mask, rng, samples):
    """Sampled two-sided absorption for series whose degree-d coefficient lies in ``coeff_mask(d)``."""
    t = h.base.tables
    N = h.N
    masks = [coeff_mask(d) for d in range(N)]
    pools = [np.flatnonzero(m) for m in masks]
    data = np.stack([p[rng.integers(0, len(p), samples)] for p in pools], axis=1)
    F = skewseries.SeriesBatch(0, N, data)
    G = h.random_batch(rng, samples)
    bad = 0
    for prod in (h.batch_mul(F, G), h.batch_mul(G, F)):
        inside = np.ones(samples, dtype=bool)
        for c in range(prod.data.shape[1]):
            d = prod.lower + c
            inside &= masks[d][prod.data[:, c]]
        bad += int((~inside).sum())
    return bad


@register("RADG-3.11", "restricted-global fixture", _periodic)
def radg(ctx):
    full = ctx.envelope
    T = full.ring
    bundle = ideals.radicals(full, ideals.lattice(T))
    formula = ideals.powerseries_radical_formula(full, bundle)
    invariant = ideals.is_alpha_invariant(full, bundle.n_alpha_strong)
    h = skewseries.SeriesRing(full, "power", ctx.params["truncation"])

    def coeff(d):
        return formula.constant.mask if d == 0 else bundle.n_alpha_strong.mask

    bad = _sampled_ideal_closure(h, coeff, ctx.rng("RADG-3.11"), ctx.params["samples"])
    ok = invariant and bad == 0
    det = {"label": formula.label, "envelope_size": T.cardinality, "formula": formula.to_json(),
           "n_beta_invariant": invariant, "closure_failures": bad}
    return _report("RADG-3.11", ok, ctx, [] if ok else [det], det)


@register("RADP-3.13")
def radp(ctx):
    act = ctx.action
    R = act.ring
    formula = ideals.powerseries_radical_formula(act, ctx.bundle, ctx.power if ctx.materializable() else None)
    if ctx.finite:
        det = {"label": formula.label, "formula": formula.to_json()}
        if ctx.materializable():
            brute = ideals.intersect_all(ctx.power, ctx.primes("power"))
            det["nil_star_size"] = brute.size
            det["agree"] = brute.bits == formula.ideal.bits
            det["nil_star"] = brute.members
        return _report("RADP-3.13", False, ctx, [det], det, status="reported")
    # compare with the global formula on the enveloping ring, pulled back along R -> T
    full = ctx.envelope
    tb = ideals.radicals(full, ideals.lattice(full.ring))
    up = act.inclusion().table
    const_t = (tb.nil_star & tb.n_alpha_strong).mask[up]
    coeff_t = tb.n_alpha_strong.mask[up]
    mismatches = []
    if (const_t != formula.constant.mask).any():
        mismatches.append({"degree": 0, "pulled_back": from_mask(R, const_t).members,
                           "formula": formula.constant.members})
    for i, c in formula.coefficient.items():
        pulled = coeff_t & act.domain_mask(i)
        if (pulled != c.mask).any():
            mismatches.append({"degree": i, "pulled_back": from_mask(R, pulled).members, "formula": c.members})
    det = {"label": formula.label, "formula": formula.to_json(), "envelope_size": full.ring.cardinality}
    return _report("RADP-3.13", not mismatches, ctx, mismatches, det)


@register("SEMIG-3.15")
def semig(ctx):
    act = ctx.action
    ft = paction.is_finite_type(act)
    formula = ideals.powerseries_radical_formula(act, ctx.bundle, ctx.power if ctx.materializable() else None)
    formula_zero = formula.constant.is_zero() and all(c.is_zero() for c in formula.coefficient.values())
    det = {"base_semiprime": ctx.semiprime, "finite_type": ft.holds, "formula_radical_zero": formula_zero}
    if ctx.finite:
        if ctx.materializable():
            brute = ideals.intersect_all(ctx.power, ctx.primes("power"))
            det["power_nil_star_size"] = brute.size
            det["surrogate_applies"] = ctx.semiprime and formula_zero
        return _report("SEMIG-3.15", False, ctx, [det], det, status="reported")
    if not (ctx.semiprime and ft.holds):
        return _report("SEMIG-3.15", False, ctx, [det], det, status="reported")
    h = skewseries.SeriesRing(act, "power", ctx.params["truncation"])
    rng = ctx.rng("SEMIG-3.15")
    found, inconclusive, witnesses = 0, 0, []
    for _ in range(ctx.params["samples"]):
        f = h.random(rng, lower=int(rng.integers(0, 3)))
        if f.is_zero():
            continue
        w = goldie.power_semiprime_witness(f)
        if w is not None:
            found += 1
        elif 2 * f.lower + act.period < h.N:
            if len(witnesses) < 5:
                witnesses.append({"f": f})
        else:
            inconclusive += 1
    det.update({"witnessed": found, "inconclusive_high_degree": inconclusive, "unwitnessed": len(witnesses)})
    ok = formula_zero and not witnesses
    return _report("SEMIG-3.15", ok, ctx, witnesses, det)


# ---------------------------------------------------------------------------


def run_check(check_id: str, fixture: Fixture, params=None, cache: LatticeCache | None = None,
              context: CheckContext | None = None) -> VerificationReport:
    if check_id not in REGISTRY:
        raise UnknownCheck(f"unknown check {check_id!r}; known: {', '.join(REGISTRY)}")
    spec = REGISTRY[check_id]
    ctx = context or CheckContext(fixture, params, cache)
    if not spec.compatible(ctx):
        raise IncompatibleFixture(f"{check_id} needs a {spec.requirement}; {fixture.name} does not qualify")
    t0 = time.perf_counter()
    rep = spec.run(ctx)
    rep.fixture = fixture.name
    rep.timing = time.perf_counter() - t0
    rep.parameters = {**ctx.params, **rep.parameters}
    return rep


def run_all(fixture: Fixture, params=None, cache: LatticeCache | None = None) -> list[VerificationReport]:
    """Every compatible registered check, in registry order."""
    ctx = CheckContext(fixture, params, cache)
    return [run_check(cid, fixture, context=ctx) for cid, spec in REGISTRY.items() if spec.compatible(ctx)]


def compatible_checks(fixture: Fixture, params=None) -> list[str]:
    ctx = CheckContext(fixture, params)
    return [cid for cid, spec in REGISTRY.items() if spec.compatible(ctx)]
