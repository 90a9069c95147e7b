"""Right ideals, socles and uniform dimension of finite rings.

In a finite ring every nonzero right ideal contains a minimal one, so the
right socle is essential and the uniform dimension (Goldie rank) equals the
number of simple summands of the socle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotSemiprime, NotSimple
from .ideals import is_semiprime_ring
from .paction import TwistedPartialAction, is_finite_type
from .report import VerificationReport
from .ringcore import FiniteRing, IdealSet, additive_closure, bits_to_mask, mask_to_bits
from .skewseries import (
    MaterializedSeriesRing,
    SeriesBatch,
    SeriesRing,
    lemma31_divide,
    materialize_finite,
    solve_decomposition,
)


@dataclass(frozen=True)
class RightIdealSet(IdealSet):
    """Subset closed under addition and right multiplication."""


def _right(ring, mask, generators=()) -> RightIdealSet:
    return RightIdealSet(ring, mask_to_bits(mask), tuple(generators))


def is_right_ideal(ring: FiniteRing, mask) -> bool:
    t = ring.tables
    mask = np.asarray(mask, dtype=bool)
    m = np.flatnonzero(mask)
    if not mask[t.zero] or not mask[t.add[np.ix_(m, m)]].all():
        return False
    return bool(mask[t.mul[m, :]].all())


def principal_right_mask(ring: FiniteRing, a: int) -> np.ndarray:
    t = ring.tables
    mask = np.zeros(t.n, dtype=bool)
    mask[t.mul[a, :]] = True
    return mask


def right_ideal_closure(ring: FiniteRing, idx) -> RightIdealSet:
    t = ring.tables
    idx = np.asarray(idx, dtype=np.int64)
    pool = np.unique(t.mul[idx, :]) if len(idx) else np.array([t.zero])
    return _right(ring, additive_closure(ring, pool), [ring.label(i) for i in idx])


def principal_right_ideals(ring: FiniteRing) -> list[RightIdealSet]:
    seen = {}
    for a in range(ring.cardinality):
        bits = mask_to_bits(principal_right_mask(ring, a))
        if bits not in seen:
            seen[bits] = RightIdealSet(ring, bits, (ring.label(a),))
    return sorted(seen.values(), key=lambda r: (r.size, tuple(r.indices.tolist())))


def is_simple_right_ideal(ring: FiniteRing, V: IdealSet) -> bool:
    """Nonzero and generated by each of its nonzero elements."""
    if V.size <= 1:
        return False
    t = ring.tables
    for a in V.indices:
        if a == t.zero:
            continue
        if mask_to_bits(principal_right_mask(ring, int(a))) != V.bits:
            return False
    return True


def simple_right_ideals(ring: FiniteRing) -> list[RightIdealSet]:
    return [V for V in principal_right_ideals(ring) if V.size > 1 and is_simple_right_ideal(ring, V)]


def _sum(ring, A: IdealSet, B: IdealSet) -> np.ndarray:
    t = ring.tables
    mask = np.zeros(t.n, dtype=bool)
    mask[t.add[np.ix_(A.indices, B.indices)]] = True
    return mask


def right_socle(ring: FiniteRing) -> RightIdealSet:
    simples = simple_right_ideals(ring)
    if not simples:
        return _right(ring, np.arange(ring.cardinality) == ring.tables.zero)
    idx = np.unique(np.concatenate([V.indices for V in simples]))
    return _right(ring, additive_closure(ring, idx))


@dataclass
class RankCertificate:
    ring: FiniteRing
    rank: int
    summands: list = field(default_factory=list)

    def to_json(self):
        return {"rank": self.rank, "summand_sizes": [s.size for s in self.summands],
                "generators": [list(s.generators) for s in self.summands]}

    def validate(self) -> dict:
        """Independence, simplicity, sum = socle, essentiality."""
        R = self.ring
        zero_bits = 1 << R.tables.zero
        indep = True
        for k, V in enumerate(self.summands):
            others = RightIdealSet(R, zero_bits)
            for j, W in enumerate(self.summands):
                if j != k:
                    others = _right(R, _sum(R, others, W))
            if (V.bits & others.bits) != zero_bits:
                indep = False
        total = RightIdealSet(R, zero_bits)
        for V in self.summands:
            total = _right(R, _sum(R, total, V))
        socle = right_socle(R)
        essential = all((P.bits & total.bits) != zero_bits for P in principal_right_ideals(R) if P.size > 1)
        return {
            "independent": indep,
            "simple": all(is_simple_right_ideal(R, V) for V in self.summands),
            "sum_is_socle": total.bits == socle.bits,
            "essential": essential,
        }


def uniform_dim(ring: FiniteRing) -> RankCertificate:
    """Greedy independent family of simple right ideals; its length is the uniform dimension."""
    zero_bits = 1 << ring.tables.zero
    total = RightIdealSet(ring, zero_bits)
    chosen = []
    for V in simple_right_ideals(ring):
        if (V.bits & total.bits) == zero_bits:
            chosen.append(V)
            total = _right(ring, _sum(ring, total, V))
    return RankCertificate(ring, len(chosen), chosen)


def is_uniform_right_ideal(ring: FiniteRing, I: IdealSet) -> bool:
    """All pairs of nonzero cyclic subideals of ``I`` meet nontrivially."""
    if I.size <= 1:
        raise ValueError("uniformity is defined for nonzero right ideals")
    t = ring.tables
    zero_bits = 1 << t.zero
    subs = {mask_to_bits(principal_right_mask(ring, int(a))) for a in I.indices if a != t.zero}
    subs = sorted(subs)
    return all((a & b) != zero_bits for k, a in enumerate(subs) for b in subs[k:])


# ---------------------------------------------------------------------------
# the submodule chain of V R[[x]]


def chain_member(M: MaterializedSeriesRing, V: IdealSet, k: int) -> np.ndarray:
    """Mask of series with coefficients in ``V ∩ D_i`` for ``i >= k`` and zero below ``k``."""
    act = M.handle.action
    zero = act.ring.tables.zero

    def pred(d, col):
        if d < k:
            return col == zero
        return V.mask[col] & act.domain_mask(d)[col]

    return M.degree_mask(pred)


def submodules_inside(M: MaterializedSeriesRing, top: np.ndarray) -> list[int]:
    """All right ideals of ``M`` contained in the mask ``top`` (as bit sets)."""
    t = M.tables
    members = np.flatnonzero(top)
    cyclic = {}
    for a in members:
        m = principal_right_mask(M, int(a))
        cyclic[mask_to_bits(m)] = m
    zero = 1 << t.zero
    found = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for b in frontier:
            cur = np.flatnonzero(bits_to_mask(b, t.n))
            for c, m in cyclic.items():
                if c & ~b == 0:
                    continue
                mask = np.zeros(t.n, dtype=bool)
                mask[t.add[np.ix_(cur, np.flatnonzero(m))]] = True
                s = mask_to_bits(mask)
                if s not in found:
                    found.add(s)
                    nxt.append(s)
        frontier = nxt
    return sorted(found)


def uniform_chain_check(V: IdealSet, action: TwistedPartialAction, truncation: int = 6, samples: int = 50,
                        seed: int = 0, fixture=None) -> VerificationReport:
    """Submodules of ``V R[[x]]`` form the chain ``V sum_{i>=k} D_i x^i``.

    Finite-support actions: the full submodule lattice of the materialized
    module is compared with the chain.  Periodic actions: each sampled cyclic
    submodule ``fS`` with leading degree ``k`` is sandwiched, modulo ``x^N``,
    between ``v_k x^k S`` (via the division identity ``f g = v_k x^k``) and the
    chain member ``C_k``, and ``C_k`` is checked to lie in ``v_k x^k S``.
    """
    R = action.ring
    if not is_simple_right_ideal(R, V):
        raise NotSimple("the chain is defined for simple right ideals")
    t = R.tables
    witnesses = []
    if not action.periodic:
        M = materialize_finite(SeriesRing(action, "power", action.bound + 1))
        chain = []
        for k in range(0, action.bound + 2):
            bits = mask_to_bits(chain_member(M, V, k))
            if bits not in chain:
                chain.append(bits)
        top = chain_member(M, V, 0)
        generated = right_ideal_closure(M, [M.base_embedding()[v] for v in V.indices])
        lattice = submodules_inside(M, top)
        ok_top = generated.bits == chain[0]
        ok = ok_top and sorted(chain) == lattice
        if not ok:
            extra = [b for b in lattice if b not in chain]
            witnesses.append({"module_is_chain_top": ok_top, "unexpected_submodules": len(extra),
                              "missing_chain_members": len([c for c in chain if c not in lattice])})
        details = {"mode": "exact", "chain_sizes": [bin(b).count("1") for b in chain],
                   "lattice_size": len(lattice), "chain_length": len(chain) - 1}
        return VerificationReport("CHAIN-3.1", "pass" if ok else "fail", fixture, witnesses, details,
                                  {"generator": V.generators})
    h = SeriesRing(action, "power", truncation)
    rng = np.random.default_rng(seed)
    Vd = {d: np.flatnonzero(V.mask & action.domain_mask(d)) for d in range(truncation)}
    checked = 0
    failures = 0
    for s in range(samples):
        ks = [d for d in range(truncation) if len(Vd[d]) > 1]
        k = int(rng.choice(ks))
        arr = np.full(truncation - k, t.zero, dtype=np.int64)
        nonzero_k = Vd[k][Vd[k] != t.zero]
        arr[0] = nonzero_k[rng.integers(0, len(nonzero_k))]
        for d in range(k + 1, truncation):
            arr[d - k] = Vd[d][rng.integers(0, len(Vd[d]))]
        f = h.from_indices(k, arr)
        dec = solve_decomposition(f, k)
        g = lemma31_divide(f, dec, k)
        vk = f.coeff(k)
        vk_idx = f.coeff_index(k)
        lead = h.monomial(vk, k)
        division_ok = h.eq(h.mul(f, g), lead)
        # f lies in C_k and f times random elements stays in C_k
        probe = h.random_batch(rng, 32)
        prod = h.batch_mul(h.to_batch([f] * 32, 0), probe)
        inside = all(
            (prod.data[:, c] == t.zero).all() if prod.lower + c < k
            else (V.mask[prod.data[:, c]]).all()
            for c in range(prod.data.shape[1])
        )
        # every v x^i (v in V ∩ D_i, i >= k) is v_k x^k times a monomial b x^(i-k)
        cover = True
        for i in range(k, truncation):
            targets = Vd[i]
            vals = t.mul[t.mul[vk_idx, action.alpha(k)], action.w(k, i - k)]
            if not np.isin(targets, vals).all():
                cover = False
                break
        checked += 1
        if not (division_ok and inside and cover):
            failures += 1
            if len(witnesses) < 3:
                witnesses.append({"f": f, "division": division_ok, "inside": inside, "cover": cover})
    ok = failures == 0
    return VerificationReport("CHAIN-3.1", "pass" if ok else "fail", fixture, witnesses,
                              {"mode": "truncated", "checked": checked, "failures": failures},
                              {"truncation": truncation, "samples": samples, "seed": seed,
                               "generator": V.generators})


def rank_comparison(action: TwistedPartialAction, truncation: int = 6, samples: int = 50, seed: int = 0,
                    fixture=None) -> VerificationReport:
    R = action.ring
    if not is_semiprime_ring(R):
        raise NotSemiprime("rank comparison needs a semiprime base ring")
    base = uniform_dim(R)
    if not action.periodic:
        ranks = {"base": base.rank}
        for flavor in ("power", "laurent"):
            M = materialize_finite(SeriesRing(action, flavor, action.bound + 1))
            ranks[flavor] = uniform_dim(M).rank
        ok = len(set(ranks.values())) == 1
        return VerificationReport("RANK-3.3", "pass" if ok else "fail", fixture,
                                  [] if ok else [ranks], {"mode": "exact", "ranks": ranks})
    chains = []
    for V in base.summands:
        rep = uniform_chain_check(V, action, truncation, samples, seed)
        chains.append({"generator": V.generators, "status": rep.status})
    covers = base.validate()
    ok = all(c["status"] == "pass" for c in chains) and all(covers.values())
    return VerificationReport("RANK-3.3", "pass" if ok else "fail", fixture,
                              [] if ok else chains,
                              {"mode": "decomposition", "d": base.rank, "summands": chains,
                               "certificate": covers, "finite_type": is_finite_type(action).holds})


def power_semiprime_witness(f):
    """Monomial ``h = c x^j`` with ``f h f`` nonzero modulo the truncation, or None.

    Only degrees with ``2 * lower(f) + j`` below the precision can show up, so a
    ``None`` for high-degree ``f`` is inconclusive rather than a counterexample.
    """
    h = f.ring
    act = h.action
    t = act.ring.tables
    rows, degs = [], []
    for j in range(0, f.prec - 2 * f.lower):
        dom = act.domain_indices(j)
        dom = dom[dom != t.zero]
        rows.extend(dom.tolist())
        degs.extend([j] * len(dom))
    if not rows:
        return None
    data = np.full((len(rows), h.N), t.zero, dtype=np.int64)
    data[np.arange(len(rows)), degs] = rows
    probe = SeriesBatch(0, h.N, data)
    F = h.to_batch([f] * len(rows), f.lower)
    prod = h.batch_mul(h.batch_mul(F, probe), F)
    nz = (prod.data != t.zero).any(axis=1)
    hits = np.flatnonzero(nz)
    if not len(hits):
        return None
    k = int(hits[0])
    return {"degree": degs[k], "c": act.ring.label(rows[k]), "product": h.batch_row(prod, k)}
