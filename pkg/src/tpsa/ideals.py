"""Prime, alpha-prime and strongly alpha-prime ideals, radicals and their series formulas.

Quantifiers over all of ``Z`` are evaluated on the action's canonical window:
for periodic actions every index is congruent to one in the window and all
data repeats; for finite-support actions ``alpha_i(a 1_{-i}) = 0`` outside
``[-N, N]``, so omitted indices only contribute the zero element.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field

import numpy as np

from .errors import NotAlphaInvariant, NotProper
from .paction import TwistedPartialAction, quotient_action
from .ringcore import (
    FiniteRing,
    IdealSet,
    enumerate_ideals,
    from_mask,
    ideal_closure_idx,
    intersect_all,
    mask_to_bits,
    principal_ideals,
    whole_ideal,
    zero_ideal,
)
from .skewseries import MaterializedSeriesRing, SeriesRing, contraction, ideal_extension, materialize_finite

_PRINCIPAL_CACHE: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()
_LATTICE_CACHE: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()


def lattice(ring: FiniteRing) -> list[IdealSet]:
    """All ideals of ``ring``, memoised per ring object."""
    if ring not in _LATTICE_CACHE:
        _LATTICE_CACHE[ring] = enumerate_ideals(ring)
    return _LATTICE_CACHE[ring]


def seed_lattice(ring: FiniteRing, ideals) -> None:
    """Install a precomputed lattice (e.g. from the on-disk cache)."""
    _LATTICE_CACHE[ring] = list(ideals)


def _principal_data(ring: FiniteRing):
    if ring not in _PRINCIPAL_CACHE:
        ps = principal_ideals(ring)
        t = ring.tables
        prods = [[mask_to_bits(np.isin(np.arange(t.n), t.mul[np.ix_(a.indices, b.indices)])) for b in ps] for a in ps]
        _PRINCIPAL_CACHE[ring] = (ps, prods)
    return _PRINCIPAL_CACHE[ring]


def _proper(ideal: IdealSet):
    if ideal.is_whole():
        raise NotProper("the whole ring is never prime")


def _annihilator_matrix(ring: FiniteRing, P: IdealSet) -> np.ndarray:
    """``M[x, y]`` is True iff ``x R y`` lies in ``P``."""
    t = ring.tables
    n = t.n
    ar = np.arange(n)
    right = np.zeros((n, n), dtype=bool)
    right[ar[:, None], t.mul] = True
    uniq, inverse = np.unique(right, axis=0, return_inverse=True)
    rows = np.empty((len(uniq), n), dtype=bool)
    for k, m in enumerate(uniq):
        rows[k] = P.mask[t.mul[np.flatnonzero(m), :]].all(axis=0)
    return rows[inverse.reshape(-1)]


# ---------------------------------------------------------------------------
# ordinary primes


def prime_witness(ring: FiniteRing, P: IdealSet, method: str = "auto"):
    """A pair ``(a, b)`` outside ``P`` with ``aRb`` inside ``P``, or None if ``P`` is prime."""
    _proper(P)
    if method == "auto":
        method = "element" if ring.cardinality <= 256 else "principal"
    if method == "element":
        M = _annihilator_matrix(ring, P)
        out = ~P.mask
        bad = M & out[:, None] & out[None, :]
        if bad.any():
            a, b = np.argwhere(bad)[0]
            return ring.label(a), ring.label(b)
        return None
    ps, prods = _principal_data(ring)
    outside = [k for k, A in enumerate(ps) if not A.issubset(P)]
    for a in outside:
        for b in outside:
            if prods[a][b] & ~P.bits == 0:
                return ps[a].generators[0], ps[b].generators[0]
    return None


def is_prime_ideal(ring: FiniteRing, P: IdealSet, method: str = "auto") -> bool:
    return prime_witness(ring, P, method) is None


def prime_ideals(ring: FiniteRing, ideals=None) -> list[IdealSet]:
    ideals = lattice(ring) if ideals is None else ideals
    return [P for P in ideals if not P.is_whole() and is_prime_ideal(ring, P, "principal")]


def prime_radical(ring: FiniteRing) -> IdealSet:
    return intersect_all(ring, prime_ideals(ring))


def is_semiprime_ring(ring: FiniteRing) -> bool:
    return prime_radical(ring).is_zero()


def semiprime_ideal_witness(ring: FiniteRing, I: IdealSet):
    """An element ``a`` outside ``I`` with ``aRa`` inside ``I``, or None if ``I`` is semiprime."""
    _proper(I)
    M = _annihilator_matrix(ring, I)
    bad = np.flatnonzero(np.diag(M) & ~I.mask)
    return ring.label(bad[0]) if len(bad) else None


# ---------------------------------------------------------------------------
# alpha-ideals


def is_alpha_ideal(action: TwistedPartialAction, S: IdealSet) -> bool:
    """``alpha_i(S ∩ D_-i) ⊆ S ∩ D_i`` for ``i >= 0``."""
    for i in action.nonneg_window():
        src = np.flatnonzero(S.mask & action.domain_mask(-i))
        if not S.mask[action.alpha(i)[src]].all():
            return False
    return True


def alpha_invariance_witness(action: TwistedPartialAction, S: IdealSet):
    """First ``(i, element)`` where ``alpha_i(S ∩ D_-i)`` and ``S ∩ D_i`` differ, or None."""
    n = action.ring.cardinality
    for i in action.single_window():
        img = np.zeros(n, dtype=bool)
        img[action.alpha(i)[np.flatnonzero(S.mask & action.domain_mask(-i))]] = True
        target = S.mask & action.domain_mask(i)
        diff = img ^ target
        if diff.any():
            return i, action.ring.label(np.flatnonzero(diff)[0])
    return None


def is_alpha_invariant(action: TwistedPartialAction, S: IdealSet) -> bool:
    return alpha_invariance_witness(action, S) is None


def orbit_indices(action: TwistedPartialAction, a: int, nonneg: bool = False) -> np.ndarray:
    window = action.nonneg_window() if nonneg else action.single_window()
    return np.unique([action.alpha(i)[a] for i in window])


def alpha_invariant_closure(action: TwistedPartialAction, a) -> IdealSet:
    """The ideal generated by ``alpha_i(a 1_{-i})`` over all ``i``."""
    R = action.ring
    return ideal_closure_idx(R, orbit_indices(action, R.index(a)))


def alpha_invariant_ideals(action: TwistedPartialAction, ideals=None) -> list[IdealSet]:
    ideals = lattice(action.ring) if ideals is None else ideals
    return [S for S in ideals if is_alpha_invariant(action, S)]


def alpha_ideals(action: TwistedPartialAction, ideals=None) -> list[IdealSet]:
    ideals = lattice(action.ring) if ideals is None else ideals
    return [S for S in ideals if is_alpha_ideal(action, S)]


# ---------------------------------------------------------------------------
# alpha-primes


def _require_invariant(action, P):
    if not is_alpha_invariant(action, P):
        raise NotAlphaInvariant("alpha-primality is defined for alpha-invariant ideals")
    _proper(P)


def _orbit_table(action, nonneg: bool) -> np.ndarray:
    window = action.nonneg_window() if nonneg else action.single_window()
    return np.stack([action.alpha(i) for i in window], axis=1)


def alpha_prime_witness(action: TwistedPartialAction, P: IdealSet):
    """Pair ``a, b`` outside ``P`` with ``alpha_j(a1_-j) R alpha_i(b1_-i) ⊆ P`` for all ``i, j``."""
    _require_invariant(action, P)
    R = action.ring
    M = _annihilator_matrix(R, P)
    O = _orbit_table(action, nonneg=False)
    bad = np.ones_like(M)
    for j in range(O.shape[1]):
        Mj = M[O[:, j]]
        for i in range(O.shape[1]):
            bad &= Mj[:, O[:, i]]
    out = ~P.mask
    bad &= out[:, None] & out[None, :]
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return R.label(a), R.label(b)
    return None


def is_alpha_prime(action: TwistedPartialAction, P: IdealSet) -> bool:
    return alpha_prime_witness(action, P) is None


def strongly_alpha_prime_witness(action: TwistedPartialAction, P: IdealSet):
    """Pair ``a, b`` outside ``P`` with ``a R alpha_j(b1_-j) ⊆ P`` for all ``j >= 0``."""
    _require_invariant(action, P)
    R = action.ring
    M = _annihilator_matrix(R, P)
    O = _orbit_table(action, nonneg=True)
    bad = np.ones_like(M)
    for j in range(O.shape[1]):
        bad &= M[:, O[:, j]]
    out = ~P.mask
    bad &= out[:, None] & out[None, :]
    if bad.any():
        a, b = np.argwhere(bad)[0]
        return R.label(a), R.label(b)
    return None


def is_strongly_alpha_prime(action: TwistedPartialAction, P: IdealSet) -> bool:
    return strongly_alpha_prime_witness(action, P) is None


def _products_inside(A: IdealSet, B: IdealSet, P: IdealSet) -> bool:
    t = A.ring.tables
    return bool(P.mask[t.mul[np.ix_(A.indices, B.indices)]].all())


def is_alpha_prime_by_ideals(action: TwistedPartialAction, P: IdealSet, ideals=None) -> bool:
    """Definition form: ``JK ⊆ P`` for alpha-invariant ``J, K`` forces ``J ⊆ P`` or ``K ⊆ P``."""
    _require_invariant(action, P)
    inv = [J for J in alpha_invariant_ideals(action, ideals) if not J.issubset(P)]
    return not any(_products_inside(J, K, P) for J in inv for K in inv)


def is_strongly_alpha_prime_by_ideals(action: TwistedPartialAction, P: IdealSet, ideals=None) -> bool:
    """Definition form: ``MN ⊆ P`` for an ideal ``M`` and alpha-ideal ``N`` forces one inside ``P``."""
    _require_invariant(action, P)
    ideals = lattice(action.ring) if ideals is None else ideals
    Ms = [M for M in ideals if not M.issubset(P)]
    Ns = [N for N in alpha_ideals(action, ideals) if not N.issubset(P)]
    return not any(_products_inside(M, N, P) for M in Ms for N in Ns)


def is_alpha_prime_by_quotient(action: TwistedPartialAction, P: IdealSet) -> bool:
    _require_invariant(action, P)
    qa = quotient_action(action, P)
    return is_alpha_prime(qa, zero_ideal(qa.ring))


def is_strongly_alpha_prime_by_quotient(action: TwistedPartialAction, P: IdealSet) -> bool:
    _require_invariant(action, P)
    qa = quotient_action(action, P)
    return is_strongly_alpha_prime(qa, zero_ideal(qa.ring))


# ---------------------------------------------------------------------------
# radicals


@dataclass
class RadicalBundle:
    nil_star: IdealSet
    nil_alpha: IdealSet
    n_alpha_strong: IdealSet
    primes: list = field(default_factory=list)
    alpha_primes: list = field(default_factory=list)
    strongly_alpha_primes: list = field(default_factory=list)
    alpha_invariant: list = field(default_factory=list)

    @property
    def nil_star_in_nil_alpha(self) -> bool:
        return self.nil_star.issubset(self.nil_alpha)

    def to_json(self):
        def ideal(i):
            return {"size": i.size, "members": i.members}

        return {
            "nil_star": ideal(self.nil_star),
            "nil_alpha": ideal(self.nil_alpha),
            "n_alpha_strong": ideal(self.n_alpha_strong),
            "primes": [ideal(p) for p in self.primes],
            "alpha_primes": [ideal(p) for p in self.alpha_primes],
            "strongly_alpha_primes": [ideal(p) for p in self.strongly_alpha_primes],
            "alpha_invariant_count": len(self.alpha_invariant),
            "nil_star_in_nil_alpha": self.nil_star_in_nil_alpha,
        }


def radicals(action: TwistedPartialAction, ideals=None) -> RadicalBundle:
    """Prime, alpha-nil and strongly-alpha radicals by a full lattice sweep.

    An empty intersection is the whole ring.
    """
    R = action.ring
    ideals = lattice(R) if ideals is None else ideals
    primes = prime_ideals(R, ideals)
    inv = [P for P in alpha_invariant_ideals(action, ideals) if not P.is_whole()]
    ap = [P for P in inv if is_alpha_prime(action, P)]
    sap = [P for P in inv if is_strongly_alpha_prime(action, P)]
    return RadicalBundle(
        intersect_all(R, primes), intersect_all(R, ap), intersect_all(R, sap),
        primes, ap, sap, inv + [whole_ideal(R)],
    )


def laurent_radical_formula(action: TwistedPartialAction, bundle: RadicalBundle | None = None, truncation: int = 8,
                            materialized: MaterializedSeriesRing | None = None):
    """Right-hand side ``Nil_alpha(R)<x>``: an ideal of the materialized ring, or a predicate."""
    bundle = bundle or radicals(action)
    return ideal_extension(bundle.nil_alpha, materialized or SeriesRing(action, "laurent", truncation))


@dataclass
class PowerRadicalFormula:
    """``(N_alpha ∩ Nil_*) + sum_{i >= 1} (N_alpha ∩ D_i) x^i`` described coefficientwise."""

    label: str
    constant: IdealSet
    coefficient: dict
    ideal: IdealSet | None = None

    def to_json(self):
        return {
            "label": self.label,
            "constant": {"size": self.constant.size, "members": self.constant.members},
            "coefficients": {str(i): {"size": c.size, "members": c.members} for i, c in self.coefficient.items()},
            "size": None if self.ideal is None else self.ideal.size,
        }


def powerseries_radical_formula(action: TwistedPartialAction, bundle: RadicalBundle | None = None,
                                materialized: MaterializedSeriesRing | None = None) -> PowerRadicalFormula:
    """Coefficientwise right-hand side of the power-series radical formula.

    Labelled ``theorem-backed`` when an enveloping action exists (periodic
    presentations) and ``conjectural`` for finite-support actions.
    """
    bundle = bundle or radicals(action)
    R = action.ring
    na = bundle.n_alpha_strong
    const = na & bundle.nil_star
    # periodic data: degrees 1..P already cover every residue
    degrees = range(1, action.period + 1) if action.periodic else range(1, action.bound + 1)
    coeff = {i: from_mask(R, na.mask & action.domain_mask(i)) for i in degrees}
    label = "theorem-backed" if action.periodic else "conjectural"
    ideal = None
    if not action.periodic:
        M = materialized or materialize_finite(SeriesRing(action, "power", action.bound + 1))

        def pred(d, col):
            return const.mask[col] if d == 0 else coeff[d].mask[col]

        ideal = from_mask(M, M.degree_mask(pred))
    return PowerRadicalFormula(label, const, coeff, ideal)


# ---------------------------------------------------------------------------
# prime ideals of materialized series rings


def extension_of_contraction(M: MaterializedSeriesRing, P: IdealSet) -> IdealSet:
    return ideal_extension(contraction(M, P), M)


def dichotomy_branch(M: MaterializedSeriesRing, P: IdealSet) -> dict:
    """Classify a prime of a materialized power ring into the two branches."""
    act = M.handle.action
    R = act.ring
    Q = contraction(M, P)

    def pred(d, col):
        return Q.mask[col] if d == 0 else np.ones(len(col), dtype=bool)

    shape_i = from_mask(M, M.degree_mask(pred))
    first = P.bits == shape_i.bits and not Q.is_whole() and is_prime_ideal(R, Q)
    missing = []
    for i in M.degrees:
        if i < 1:
            continue
        mono = M.from_series(M.handle.monomial(act.idem_label(i), i))
        if not P.contains_index(mono):
            missing.append(i)
    return {"branch_i": bool(first), "branch_ii": bool(missing), "missing_units": missing,
            "contraction_size": Q.size}


def maximal_same_contraction(M: MaterializedSeriesRing, P: IdealSet, ideals) -> bool:
    """No ideal strictly above ``P`` has the same contraction to ``R``."""
    Q = contraction(M, P)
    for N in ideals:
        if N.bits != P.bits and P.issubset(N) and contraction(M, N).bits == Q.bits:
            return False
    return True


def semiprime_witness(action: TwistedPartialAction, f, truncation=None):
    """Witness that ``f R<x> f != 0``: ``c`` in ``D_s`` with ``f_s c w_{s,-s} f_s != 0``.

    ``s`` is the lowest degree of ``f``.  The witness is confirmed through the
    series product ``f (b x^-s) f`` with ``b = alpha_s^{-1}(c)``, whose lowest
    coefficient is exactly ``f_s c w_{s,-s} f_s``.
    """
    h = f.ring
    R = action.ring
    t = R.tables
    s = f.lower
    fs = f.coeff_index(s)
    ws = action.w(s, -s)
    dom = action.domain_indices(s)
    vals = t.mul[t.mul[t.mul[fs, dom], ws], fs]
    hits = np.flatnonzero(vals != t.zero)
    if not len(hits):
        return None
    c = int(dom[hits[0]])
    b = int(action.alpha_inv(s)[c])
    probe = h.from_indices(-s, [b]) if h.flavor == "laurent" else None
    confirmed = None
    if probe is not None:
        prod = h.mul(h.mul(f, probe), f)
        if s < prod.prec:
            confirmed = prod.coeff_index(s) == vals[hits[0]]
    return {"degree": s, "c": R.label(c), "b": R.label(b), "value": R.label(vals[hits[0]]), "confirmed": confirmed}
