"""Twisted partial skew power series and Laurent series rings.

A series ``sum a_i x^i`` (``a_i`` in ``D_i``) is stored as a run of base-ring
element indices for degrees ``lower .. prec - 1``; coefficients from ``prec``
on are unknown, so equality and zero tests are modulo ``x^prec``.  Products of
Laurent series with negative lower degree lose precision accordingly.

For finite-support actions with truncation above the support bound every
product is computed exactly, and the whole ring is finite; see
:func:`materialize_finite`.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import (
    CapExceeded,
    CoefficientOutsideDomainIdeal,
    DecompositionInvalid,
    HandleMismatch,
    NoEnvelopingData,
    NotAlphaInvariant,
    NotFiniteSupport,
)
from .paction import RestrictedGlobalAction, TwistedPartialAction, quotient_action
from .report import VerificationReport
from .ringcore import TABLE_CAP, IdealSet, TableRing, from_mask

FLAVORS = ("power", "laurent")


@dataclass(frozen=True)
class SeriesBatch:
    """``B`` series sharing lower degree and precision; ``data`` has shape (B, prec - lower)."""

    lower: int
    prec: int
    data: np.ndarray

    def __len__(self) -> int:
        return self.data.shape[0]

    def row(self, k: int) -> np.ndarray:
        return self.data[k]


class SkewSeries:
    """Element of a :class:`SeriesRing`."""

    __slots__ = ("ring", "lower", "prec", "coeffs")

    def __init__(self, ring, lower: int, prec: int, coeffs):
        self.ring = ring
        self.lower = lower
        self.prec = prec
        self.coeffs = coeffs

    def coeff_index(self, i: int) -> int:
        if i >= self.prec:
            raise ValueError(f"coefficient {i} lies beyond the precision {self.prec}")
        k = i - self.lower
        if k < 0 or k >= len(self.coeffs):
            return self.ring.base.tables.zero
        return self.coeffs[k]

    def coeff(self, i: int):
        return self.ring.base.label(self.coeff_index(i))

    def items(self) -> dict:
        z = self.ring.base.tables.zero
        return {self.lower + k: self.ring.base.label(c) for k, c in enumerate(self.coeffs) if c != z}

    def support(self) -> list[int]:
        return sorted(self.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading_degree(self):
        return None if self.is_zero() else self.lower

    def __add__(self, other):
        return self.ring.add(self, other)

    def __sub__(self, other):
        return self.ring.sub(self, other)

    def __neg__(self):
        return self.ring.neg(self)

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, SkewSeries):
            return NotImplemented
        return self.ring.eq(self, other)

    __hash__ = None

    def __repr__(self) -> str:
        terms = " + ".join(f"{a}x^{i}" for i, a in self.items().items()) or "0"
        return f"<{terms} mod x^{self.prec}>"

    def to_json(self):
        return {"lower": self.lower, "prec": self.prec,
                "coeffs": {str(i): a for i, a in self.items().items()}}


class SeriesRing:
    """``R[[x; alpha, w]]`` (flavor ``power``) or ``R<x; alpha, w>`` (``laurent``), truncated at ``N``."""

    def __init__(self, action: TwistedPartialAction, flavor: str = "power", truncation: int = 8):
        if flavor not in FLAVORS:
            raise ValueError(f"flavor must be one of {FLAVORS}")
        if truncation < 1:
            raise ValueError("truncation must be at least 1")
        self.action = action
        self.base = action.ring
        self.flavor = flavor
        self.N = truncation
        self._ainv = {}
        self._alpha = {}

    def __repr__(self) -> str:
        return f"<SeriesRing {self.flavor} over {self.action.name}, N={self.N}{' exact' if self.exact else ''}>"

    @property
    def exact(self) -> bool:
        """True when no coefficient can appear at degree >= N (finite support below N)."""
        return not self.action.periodic and self.N > self.action.bound

    def _check_same(self, *series):
        for s in series:
            if s.ring is not self:
                raise HandleMismatch("series belong to different series rings")

    def min_degree(self) -> int | None:
        """Smallest degree that can carry a nonzero coefficient, or None if unbounded."""
        if self.flavor == "power":
            return 0
        return -self.action.bound if not self.action.periodic else None

    # -- construction ----------------------------------------------------

    def _wrap(self, lower: int, prec: int, arr) -> SkewSeries:
        z = self.base.tables.zero
        arr = np.asarray(arr, dtype=np.int64)
        nz = np.flatnonzero(arr != z)
        if not len(nz):
            return SkewSeries(self, prec, prec, ())
        first, last = int(nz[0]), int(nz[-1])
        return SkewSeries(self, lower + first, prec, tuple(int(x) for x in arr[first:last + 1]))

    def make(self, coeffs=None, prec: int | None = None) -> SkewSeries:
        """Series from ``{degree: label}``; coefficients are validated against ``D_i``."""
        prec = self.N if prec is None else prec
        coeffs = dict(coeffs or {})
        if not coeffs:
            return SkewSeries(self, prec, prec, ())
        R = self.base
        t = R.tables
        lo = min(coeffs)
        if self.flavor == "power" and lo < 0:
            raise ValueError("power series cannot have negative degrees")
        if max(coeffs) >= prec:
            raise ValueError(f"degree {max(coeffs)} is not below the truncation {prec}")
        arr = np.full(prec - lo, t.zero, dtype=np.int64)
        for i, a in coeffs.items():
            ai = R.index(a)
            if t.mul[ai, self.action.idem(i)] != ai:
                raise CoefficientOutsideDomainIdeal(f"coefficient {a!r} at degree {i} is not in D_{i}")
            arr[i - lo] = ai
        return self._wrap(lo, prec, arr)

    def from_indices(self, lower: int, arr, prec: int | None = None) -> SkewSeries:
        return self._wrap(lower, self.N if prec is None else prec, arr)

    def zero(self) -> SkewSeries:
        return self.make()

    def one(self) -> SkewSeries:
        return self.monomial(self.base.one, 0)

    def monomial(self, a, i: int) -> SkewSeries:
        return self.make({i: a})

    # -- arithmetic ---------------------------------------------------------

    def _dense(self, f: SkewSeries, lower: int, prec: int) -> np.ndarray:
        z = self.base.tables.zero
        out = np.full(max(prec - lower, 0), z, dtype=np.int64)
        for k, c in enumerate(f.coeffs):
            d = f.lower + k
            if lower <= d < prec:
                out[d - lower] = c
        return out

    def add(self, f: SkewSeries, g: SkewSeries) -> SkewSeries:
        self._check_same(f, g)
        prec = min(f.prec, g.prec)
        lo = min(f.lower, g.lower, prec)
        t = self.base.tables
        return self._wrap(lo, prec, t.add[self._dense(f, lo, prec), self._dense(g, lo, prec)])

    def neg(self, f: SkewSeries) -> SkewSeries:
        self._check_same(f)
        t = self.base.tables
        return SkewSeries(self, f.lower, f.prec, tuple(int(x) for x in t.neg[list(f.coeffs)]) if f.coeffs else ())

    def sub(self, f: SkewSeries, g: SkewSeries) -> SkewSeries:
        return self.add(f, self.neg(g))

    def eq(self, f: SkewSeries, g: SkewSeries) -> bool:
        """Equality modulo ``x^min(prec_f, prec_g)``."""
        self._check_same(f, g)
        prec = min(f.prec, g.prec)
        lo = min(f.lower, g.lower, prec)
        return bool(np.array_equal(self._dense(f, lo, prec), self._dense(g, lo, prec)))

    def mul(self, f: SkewSeries, g: SkewSeries) -> SkewSeries:
        self._check_same(f, g)
        z = self.base.tables.zero
        F = np.array([f.coeffs], dtype=np.int64).reshape(1, -1) if f.coeffs else np.full((1, 0), z)
        G = np.array([g.coeffs], dtype=np.int64).reshape(1, -1) if g.coeffs else np.full((1, 0), z)
        lo, prec, out = self._mul_arrays(F, f.lower, f.prec, G, g.lower, g.prec)
        return self._wrap(lo, prec, out[0])

    def product_precision(self, lf, pf, lg, pg) -> int:
        if self.exact:
            return self.N
        return min(self.N, pf + lg, pg + lf)

    def alpha_inv(self, i: int) -> np.ndarray:
        if i not in self._ainv:
            self._ainv[i] = self.action.alpha_inv(i)
        return self._ainv[i]

    def alpha(self, i: int) -> np.ndarray:
        if i not in self._alpha:
            self._alpha[i] = self.action.alpha(i)
        return self._alpha[i]

    def _mul_arrays(self, F, lf, pf, G, lg, pg):
        """Core product of two stacks of coefficient rows.

        Each monomial product is ``alpha_i(alpha_i^{-1}(a) b) w_{i,j}``.
        """
        t = self.base.tables
        prec = self.product_precision(lf, pf, lg, pg)
        lo = lf + lg
        B = F.shape[0]
        width = max(prec - lo, 0)
        out = np.full((B, width), t.zero, dtype=np.int64)
        if width == 0:
            return lo, prec, out
        act = self.action
        for a in range(F.shape[1]):
            i = lf + a
            if i + lg >= prec:
                break
            fi = F[:, a]
            if (fi == t.zero).all():
                continue
            pre = self.alpha_inv(i)[fi]
            al = self.alpha(i)
            for b in range(G.shape[1]):
                j = lg + b
                d = i + j
                if d >= prec:
                    break
                wij = act.w(i, j)
                if wij == t.zero:
                    continue
                term = t.mul[al[t.mul[pre, G[:, b]]], wij]
                out[:, d - lo] = t.add[out[:, d - lo], term]
        return lo, prec, out

    # -- batches --------------------------------------------------------

    def batch_mul(self, F: SeriesBatch, G: SeriesBatch) -> SeriesBatch:
        lo, prec, out = self._mul_arrays(F.data, F.lower, F.prec, G.data, G.lower, G.prec)
        return SeriesBatch(lo, prec, out)

    def _align(self, F: SeriesBatch, lower: int, prec: int) -> np.ndarray:
        z = self.base.tables.zero
        out = np.full((len(F), max(prec - lower, 0)), z, dtype=np.int64)
        for k in range(F.data.shape[1]):
            d = F.lower + k
            if lower <= d < prec:
                out[:, d - lower] = F.data[:, k]
        return out

    def batch_add(self, F: SeriesBatch, G: SeriesBatch) -> SeriesBatch:
        prec = min(F.prec, G.prec)
        lo = min(F.lower, G.lower)
        t = self.base.tables
        return SeriesBatch(lo, prec, t.add[self._align(F, lo, prec), self._align(G, lo, prec)])

    def batch_eq(self, F: SeriesBatch, G: SeriesBatch) -> np.ndarray:
        prec = min(F.prec, G.prec)
        lo = min(F.lower, G.lower)
        return (self._align(F, lo, prec) == self._align(G, lo, prec)).all(axis=1)

    def batch_row(self, F: SeriesBatch, k: int) -> SkewSeries:
        return self._wrap(F.lower, F.prec, F.data[k])

    def to_batch(self, items, lower: int | None = None) -> SeriesBatch:
        items = list(items)
        prec = min(f.prec for f in items)
        if lower is None:
            lower = min(min(f.lower for f in items), prec)
        return SeriesBatch(lower, prec, np.stack([self._dense(f, lower, prec) for f in items]))

    def random_batch(self, rng, size: int, lower: int = 0, density: float = 1.0) -> SeriesBatch:
        """Random series with coefficients drawn uniformly from each ``D_i``."""
        if self.flavor == "power" and lower < 0:
            raise ValueError("power series cannot have negative degrees")
        t = self.base.tables
        cols = []
        for d in range(lower, self.N):
            dom = self.action.domain_indices(d)
            col = dom[rng.integers(0, len(dom), size)]
            if density < 1.0:
                col = np.where(rng.random(size) < density, col, t.zero)
            cols.append(col)
        data = np.stack(cols, axis=1) if cols else np.zeros((size, 0), dtype=np.int64)
        return SeriesBatch(lower, self.N, data)

    def random(self, rng, lower: int = 0, density: float = 1.0) -> SkewSeries:
        return self.batch_row(self.random_batch(rng, 1, lower, density), 0)


# ---------------------------------------------------------------------------
# finite materialization


class MaterializedSeriesRing(TableRing):
    """The finite ring of all series over a finite-support action.

    Elements are labelled by their tuple of coefficients over ``degrees``.
    """

    def __init__(self, handle: SeriesRing, cap: int = TABLE_CAP):
        act = handle.action
        if act.periodic:
            raise NotFiniteSupport("only finite-support actions give finite series rings")
        exact = SeriesRing(act, handle.flavor, act.bound + 1)
        degrees = list(range(0 if handle.flavor == "power" else -act.bound, act.bound + 1))
        doms = [act.domain_indices(d) for d in degrees]
        sizes = [len(d) for d in doms]
        n = int(np.prod(sizes, dtype=object))
        if n > cap:
            raise CapExceeded(f"materialized {handle.flavor} ring would have {n} elements (cap {cap})")
        R = act.ring
        strides = [int(np.prod(sizes[k + 1:], dtype=np.int64)) for k in range(len(sizes))]
        idx = np.arange(n, dtype=np.int64)
        coeffs = np.stack([doms[k][(idx // strides[k]) % sizes[k]] for k in range(len(sizes))], axis=1)
        pos = []
        for dom in doms:
            p = np.full(R.cardinality, -1, dtype=np.int64)
            p[dom] = np.arange(len(dom))
            pos.append(p)
        self.handle = exact
        self.source_handle = handle
        self.degrees = degrees
        self.coefficients = coeffs
        self._pos = pos
        self._strides = np.array(strides, dtype=np.int64)
        rt = R.tables
        lo = degrees[0]

        def encode(rows):
            acc = np.zeros(rows.shape[0], dtype=np.int64)
            for k in range(len(degrees)):
                acc += pos[k][rows[:, k]] * strides[k]
            return acc

        self.encode = encode
        add = encode(rt.add[coeffs[:, None, :], coeffs[None, :, :]].reshape(n * n, -1)).reshape(n, n)
        neg = encode(rt.neg[coeffs])
        mul = np.zeros((n, n), dtype=np.int64)
        chunk = max(1, 200_000 // max(n, 1))
        for a0 in range(0, n, chunk):
            a1 = min(n, a0 + chunk)
            F = np.repeat(coeffs[a0:a1], n, axis=0)
            G = np.tile(coeffs, (a1 - a0, 1))
            plo, _, out = exact._mul_arrays(F, lo, exact.N, G, lo, exact.N)
            cols = out[:, [d - plo for d in degrees]]
            mul[a0:a1] = encode(cols).reshape(a1 - a0, n)
        labels = [tuple(R.label(c) for c in row) for row in coeffs]
        zero_row = np.full((1, len(degrees)), rt.zero)
        one_row = zero_row.copy()
        one_row[0, degrees.index(0)] = rt.one
        super().__init__(labels, add, mul, neg, encode(zero_row)[0], encode(one_row)[0],
                         name=f"{handle.flavor}[{act.name}]")

    def to_series(self, k: int, handle: SeriesRing | None = None) -> SkewSeries:
        h = handle or self.handle
        return h.from_indices(self.degrees[0], self.coefficients[int(k)])

    def from_series(self, f: SkewSeries) -> int:
        row = np.array([[f.coeff_index(d) for d in self.degrees]], dtype=np.int64)
        return int(self.encode(row)[0])

    def base_embedding(self) -> np.ndarray:
        """Index in this ring of ``r x^0`` for each base element ``r``."""
        R = self.handle.base
        rows = np.full((R.cardinality, len(self.degrees)), R.tables.zero, dtype=np.int64)
        rows[:, self.degrees.index(0)] = np.arange(R.cardinality)
        return self.encode(rows)

    def degree_mask(self, predicate) -> np.ndarray:
        """Mask of elements whose coefficient at each degree ``d`` satisfies ``predicate(d, idx_array)``."""
        mask = np.ones(self.cardinality, dtype=bool)
        for k, d in enumerate(self.degrees):
            mask &= predicate(d, self.coefficients[:, k])
        return mask


def materialize_finite(handle: SeriesRing, cap: int = TABLE_CAP) -> MaterializedSeriesRing:
    return MaterializedSeriesRing(handle, cap)


def contraction(M: MaterializedSeriesRing, ideal: IdealSet) -> IdealSet:
    """``K ∩ R`` for an ideal ``K`` of a materialized ring."""
    emb = M.base_embedding()
    return from_mask(M.handle.base, ideal.mask[emb])


class SeriesPredicate:
    """Membership test for a coefficientwise-constrained set of truncated series."""

    def __init__(self, ideal: IdealSet, handle: SeriesRing):
        self.ideal = ideal
        self.handle = handle

    def __contains__(self, f: SkewSeries) -> bool:
        return all(self.ideal.contains_index(c) for c in f.coeffs)


def ideal_extension(ideal: IdealSet, handle):
    """``I[[x]]`` / ``I<x>``: series whose every coefficient lies in ``I``.

    Returns an :class:`IdealSet` of the materialized ring when one is given
    (or can be built), otherwise a :class:`SeriesPredicate`.
    """
    if isinstance(handle, MaterializedSeriesRing):
        M = handle
    elif not handle.action.periodic:
        M = materialize_finite(handle)
    else:
        return SeriesPredicate(ideal, handle)
    return from_mask(M, M.degree_mask(lambda d, col: ideal.mask[col]))


# ---------------------------------------------------------------------------
# division by a series with leading coefficient in a simple module


def solve_decomposition(f: SkewSeries, leading: int | None = None) -> dict:
    """Find ``a_i`` with ``v_i = v_k a_i`` by linear search over ``R``."""
    R = f.ring.base
    t = R.tables
    k = f.lower if leading is None else leading
    vk = f.coeff_index(k)
    if vk == t.zero:
        raise DecompositionInvalid(f"leading coefficient at degree {k} is zero")
    out = {}
    for i in range(k + 1, f.prec):
        vi = f.coeff_index(i)
        hits = np.flatnonzero(t.mul[vk, :] == vi)
        if not len(hits):
            raise DecompositionInvalid(f"v_{i} = {R.label(vi)!r} is not in v_{k} R")
        out[i] = R.label(hits[0])
    return out


def lemma31_divide(f: SkewSeries, decomposition: dict, leading: int | None = None) -> SkewSeries:
    """Return ``g = 1 + u_1 x + ...`` with ``f g = v_k x^k`` modulo ``x^N``.

    ``f = sum_{i >= k} v_i x^i`` with ``v_k != 0`` and ``v_i = v_k a_i``.
    With ``k = 0`` this is ``u_m = -a_m - sum_{0<i<m} a_i alpha_i(u_{m-i} 1_{-i}) w_{i,m-i}``;
    in general ``u_m`` solves
    ``alpha_k(u_m 1_{-k}) w_{k,m} = -1_k sum_{k<i<=k+m} a_i alpha_i(u_{k+m-i} 1_{-i}) w_{i,k+m-i}``.
    """
    h = f.ring
    act = h.action
    R = h.base
    t = R.tables
    k = f.lower if leading is None else leading
    vk = f.coeff_index(k)
    if vk == t.zero:
        raise DecompositionInvalid(f"leading coefficient at degree {k} is zero")
    if any(f.coeff_index(i) != t.zero for i in range(f.lower, k)):
        raise DecompositionInvalid(f"f has nonzero terms below degree {k}")
    a = {}
    for i in range(k + 1, f.prec):
        ai = decomposition.get(i)
        if ai is None:
            if f.coeff_index(i) == t.zero:
                a[i] = t.zero
                continue
            raise DecompositionInvalid(f"no a_{i} supplied for nonzero v_{i}")
        ai = int(t.mul[R.index(ai), act.idem(i)])
        if t.mul[vk, ai] != f.coeff_index(i):
            raise DecompositionInvalid(f"v_{i} != v_{k} a_{i}")
        a[i] = ai
    ek = act.idem(k)
    u = [t.one]
    for m in range(1, f.prec - k):
        y = t.zero
        for i in range(k + 1, k + m + 1):
            if a[i] == t.zero:
                continue
            term = t.mul[t.mul[a[i], act.alpha(i)[u[k + m - i]]], act.w(i, k + m - i)]
            y = t.add[y, term]
        y = t.mul[ek, t.neg[y]]
        winv = act.w_inv(k, m)
        if winv is None:
            raise DecompositionInvalid(f"w_{k},{m} is not invertible")
        u.append(int(act.alpha_inv(k)[t.mul[y, winv]]))
    return h.from_indices(0, np.array(u), prec=f.prec - k)


# ---------------------------------------------------------------------------
# quotient isomorphism


def _project_series(f: SkewSeries, target: SeriesRing, proj: np.ndarray) -> SkewSeries:
    return target.from_indices(f.lower, proj[list(f.coeffs)] if f.coeffs else [], prec=f.prec) if f.coeffs \
        else target.from_indices(f.prec, [], prec=f.prec)


def quotient_iso_check(action: TwistedPartialAction, ideal: IdealSet, samples: int = 10_000,
                       truncation: int = 8, seed: int = 0, flavors=FLAVORS, fixture=None) -> VerificationReport:
    """Coefficientwise projection ``R[[x]]/I[[x]] -> (R/I)[[x]]`` is an isomorphism.

    Exact over all pairs for finite-support actions; sampled otherwise.
    """
    from .ideals import is_alpha_invariant

    if not is_alpha_invariant(action, ideal):
        raise NotAlphaInvariant("the quotient isomorphism needs an alpha-invariant ideal")
    qa = quotient_action(action, ideal)
    proj = qa.projection.table
    Q = qa.ring
    details = {"ideal_size": ideal.size, "quotient_size": Q.cardinality}
    witnesses = []
    ok = True
    for flavor in flavors:
        src = SeriesRing(action, flavor, truncation)
        tgt = SeriesRing(qa, flavor, truncation)
        res = {}
        if not action.periodic:
            M = materialize_finite(src)
            MQ = materialize_finite(tgt)
            phi = MQ.encode(proj[M.coefficients])
            res["mode"] = "exact"
            res["pairs"] = M.cardinality ** 2
            res["additive"] = bool((phi[M.tables.add] == MQ.tables.add[np.ix_(phi, phi)]).all())
            bad = phi[M.tables.mul] != MQ.tables.mul[np.ix_(phi, phi)]
            res["multiplicative"] = not bad.any()
            if bad.any():
                x, y = np.argwhere(bad)[0]
                witnesses.append({"flavor": flavor, "pair": [M.label(x), M.label(y)]})
            res["surjective"] = len(np.unique(phi)) == MQ.cardinality
            kernel = phi == MQ.tables.zero
            ext = ideal_extension(ideal, M)
            res["kernel"] = bool(np.array_equal(kernel, ext.mask))
        else:
            rng = np.random.default_rng([seed, 0 if flavor == "power" else 1])
            lower = 0 if flavor == "power" else -1
            F = src.random_batch(rng, samples, lower)
            G = src.random_batch(rng, samples, lower)

            def pb(B):
                return SeriesBatch(B.lower, B.prec, proj[B.data])

            res["mode"] = "sampled"
            res["pairs"] = samples
            add_ok = tgt.batch_eq(pb(src.batch_add(F, G)), tgt.batch_add(pb(F), pb(G)))
            mul_ok = tgt.batch_eq(pb(src.batch_mul(F, G)), tgt.batch_mul(pb(F), pb(G)))
            res["additive"] = bool(add_ok.all())
            res["multiplicative"] = bool(mul_ok.all())
            if not mul_ok.all():
                k = int(np.flatnonzero(~mul_ok)[0])
                witnesses.append({"flavor": flavor, "pair": [src.batch_row(F, k), src.batch_row(G, k)]})
            # surjectivity: lift target coefficients and multiply by 1_i to land in D_i
            H = tgt.random_batch(rng, samples, lower)
            lifted = np.empty_like(H.data)
            rt = action.ring.tables
            for c in range(H.data.shape[1]):
                d = H.lower + c
                lifted[:, c] = rt.mul[Q.representatives[H.data[:, c]], action.idem(d)]
            res["surjective"] = bool(tgt.batch_eq(pb(SeriesBatch(H.lower, H.prec, lifted)), H).all())
            # kernel: series with coefficients in I map to zero; others do not
            in_I = np.flatnonzero(ideal.mask)
            K = src.random_batch(rng, samples, lower)
            kdata = K.data.copy()
            for c in range(kdata.shape[1]):
                d = K.lower + c
                choices = in_I[action.domain_mask(d)[in_I]]
                kdata[:, c] = choices[rng.integers(0, len(choices), samples)]
            zeros = (proj[kdata] == Q.tables.zero).all(axis=1)
            f_zero = (proj[F.data] == Q.tables.zero).all(axis=1)
            f_in = ideal.mask[F.data].all(axis=1)
            res["kernel"] = bool(zeros.all() and np.array_equal(f_zero, f_in))
        res_ok = res["additive"] and res["multiplicative"] and res["surjective"] and res["kernel"]
        ok &= res_ok
        details[flavor] = res
    return VerificationReport("ISO-2.1", "pass" if ok else "fail", fixture, witnesses, details,
                              {"samples": samples, "truncation": truncation, "seed": seed})


# ---------------------------------------------------------------------------
# Morita context array ring


class MoritaContextRing:
    """Array ring ``[[R<x>, U], [V, T<x>]]`` with all entries stored as Laurent series over ``T``.

    ``R<x>`` has coefficients in ``e beta_i(e) T``, ``U`` in ``eT``, ``V`` in
    ``beta_i(e) T``, and the corner ``T<x>`` is unconstrained.
    """

    def __init__(self, action: RestrictedGlobalAction, truncation: int = 6):
        if not isinstance(action, RestrictedGlobalAction):
            raise NoEnvelopingData("the Morita context needs the enveloping global action")
        from .paction import restrict_global

        self.action = action
        g = action.global_action
        self.global_action = g
        self.T = g.ring
        self.partial = SeriesRing(action, "laurent", truncation)
        self.full_action = restrict_global(g, self.T.one)
        self.full = SeriesRing(self.full_action, "laurent", truncation)
        self.N = truncation
        tt = self.T.tables
        e = self.T.index(action.e)
        self._e = e
        shift = [int(g.beta_table(i)[e]) for i in range(g.order)]
        self._slots = {
            "R": lambda i: int(tt.mul[e, shift[i % g.order]]),
            "U": lambda i: e,
            "V": lambda i: shift[i % g.order],
            "T": lambda i: tt.one,
        }

    LAYOUT = (("R", "U"), ("V", "T"))

    def in_slot(self, slot: str, f: SkewSeries) -> bool:
        tt = self.T.tables
        fn = self._slots[slot]
        return all(tt.mul[c, fn(f.lower + k)] == c for k, c in enumerate(f.coeffs))

    def random_entry(self, rng, slot: str, lower: int = 0) -> SkewSeries:
        tt = self.T.tables
        f = self.full.random(rng, lower)
        fn = self._slots[slot]
        arr = np.array([tt.mul[c, fn(f.lower + k)] for k, c in enumerate(f.coeffs)], dtype=np.int64)
        return self.full.from_indices(f.lower, arr, prec=f.prec)

    def random_element(self, rng, lower_range=(-1, 0)):
        out = []
        for row in self.LAYOUT:
            out.append(tuple(self.random_entry(rng, s, int(rng.integers(lower_range[0], lower_range[1] + 1)))
                             for s in row))
        return tuple(out)

    def zero(self):
        z = self.full.zero()
        return ((z, z), (z, z))

    def identity(self):
        return ((self.full.monomial(self.action.e, 0), self.full.zero()),
                (self.full.zero(), self.full.one()))

    def mul(self, X, Y):
        h = self.full
        return tuple(
            tuple(h.add(h.mul(X[r][0], Y[0][c]), h.mul(X[r][1], Y[1][c])) for c in range(2))
            for r in range(2)
        )

    def add(self, X, Y):
        return tuple(tuple(self.full.add(X[r][c], Y[r][c]) for c in range(2)) for r in range(2))

    def eq(self, X, Y) -> bool:
        return all(self.full.eq(X[r][c], Y[r][c]) for r in range(2) for c in range(2))

    def well_formed(self, X) -> bool:
        return all(self.in_slot(self.LAYOUT[r][c], X[r][c]) for r in range(2) for c in range(2))

    def embed_partial(self, f: SkewSeries) -> SkewSeries:
        """View an element of ``R<x>`` inside ``T<x>``."""
        R = self.action.ring
        return self.full.from_indices(f.lower, R.to_parent[list(f.coeffs)] if f.coeffs else [], prec=f.prec)

    # batched versions used by the sampled checks

    def _slot_batch(self, slot, B: SeriesBatch) -> SeriesBatch:
        tt = self.T.tables
        fn = self._slots[slot]
        cols = [tt.mul[B.data[:, k], fn(B.lower + k)] for k in range(B.data.shape[1])]
        data = np.stack(cols, axis=1) if cols else B.data
        return SeriesBatch(B.lower, B.prec, data)

    def _slot_ok(self, slot, B: SeriesBatch) -> np.ndarray:
        return (self._slot_batch(slot, B).data == B.data).all(axis=1)

    def random_batch(self, rng, size: int, lower: int = -1):
        return tuple(tuple(self._slot_batch(s, self.full.random_batch(rng, size, lower)) for s in row)
                     for row in self.LAYOUT)

    def batch_mul(self, X, Y):
        h = self.full
        return tuple(
            tuple(h.batch_add(h.batch_mul(X[r][0], Y[0][c]), h.batch_mul(X[r][1], Y[1][c])) for c in range(2))
            for r in range(2)
        )

    def batch_eq(self, X, Y) -> np.ndarray:
        ok = np.ones(len(X[0][0]), dtype=bool)
        for r in range(2):
            for c in range(2):
                ok &= self.full.batch_eq(X[r][c], Y[r][c])
        return ok

    def _constant_batch(self, size, entries):
        return tuple(tuple(self.full.to_batch([f] * size) for f in row) for row in entries)

    def check(self, samples: int = 10_000, seed: int = 0, fixture=None) -> VerificationReport:
        """Sampled absorption, associativity, identity and subring agreement."""
        rng = np.random.default_rng(seed)
        X, Y, Z = (self.random_batch(rng, samples) for _ in range(3))
        XY = self.batch_mul(X, Y)
        absorb = np.ones(samples, dtype=bool)
        for r in range(2):
            for c in range(2):
                absorb &= self._slot_ok(self.LAYOUT[r][c], XY[r][c])
        assoc = self.batch_eq(self.batch_mul(XY, Z), self.batch_mul(X, self.batch_mul(Y, Z)))
        one = self._constant_batch(samples, self.identity())
        ident = self.batch_eq(self.batch_mul(one, X), X) & self.batch_eq(self.batch_mul(X, one), X)
        zero = self._constant_batch(samples, self.zero())
        zer = self.batch_eq(self.batch_mul(zero, X), zero)
        F = self.partial.random_batch(rng, samples, -1)
        G = self.partial.random_batch(rng, samples, -1)
        up = self.action.ring.to_parent

        def lift(B):
            return SeriesBatch(B.lower, B.prec, up[B.data])

        sub = self.full.batch_eq(lift(self.partial.batch_mul(F, G)), self.full.batch_mul(lift(F), lift(G)))
        counts = {
            "absorption": int((~absorb).sum()),
            "associativity": int((~assoc).sum()),
            "identity": int((~ident).sum()),
            "zero": int((~zer).sum()),
            "subring": int((~sub).sum()),
        }
        witnesses = [{"check": k, "count": v} for k, v in counts.items() if v]
        ok = not witnesses
        return VerificationReport(
            "MORITA-3.6", "pass" if ok else "fail", fixture, witnesses,
            {"failures": counts, "layout": [list(r) for r in self.LAYOUT], "T_size": self.T.cardinality},
            {"samples": samples, "truncation": self.N, "seed": seed},
        )


def morita_ring(action: TwistedPartialAction, truncation: int = 6) -> MoritaContextRing:
    return MoritaContextRing(action, truncation)
