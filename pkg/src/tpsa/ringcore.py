"""Finite rings assembled from cyclic and matrix factors, and their ideals.

Every ring here is finite, so every predicate about elements or ideals is
decided by enumeration.  Elements are plain hashable *labels* (tuples of
factor coordinates, residues for ``Z_m`` and tuples of rows for ``M_k(Z_p)``)
and every ring lists its elements in lexicographic label order.  Element
*indices* refer to that order and drive the numpy operation tables used by the
heavier algorithms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapExceeded, NotAnIdeal, NotCentralIdempotent

RING_CAP = 65536
LATTICE_CAP = 4096
TABLE_CAP = 4096


def is_prime_number(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class FactorSpec:
    kind: str
    modulus: int | None = None
    size: int | None = None
    prime: int | None = None

    def __post_init__(self):
        if self.kind == "cyclic":
            if self.modulus is None or self.modulus < 2:
                raise ValueError(f"cyclic factor needs modulus >= 2, got {self.modulus}")
        elif self.kind == "matrix":
            if self.size is None or self.size < 1:
                raise ValueError(f"matrix factor needs size >= 1, got {self.size}")
            if self.prime is None or not is_prime_number(self.prime):
                raise ValueError(f"matrix factor needs a prime modulus, got {self.prime}")
        else:
            raise ValueError(f"unknown factor kind {self.kind!r}")

    @classmethod
    def cyclic(cls, modulus: int) -> FactorSpec:
        return cls("cyclic", modulus=modulus)

    @classmethod
    def matrix(cls, size: int, prime: int) -> FactorSpec:
        return cls("matrix", size=size, prime=prime)

    @property
    def cardinality(self) -> int:
        if self.kind == "cyclic":
            return self.modulus
        return self.prime ** (self.size * self.size)

    def describe(self) -> str:
        if self.kind == "cyclic":
            return f"Z_{self.modulus}"
        return f"M_{self.size}(Z_{self.prime})"


class _CyclicArith:
    def __init__(self, m: int):
        self.m = m
        self.n = m
        self.zero = 0
        self.one = 1 % m

    @cached_property
    def elements(self):
        return list(range(self.m))

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def encode(self, a) -> int:
        return a

    def valid(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.m

    def idempotents(self):
        return [e for e in range(self.m) if (e * e) % self.m == e]

    def tables(self):
        i = np.arange(self.m, dtype=np.int64)
        add = (i[:, None] + i[None, :]) % self.m
        mul = (i[:, None] * i[None, :]) % self.m
        return add.astype(np.int32), mul.astype(np.int32), ((-i) % self.m).astype(np.int32)


class _MatrixArith:
    def __init__(self, k: int, p: int):
        self.k = k
        self.p = p
        self.n = p ** (k * k)
        self.zero = tuple(tuple(0 for _ in range(k)) for _ in range(k))
        self.one = tuple(tuple(int(r == c) for c in range(k)) for r in range(k))
        self._weights = np.array([p ** (k * k - 1 - t) for t in range(k * k)], dtype=np.int64)

    def _rows(self, flat):
        k = self.k
        return tuple(tuple(flat[r * k:(r + 1) * k]) for r in range(k))

    @cached_property
    def elements(self):
        return [self._rows(f) for f in itertools.product(range(self.p), repeat=self.k * self.k)]

    def add(self, a, b):
        p = self.p
        return tuple(tuple((x + y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b))

    def neg(self, a):
        return tuple(tuple((-x) % self.p for x in row) for row in a)

    def mul(self, a, b):
        k, p = self.k, self.p
        return tuple(
            tuple(sum(a[r][t] * b[t][c] for t in range(k)) % p for c in range(k)) for r in range(k)
        )

    def encode(self, a) -> int:
        flat = [x for row in a for x in row]
        return int(np.dot(flat, self._weights))

    def valid(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.k
            and all(isinstance(r, tuple) and len(r) == self.k for r in a)
            and all(isinstance(x, int) and 0 <= x < self.p for r in a for x in r)
        )

    def idempotents(self):
        # centre of M_k(Z_p) is the scalars; scalar idempotents of a field are 0 and 1
        return [self.zero, self.one]

    def tables(self):
        if self.n > TABLE_CAP:
            raise CapExceeded(f"M_{self.k}(Z_{self.p}) has {self.n} elements; table cap is {TABLE_CAP}")
        k, p = self.k, self.p
        digits = np.array(list(itertools.product(range(p), repeat=k * k)), dtype=np.int64)
        mats = digits.reshape(-1, k, k)
        prod = np.einsum("aij,bjk->abik", mats, mats) % p
        mul = prod.reshape(self.n, self.n, k * k) @ self._weights
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ self._weights
        neg = ((-digits) % p) @ self._weights
        return add.astype(np.int32), mul.astype(np.int32), neg.astype(np.int32)


def _arith(spec: FactorSpec):
    if spec.kind == "cyclic":
        return _CyclicArith(spec.modulus)
    return _MatrixArith(spec.size, spec.prime)


@dataclass(frozen=True)
class RingTables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    zero: int
    one: int

    @property
    def n(self) -> int:
        return len(self.neg)


class FiniteRing:
    """A finite unital ring with elements listed in canonical order."""

    name = "R"

    @property
    def cardinality(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return self.cardinality

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} |{self.cardinality}|>"

    @cached_property
    def elements(self) -> list:
        raise NotImplementedError

    @cached_property
    def _index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.elements)}

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"{label!r} is not an element of {self.name}") from None

    def label(self, i: int):
        return self.elements[int(i)]

    def __contains__(self, label) -> bool:
        return label in self._index

    @property
    def zero(self):
        return self.label(self.tables.zero)

    @property
    def one(self):
        return self.label(self.tables.one)

    def add(self, a, b):
        t = self.tables
        return self.label(t.add[self.index(a), self.index(b)])

    def mul(self, a, b):
        t = self.tables
        return self.label(t.mul[self.index(a), self.index(b)])

    def neg(self, a):
        return self.label(self.tables.neg[self.index(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def indices(self, labels) -> np.ndarray:
        return np.array([self.index(x) for x in labels], dtype=np.int64)

    @cached_property
    def tables(self) -> RingTables:
        if self.cardinality > TABLE_CAP:
            raise CapExceeded(f"{self.name} has {self.cardinality} elements; table cap is {TABLE_CAP}")
        return self._build_tables()

    def _build_tables(self) -> RingTables:
        raise NotImplementedError


class TableRing(FiniteRing):
    """Ring given directly by its operation tables."""

    def __init__(self, labels, add, mul, neg, zero: int, one: int, name: str = "R"):
        self._labels = list(labels)
        self._tables = RingTables(
            np.asarray(add, dtype=np.int32),
            np.asarray(mul, dtype=np.int32),
            np.asarray(neg, dtype=np.int32),
            int(zero),
            int(one),
        )
        self.name = name

    @cached_property
    def elements(self) -> list:
        return self._labels

    def _build_tables(self) -> RingTables:
        return self._tables


class ProductRing(FiniteRing):
    """Direct product of cyclic rings ``Z_m`` and matrix rings ``M_k(Z_p)``."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("a product ring needs at least one factor")
        self._arith = [_arith(f) for f in self.factors]
        sizes = [a.n for a in self._arith]
        self._sizes = sizes
        self._strides = [math.prod(sizes[i + 1:]) for i in range(len(sizes))]
        self.name = " x ".join(f.describe() for f in self.factors)

    @property
    def cardinality(self) -> int:
        return math.prod(self._sizes)

    @cached_property
    def elements(self) -> list:
        return [tuple(t) for t in itertools.product(*(a.elements for a in self._arith))]

    def index(self, label) -> int:
        if not self.is_element(label):
            raise ValueError(f"{label!r} is not an element of {self.name}")
        return sum(a.encode(x) * s for a, x, s in zip(self._arith, label, self._strides))

    def label(self, i: int):
        i = int(i)
        return tuple(a.elements[(i // s) % a.n] for a, s in zip(self._arith, self._strides))

    def is_element(self, label) -> bool:
        return (
            isinstance(label, tuple)
            and len(label) == len(self._arith)
            and all(a.valid(x) for a, x in zip(self._arith, label))
        )

    def __contains__(self, label) -> bool:
        return self.is_element(label)

    @property
    def zero(self):
        return tuple(a.zero for a in self._arith)

    @property
    def one(self):
        return tuple(a.one for a in self._arith)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self._arith, a, b))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self._arith, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self._arith, a))

    def _build_tables(self) -> RingTables:
        n = self.cardinality
        idx = np.arange(n, dtype=np.int64)
        add = np.zeros((n, n), dtype=np.int64)
        mul = np.zeros((n, n), dtype=np.int64)
        neg = np.zeros(n, dtype=np.int64)
        for f, s in zip(self._arith, self._strides):
            fa, fm, fn = f.tables()
            d = (idx // s) % f.n
            add += fa[d[:, None], d[None, :]].astype(np.int64) * s
            mul += fm[d[:, None], d[None, :]].astype(np.int64) * s
            neg += fn[d].astype(np.int64) * s
        return RingTables(
            add.astype(np.int32),
            mul.astype(np.int32),
            neg.astype(np.int32),
            self.index(self.zero),
            self.index(self.one),
        )


def ring_product(factors, cap: int = RING_CAP) -> ProductRing:
    factors = list(factors)
    if not factors:
        raise ValueError("factor list must be nonempty")
    size = math.prod(f.cardinality for f in factors)
    if size > cap:
        raise CapExceeded(f"ring of cardinality {size} exceeds cap {cap}")
    return ProductRing(factors)


# ---------------------------------------------------------------------------
# bit sets over element indices


def mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(np.asarray(mask, dtype=bool), bitorder="little").tobytes(), "little")


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(bits.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


@dataclass(frozen=True)
class IdealSet:
    """An explicit subset of a ring (two-sided ideal unless stated otherwise)."""

    ring: FiniteRing
    bits: int
    generators: tuple = field(default=(), compare=False)

    @cached_property
    def mask(self) -> np.ndarray:
        return bits_to_mask(self.bits, self.ring.cardinality)

    @cached_property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def members(self) -> list:
        return [self.ring.label(i) for i in self.indices]

    @property
    def size(self) -> int:
        return int(self.bits.bit_count()) if hasattr(self.bits, "bit_count") else bin(self.bits).count("1")

    def __len__(self) -> int:
        return self.size

    def __contains__(self, label) -> bool:
        if label not in self.ring:
            return False
        return bool((self.bits >> self.ring.index(label)) & 1)

    def contains_index(self, i: int) -> bool:
        return bool((self.bits >> int(i)) & 1)

    def is_zero(self) -> bool:
        return self.size == 1

    def is_whole(self) -> bool:
        return self.size == self.ring.cardinality

    def issubset(self, other: IdealSet) -> bool:
        return self.bits & ~other.bits == 0

    def __le__(self, other: IdealSet) -> bool:
        return self.issubset(other)

    def __and__(self, other: IdealSet) -> IdealSet:
        return IdealSet(self.ring, self.bits & other.bits)

    def __repr__(self) -> str:
        if self.size <= 8:
            return f"IdealSet({self.members})"
        return f"IdealSet(<{self.size} elements of {self.ring.name}>)"


def from_mask(ring: FiniteRing, mask, generators=()) -> IdealSet:
    return IdealSet(ring, mask_to_bits(mask), tuple(generators))


def additive_closure(ring: FiniteRing, idx) -> np.ndarray:
    """Mask of the additive subgroup generated by the given element indices."""
    t = ring.tables
    mask = np.zeros(t.n, dtype=bool)
    mask[t.zero] = True
    members = np.array([t.zero], dtype=np.int64)
    for x in np.unique(np.asarray(idx, dtype=np.int64)):
        if mask[x]:
            continue
        cyc = [t.zero]
        y = int(x)
        while y != t.zero:
            cyc.append(y)
            y = int(t.add[y, x])
        members = np.unique(t.add[np.ix_(members, np.array(cyc))])
        mask[members] = True
    return mask


def _two_sided_products(ring: FiniteRing, a: int) -> np.ndarray:
    t = ring.tables
    left = np.unique(t.mul[:, a])
    return np.unique(t.mul[left, :])


def ideal_closure(ring: FiniteRing, gens) -> IdealSet:
    """Smallest two-sided ideal containing ``gens`` (labels)."""
    gens = list(gens)
    t = ring.tables
    pool = [np.array([t.zero])]
    for g in gens:
        pool.append(_two_sided_products(ring, ring.index(g)))
    mask = additive_closure(ring, np.concatenate(pool))
    if mask.sum() > ring.cardinality:
        raise CapExceeded("ideal closure overflowed the ring")
    return from_mask(ring, mask, gens)


def ideal_closure_idx(ring: FiniteRing, idx) -> IdealSet:
    return ideal_closure(ring, [ring.label(i) for i in np.unique(np.asarray(idx, dtype=np.int64))])


def is_two_sided_ideal(ring: FiniteRing, mask) -> bool:
    t = ring.tables
    mask = np.asarray(mask, dtype=bool)
    if not mask[t.zero]:
        return False
    m = np.flatnonzero(mask)
    if not mask[t.add[np.ix_(m, m)]].all() or not mask[t.neg[m]].all():
        return False
    return bool(mask[t.mul[:, m]].all() and mask[t.mul[m, :]].all())


def make_ideal(ring: FiniteRing, members, generators=()) -> IdealSet:
    mask = np.zeros(ring.cardinality, dtype=bool)
    mask[ring.indices(members)] = True
    if not is_two_sided_ideal(ring, mask):
        raise NotAnIdeal(f"given set of {int(mask.sum())} elements is not a two-sided ideal of {ring.name}")
    return from_mask(ring, mask, generators)


def zero_ideal(ring: FiniteRing) -> IdealSet:
    return IdealSet(ring, 1 << ring.tables.zero)


def whole_ideal(ring: FiniteRing) -> IdealSet:
    return IdealSet(ring, (1 << ring.cardinality) - 1)


def ideal_sum(a: IdealSet, b: IdealSet) -> IdealSet:
    ring = a.ring
    if a.issubset(b):
        return b
    if b.issubset(a):
        return a
    t = ring.tables
    s = np.unique(t.add[np.ix_(a.indices, b.indices)])
    mask = np.zeros(t.n, dtype=bool)
    mask[s] = True
    return from_mask(ring, mask)


def ideal_intersection(a: IdealSet, b: IdealSet) -> IdealSet:
    return IdealSet(a.ring, a.bits & b.bits)


def ideal_product(a: IdealSet, b: IdealSet) -> IdealSet:
    """The ideal ``ab``: additive span of all products ``xy``."""
    t = a.ring.tables
    return from_mask(a.ring, additive_closure(a.ring, np.unique(t.mul[np.ix_(a.indices, b.indices)])))


def product_inside(a: IdealSet, b: IdealSet, p: IdealSet) -> bool:
    """Whether every product ``xy`` (x in a, y in b) lies in ``p``."""
    t = a.ring.tables
    return bool(p.mask[t.mul[np.ix_(a.indices, b.indices)]].all())


def intersect_all(ring: FiniteRing, ideals) -> IdealSet:
    bits = (1 << ring.cardinality) - 1
    for i in ideals:
        bits &= i.bits
    return IdealSet(ring, bits)


def _ideal_key(i: IdealSet):
    return (i.size, tuple(i.indices.tolist()))


def principal_ideals(ring: FiniteRing) -> list[IdealSet]:
    seen = {}
    covered = np.zeros(ring.cardinality, dtype=bool)
    for a in range(ring.cardinality):
        mask = additive_closure(ring, _two_sided_products(ring, a))
        bits = mask_to_bits(mask)
        if bits not in seen:
            seen[bits] = IdealSet(ring, bits, (ring.label(a),))
        covered |= mask
    return sorted(seen.values(), key=_ideal_key)


def enumerate_ideals(ring: FiniteRing, cap: int = LATTICE_CAP) -> list[IdealSet]:
    """All two-sided ideals, as sums of principal ideals, in canonical order."""
    if ring.cardinality > cap:
        raise CapExceeded(f"ideal lattice of {ring.name} ({ring.cardinality} elements) exceeds cap {cap}")
    principals = principal_ideals(ring)
    zero = zero_ideal(ring)
    found = {zero.bits: zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for i in frontier:
            for p in principals:
                if p.issubset(i):
                    continue
                j = ideal_sum(i, p)
                if j.bits not in found:
                    found[j.bits] = j
                    nxt.append(j)
        frontier = nxt
    return sorted(found.values(), key=_ideal_key)


# ---------------------------------------------------------------------------
# idempotents


def central_idempotents(ring: FiniteRing) -> list:
    if isinstance(ring, ProductRing):
        per = [a.idempotents() for a in ring._arith]
        return sorted((tuple(t) for t in itertools.product(*per)), key=ring.index)
    t = ring.tables
    n = t.n
    idem = t.mul[np.arange(n), np.arange(n)] == np.arange(n)
    central = (t.mul == t.mul.T).all(axis=1)
    return [ring.label(i) for i in np.flatnonzero(idem & central)]


def is_central_idempotent(ring: FiniteRing, e) -> bool:
    if ring.mul(e, e) != e:
        return False
    if isinstance(ring, ProductRing):
        return all(e[k] in ring._arith[k].idempotents() for k in range(len(ring.factors)))
    t = ring.tables
    i = ring.index(e)
    return bool((t.mul[i, :] == t.mul[:, i]).all())


def primitive_central_decomposition(ring: FiniteRing) -> list:
    """Orthogonal primitive central idempotents summing to one.

    Starts from ``[1]`` and splits any summand ``e`` by a central idempotent
    ``f`` with ``fe`` different from 0 and ``e``.
    """
    cent = central_idempotents(ring)
    zero = ring.zero
    parts = [ring.one]
    if ring.one == zero:
        return []
    done = []
    while parts:
        e = parts.pop(0)
        for f in cent:
            fe = ring.mul(f, e)
            if fe != zero and fe != e:
                parts[:0] = [fe, ring.sub(e, fe)]
                break
        else:
            done.append(e)
    return sorted(done, key=ring.index)


def idempotent_join(ring: FiniteRing, e, f):
    """Identity of the ideal generated by commuting idempotents ``e`` and ``f``."""
    return ring.sub(ring.add(e, f), ring.mul(e, f))


# ---------------------------------------------------------------------------
# derived rings


class CornerRing(TableRing):
    """The ideal ``eT`` of ``T`` for a central idempotent ``e``, a ring with identity ``e``."""

    def __init__(self, parent: FiniteRing, e):
        if not is_central_idempotent(parent, e):
            raise NotCentralIdempotent(f"{e!r} is not a central idempotent of {parent.name}")
        pt = parent.tables
        ei = parent.index(e)
        sub = np.flatnonzero(pt.mul[ei, :] == np.arange(pt.n))
        back = np.full(pt.n, -1, dtype=np.int64)
        back[sub] = np.arange(len(sub))
        self.parent = parent
        self.idempotent = e
        self.to_parent = sub
        self.from_parent = back
        super().__init__(
            [parent.label(i) for i in sub],
            back[pt.add[np.ix_(sub, sub)]],
            back[pt.mul[np.ix_(sub, sub)]],
            back[pt.neg[sub]],
            back[pt.zero],
            back[ei],
            name=f"e{list(e) if isinstance(e, tuple) else e}*({parent.name})",
        )


class QuotientRing(TableRing):
    """``R/I`` with each coset labelled by its least member."""

    def __init__(self, parent: FiniteRing, ideal: IdealSet):
        pt = parent.tables
        reps = pt.add[:, ideal.indices].min(axis=1)
        uniq = np.unique(reps)
        qidx = np.full(pt.n, -1, dtype=np.int64)
        qidx[uniq] = np.arange(len(uniq))
        proj = qidx[reps]
        self.parent = parent
        self.ideal = ideal
        self.projection_table = proj
        self.representatives = uniq
        super().__init__(
            [parent.label(i) for i in uniq],
            proj[pt.add[np.ix_(uniq, uniq)]],
            proj[pt.mul[np.ix_(uniq, uniq)]],
            proj[pt.neg[uniq]],
            proj[pt.zero],
            proj[pt.one],
            name=f"({parent.name})/I[{ideal.size}]",
        )

    def lift(self, q: int) -> int:
        return int(self.representatives[q])


@dataclass(frozen=True, eq=False)
class RingMorphism:
    """Map between finite rings given by an index table."""

    source: FiniteRing
    target: FiniteRing
    table: np.ndarray
    name: str = ""

    def __call__(self, label):
        return self.target.label(self.table[self.source.index(label)])

    @classmethod
    def from_function(cls, source, target, fn, name="") -> RingMorphism:
        table = np.array([target.index(fn(x)) for x in source.elements], dtype=np.int64)
        return cls(source, target, table, name)

    @classmethod
    def identity(cls, ring) -> RingMorphism:
        return cls(ring, ring, np.arange(ring.cardinality, dtype=np.int64), "id")

    def compose(self, other: RingMorphism) -> RingMorphism:
        """``self`` after ``other``."""
        return RingMorphism(other.source, self.target, self.table[other.table])

    def homomorphism_witness(self, samples: int = 10_000, seed: int = 0):
        """First pair ``(a, b)`` breaking additivity or multiplicativity, or None."""
        s, t = self.source, self.target
        f = self.table
        if s.cardinality <= TABLE_CAP and t.cardinality <= TABLE_CAP:
            st, tt = s.tables, t.tables
            bad = (f[st.add] != tt.add[np.ix_(f, f)]) | (f[st.mul] != tt.mul[np.ix_(f, f)])
            if bad.any():
                a, b = np.argwhere(bad)[0]
                return s.label(a), s.label(b)
            return None
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            a, b = (s.label(x) for x in rng.integers(0, s.cardinality, 2))
            if self(s.add(a, b)) != t.add(self(a), self(b)) or self(s.mul(a, b)) != t.mul(self(a), self(b)):
                return a, b
        return None

    def is_homomorphism(self) -> bool:
        return self.homomorphism_witness() is None

    def is_injective(self) -> bool:
        return len(np.unique(self.table)) == len(self.table)

    def is_bijective(self) -> bool:
        return self.source.cardinality == self.target.cardinality and self.is_injective()


def quotient_ring(ring: FiniteRing, ideal: IdealSet):
    """Return ``(R/I, projection)``."""
    if ideal.ring is not ring or not is_two_sided_ideal(ring, ideal.mask):
        raise NotAnIdeal("quotient requires a two-sided ideal of the same ring")
    q = QuotientRing(ring, ideal)
    return q, RingMorphism(ring, q, q.projection_table, "projection")


def _matrix_inverse(arith: _MatrixArith, m):
    for cand in arith.elements:
        if arith.mul(m, cand) == arith.one and arith.mul(cand, m) == arith.one:
            return cand
    return None


def factor_automorphism(ring: ProductRing, perm, conjugators=None) -> RingMorphism:
    """Automorphism ``x -> (c_k x_{perm[k]} c_k^-1)_k`` of a product ring.

    ``conjugators[k]`` is a unit of matrix factor ``k`` (or None for the
    identity); cyclic factors admit only the identity.
    """
    nf = len(ring.factors)
    perm = list(perm)
    if sorted(perm) != list(range(nf)):
        raise ValueError(f"{perm} is not a permutation of {nf} factors")
    for k, src in enumerate(perm):
        if ring.factors[src] != ring.factors[k]:
            raise ValueError(f"factor {src} cannot be moved onto non-isomorphic factor {k}")
    conjugators = list(conjugators) if conjugators is not None else [None] * nf
    pairs = []
    for k, c in enumerate(conjugators):
        if c is None:
            pairs.append(None)
            continue
        arith = ring._arith[k]
        if ring.factors[k].kind != "matrix":
            raise ValueError(f"factor {k} is cyclic; only matrix factors take a conjugator")
        c = tuple(tuple(r) for r in c)
        inv = _matrix_inverse(arith, c)
        if inv is None:
            raise ValueError(f"conjugator for factor {k} is not invertible")
        pairs.append((c, inv))

    def apply(x):
        out = []
        for k in range(nf):
            y = x[perm[k]]
            if pairs[k] is not None:
                c, ci = pairs[k]
                a = ring._arith[k]
                y = a.mul(a.mul(c, y), ci)
            out.append(y)
        return tuple(out)

    return RingMorphism.from_function(ring, ring, apply, name=f"perm{perm}")
