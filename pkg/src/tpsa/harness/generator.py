"""Deterministic stream of random fixtures, filtered through the axiom check."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..errors import CapExceeded, SchemaError
from ..paction import check_axioms
from ..ringcore import FactorSpec, central_idempotents, ring_product
from .fixtures import fixture_from_dict

CYCLIC_MODULI = (2, 3, 4, 5)
M2 = {"kind": "matrix", "size": 2, "prime": 2}
UNIPOTENT = [[1, 1], [0, 1]]


@dataclass
class GeneratorCaps:
    max_ring: int = 256
    max_materialized: int = 4096
    max_bound: int = 3
    allow_matrix: bool = True
    presentations: tuple = ("restricted_global", "finite_support")


@dataclass
class GeneratorStats:
    produced: int = 0
    rejected: Counter = field(default_factory=Counter)

    def to_json(self):
        return {"produced": self.produced, "rejected": dict(sorted(self.rejected.items()))}


def _cyclic(m):
    return {"kind": "cyclic", "modulus": m}


def _units(m):
    return [u for u in range(1, m) if math.gcd(u, m) == 1]


def _listify(x):
    return [_listify(v) for v in x] if isinstance(x, (tuple, list)) else x


def _zero(f):
    return 0 if f["kind"] == "cyclic" else [[0, 0], [0, 0]]


def _random_global(rng, caps: GeneratorCaps, name):
    palette = [_cyclic(m) for m in CYCLIC_MODULI] + ([M2] if caps.allow_matrix else [])
    while True:
        base = palette[rng.integers(0, len(palette))]
        copies = int(rng.integers(1, 4))
        extra = palette[rng.integers(0, len(palette))] if rng.random() < 0.3 else None
        factors = [base] * copies + ([extra] if extra else [])
        size = math.prod(FactorSpec(**f).cardinality for f in factors)
        if size <= caps.max_ring:
            break
    # permute the identical copies cyclically, leave the extra factor fixed
    shift = int(rng.integers(0, copies))
    perm = [(k + shift) % copies for k in range(copies)] + ([copies] if extra else [])
    conj = [UNIPOTENT if f["kind"] == "matrix" and rng.random() < 0.5 else None for f in factors]
    data = {"name": name, "presentation": "restricted_global", "ring": {"factors": factors},
            "automorphism": {"permutation": perm}}
    if any(c is not None for c in conj):
        data["automorphism"]["conjugators"] = conj
    if all(f["kind"] == "cyclic" for f in factors) and rng.random() < 0.5:
        lam = int(rng.choice(_units(base["modulus"]))) if base["kind"] == "cyclic" else 1
        coords = [lam] * copies + ([1] if extra else [])
        data["cocycle"] = {"kind": "product", "lambda": coords}
    R = ring_product([FactorSpec(**f) for f in factors])
    idems = [e for e in central_idempotents(R) if e != R.zero]
    e = idems[int(rng.integers(0, len(idems)))]
    data["e"] = _listify(e)
    return data


def _random_finite(rng, caps: GeneratorCaps, name):
    """Restriction of a factor shift on an infinite product to a finite set of positions.

    Positions ``J`` index copies of one factor; ``D_i`` collects positions
    ``j`` in ``J`` with ``j - i`` in ``J`` and ``alpha_i`` moves coordinate
    ``j - i`` to ``j``.  Twists are ``lambda^(ij)`` for a scalar unit, or,
    to exercise the rejection path, independent random units per position.
    """
    palette = [_cyclic(m) for m in CYCLIC_MODULI] + ([M2] if caps.allow_matrix else [])
    f = palette[rng.integers(0, len(palette))]
    width = int(rng.integers(1, caps.max_bound + 1))
    J = sorted({0, width} | {j for j in range(1, width) if rng.random() < 0.5})
    J = [j for j in J if j <= caps.max_bound]
    n = len(J)
    bound = max(J) - min(J)
    factors = [f] * n
    pos = {j: k for k, j in enumerate(J)}

    def indicator(S):
        one = 1 if f["kind"] == "cyclic" else [[1, 0], [0, 1]]
        return [one if J[k] in S else _zero(f) for k in range(n)]

    dom = {i: {j for j in J if j - i in pos} for i in range(-bound, bound + 1)}
    idempotents = {str(i): indicator(dom[i]) for i in range(-bound, bound + 1) if i != 0}
    # elements of one factor
    if f["kind"] == "cyclic":
        elems = list(range(f["modulus"]))
    else:
        elems = [[[a, b], [c, d]] for a, b, c, d in itertools.product(range(2), repeat=4)]
    alpha = {}
    for i in range(1, bound + 1):
        src = sorted(dom[-i])
        pairs = []
        for vals in itertools.product(elems, repeat=len(src)):
            arg = [_zero(f)] * n
            out = [_zero(f)] * n
            for j, v in zip(src, vals):
                arg[pos[j]] = v
                out[pos[j + i]] = v
            pairs.append([arg, out])
        alpha[str(i)] = pairs
    data = {"name": name, "presentation": "finite_support", "ring": {"factors": factors},
            "bound": bound, "idempotents": idempotents, "alpha": alpha}
    if f["kind"] == "cyclic" and len(_units(f["modulus"])) > 1 and rng.random() < 0.5:
        units = _units(f["modulus"])
        per_position = rng.random() < 0.3
        lam = {j: int(rng.choice(units)) for j in J} if per_position else dict.fromkeys(J, int(rng.choice(units)))
        w = []
        for i, j in itertools.product(range(-bound, bound + 1), repeat=2):
            if abs(i + j) > bound:
                continue
            support = dom[i] & dom[i + j]
            if not support:
                continue
            m = f["modulus"]
            value = [pow(lam[p], i * j, m) if p in support else 0 for p in J]
            w.append({"i": i, "j": j, "value": value})
        data["w"] = w
    return data


def _materialized_sizes(action):
    sizes = {}
    for flavor, lo in (("power", 0), ("laurent", -action.bound)):
        sizes[flavor] = math.prod(len(action.domain_indices(d)) for d in range(lo, action.bound + 1))
    return sizes


def fixture_generator(seed: int = 0, caps: GeneratorCaps | None = None, stats: GeneratorStats | None = None,
                      presentations=None):
    """Infinite deterministic stream of fixtures that pass the axiom check.

    ``stats`` (if given) is updated in place with rejection counts by reason.
    """
    caps = caps or GeneratorCaps()
    kinds = tuple(presentations or caps.presentations)
    stats = stats if stats is not None else GeneratorStats()
    rng = np.random.default_rng(seed)
    for k in itertools.count():
        kind = kinds[int(rng.integers(0, len(kinds)))]
        name = f"gen{seed}-{k}"
        data = _random_global(rng, caps, name) if kind == "restricted_global" else _random_finite(rng, caps, name)
        try:
            fx = fixture_from_dict(data)
        except (SchemaError, CapExceeded) as exc:
            stats.rejected[type(exc).__name__] += 1
            continue
        if fx.action.ring.cardinality > caps.max_ring:
            stats.rejected["ring_cap"] += 1
            continue
        if kind == "finite_support" and max(_materialized_sizes(fx.action).values()) > caps.max_materialized:
            stats.rejected["materialized_cap"] += 1
            continue
        rep = check_axioms(fx.action, name)
        if not rep.passed:
            stats.rejected["axioms"] += 1
            continue
        stats.produced += 1
        yield fx
