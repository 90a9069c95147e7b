import itertools

import numpy as np
import pytest

from tpsa.harness.fixtures import load_fixture
from tpsa.harness.generator import fixture_generator
from tpsa.paction import GlobalTwistedAction, make_finite_support, restrict_global
from tpsa.ringcore import FactorSpec, RingMorphism, factor_automorphism, ring_product

Z = FactorSpec.cyclic


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("TPSA_CACHE_DIR", str(tmp_path / "cache"))


def build_f1():
    T = ring_product([Z(2)] * 3)
    g = GlobalTwistedAction(T, factor_automorphism(T, [2, 0, 1]))
    return restrict_global(g, (1, 1, 0))


def build_f2():
    T = ring_product([Z(5)] * 3)
    g = GlobalTwistedAction(T, factor_automorphism(T, [2, 0, 1]), (2, 2, 2), "product")
    return restrict_global(g, (1, 1, 0))


def build_f3():
    R = ring_product([Z(2)] * 2)
    return make_finite_support(R, 1, {1: (1, 0), -1: (0, 1)}, {1: {(0, 0): (0, 0), (0, 1): (1, 0)}})


def build_f3n2():
    R = ring_product([Z(2)] * 2)
    return make_finite_support(R, 2, {1: (1, 0), -1: (0, 1), 2: (0, 0), -2: (0, 0)},
                               {1: {(0, 0): (0, 0), (0, 1): (1, 0)}, 2: {(0, 0): (0, 0)}})


def build_m2_identity():
    M = ring_product([FactorSpec.matrix(2, 2)])
    return restrict_global(GlobalTwistedAction(M, RingMorphism.identity(M)), M.one)


def generated(n, seed=0, kinds=None, pred=None):
    stream = fixture_generator(seed, presentations=kinds)
    if pred is not None:
        stream = (fx for fx in stream if pred(fx))
    return list(itertools.islice(stream, n))


@pytest.fixture(scope="session")
def f1():
    return load_fixture("f1")


@pytest.fixture(scope="session")
def f2():
    return load_fixture("f2")


@pytest.fixture(scope="session")
def f3():
    return load_fixture("f3")


# ---------------------------------------------------------------------------
# oracles written against labels only, sharing no code with the library


def alpha_inverse_label(action, i, a):
    R = action.ring
    hits = [x for x in R.elements if x in action.domain_ideal(-i) and action.alpha_label(i, x) == a]
    assert len(hits) == 1
    return hits[0]


def oracle_series_mul(action, f: dict, g: dict, prec: int) -> dict:
    """Multiply coefficient dicts ``{degree: label}`` by the monomial rule, dropping degrees >= prec."""
    R = action.ring
    inv = {}
    out = {}
    for (i, a), (j, b) in itertools.product(f.items(), g.items()):
        if i + j >= prec:
            continue
        if (i, a) not in inv:
            inv[i, a] = alpha_inverse_label(action, i, a)
        c = R.mul(action.alpha_label(i, R.mul(inv[i, a], b)), action.w_label(i, j))
        out[i + j] = R.add(out.get(i + j, R.zero), c)
    return {d: c for d, c in out.items() if c != R.zero}


def oracle_is_prime(mul: np.ndarray, inside: np.ndarray) -> bool:
    """``aRb`` is not inside the ideal for all ``a, b`` outside it."""
    out = np.flatnonzero(~inside)
    if not len(out):
        return False
    arb = mul[mul[out]][:, :, out]     # arb[a, r, b] = a r b
    return bool((~inside[arb]).any(axis=1).all())


def oracle_is_prime_ring(mul: np.ndarray, zero: int) -> bool:
    return oracle_is_prime(mul, np.arange(len(mul)) == zero)


def oracle_jacobson(mul: np.ndarray, add: np.ndarray, neg: np.ndarray, one: int) -> np.ndarray:
    """Mask of ``a`` with ``1 - r a`` a unit for every ``r`` (equals the prime radical of a finite ring)."""
    units = (mul == one).any(axis=1)
    ra = mul[:, :].T                   # ra[a, r] = r a
    return units[add[one][neg[ra]]].all(axis=1)
