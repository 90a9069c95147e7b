import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import build_f1, build_f2, build_f3, oracle_series_mul
from tpsa.errors import CoefficientOutsideDomainIdeal, DecompositionInvalid, HandleMismatch, NotFiniteSupport
from tpsa.harness.fixtures import load_fixture
from tpsa.ideals import alpha_invariant_ideals
from tpsa.paction import make_finite_support
from tpsa.ringcore import FactorSpec, ideal_closure, is_two_sided_ideal, ring_product, whole_ideal, zero_ideal
from tpsa.skewseries import (
    SeriesRing,
    ideal_extension,
    lemma31_divide,
    materialize_finite,
    morita_ring,
    quotient_iso_check,
    solve_decomposition,
)

F1, F2, F3 = build_f1(), build_f2(), build_f3()


def test_make_validates_domains():
    h = SeriesRing(F3, "power", 2)
    f = h.make({0: (1, 1), 1: (1, 0)})
    assert f.items() == {0: (1, 1), 1: (1, 0)}
    with pytest.raises(CoefficientOutsideDomainIdeal):
        SeriesRing(F3, "power", 8).make({1: (0, 1)})
    assert h.make({}).is_zero()
    with pytest.raises(ValueError):
        h.make({-1: (0, 1)})


def test_mixing_handles_rejected():
    a, b = SeriesRing(F3, "power", 4), SeriesRing(F3, "power", 4)
    with pytest.raises(HandleMismatch):
        a.mul(a.one(), b.one())


def test_f3_square_vanishes():
    h = SeriesRing(F3, "power", 8)
    m = h.monomial((1, 0), 1)
    assert (m * m).is_zero()


def test_f1_monomial_products():
    h = SeriesRing(F1, "power", 4)
    m = h.monomial(F1.idem_label(1), 1)
    # 1_1 1_2 = 0 in F1
    assert (m * m).is_zero()
    h = SeriesRing(F1, "laurent", 6)
    prod = h.monomial((0, 1, 0), 1) * h.monomial((1, 0, 0), 2)
    assert prod.items() == {3: (0, 1, 0)}
    prod = h.monomial((0, 1, 0), 1) * h.monomial((1, 0, 0), -1)
    assert prod.items() == {0: (0, 1, 0)}


def test_f2_twisted_products():
    h = SeriesRing(F2, "laurent", 6)
    assert (h.monomial((0, 1, 0), 1) * h.monomial((1, 0, 0), 2)).items() == {3: (0, 4, 0)}
    assert (h.monomial((0, 1, 0), 1) * h.monomial((1, 0, 0), -1)).items() == {0: (0, 3, 0)}


@pytest.mark.parametrize("act", [F1, F2, F3], ids=["F1", "F2", "F3"])
@pytest.mark.parametrize("flavor", ["power", "laurent"])
def test_identity_and_additive_laws(act, flavor):
    h = SeriesRing(act, flavor, 8)
    rng = np.random.default_rng(0)
    for _ in range(50):
        f = h.random(rng, lower=0 if flavor == "power" else -1)
        assert h.one() * f == f and f * h.one() == f
        assert (f + (-f)).is_zero()
        assert h.zero() + f == f


@pytest.mark.parametrize("act", [F1, F2, F3], ids=["F1", "F2", "F3"])
def test_mul_matches_monomial_oracle(act):
    h = SeriesRing(act, "laurent", 6)
    rng = np.random.default_rng(1)
    for _ in range(40):
        f, g = h.random(rng, lower=-2), h.random(rng, lower=-1)
        p = f * g
        assert p.items() == oracle_series_mul(act, f.items(), g.items(), p.prec)


@pytest.mark.parametrize("act", [F1, F2], ids=["F1", "F2"])
def test_coefficients_stay_in_domains(act):
    h = SeriesRing(act, "laurent", 8)
    rng = np.random.default_rng(2)
    R = act.ring
    for _ in range(50):
        p = h.random(rng, lower=-2) * h.random(rng, lower=-1)
        for d, c in p.items().items():
            assert R.mul(c, act.idem_label(d)) == c


@settings(max_examples=60, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.data())
def test_monomial_degree_law(i, j, data):
    h = SeriesRing(F2, "laurent", 8)
    a = data.draw(st.sampled_from(F2.domain_ideal(i).members))
    b = data.draw(st.sampled_from(F2.domain_ideal(j).members))
    p = h.monomial(a, i) * h.monomial(b, j)
    assert set(p.support()) <= {i + j}


def test_materialized_sizes():
    assert materialize_finite(SeriesRing(F3, "power", 2)).cardinality == 8
    assert materialize_finite(SeriesRing(F3, "laurent", 2)).cardinality == 16
    R = ring_product([FactorSpec.cyclic(3)])
    triv = make_finite_support(R, 0, {}, {})
    assert materialize_finite(SeriesRing(triv, "laurent", 1)).cardinality == 3
    with pytest.raises(NotFiniteSupport):
        materialize_finite(SeriesRing(F1, "power", 4))


@pytest.mark.parametrize("name", ["f3", "f3p", "f3n2"])
def test_materialized_table_agrees_with_series_mul(name):
    act = load_fixture(name).action
    for flavor in ("power", "laurent"):
        M = materialize_finite(SeriesRing(act, flavor, act.bound + 1))
        t = M.tables
        step = max(1, M.cardinality // 40)
        for x in range(0, M.cardinality, step):
            for y in range(0, M.cardinality, step):
                assert M.from_series(M.to_series(x) * M.to_series(y)) == t.mul[x, y]


def test_ideal_extension_examples():
    L = materialize_finite(SeriesRing(F3, "laurent", 2))
    assert ideal_extension(zero_ideal(F3.ring), L).is_zero()
    P = materialize_finite(SeriesRing(F3, "power", 2))
    assert ideal_extension(whole_ideal(F3.ring), P).is_whole()
    I = ideal_closure(F3.ring, [(0, 1)])
    E = ideal_extension(I, L)
    assert E.size == 4
    for f in (L.to_series(k) for k in E.indices):
        assert f.coeff(0) in ((0, 0), (0, 1)) and f.coeff(1) == (0, 0)
    # I is not alpha-invariant, so I<x> is only a right ideal: (1,0)x * (0,1) = (1,0)x
    t = L.tables
    assert E.mask[t.mul[E.indices, :]].all()
    assert not is_two_sided_ideal(L, E.mask)
    h = L.handle
    assert (h.monomial((1, 0), 1) * h.monomial((0, 1), 0)).items() == {1: (1, 0)}


def test_ideal_extension_of_invariant_ideals_is_two_sided():
    for name in ("f3p", "f3n2"):
        act = load_fixture(name).action
        for flavor in ("power", "laurent"):
            M = materialize_finite(SeriesRing(act, flavor, act.bound + 1))
            for I in alpha_invariant_ideals(act):
                assert is_two_sided_ideal(M, ideal_extension(I, M).mask)


def test_ideal_extension_predicate_for_periodic():
    h = SeriesRing(F1, "power", 4)
    pred = ideal_extension(zero_ideal(F1.ring), h)
    assert h.zero() in pred and h.one() not in pred


def test_lemma31_trivial_and_invalid():
    h = SeriesRing(F2, "power", 6)
    f = h.make({0: (1, 1, 0)})
    assert lemma31_divide(f, {}).items() == {0: (1, 1, 0)}
    f = h.make({0: (1, 0, 0), 1: (0, 1, 0)})
    with pytest.raises(DecompositionInvalid):
        solve_decomposition(f)
    with pytest.raises(DecompositionInvalid):
        lemma31_divide(f, {})


def test_lemma31_f2_random():
    """Invertible leading coefficient: the decomposition always exists."""
    h = SeriesRing(F2, "power", 8)
    rng = np.random.default_rng(5)
    for _ in range(30):
        v0 = (int(rng.integers(1, 5)), int(rng.integers(1, 5)), 0)
        f = h.random(rng) - h.make({0: h.random(rng).coeff(0)})
        f = h.make({**{d: c for d, c in f.items().items() if d > 0}, 0: v0})
        g = lemma31_divide(f, solve_decomposition(f, 0), 0)
        assert oracle_series_mul(F2, f.items(), g.items(), 8) == {0: v0}


@pytest.mark.parametrize("name", ["f1", "f3", "f3p"])
def test_quotient_iso(name):
    act = load_fixture(name).action
    for I in alpha_invariant_ideals(act):
        assert quotient_iso_check(act, I, samples=500, truncation=6).passed


def test_morita_ring():
    K = morita_ring(F1, 6)
    assert K.check(samples=2000, seed=0).passed
    rng = np.random.default_rng(3)
    for _ in range(20):
        X = K.random_element(rng)
        assert K.eq(K.mul(K.identity(), X), X) and K.eq(K.mul(X, K.identity()), X)
        assert K.eq(K.add(K.zero(), X), X)
        assert K.well_formed(X)
