import itertools

import numpy as np
import pytest

from conftest import build_f1, build_f3, oracle_is_prime, oracle_jacobson
from tpsa import ideals
from tpsa.errors import NotAlphaInvariant, NotProper
from tpsa.harness.fixtures import bundled_names, load_fixture
from tpsa.ringcore import FactorSpec, enumerate_ideals, ideal_closure, ring_product, whole_ideal, zero_ideal
from tpsa.skewseries import SeriesRing, contraction, materialize_finite

Z = FactorSpec.cyclic


def ring(*moduli):
    return ring_product([Z(m) for m in moduli])


def test_prime_examples():
    R = ring(2, 2)
    assert ideals.is_prime_ideal(R, ideal_closure(R, [(1, 0)]))
    assert not ideals.is_prime_ideal(R, zero_ideal(R))
    Z4 = ring(4)
    assert ideals.is_prime_ideal(Z4, ideal_closure(Z4, [(2,)]))


@pytest.mark.parametrize("R", [ring(2, 2), ring(4), ring(12), ring(2, 9), ring_product([FactorSpec.matrix(2, 2)])])
def test_prime_ideals_match_oracle(R):
    want = {I.bits for I in enumerate_ideals(R) if oracle_is_prime(R.tables.mul, I.mask)}
    assert {P.bits for P in ideals.prime_ideals(R)} == want


@pytest.mark.parametrize("R", [ring(4), ring(8, 3), ring(2, 4), ring_product([FactorSpec.matrix(2, 2), Z(4)])])
def test_prime_radical_is_jacobson(R):
    t = R.tables
    assert np.array_equal(ideals.prime_radical(R).mask, oracle_jacobson(t.mul, t.add, t.neg, t.one))


def test_f3_alpha_ideal_not_invariant():
    f3 = build_f3()
    S = ideal_closure(f3.ring, [(1, 0)])
    assert ideals.is_alpha_ideal(f3, S)
    assert not ideals.is_alpha_invariant(f3, S)
    assert ideals.alpha_invariance_witness(f3, S) is not None
    for T in (zero_ideal(f3.ring), whole_ideal(f3.ring)):
        assert ideals.is_alpha_ideal(f3, T) and ideals.is_alpha_invariant(f3, T)


def test_alpha_invariant_closure():
    f3 = build_f3()
    assert ideals.alpha_invariant_closure(f3, (1, 0)).is_whole()
    assert ideals.alpha_invariant_closure(f3, (0, 0)).is_zero()
    f1 = build_f1()
    J = ideals.alpha_invariant_closure(f1, (1, 0, 0))
    assert ideals.is_alpha_invariant(f1, J)


def test_f3_prime_divergence():
    f3 = build_f3()
    Z0 = zero_ideal(f3.ring)
    assert ideals.is_alpha_prime(f3, Z0)
    assert not ideals.is_strongly_alpha_prime(f3, Z0)
    assert ideals.strongly_alpha_prime_witness(f3, Z0) == ((0, 1), (1, 0))


def test_alpha_prime_rejections():
    f1 = build_f1()
    with pytest.raises(NotProper):
        ideals.is_alpha_prime(f1, whole_ideal(f1.ring))
    f3 = build_f3()
    with pytest.raises(NotAlphaInvariant):
        ideals.is_alpha_prime(f3, ideal_closure(f3.ring, [(1, 0)]))


def test_trivial_global_reduces_to_primality():
    act = load_fixture("trivial_global").action
    R = act.ring
    for P in ideals.alpha_invariant_ideals(act):
        if P.is_whole():
            continue
        assert ideals.is_alpha_prime(act, P) == ideals.is_prime_ideal(R, P)
        assert ideals.is_strongly_alpha_prime(act, P) == ideals.is_prime_ideal(R, P)
    assert not ideals.is_alpha_prime(act, zero_ideal(R))


def _oracle_alpha_prime(act, P, nonneg):
    """Element criterion evaluated label by label over the canonical window."""
    R = act.ring
    window = act.nonneg_window() if nonneg else act.single_window()
    outside = [a for a in R.elements if a not in P]
    for a, b in itertools.product(outside, repeat=2):
        lefts = [a] if nonneg else [act.alpha_label(j, R.mul(a, act.idem_label(-j))) for j in window]
        rights = [act.alpha_label(i, R.mul(b, act.idem_label(-i))) for i in window]
        if all(R.mul(R.mul(x, r), y) in P for x in lefts for y in rights for r in R.elements):
            return False
    return True


@pytest.mark.parametrize("name", ["f1", "f3", "f3n2", "trivial_global", "z4_global", "f4"])
def test_element_criteria_match_oracle(name):
    act = load_fixture(name).action
    for P in ideals.alpha_invariant_ideals(act):
        if P.is_whole():
            continue
        assert ideals.is_alpha_prime(act, P) == _oracle_alpha_prime(act, P, nonneg=False)
        assert ideals.is_strongly_alpha_prime(act, P) == _oracle_alpha_prime(act, P, nonneg=True)


def test_radicals_examples():
    b = ideals.radicals(build_f3())
    assert b.nil_alpha.is_zero() and b.nil_star.is_zero()
    assert b.n_alpha_strong.size > 1
    z4 = ideals.radicals(load_fixture("z4_global").action)
    assert z4.nil_star.members == [(0,), (2,)]
    triv = ideals.radicals(load_fixture("trivial_global").action)
    assert triv.nil_star.is_zero()


def test_laurent_formula_examples():
    f3 = build_f3()
    L = materialize_finite(SeriesRing(f3, "laurent", 2))
    assert ideals.laurent_radical_formula(f3, materialized=L).is_zero()
    z4 = load_fixture("z4_global").action
    pred = ideals.laurent_radical_formula(z4)
    h = SeriesRing(z4, "laurent", 4)
    assert h.make({-1: (2,), 2: (2,)}) in pred
    assert h.make({0: (1,)}) not in pred


def test_powerseries_formula_examples():
    z4 = load_fixture("z4_global").action
    out = ideals.powerseries_radical_formula(z4)
    assert out.label == "theorem-backed"
    assert out.constant.members == [(0,), (2,)]
    assert all(c.members == [(0,), (2,)] for c in out.coefficient.values())
    f3 = ideals.powerseries_radical_formula(build_f3())
    assert f3.label == "conjectural" and f3.ideal is not None


def test_powerseries_formula_matches_brute_force_on_f3():
    f3 = build_f3()
    M = materialize_finite(SeriesRing(f3, "power", 2))
    t = M.tables
    formula = ideals.powerseries_radical_formula(f3, materialized=M)
    assert np.array_equal(formula.ideal.mask, oracle_jacobson(t.mul, t.add, t.neg, t.one))


@pytest.mark.parametrize("name", ["f3", "f3p", "f3n2"])
def test_dichotomy_partitions_primes(name):
    act = load_fixture(name).action
    M = materialize_finite(SeriesRing(act, "power", act.bound + 1))
    for P in ideals.prime_ideals(M):
        b = ideals.dichotomy_branch(M, P)
        assert b["branch_i"] != b["branch_ii"]


@pytest.mark.parametrize("name", [n for n in bundled_names() if load_fixture(n).presentation == "finite_support"])
def test_laurent_prime_contractions_are_alpha_prime(name):
    act = load_fixture(name).action
    M = materialize_finite(SeriesRing(act, "laurent", act.bound + 1))
    for K in ideals.prime_ideals(M):
        assert ideals.is_alpha_prime(act, contraction(M, K))


def test_semiprime_ideal_witness():
    Z4 = ring(4)
    assert ideals.semiprime_ideal_witness(Z4, zero_ideal(Z4)) == (2,)
    R = ring(2, 3)
    assert ideals.semiprime_ideal_witness(R, zero_ideal(R)) is None
