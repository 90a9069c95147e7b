import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from conftest import build_f1, build_f2, build_f3, build_m2_identity
from tpsa.errors import MalformedTable, NotAlphaInvariant, NotCentralIdempotent
from tpsa.harness.fixtures import bundled_names, load_fixture
from tpsa.ideals import alpha_invariant_ideals
from tpsa.paction import (
    GlobalTwistedAction,
    check_axioms,
    enveloping_via_decomposition,
    is_finite_type,
    make_finite_support,
    quotient_action,
    restrict_global,
    verify_enveloping,
)
from tpsa.ringcore import (FactorSpec, RingMorphism, central_idempotents, factor_automorphism, ideal_closure,
                           ring_product, whole_ideal, zero_ideal)

Z = FactorSpec.cyclic


def test_f1_idempotents_and_period():
    f1 = build_f1()
    assert [f1.idem_label(i) for i in range(-2, 3)] == [(0, 1, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (1, 0, 0)]
    assert f1.period == 3
    assert check_axioms(f1).passed


def test_f3_valid_and_alpha_values():
    f3 = build_f3()
    assert check_axioms(f3).passed
    assert f3.alpha_label(1, (0, 1)) == (1, 0)
    assert f3.alpha_label(-1, (1, 0)) == (0, 1)
    # outside the support everything is zero
    assert f3.idem_label(2) == (0, 0) and f3.idem_label(-5) == (0, 0)


def test_trivial_partial_action():
    R = ring_product([Z(3)])
    act = make_finite_support(R, 0, {}, {})
    assert check_axioms(act).passed
    assert act.idem_label(1) == (0,)


def test_f2_twist_values():
    f2 = build_f2()
    assert f2.w_label(1, 2) == (0, 4, 0)
    assert f2.w_label(1, -1) == (0, 3, 0)
    assert check_axioms(f2).passed


def test_finite_support_incomplete_alpha_rejected():
    R = ring_product([Z(2)] * 2)
    with pytest.raises(MalformedTable):
        make_finite_support(R, 1, {1: (1, 0), -1: (0, 1)}, {1: {(0, 0): (0, 0)}})


def test_restriction_needs_central_idempotent():
    M = ring_product([FactorSpec.matrix(2, 2)])
    g = GlobalTwistedAction(M, RingMorphism.identity(M))
    with pytest.raises(NotCentralIdempotent):
        restrict_global(g, (((1, 0), (0, 0)),))


def test_mutation_w22_is_vacuous_but_w00_is_caught():
    f1 = build_f1()
    # D_2 D_4 = 0 in F1, so this override changes nothing
    assert check_axioms(f1.with_overrides(w={(2, 2): (0, 0, 0)})).passed
    rep = check_axioms(f1.with_overrides(w={(0, 0): (0, 0, 0)}))
    assert not rep.passed
    assert {"def", "iv"} <= {w["axiom"] for w in rep.witnesses}


def test_finite_type_examples():
    assert is_finite_type(build_f1()).witness == (0, 1)
    assert not is_finite_type(build_f3())
    assert is_finite_type(build_m2_identity()).witness == (0,)


@pytest.mark.parametrize("name", ["f1", "f2", "f4", "trivial_global", "m2_conj", "z4_global"])
def test_finite_type_witness_covers(name):
    act = load_fixture(name).action
    res = is_finite_type(act)
    assert res.holds
    R = act.ring
    for j in range(act.domain_period):
        gens = [act.idem_label(j + s) for s in res.witness]
        assert ideal_closure(R, gens).is_whole()


def test_verify_enveloping_examples():
    f1 = build_f1()
    g = f1.global_action
    assert verify_enveloping(f1, g, f1.inclusion()).passed
    ident = GlobalTwistedAction(g.ring, RingMorphism.identity(g.ring))
    rep = verify_enveloping(f1, ident, f1.inclusion())
    assert not rep.passed
    assert rep.details["conditions"]["ii"] is False
    m2 = build_m2_identity()
    assert verify_enveloping(m2, m2.global_action, m2.inclusion()).passed


def test_enveloping_via_decomposition():
    rep = enveloping_via_decomposition(build_f1())
    assert rep.passed and rep.details["summands"] == 2
    rep = enveloping_via_decomposition(build_f3())
    assert rep.status == "reported"
    assert rep.details["conclusion"].startswith("theorem hypotheses unmet")
    assert enveloping_via_decomposition(build_m2_identity()).passed


def test_quotient_action_examples():
    f1 = build_f1()
    q0 = quotient_action(f1, zero_ideal(f1.ring))
    assert q0.ring.cardinality == f1.ring.cardinality
    qR = quotient_action(f1, whole_ideal(f1.ring))
    assert qR.ring.cardinality == 1
    assert check_axioms(q0).passed and check_axioms(qR).passed
    f3 = build_f3()
    with pytest.raises(NotAlphaInvariant):
        quotient_action(f3, ideal_closure(f3.ring, [(1, 0)]))


@pytest.mark.parametrize("name", bundled_names())
def test_quotient_actions_pass_axioms(name):
    act = load_fixture(name).action
    for I in alpha_invariant_ideals(act):
        assert check_axioms(quotient_action(act, I)).passed


@pytest.mark.parametrize("name", bundled_names())
def test_accessor_consistency(name):
    act = load_fixture(name).action
    R = act.ring
    if act.periodic:
        m = act.domain_period
        for i in range(-m, m):
            assert act.idem(i + m) == act.idem(i)
    else:
        N = act.bound
        for i in (N + 1, N + 3, -N - 1):
            assert act.idem_label(i) == R.zero
            assert act.w_label(i, 0) == R.zero
            assert all(act.alpha_label(i, a) == R.zero for a in R.elements)


@pytest.mark.parametrize("name", bundled_names())
def test_inverse_up_to_conjugation(name):
    """alpha_i alpha_-i (a) = w_{i,-i} a w_{i,-i}^-1 on D_i."""
    act = load_fixture(name).action
    R = act.ring
    window = range(-2, 3) if act.periodic else range(-act.bound, act.bound + 1)
    for i in window:
        e = act.idem_label(i)
        wv = act.w_label(i, -i)
        winv = next(v for v in act.domain_ideal(i).members if R.mul(wv, v) == e)
        for a in act.domain_ideal(i).members:
            assert act.alpha_label(i, act.alpha_label(-i, a)) == R.mul(R.mul(wv, a), winv)


def _units(m):
    return [u for u in range(1, m) if math.gcd(u, m) == 1]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(1, 3), st.data())
def test_restrictions_satisfy_axioms(m, copies, data):
    T = ring_product([Z(m)] * copies)
    shift = data.draw(st.integers(0, copies - 1))
    beta = factor_automorphism(T, [(k + shift) % copies for k in range(copies)])
    lam = data.draw(st.sampled_from(_units(m)))
    g = GlobalTwistedAction(T, beta, (lam,) * copies, "product")
    e = data.draw(st.sampled_from(central_idempotents(T)))
    assert check_axioms(restrict_global(g, e)).passed


def test_mutations_each_axiom():
    f1, f2 = build_f1(), build_f2()
    swap = {(0, 0, 0): (0, 0, 0), (1, 0, 0): (0, 1, 0), (0, 1, 0): (1, 0, 0), (1, 1, 0): (1, 1, 0)}
    found = {w["axiom"] for w in check_axioms(f1.with_overrides(alpha={0: swap})).witnesses}
    assert "i" in found
    found = {w["axiom"] for w in check_axioms(f2.with_overrides(w={(1, 2): (0, 1, 0)})).witnesses}
    assert found == {"v"}
    for i, j in itertools.product(range(3), repeat=2):
        assert f2.w_label(i, j) == f2.ring.mul(f2.w_label(i, j), f2.idem_label(i))
