import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tpsa.errors import CapExceeded, NotAnIdeal
from tpsa.ringcore import (
    FactorSpec,
    additive_closure,
    central_idempotents,
    enumerate_ideals,
    from_mask,
    ideal_closure,
    ideal_intersection,
    ideal_product,
    ideal_sum,
    is_two_sided_ideal,
    primitive_central_decomposition,
    quotient_ring,
    ring_product,
    zero_ideal,
)

Z = FactorSpec.cyclic
M2 = FactorSpec.matrix(2, 2)


def ring(*moduli):
    return ring_product([Z(m) for m in moduli])


def brute_ideals(R):
    """All subsets closed under +, - and two-sided multiplication (small rings only)."""
    t = R.tables
    n = t.n
    out = []
    for bits in range(1 << n):
        mask = np.array([(bits >> k) & 1 for k in range(n)], dtype=bool)
        if not mask[t.zero]:
            continue
        idx = np.flatnonzero(mask)
        if not mask[t.add[np.ix_(idx, idx)]].all():
            continue
        if not mask[t.mul[idx, :]].all() or not mask[t.mul[:, idx]].all():
            continue
        out.append(bits)
    return sorted(out)


def test_cardinalities():
    assert ring(2, 2, 2).cardinality == 8
    assert ring(5, 5, 5).cardinality == 125
    assert ring_product([M2]).cardinality == 16


def test_bad_factor_specs():
    with pytest.raises(ValueError):
        Z(1)
    with pytest.raises(ValueError):
        FactorSpec.matrix(2, 4)


def test_ring_cap():
    with pytest.raises(CapExceeded):
        ring_product([Z(5)] * 8, cap=1000)


@pytest.mark.parametrize("R", [ring(2, 2), ring(4), ring(6), ring(2, 3), ring_product([M2])],
                         ids=["Z2xZ2", "Z4", "Z6", "Z2xZ3", "M2"])
def test_ring_axioms_on_all_triples(R):
    t = R.tables
    a = np.arange(t.n)
    A, B, C = np.meshgrid(a, a, a, indexing="ij")
    assert (t.mul[t.mul[A, B], C] == t.mul[A, t.mul[B, C]]).all()
    assert (t.mul[A, t.add[B, C]] == t.add[t.mul[A, B], t.mul[A, C]]).all()
    assert (t.mul[t.add[A, B], C] == t.add[t.mul[A, C], t.mul[B, C]]).all()
    assert (t.add == t.add.T).all()
    assert (t.mul[t.one] == a).all() and (t.mul[:, t.one] == a).all()
    assert (t.add[a, t.neg] == t.zero).all()


def test_matrix_multiplication_matches_numpy():
    R = ring_product([M2])
    for x, y in itertools.product(R.elements, repeat=2):
        want = (np.array(x[0]) @ np.array(y[0])) % 2
        assert np.array_equal(np.array(R.mul(x, y)[0]), want)


def test_central_idempotents_examples():
    assert sorted(central_idempotents(ring(2, 2))) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    M = ring_product([M2])
    assert sorted(central_idempotents(M)) == sorted([M.zero, M.one])
    assert sorted(central_idempotents(ring(4))) == [(0,), (1,)]


@pytest.mark.parametrize("R", [ring(2, 2, 2), ring(6), ring(4, 3), ring_product([M2, Z(2)])])
def test_central_idempotents_closed(R):
    E = set(central_idempotents(R))
    for e in E:
        assert R.sub(R.one, e) in E
        for f in E:
            assert R.mul(e, f) in E


def test_primitive_decomposition_examples():
    assert sorted(primitive_central_decomposition(ring(2, 2, 2))) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    M = ring_product([M2])
    assert primitive_central_decomposition(M) == [M.one]
    assert sorted(primitive_central_decomposition(ring(6))) == [(3,), (4,)]


@pytest.mark.parametrize("R", [ring(6), ring(2, 4, 3), ring_product([M2, Z(3)]), ring(30)])
def test_primitive_decomposition_properties(R):
    parts = primitive_central_decomposition(R)
    total = R.zero
    for e, f in itertools.combinations(parts, 2):
        assert R.mul(e, f) == R.zero
    for e in parts:
        total = R.add(total, e)
        # e R has exactly two central idempotents, 0 and e
        inside = [c for c in central_idempotents(R) if R.mul(c, e) == c]
        assert sorted(inside) == sorted([R.zero, e])
    assert total == R.one


def test_ideal_closure_examples():
    assert ideal_closure(ring(2, 2), [(1, 0)]).members == [(0, 0), (1, 0)]
    assert ideal_closure(ring(4), [(2,)]).members == [(0,), (2,)]
    R = ring(3, 2)
    assert ideal_closure(R, []).members == [R.zero]


def test_enumerate_ideals_counts():
    assert len(enumerate_ideals(ring(2, 2))) == 4
    assert [I.members for I in enumerate_ideals(ring(4))] == [[(0,)], [(0,), (2,)], [(0,), (1,), (2,), (3,)]]
    assert len(enumerate_ideals(ring_product([M2]))) == 2


@pytest.mark.parametrize("R", [ring(2, 2), ring(4), ring(6), ring(2, 4), ring(8), ring(3, 3)])
def test_enumerate_ideals_matches_subset_oracle(R):
    assert sorted(I.bits for I in enumerate_ideals(R)) == brute_ideals(R)


@pytest.mark.parametrize("R", [ring(2, 4), ring(4, 3), ring_product([M2, Z(2)])])
def test_ideal_lattice_closed(R):
    L = enumerate_ideals(R)
    keys = {I.bits for I in L}
    for a, b in itertools.combinations_with_replacement(L, 2):
        assert ideal_sum(a, b).bits in keys
        assert ideal_intersection(a, b).bits in keys
        assert ideal_product(a, b).issubset(ideal_intersection(a, b))


def test_quotient_examples():
    Z4 = ring(4)
    Q, pi = quotient_ring(Z4, ideal_closure(Z4, [(2,)]))
    assert Q.cardinality == 2
    assert pi.table[Z4.index((3,))] == pi.table[Z4.index((1,))]
    R = ring(2, 2)
    Q2, _ = quotient_ring(R, ideal_closure(R, [(1, 0)]))
    assert Q2.cardinality == 2
    Q0, _ = quotient_ring(R, zero_ideal(R))
    assert Q0.cardinality == R.cardinality


@pytest.mark.parametrize("R", [ring(4, 2), ring(6), ring_product([M2, Z(4)])])
def test_quotient_projection_is_homomorphism(R):
    for I in enumerate_ideals(R):
        Q, pi = quotient_ring(R, I)
        p = pi.table
        t, q = R.tables, Q.tables
        assert (p[t.add] == q.add[p[:, None], p[None, :]]).all()
        assert (p[t.mul] == q.mul[p[:, None], p[None, :]]).all()
        assert np.array_equal(p == q.zero, I.mask)


def test_quotient_rejects_non_ideal():
    R = ring_product([M2])
    mask = np.zeros(R.cardinality, dtype=bool)
    mask[[R.tables.zero, R.tables.one]] = True
    assert not is_two_sided_ideal(R, mask)
    with pytest.raises(NotAnIdeal):
        quotient_ring(R, from_mask(R, mask))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([2, 3, 4, 5, 6]), min_size=1, max_size=3), st.data())
def test_additive_closure_is_subgroup(moduli, data):
    R = ring(*moduli)
    gens = data.draw(st.lists(st.integers(0, R.cardinality - 1), max_size=3))
    mask = additive_closure(R, gens)
    idx = np.flatnonzero(mask)
    t = R.tables
    assert mask[t.zero]
    assert mask[t.add[np.ix_(idx, idx)]].all()
    assert all(mask[g] for g in gens)
