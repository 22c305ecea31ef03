import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from lefschetz_quartic.errors import FormViolation, NeverCloses
from lefschetz_quartic.symplectic import (
    SP6_F2_ORDER, SpMatrix, generation_mod2, ordered_product, pairing, primitivity,
    standard_form, transvection, verify_relation,
)

J4 = standard_form(2)
J6 = standard_form(3)
vec6 = st.lists(st.integers(-3, 3), min_size=6, max_size=6)


@settings(max_examples=50)
@given(vec6)
def test_transvection_symplectic(c):
    T = transvection(c, J6)
    assert np.array_equal(T.entries.T @ J6 @ T.entries, J6)


@settings(max_examples=50)
@given(vec6)
def test_transvection_sign_insensitive(c):
    assert transvection(c, J6) == transvection([-x for x in c], J6)
    assert (transvection(c, J6) @ transvection(c, J6, -1)).is_identity()


@settings(max_examples=50)
@given(vec6, vec6)
def test_transvection_action(c, x):
    T = transvection(c, J6)
    assert np.array_equal(T.apply(x), np.array(x) + pairing(x, c, J6) * np.array(c))


def test_form_violation():
    with pytest.raises(FormViolation):
        SpMatrix(np.diag([2, 1, 1, 1]), J4)


def test_primitivity():
    assert primitivity([0, 2, 3, 0])
    assert not primitivity([0, 2, 4, 0])


def test_braid_relation_of_twists():
    # a, b meeting once: T_a T_b T_a = T_b T_a T_b
    a, b = [1, 0, 0, 0], [0, 0, 1, 0]
    assert pairing(a, b, J4) == 1
    Ta, Tb = transvection(a, J4), transvection(b, J4)
    assert Ta @ Tb @ Ta == Tb @ Ta @ Tb


def test_relation_failure_raises():
    with pytest.raises(NeverCloses):
        verify_relation([[1, 0, 0, 0]], J4)


def test_relation_closes_on_torus_chain():
    # (T_b T_a)^6 = 1 on the torus for curves meeting once
    a, b = [1, 0], [0, 1]
    J = standard_form(1)
    rep = verify_relation([a, b] * 6, J)
    assert rep.product_is_identity and rep.rotation_ok


def test_single_transvection_order_two():
    assert generation_mod2([[1, 0, 0, 0]], J4) == 2


def test_commuting_pair_order_four():
    assert generation_mod2([[1, 0, 0, 0], [0, 1, 0, 0]], J4) == 4


def _perm_oracle(classes, J):
    """Order through the action on the nonzero vectors of F_2^n."""
    n = len(J)
    vecs = [np.array([(k >> i) & 1 for i in range(n)]) for k in range(1, 2 ** n)]
    index = {tuple(v): i for i, v in enumerate(vecs)}
    gens = []
    for c in classes:
        c = np.array(c) % 2
        img = [index[tuple((v + (v @ J @ c) * c) % 2)] for v in vecs]
        gens.append(Permutation(img))
    return PermutationGroup(gens).order()


@settings(max_examples=15, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=4, max_size=4).filter(any), min_size=1, max_size=4))
def test_mod2_order_matches_permutation_group(classes):
    assert generation_mod2(classes, J4) == _perm_oracle(classes, J4)


def test_sp6_order():
    assert SP6_F2_ORDER == 1451520


@pytest.mark.slow
def test_pencil_relation(model):
    classes = [c.coords for c in model.classes]
    rep = model.relation
    assert rep.product_is_identity and rep.rotation_ok
    P, _ = ordered_product(classes, model.homology.J, rep.sign_convention_used)
    assert P.is_identity()


@pytest.mark.slow
def test_pencil_mod2_order(model):
    assert model.mod2_order == SP6_F2_ORDER
