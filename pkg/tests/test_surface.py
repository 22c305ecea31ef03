import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from lefschetz_quartic import surface
from lefschetz_quartic.errors import (
    BasisArcsCross, NonAdjacentCollision, NotTransitive, UnequalLocalMonodromy,
)
from lefschetz_quartic.surface import (
    GeneratorTuple, HomologyBasis, build_ribbon_surface, concat, hurwitz_move, invert_word,
    ordered_basis, reduce_word, transport, vanishing_lasso,
)
from lefschetz_quartic.tracker import CoverPerm

T = CoverPerm.transposition


def make_tuple(perms):
    letters = {k + 1: p for k, p in enumerate(perms)}
    n = len(perms)
    return GeneratorTuple(tuple((k,) for k in range(1, n + 1)), tuple(perms),
                          tuple(range(1, n + 1)), letters)


transp = st.sampled_from([T(a, b) for a in range(1, 5) for b in range(a + 1, 5)])
tuples = st.lists(transp, min_size=3, max_size=8).map(make_tuple)


def moves(n):
    return st.lists(st.tuples(st.integers(1, n - 1), st.sampled_from([1, -1])), max_size=12)


# ------------------------------------------------------------ free group

@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=20))
def test_word_inverse(w):
    assert concat(w, invert_word(w)) == ()
    assert reduce_word(reduce_word(w)) == reduce_word(w)


# ------------------------------------------------------------ Hurwitz moves

@settings(max_examples=60, deadline=None)
@given(tuples, st.data())
def test_move_then_inverse(t, data):
    p = data.draw(st.integers(1, len(t) - 1))
    s = data.draw(st.sampled_from([1, -1]))
    back = hurwitz_move(hurwitz_move(t, p, s), p, -s)
    assert back.words == t.words and back.perms == t.perms and back.labels == t.labels


@settings(max_examples=60, deadline=None)
@given(tuples, st.data())
def test_moves_preserve_product_and_chi(t, data):
    w = data.draw(moves(len(t)))
    u = transport(t, w)
    assert u.product_word() == t.product_word()
    assert u.product_perm() == t.product_perm()
    for word, perm in zip(u.words, u.perms):
        assert u.chi(word) == perm


@settings(max_examples=40, deadline=None)
@given(tuples, st.data())
def test_braid_relation(t, data):
    n = len(t)
    p = data.draw(st.integers(1, n - 2))
    a = transport(t, [(p, 1), (p + 1, 1), (p, 1)])
    b = transport(t, [(p + 1, 1), (p, 1), (p + 1, 1)])
    assert a.words == b.words and a.perms == b.perms


@settings(max_examples=40, deadline=None)
@given(tuples, st.data())
def test_far_moves_commute(t, data):
    n = len(t)
    if n < 4:
        return
    p = data.draw(st.integers(1, n - 3))
    q = data.draw(st.integers(p + 2, n - 1))
    a = transport(t, [(p, 1), (q, -1)])
    b = transport(t, [(q, -1), (p, 1)])
    assert a.words == b.words


def test_move_formula():
    t = make_tuple([T(1, 2), T(2, 3), T(3, 4)])
    u = hurwitz_move(t, 1, 1)
    assert u.words[:2] == ((1, 2, -1), (1,))
    v = hurwitz_move(t, 1, -1)
    assert v.words[:2] == ((2,), (-2, 1, 2))


# ------------------------------------------------------------ bases and lassos

def test_ordered_basis_needs_low_basepoint():
    with pytest.raises(BasisArcsCross):
        ordered_basis([0j, 1j], 0.5j, {1: T(1, 2), 2: T(1, 2)})


def test_vanishing_lasso_checks():
    t = make_tuple([T(1, 2), T(1, 2), T(3, 4), T(3, 4)])
    lasso = vanishing_lasso(t, (1, 2))
    assert lasso.word == (1, 2) and lasso.sheets == (1, 2)
    with pytest.raises(NonAdjacentCollision):
        vanishing_lasso(t, (1, 3))
    with pytest.raises(UnequalLocalMonodromy):
        vanishing_lasso(t, (2, 3))


# ------------------------------------------------------------ ribbon surfaces

def test_sphere_double_cover():
    # 2 sheets, two simple branch points: a sphere
    s = build_ribbon_surface({1: T(1, 2, n=2), 2: T(1, 2, n=2)}, (0, 1, 2))
    assert s.euler == 2 and s.genus == 0


def test_torus_double_cover():
    letters = {k: T(1, 2, n=2) for k in range(1, 5)}
    s = build_ribbon_surface(letters, (0, 1, 2, 3, 4))
    assert s.euler == 0 and s.genus == 1
    hb = HomologyBasis(s)
    assert hb.J.shape == (2, 2) and abs(int(round(np.linalg.det(hb.J)))) == 1


def test_not_transitive():
    with pytest.raises(NotTransitive):
        build_ribbon_surface({1: CoverPerm.identity(), 2: CoverPerm.identity()}, (0, 1, 2))


# ------------------------------------------------------------ the pencil fiber

def test_fiber_topology(model):
    s = model.ribbon
    assert (s.euler, s.genus) == (-4, 3)
    assert s.V - s.E + s.F == -4


def test_letter_perms_are_transpositions(model):
    assert all(p.is_transposition() for p in model.letter_perms.values())


def test_base_product_is_infinity(model):
    assert model.base_tuple.product_perm().is_identity()


def test_intersection_form(model):
    J = model.homology.J
    assert J.shape == (6, 6)
    assert np.array_equal(J, -J.T)
    assert sp.Matrix(J.tolist()).det() == 1


@pytest.mark.slow
def test_vanishing_classes(model):
    J = model.homology.J
    for c in model.classes:
        x = c.as_array()
        assert not c.is_zero()
        assert surface.primitive(x)
        assert int(x @ J @ x) == 0


@pytest.mark.slow
@pytest.mark.parametrize("i", [1, 5, 17, 36])
def test_sheet_lifts_bound_annulus(model, i):
    lasso = model.lasso(i)
    a, b = lasso.sheets
    c1 = surface.lift_word_to_cycle(model.homology, lasso.word, a)
    c2 = surface.lift_word_to_cycle(model.homology, lasso.word, b)
    assert c2 == -c1


@pytest.mark.slow
def test_deck_symmetry(model):
    found = model.deck_symmetry
    assert found is not None
    R, signs = found
    J = model.homology.J
    assert np.array_equal(R.T @ J @ R, J)
    assert np.array_equal(np.linalg.matrix_power(R, 4), np.eye(6, dtype=np.int64))
