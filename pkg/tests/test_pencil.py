from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lefschetz_quartic import hiprec
from lefschetz_quartic.pencil import (
    F_slice, G_poly, PencilConfig, Q_value, branch_points, dual_membership, katz_dual_degree,
    tameness_check, line_dual_points, line_point, setup_report, transversality_check,
)
from lefschetz_quartic.polycore import discriminant

from conftest import PRINTED_A, PRINTED_V


def test_katz_degrees():
    assert katz_dual_degree(2) == 2
    assert katz_dual_degree(3) == 12
    assert katz_dual_degree(4) == 36


@pytest.mark.parametrize("d", range(2, 9))
def test_katz_closed_form(d):
    assert katz_dual_degree(d) == d * (d - 1) ** 2


def test_assumption_value(cfg):
    assert cfg.assumption_value == Fraction(7, 8) ** 4 + Fraction(3, 4) ** 4
    assert abs(float(cfg.assumption_value) - 0.902587) < 1e-6
    assert cfg.assumption_value < 1


def test_setup_ok(cfg):
    rep = setup_report(cfg)
    assert rep.transversal and rep.tame_ok and rep.ok


@pytest.mark.parametrize("c1,c2", [(0, 0), (1, 1)])
def test_degenerate_lines_rejected(c1, c2):
    cfg = PencilConfig(c1, c2)
    assert not setup_report(cfg).ok


def test_dual_points_count_and_printed(cfg):
    pts = line_dual_points(cfg)
    assert len(pts) == 36
    assert [p.label for p in pts] == list(range(1, 37))
    for p, v in zip(pts, PRINTED_V):
        assert abs(p.v - v) < 1e-5


def test_dual_points_rotation_closed(cfg):
    vs = np.array([p.v for p in line_dual_points(cfg)])
    for i in range(9, 36):
        assert abs(vs[i] - 1j * vs[i - 9]) < 1e-10


def test_dual_points_lie_on_dual_surface(cfg):
    for p in line_dual_points(cfg):
        alpha = line_point(cfg, p.v)
        scale = max(abs(dual_membership(line_point(cfg, p.v + 0.01))), 1e-300)
        assert abs(dual_membership(alpha)) < 1e-6 * scale


@settings(max_examples=20, deadline=None)
@given(st.tuples(*(st.integers(0, 2) for _ in range(4))))
def test_dual_membership_independent_of_cube_root(twist):
    alpha = (1.0, 0.3 + 0.2j, -0.7j, 0.45 - 0.1j)
    a, b = dual_membership(alpha), dual_membership(alpha, twist)
    assert abs(a - b) <= 1e-9 * abs(a)


def test_Q_vanishes_at_dual_points(cfg):
    q0 = abs(hiprec.Q_value_mp(cfg, 0))
    for p in line_dual_points(cfg):
        v = hiprec.exact_dual_point(cfg, p.factor_index, p.v)
        assert abs(hiprec.Q_value_mp(cfg, v)) < 1e-8 * q0


def test_Q_nonzero_at_base(cfg):
    assert abs(Q_value(cfg, 0.0)) > 0


def test_branch_points_printed(cfg):
    a = branch_points(cfg, 0.0)
    assert len(a) == 12
    for k in range(3):
        assert abs(a[k] - PRINTED_A[k]) < 1e-5


def test_branch_points_rotation(cfg):
    a = branch_points(cfg, 0.0)
    for j in range(12):
        assert abs(a[(j + 3) % 12] - 1j * a[j]) < 1e-9


def test_G_is_discriminant_of_F(cfg):
    v = 0.2 - 0.1j
    G = G_poly(cfg, v)
    assert G.degree == 12
    for x1 in (0.3, -0.2 + 0.5j, 1.1j):
        d = discriminant(F_slice(cfg, v, x1))
        assert abs(G(x1) - d) <= 1e-9 * max(1, abs(d))


def test_G_rotation_invariance(cfg):
    # G^{iv}(i x1) is a constant multiple of G^v(x1)
    v = 0.31 + 0.17j
    g1, g2 = G_poly(cfg, v), G_poly(cfg, 1j * v)
    xs = [0.2, 0.5j, -0.4 + 0.3j]
    ratios = [g2(1j * x) / g1(x) for x in xs]
    assert np.allclose(ratios, ratios[0], rtol=1e-9)


def test_exact_matrix_agrees_with_interpolation(cfg):
    M = hiprec.exact_branch_matrix(cfg)
    v = 0.25 + 0.1j
    c = [sum(complex(float(M[k][l])) * v ** l for l in range(len(M[k]))) for k in range(len(M))]
    G = G_poly(cfg, v)
    assert np.allclose(np.array(c[: len(G.coeffs)]), G.coeffs, rtol=1e-12, atol=1e-12 * max(abs(G.coeffs)))


def test_transversality_generic(cfg):
    assert transversality_check(cfg.c1, cfg.c2)
    assert tameness_check(cfg)
