import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lefschetz_quartic.errors import DerivativeVanishes, NonConvergence
from lefschetz_quartic.polycore import (
    UniPoly, backward_error, cluster, discriminant, interpolate, min_pair_distance,
    newton_refine, poly_eval, poly_roots, resultant, root_bound, sylvester_matrix,
)

coord = st.floats(-2, 2, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, coord, coord)


def separated(points, gap=0.05):
    return len(points) < 2 or min_pair_distance(points) > gap


def hadamard(p, q):
    # determinant error scale: product of the Sylvester row norms
    return float(np.prod(np.linalg.norm(sylvester_matrix(p, q), axis=1)))


def match_error(a, b):
    a, b = list(a), list(b)
    err = 0.0
    for z in a:
        k = int(np.argmin([abs(z - w) for w in b]))
        err = max(err, abs(z - b.pop(k)))
    return err


def test_trim_and_degree():
    p = UniPoly([1, 2, 0, 0])
    assert p.degree == 1
    assert UniPoly([0, 0]).is_zero


def test_eval_matches_numpy():
    p = UniPoly([1, -3, 0, 2j])
    z = np.array([0.3 + 0.1j, -1.2, 2j])
    assert np.allclose(poly_eval(p, z), np.polyval(p.coeffs[::-1], z))


def test_roots_of_unity():
    p = UniPoly([-1, 0, 0, 0, 0, 1])
    r = poly_roots(p)
    assert match_error(r, np.exp(2j * np.pi * np.arange(5) / 5)) < 1e-12


def test_roots_are_deterministic():
    p = UniPoly([1, 2j, -3, 0.5, 1])
    assert np.array_equal(poly_roots(p), poly_roots(p))


@settings(max_examples=40, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=8).filter(separated))
def test_roots_recover_from_roots(rs):
    p = UniPoly.from_roots(rs)
    r = poly_roots(p)
    assert match_error(r, rs) < 1e-8
    assert backward_error(p, r).max() < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=8))
def test_root_bound_encloses_roots(rs):
    p = UniPoly.from_roots(rs)
    assert max(abs(z) for z in rs) <= root_bound(p) * (1 + 1e-12)


def test_newton_refine_improves():
    p = UniPoly.from_roots([1, 2, 3j])
    z = newton_refine(p, np.array([1.01, 1.98, 3.02j]))
    assert match_error(z, [1, 2, 3j]) < 1e-13


def test_newton_at_double_root_raises():
    p = UniPoly.from_roots([1, 1, 2])
    with pytest.raises((DerivativeVanishes, NonConvergence)):
        newton_refine(p, np.array([1.0 + 0j]))


def test_sylvester_shape():
    p, q = UniPoly([1, 2, 3]), UniPoly([1, 1, 1, 1])
    assert sylvester_matrix(p, q).shape == (5, 5)


@settings(max_examples=30, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=4), st.lists(cplx, min_size=1, max_size=4))
def test_resultant_product_formula(ra, rb):
    # monic: Res(p, q) = prod (a_i - b_j)
    p, q = UniPoly.from_roots(ra), UniPoly.from_roots(rb)
    expected = np.prod([a - b for a in ra for b in rb])
    assert abs(resultant(p, q) - expected) <= 1e-14 * hadamard(p, q)


def test_discriminant_quadratic():
    a, b, c = 2.0, -3.0 + 1j, 0.5j
    assert abs(discriminant(UniPoly([c, b, a])) - (b * b - 4 * a * c)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(cplx, min_size=2, max_size=5))
def test_discriminant_root_formula(rs):
    p = UniPoly.from_roots(rs)
    # monic: disc = prod_{i<j} (r_i - r_j)^2
    expected = np.prod([(rs[i] - rs[j]) ** 2 for i in range(len(rs)) for j in range(i + 1, len(rs))])
    assert abs(discriminant(p) - expected) <= 1e-14 * hadamard(p, p.derivative())


def test_discriminant_vanishes_on_double_root():
    assert abs(discriminant(UniPoly.from_roots([0.5, 0.5, 2j]))) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=6))
def test_interpolation_recovers(cs):
    p = UniPoly(cs, trim=False)
    nodes = 1.3 * np.exp(2j * np.pi * np.arange(8) / 8)
    q = interpolate([(z, p(z)) for z in nodes], 7)
    k = len(cs)
    assert np.allclose(q.coeffs[:k], np.array(cs, dtype=complex)[: len(q.coeffs)], atol=1e-9)


def test_cluster_groups():
    groups = cluster([0, 1e-7, 1, 1 + 2e-7j, 5], 1e-5)
    assert sorted(len(g) for g in groups) == [1, 2, 2]


def test_discriminant_with_subnormal_coefficients():
    p = UniPoly.from_roots([0.125, 0.125, 0.125 + 2.225073858507e-311j])
    assert discriminant(p) == 0
