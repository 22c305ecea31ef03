"""Extended-precision evaluation of the branch polynomial, for certifying exact collisions.

At a singular parameter the branch polynomial has an exact double root, but
double-precision coefficients split it by up to ~1e-5 and |Q| varies over
forty orders of magnitude along the line.  These helpers redo the same
interpolation with mpmath so such facts can be checked at face value.
"""
from __future__ import annotations

import functools
from fractions import Fraction

import mpmath as mp
import sympy as sp

from .pencil import INTERP_NODES, INTERP_RADIUS, PencilConfig

DEFAULT_DPS = 60


def _mpf(x):
    return mp.mpf(x.numerator) / x.denominator


def exact_dual_point(cfg: PencilConfig, factor_index, k_hint: complex, dps: int = DEFAULT_DPS):
    """The root of v^4 + K^3 (K the factor constant) closest to ``k_hint``."""
    with mp.workdps(dps):
        w = mp.exp(2j * mp.pi / 3)
        i1, i2 = factor_index
        K = 1 + w**i1 * _mpf(cfg.c1) ** 4 + w**i2 * _mpf(cfg.c2) ** 4
        base = mp.root(-(K**3), 4)
        cands = [base * mp.mpc(0, 1) ** m for m in range(4)]
        return min(cands, key=lambda z: abs(complex(z) - k_hint))


def fiber_coeffs(cfg: PencilConfig, v, x1):
    a, b = _mpf(cfg.c1) ** 3, _mpf(cfg.c2) ** 3
    u = a * x1 + v
    return [u**4 + x1**4 + 1, 4 * b * u**3, 6 * b**2 * u**2, 4 * b**3 * u, b**4 + 1]


def _disc4(p):
    pd = p[::-1]
    dp = [4 * p[4], 3 * p[3], 2 * p[2], p[1]]
    S = mp.zeros(7, 7)
    for i in range(3):
        for k in range(5):
            S[i, i + k] = pd[k]
    for i in range(4):
        for k in range(4):
            S[3 + i, i + k] = dp[k]
    return mp.det(S) / p[4]


def G_coeffs(cfg: PencilConfig, v, dps: int = DEFAULT_DPS):
    """Ascending coefficients of G^v (degree 12) as mpc, via the same 25-node interpolation."""
    with mp.workdps(dps):
        v = mp.mpc(v)
        N, R = INTERP_NODES, mp.mpf(INTERP_RADIUS)
        vals = []
        for j in range(N):
            x = R * mp.expjpi(mp.mpf(2 * j) / N)
            vals.append(_disc4(fiber_coeffs(cfg, v, x)))
        return [
            mp.fsum(vals[j] * mp.expjpi(-mp.mpf(2 * j * k) / N) for j in range(N)) / N / R**k
            for k in range(13)
        ]


def _disc_generic(c):
    """Discriminant of an ascending coefficient list (mp), via the Sylvester determinant."""
    n = len(c) - 1
    d = [k * c[k] for k in range(1, n + 1)]
    pd, dd = c[::-1], d[::-1]
    size = 2 * n - 1
    S = mp.zeros(size, size)
    for i in range(n - 1):
        for k in range(n + 1):
            S[i, i + k] = pd[k]
    for i in range(n):
        for k in range(n):
            S[n - 1 + i, i + k] = dd[k]
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * mp.det(S) / c[-1]


def Q_value_mp(cfg: PencilConfig, v, dps: int = DEFAULT_DPS):
    with mp.workdps(dps):
        return _disc_generic(G_coeffs(cfg, v, dps))


def G_roots_mp(cfg: PencilConfig, v, dps: int = DEFAULT_DPS):
    with mp.workdps(dps):
        c = G_coeffs(cfg, v, dps)
        return mp.polyroots(c[::-1], maxsteps=400, extraprec=2 * dps)


def fiber_roots_mp(cfg: PencilConfig, v, x1, dps: int = DEFAULT_DPS):
    with mp.workdps(dps):
        c = fiber_coeffs(cfg, mp.mpc(v), mp.mpc(x1))
        return mp.polyroots(c[::-1], maxsteps=400, extraprec=2 * dps)


def count_distinct(points, radius) -> int:
    reps = []
    for p in points:
        if all(abs(p - q) >= radius for q in reps):
            reps.append(p)
    return len(reps)


@functools.lru_cache(maxsize=8)
def exact_branch_matrix(cfg: PencilConfig):
    """Exact rational coefficients M[k][l] of x1^k v^l in disc_{x2} F, the bivariate branch polynomial.

    The normalization matches the interpolated G^v (discriminant divided by the
    leading coefficient), so both give the same polynomial in x1 for every v.
    """
    x1, x2, v = sp.symbols("x1 x2 v")
    c1, c2 = sp.Rational(cfg.c1.numerator, cfg.c1.denominator), sp.Rational(cfg.c2.numerator, cfg.c2.denominator)
    F = (c1**3 * x1 + c2**3 * x2 + v) ** 4 + x1**4 + x2**4 + 1
    P = sp.Poly(sp.expand(sp.discriminant(F, x2)), x1, v)
    deg = P.degree(x1)
    M = [[Fraction(0)] * (P.degree(v) + 1) for _ in range(deg + 1)]
    for (k, l), c in P.terms():
        M[k][l] = Fraction(int(c.p), int(c.q))
    return tuple(tuple(row) for row in M)


def certify_collision(cfg: PencilConfig, v, radius: float = 1e-5, dps: int = DEFAULT_DPS):
    """(distinct roots of G^v, distinct fiber points over each of them) at ``radius``.

    The fiber counts are listed once per distinct root, in the order found.
    """
    roots = G_roots_mp(cfg, v, dps)
    reps = []
    for r in roots:
        if all(abs(r - q) >= radius for q in reps):
            reps.append(r)
    fibers = [count_distinct(fiber_roots_mp(cfg, v, r, dps), radius) for r in reps]
    return len(reps), fibers
