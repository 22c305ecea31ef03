"""Dense univariate complex polynomials: evaluation, roots, resultants.

Coefficients are stored in ascending order of degree.  Everything here is a
pure function of its inputs; the root finder's random perturbation is seeded
so repeated runs agree bit for bit.
"""
from __future__ import annotations

import numpy as np

from .errors import (
    DerivativeVanishes,
    IllConditioned,
    NonConvergence,
    ResidualTooLarge,
)

TRIM_RTOL = 1e-10
_EPS = np.finfo(float).eps


class UniPoly:
    """Univariate polynomial with complex double coefficients (ascending)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, trim=True):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite polynomial coefficient")
        if trim:
            c = _trim(c)
        c.setflags(write=False)
        self.coeffs = c

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1])

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, z):
        return poly_eval(self, z)

    def derivative(self) -> "UniPoly":
        if self.degree == 0:
            return UniPoly([0.0])
        k = np.arange(1, self.coeffs.size)
        return UniPoly(self.coeffs[1:] * k, trim=False)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        return UniPoly(np.convolve(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"UniPoly(degree={self.degree}, coeffs={np.array2string(self.coeffs, precision=6)})"

    @classmethod
    def from_roots(cls, roots, lead=1.0) -> "UniPoly":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c)


def _trim(c: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(c))
    if scale == 0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(c) > TRIM_RTOL * scale)[0]
    return c[: keep[-1] + 1]


def poly_eval(p: UniPoly, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    z = np.asarray(z, dtype=complex)
    acc = np.full(z.shape, p.coeffs[-1], dtype=complex)
    for c in p.coeffs[-2::-1]:
        acc = acc * z + c
    return acc if acc.ndim else complex(acc)


def _eval_with_derivative(c: np.ndarray, z: np.ndarray):
    p = np.full(z.shape, c[-1], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    for a in c[-2::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def backward_error(p: UniPoly, z) -> np.ndarray:
    """|p(z)| relative to the coefficient scale of p near z."""
    z = np.asarray(z, dtype=complex)
    absz = np.abs(z)
    denom = np.zeros(z.shape)
    for c in p.coeffs[::-1]:
        denom = denom * absz + abs(c)
    return np.abs(poly_eval(p, z)) / np.maximum(denom, np.finfo(float).tiny)


def root_bound(p: UniPoly) -> float:
    """Fujiwara bound on the moduli of the roots of p."""
    c = p.coeffs
    n = p.degree
    lead = abs(c[-1])
    terms = [(abs(c[n - k]) / lead) ** (1.0 / k) for k in range(1, n)]
    terms.append((abs(c[0]) / (2 * lead)) ** (1.0 / n))
    return 2.0 * max(terms) if terms else 1.0


def poly_roots(p: UniPoly, tol: float = 1e-12, *, init=None, max_iter: int = 500,
               restarts: int = 4, seed: int = 20240607) -> np.ndarray:
    """All roots of ``p`` with multiplicity, by Aberth-Ehrlich iteration.

    ``init`` warm-starts the iteration (used by continuation); otherwise the
    start is a randomly rotated and jittered circle of radius ``root_bound``.
    A stagnating run is restarted from a freshly perturbed circle.
    """
    n = p.degree
    if n < 1:
        raise ValueError("poly_roots needs degree >= 1")
    c = p.coeffs
    if n == 1:
        return np.array([-c[0] / c[1]])
    rng = np.random.default_rng(seed)
    last = None
    for attempt in range(restarts + 1):
        if init is not None and attempt == 0:
            z = np.array(init, dtype=complex)
            if z.shape != (n,):
                raise ValueError("init must hold exactly degree-many points")
        else:
            r = root_bound(p)
            theta = 2 * np.pi * np.arange(n) / n + rng.uniform(0, 2 * np.pi)
            jitter = 1 + 0.1 * rng.uniform(-1, 1, n)
            z = r * jitter * np.exp(1j * theta)
        z, ok = _aberth(c, z, p, tol, max_iter)
        if ok:
            return z
        last = z
    raise NonConvergence(
        f"Aberth iteration did not converge for degree {n}",
        residuals=backward_error(p, last),
    )


def _aberth(c, z, p, tol, max_iter):
    n = z.size
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter):
        val, der = _eval_with_derivative(c, z)
        berr = backward_error(p, z)
        active &= berr > tol
        if not active.any():
            return z, True
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        if np.any(diff == 0):
            z = z + 1e-8 * (1 + np.abs(z)) * np.exp(2j * np.pi * np.arange(n) / n)
            continue
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        sums = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = val / der
            step = ratio / (1 - ratio * sums)
        step = np.where(np.isfinite(step), step, 0.0)
        step[~active] = 0.0
        z = z - step
        small = np.abs(step) <= 4 * _EPS * np.maximum(np.abs(z), 1.0)
        # stalled at rounding level with a tiny backward error: accept
        active &= ~(small & (backward_error(p, z) < max(tol, 1e3 * _EPS)))
    return z, bool(np.all(backward_error(p, z) <= tol))


def newton_refine(p: UniPoly, z0, tol: float = 1e-14, max_iter: int = 60):
    """Newton polish of one point or an array of points.

    Raises ``DerivativeVanishes`` when p' collapses or when the corrections
    shrink only linearly, both signatures of a (near-)multiple root.
    """
    c = p.coeffs
    z = np.array(z0, dtype=complex, ndmin=1)
    scalar = np.ndim(z0) == 0
    prev = np.full(z.shape, np.inf)
    slow = np.zeros(z.shape, dtype=int)
    dcoeffs = p.derivative().coeffs
    for _ in range(max_iter):
        val, der = _eval_with_derivative(c, z)
        dscale = _abs_horner(dcoeffs, np.abs(z))
        if np.any(np.abs(der) <= 1e-10 * np.maximum(dscale, np.finfo(float).tiny)):
            raise DerivativeVanishes("derivative vanishes near a root")
        step = val / der
        z = z - step
        size = np.abs(step)
        ratio = size / np.where(prev > 0, prev, 1.0)
        slow = np.where((ratio > 0.3) & (size > 1e3 * _EPS * np.maximum(np.abs(z), 1)), slow + 1, 0)
        if np.any(slow >= 4):
            raise DerivativeVanishes("linear convergence: multiple root suspected")
        prev = size
        if np.all(backward_error(p, z) <= tol) or np.all(size <= 2 * _EPS * np.maximum(np.abs(z), 1)):
            break
    if not np.all(backward_error(p, z) <= max(tol, 1e3 * _EPS)):
        raise NonConvergence("Newton refinement did not converge",
                             residuals=backward_error(p, z))
    return complex(z[0]) if scalar else z


def _abs_horner(c, r):
    acc = np.zeros(r.shape)
    for a in c[::-1]:
        acc = acc * r + abs(a)
    return acc


def sylvester_matrix(p: UniPoly, q: UniPoly) -> np.ndarray:
    m, n = p.degree, q.degree
    size = m + n
    S = np.zeros((size, size), dtype=complex)
    pd, qd = p.coeffs[::-1], q.coeffs[::-1]
    for i in range(n):
        S[i, i:i + m + 1] = pd
    for i in range(m):
        S[n + i, i:i + n + 1] = qd
    return S


def resultant(p: UniPoly, q: UniPoly) -> complex:
    """det of the Sylvester matrix; equals lead(p)^deg q * prod q(roots of p)."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    if p.degree == 0 and q.degree == 0:
        return 1.0 + 0j
    S = sylvester_matrix(p, q)
    with np.errstate(divide="ignore", invalid="ignore"):
        d = complex(np.linalg.det(S))
    if np.isfinite(d.real) and np.isfinite(d.imag):
        return d
    # LAPACK can divide by an exactly zero pivot (subnormal entries); decide by singular values
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= sv[0] * S.shape[0] * _EPS:
        return 0j
    raise IllConditioned("Sylvester determinant is not finite")


def discriminant(p: UniPoly) -> complex:
    n = p.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lead


def interpolate(samples, degree_bound: int, rtol: float = 1e-8) -> UniPoly:
    """Least-squares fit of a polynomial of degree <= ``degree_bound``."""
    pts = np.array([complex(x) for x, _ in samples])
    vals = np.array([complex(y) for _, y in samples])
    return _interpolate_arrays(pts, vals, degree_bound, rtol)


def _interpolate_arrays(pts, vals, degree_bound, rtol=1e-8):
    if degree_bound < 0:
        raise ValueError("negative degree bound")
    uniq = np.unique(np.round(pts, 14))
    if uniq.size < degree_bound + 1:
        raise IllConditioned("fewer distinct nodes than unknowns")
    r = max(np.max(np.abs(pts)), 1e-300)
    V = (pts[:, None] / r) ** np.arange(degree_bound + 1)[None, :]
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > 1e12:
        raise IllConditioned(f"Vandermonde condition number {cond:.3g}")
    sol, *_ = np.linalg.lstsq(V, vals, rcond=None)
    resid = np.max(np.abs(V @ sol - vals))
    scale = max(np.max(np.abs(vals)), np.finfo(float).tiny)
    if resid > rtol * scale:
        raise ResidualTooLarge(f"interpolation residual {resid / scale:.3g} (relative)")
    return UniPoly(sol / r ** np.arange(degree_bound + 1))


def cluster(points, radius: float) -> list[list[int]]:
    """Group indices of points into clusters of mutual distance < radius (single linkage)."""
    pts = np.asarray(points, dtype=complex)
    n = pts.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(pts[i] - pts[j]) < radius:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def min_pair_distance(points) -> float:
    pts = np.asarray(points, dtype=complex)
    if pts.size < 2:
        return np.inf
    d = np.abs(pts[:, None] - pts[None, :])
    np.fill_diagonal(d, np.inf)
    return float(d.min())
