"""The pencil of plane quartics cut on the Fermat quartic surface by a line in the dual space.

A point ``v`` of the line parameterizes the plane section
``(c1^3 x1 + c2^3 x2 + v)^4 + x1^4 + x2^4 + 1 = 0`` (affine chart ``x3 = 1``),
viewed as a 4-sheeted cover of the ``x1``-line.  ``G_poly`` is its branch
polynomial and ``Q_value`` the discriminant of that, vanishing at the 36
singular members of the pencil.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DegenerateConfig, DegreeViolation
from .polycore import (
    UniPoly,
    _interpolate_arrays,
    discriminant,
    min_pair_distance,
)

OMEGA = np.exp(2j * np.pi / 3)

# Approximations of v_1..v_5 used to fix the labelling of the singular parameters.
PRINTED_V = (
    0.600851 + 0.315483j,
    0.963952 + 0.064039j,
    0.999689 + 0.470655j,
    1.059535 + 0.794167j,
    1.145495 + 1.145495j,
)
PRINTED_A = (
    0.709187 + 0.642143j,
    0.692307 + 0.692307j,
    0.642143 + 0.709187j,
)

INTERP_NODES = 25
INTERP_RADIUS = 1.3


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**12)


@dataclass(frozen=True)
class PencilConfig:
    """Line parameters ``c1``, ``c2`` (exact rationals) with cached float powers."""

    c1: Fraction = Fraction(7, 8)
    c2: Fraction = Fraction(3, 4)
    c13: float = field(init=False, repr=False)
    c23: float = field(init=False, repr=False)
    c14: float = field(init=False, repr=False)
    c24: float = field(init=False, repr=False)
    c212: float = field(init=False, repr=False)

    def __post_init__(self):
        c1, c2 = _as_fraction(self.c1), _as_fraction(self.c2)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)
        object.__setattr__(self, "c13", float(c1**3))
        object.__setattr__(self, "c23", float(c2**3))
        object.__setattr__(self, "c14", float(c1**4))
        object.__setattr__(self, "c24", float(c2**4))
        object.__setattr__(self, "c212", float(c2**12))

    @property
    def assumption_value(self) -> Fraction:
        return abs(self.c1) ** 4 + abs(self.c2) ** 4


@dataclass(frozen=True)
class DualPoint:
    v: complex
    factor_index: tuple[int, int]
    label: int


@dataclass(frozen=True)
class SetupReport:
    transversal: bool
    tame_ok: bool
    katz_degree: int
    q_at_base: complex
    assumption_value: float

    @property
    def ok(self) -> bool:
        return self.transversal and self.tame_ok and self.katz_degree == 36 and abs(self.q_at_base) > 0


# ---------------------------------------------------------------- dual variety

def _principal_cbrt(a: complex) -> complex:
    a = complex(a)
    if a == 0:
        return 0j
    return abs(a) ** (1 / 3) * np.exp(1j * np.angle(a) / 3)


def dual_membership(alpha, beta_twist=(0, 0, 0, 0)) -> complex:
    """Product of the 27 linear forms in the fourth powers of cube roots of ``alpha``.

    Vanishes exactly on the dual surface.  ``beta_twist[i] = k`` replaces the
    principal cube root of ``alpha[i]`` by ``omega^k`` times it, which leaves
    the value unchanged.
    """
    alpha = [complex(a) for a in alpha]
    if all(a == 0 for a in alpha):
        raise ValueError("alpha must be a nonzero homogeneous vector")
    b4 = [(_principal_cbrt(a) * OMEGA**k) ** 4 for a, k in zip(alpha, beta_twist)]
    val = 1.0 + 0j
    for i1, i2, i3 in itertools.product(range(3), repeat=3):
        val *= b4[0] + OMEGA**i1 * b4[1] + OMEGA**i2 * b4[2] + OMEGA**i3 * b4[3]
    return val


def line_point(cfg: PencilConfig, v: complex) -> tuple[complex, complex, complex, complex]:
    """Homogeneous coordinates of the point [1:v] of the line."""
    return (1.0, cfg.c13, cfg.c23, complex(v))


def _factor_constants(c1, c2):
    c14, c24 = complex(c1) ** 4, complex(c2) ** 4
    return {
        (i1, i2): 1 + OMEGA**i1 * c14 + OMEGA**i2 * c24
        for i1 in range(3)
        for i2 in range(3)
    }


def _factor_roots(c1, c2):
    out = []
    for idx, k in _factor_constants(c1, c2).items():
        w = -(k**3)
        r = abs(w) ** 0.25
        th = np.angle(w) / 4
        for m in range(4):
            out.append((r * np.exp(1j * (th + m * np.pi / 2)), idx))
    return out


def transversality_check(c1, c2) -> bool:
    consts = _factor_constants(c1, c2)
    if any(abs(k) < 1e-12 for k in consts.values()):
        return False
    roots = [z for z, _ in _factor_roots(c1, c2)]
    return min_pair_distance(roots) > 1e-8


def _match(target: complex, pool: dict[int, complex]) -> int:
    return min(pool, key=lambda k: abs(pool[k] - target))


def line_dual_points(cfg: PencilConfig) -> list[DualPoint]:
    """The 36 points where the line meets the dual surface, labelled v_1..v_36."""
    if not transversality_check(cfg.c1, cfg.c2):
        raise DegenerateConfig("line is not transverse to the dual surface")
    raw = _factor_roots(cfg.c1, cfg.c2)
    pool = {k: z for k, (z, _) in enumerate(raw)}
    order = _reference_labels(pool)
    if order is None:
        order = _sector_labels(pool)
    return [DualPoint(v=complex(raw[k][0]), factor_index=raw[k][1], label=i + 1)
            for i, k in enumerate(order)]


def _reference_labels(pool):
    """Labels reproducing the published approximations; None if they do not fit."""
    first = []
    for approx in PRINTED_V:
        k = _match(approx, pool)
        if abs(pool[k] - approx) > 1e-5:
            return None
        first.append(k)
    for i in range(6, 10):
        src = pool[first[10 - i - 1]]
        first.append(_match(complex(src.imag, src.real), pool))
    labels = list(first)
    for i in range(9, 36):
        labels.append(_match(1j * pool[labels[i - 9]], pool))
    if len(set(labels)) != 36:
        return None
    for i in range(9, 36):
        if abs(pool[labels[i]] - 1j * pool[labels[i - 9]]) > 1e-9:
            return None
    return labels


def _sector_labels(pool):
    """Fallback labelling: the sector arg in [0, pi/2) sorted by argument, then rotations."""
    def sector_arg(z):
        return np.angle(z) % (2 * np.pi)

    first = sorted((k for k, z in pool.items() if sector_arg(z) < np.pi / 2 - 1e-12),
                   key=lambda k: (round(sector_arg(pool[k]), 12), abs(pool[k])))
    labels = list(first)
    n = len(first)
    for i in range(n, 36):
        labels.append(_match(1j * pool[labels[i - n]], pool))
    if len(set(labels)) != 36:
        raise DegenerateConfig("could not label the dual points")
    return labels


# ---------------------------------------------------------------- Lemma checks

def _binary_disc_at_infinity(c1, c2) -> complex:
    """disc in x2 of (c1^3 + c2^3 x2)^4 + 1 + x2^4."""
    a, b = complex(c1) ** 3, complex(c2) ** 3
    coeffs = [a**4 + 1, 4 * a**3 * b, 6 * a**2 * b**2, 4 * a * b**3, b**4 + 1]
    return discriminant(UniPoly(coeffs, trim=False))


def tameness_check(cfg: PencilConfig) -> bool:
    """The pencil is tame over [1:0]: |c1|^4 + |c2|^4 < 1 plus the genericity conditions."""
    c1, c2 = cfg.c1, cfg.c2
    if not cfg.assumption_value < 1:
        return False
    c14, c24 = complex(c1) ** 4, complex(c2) ** 4
    for j in range(3):
        for val in ((c14 * OMEGA**j + c24) ** 3, (c14 + c24 * OMEGA**j) ** 3):
            if abs(val + 1) < 1e-12:
                return False
    return abs(_binary_disc_at_infinity(c1, c2)) > 1e-12


def katz_dual_degree(d: int) -> int:
    """Degree of the dual of a smooth degree-d surface in P^3.

    Truncated series: (1 + h)^2 / (1 + d h) modulo h^3, whose h^2 coefficient
    is integrated against deg X = d.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    num = [1, 2, 1]
    inv = [1, -d, d * d]
    h2 = sum(num[i] * inv[2 - i] for i in range(3))
    return d * h2


# ---------------------------------------------------------------- slices

def F_slice(cfg: PencilConfig, v: complex, x1: complex) -> UniPoly:
    """The fiber quartic in x2 over the point x1 of the section at v."""
    u = cfg.c13 * complex(x1) + complex(v)
    b = cfg.c23
    return UniPoly([
        u**4 + complex(x1) ** 4 + 1,
        4 * b * u**3,
        6 * b**2 * u**2,
        4 * b**3 * u,
        cfg.c212 + 1,
    ], trim=False)


def _F_coeff_array(cfg: PencilConfig, v: complex, x1: np.ndarray) -> np.ndarray:
    u = cfg.c13 * x1 + v
    b = cfg.c23
    return np.stack([
        u**4 + x1**4 + 1,
        4 * b * u**3,
        6 * b**2 * u**2,
        4 * b**3 * u,
        np.full_like(u, cfg.c212 + 1),
    ], axis=-1)


def _quartic_disc_batch(c: np.ndarray) -> np.ndarray:
    """disc of each ascending quartic row of ``c`` via its 7x7 Sylvester determinant."""
    n = c.shape[0]
    p = c[:, ::-1]
    dp = (c[:, 1:] * np.arange(1, 5))[:, ::-1]
    S = np.zeros((n, 7, 7), dtype=complex)
    for i in range(3):
        S[:, i, i:i + 5] = p
    for i in range(4):
        S[:, 3 + i, i:i + 4] = dp
    # (-1)^(4*3/2) = +1
    return np.linalg.det(S) / c[:, 4]


@lru_cache(maxsize=None)
def _nodes() -> np.ndarray:
    return INTERP_RADIUS * np.exp(2j * np.pi * np.arange(INTERP_NODES) / INTERP_NODES)


def G_poly(cfg: PencilConfig, v: complex) -> UniPoly:
    """Branch polynomial in x1 (degree 12): disc in x2 of the fiber quartic."""
    nodes = _nodes()
    vals = _quartic_disc_batch(_F_coeff_array(cfg, complex(v), nodes))
    fit = _interpolate_arrays(nodes, vals, INTERP_NODES - 1)
    c = np.zeros(INTERP_NODES, dtype=complex)
    c[: fit.coeffs.size] = fit.coeffs
    high = np.max(np.abs(c[13:]))
    if high > 1e-7 * np.max(np.abs(c[:13])):
        raise DegreeViolation(f"coefficients above degree 12 do not vanish ({high:.3g})")
    return UniPoly(c[:13], trim=False)


def Q_value(cfg: PencilConfig, v: complex) -> complex:
    return discriminant(G_poly(cfg, v))


def base_fiber(cfg: PencilConfig) -> np.ndarray:
    """The four points s_1..s_4 over x1 = 0 of the section at v = 0."""
    k = np.arange(1, 5)
    return (1 + cfg.c212) ** -0.25 * np.exp((2 * k - 1) * np.pi * 1j / 4)


def branch_points(cfg: PencilConfig, v: complex = 0.0) -> np.ndarray:
    """Roots of G^v; for the default line at v = 0 they come labelled a_1..a_12."""
    from .polycore import newton_refine, poly_roots

    G = G_poly(cfg, v)
    roots = newton_refine(G, poly_roots(G))
    labelled = _label_branch_points(roots)
    return labelled if labelled is not None else roots[np.lexsort((roots.imag, roots.real))]


def _label_branch_points(roots):
    pool = dict(enumerate(roots))
    labels = []
    for approx in PRINTED_A:
        k = _match(approx, pool)
        if abs(pool[k] - approx) > 1e-5:
            return None
        labels.append(k)
    for j in range(3, 12):
        labels.append(_match(1j * pool[labels[j - 3]], pool))
    if len(set(labels)) != 12:
        return None
    return np.array([pool[k] for k in labels])


def setup_report(cfg: PencilConfig) -> SetupReport:
    transversal = transversality_check(cfg.c1, cfg.c2)
    tame = tameness_check(cfg)
    q0 = Q_value(cfg, 0.0) if tame else 0j
    return SetupReport(
        transversal=transversal,
        tame_ok=tame,
        katz_degree=katz_dual_degree(4),
        q_at_base=q0,
        assumption_value=float(cfg.assumption_value),
    )
