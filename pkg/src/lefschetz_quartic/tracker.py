"""Continuation of root sets along polygonal paths, and the monodromy read off from it.

Two families are tracked: the 12 branch points ``G^v`` as ``v`` moves in the
pencil line, and the 4 fiber points ``F^v_{x1}`` as ``x1`` moves in the base
of one cover.  Braid crossings are recorded relative to a basepoint ``B``
far below the branch points: positions are sorted by the argument of
``P - B`` (counterclockwise as seen from ``B``), so position 1 is the
rightmost point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    AmbiguousMatch,
    BranchTooClose,
    DerivativeVanishes,
    NonConvergence,
    SimultaneousCrossing,
    StepUnderflow,
    TrackingError,
)
from .pencil import (
    F_slice,
    G_poly,
    PencilConfig,
    base_fiber,
    branch_points,
    line_dual_points,
)
from .hiprec import exact_branch_matrix
from .polycore import UniPoly, newton_refine, poly_roots

EPS_COLLIDE = 1e-6
ISOLATION_RATIO = 50.0
DEFAULT_BASEPOINT = 0.05 - 6.0j


# ---------------------------------------------------------------- data types

@dataclass(frozen=True)
class PathSpec:
    """A polyline, traversed at constant speed in a parameter t in [0, 1]."""

    waypoints: tuple
    terminal_kind: str = "regular"

    def __post_init__(self):
        w = tuple(complex(z) for z in self.waypoints)
        object.__setattr__(self, "waypoints", w)
        if len(w) < 1:
            raise ValueError("empty path")
        if self.terminal_kind not in ("regular", "singular-endpoint"):
            raise ValueError(f"unknown terminal kind {self.terminal_kind!r}")
        for a, b in zip(w, w[1:]):
            if a == b:
                raise ValueError("consecutive waypoints must be distinct")

    @property
    def start(self) -> complex:
        return self.waypoints[0]

    @property
    def end(self) -> complex:
        return self.waypoints[-1]

    def _cumulative(self):
        w = np.array(self.waypoints)
        seg = np.abs(np.diff(w))
        return w, seg, np.concatenate([[0.0], np.cumsum(seg)])

    def __call__(self, t: float) -> complex:
        w, seg, cum = self._cumulative()
        if len(w) == 1:
            return complex(w[0])
        s = min(max(t, 0.0), 1.0) * cum[-1]
        k = int(np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(seg) - 1))
        frac = (s - cum[k]) / seg[k]
        return complex(w[k] + frac * (w[k + 1] - w[k]))

    def breakpoints(self) -> list[float]:
        _, _, cum = self._cumulative()
        return list(cum / cum[-1]) if cum[-1] > 0 else [0.0, 1.0]

    def reversed(self) -> "PathSpec":
        return PathSpec(tuple(reversed(self.waypoints)), "regular")

    def rotated(self, factor: complex) -> "PathSpec":
        return PathSpec(tuple(factor * z for z in self.waypoints), self.terminal_kind)

    def then(self, other: "PathSpec") -> "PathSpec":
        if abs(self.end - other.start) > 1e-12:
            raise ValueError("paths do not join")
        return PathSpec(self.waypoints + other.waypoints[1:], other.terminal_kind)

    def refined(self) -> "PathSpec":
        """Same path with every segment midpoint inserted."""
        w = self.waypoints
        out = [w[0]]
        for a, b in zip(w, w[1:]):
            out += [(a + b) / 2, b]
        return PathSpec(tuple(out), self.terminal_kind)


@dataclass(frozen=True)
class CrossEvent:
    t: float
    position: int           # 1-based; positions (p, p+1) swap
    sign: int
    strands: tuple          # labels (now at p, now at p+1) before the swap

    @property
    def positions_swapped(self):
        return (self.position, self.position + 1)


@dataclass
class RootTrack:
    times: np.ndarray
    positions: np.ndarray       # steps x n, column j = label j+1
    events: list = field(default_factory=list)
    status: str = "clean"
    collision: Optional[tuple] = None     # (delta, epsilon), 1-based labels
    t_stop: float = 1.0

    @property
    def final(self) -> np.ndarray:
        return self.positions[-1]

    @property
    def n(self) -> int:
        return self.positions.shape[1]


@dataclass(frozen=True)
class CoverPerm:
    """Permutation of sheet labels 1..n: a loop carries sheet k to sheet ``mapping[k-1]``."""

    mapping: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.mapping)
        if sorted(m) != list(range(1, len(m) + 1)):
            raise ValueError(f"not a permutation: {m}")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, n: int = 4) -> "CoverPerm":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, a: int, b: int, n: int = 4) -> "CoverPerm":
        m = list(range(1, n + 1))
        m[a - 1], m[b - 1] = b, a
        return cls(tuple(m))

    def __call__(self, k: int) -> int:
        return self.mapping[k - 1]

    def then(self, other: "CoverPerm") -> "CoverPerm":
        """Monodromy of the concatenated loop (self traversed first)."""
        return CoverPerm(tuple(other(self(k)) for k in range(1, len(self.mapping) + 1)))

    def inverse(self) -> "CoverPerm":
        m = [0] * len(self.mapping)
        for k, img in enumerate(self.mapping, start=1):
            m[img - 1] = k
        return CoverPerm(tuple(m))

    def is_identity(self) -> bool:
        return self.mapping == tuple(range(1, len(self.mapping) + 1))

    def support(self) -> tuple:
        return tuple(k for k in range(1, len(self.mapping) + 1) if self(k) != k)

    def is_transposition(self) -> bool:
        return len(self.support()) == 2

    def cycles(self) -> list[tuple]:
        seen, out = set(), []
        for k in range(1, len(self.mapping) + 1):
            if k in seen or self(k) == k:
                continue
            cyc, j = [], k
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(c) for c in cy) + ")" for cy in cyc)


@dataclass
class TrackOptions:
    initial_step: float = 0.02
    max_step: float = 0.05
    min_step: float = 1e-12
    contract: float = 1.0 / 3.0
    eps_collide: float = EPS_COLLIDE
    # singular endpoint: give up resolving once the remaining parameter is this small
    terminal_floor: float = 1e-13
    order_basepoint: Optional[complex] = None


# ---------------------------------------------------------------- ordering

def angular_keys(points: np.ndarray, basepoint: complex) -> np.ndarray:
    d = np.asarray(points) - basepoint
    if np.any(d.imag <= 0):
        raise TrackingError("a tracked point is not above the ordering basepoint")
    return np.angle(d)


def angular_order(points: np.ndarray, basepoint: complex) -> np.ndarray:
    """Column indices sorted counterclockwise as seen from ``basepoint``."""
    return np.argsort(angular_keys(points, basepoint), kind="stable")


def _adjacent_swaps(old_order: np.ndarray, new_order: np.ndarray):
    """Positions (0-based) whose disjoint adjacent swaps turn old into new; None otherwise."""
    n = old_order.size
    cur = list(old_order)
    target = list(new_order)
    swaps = []
    p = 0
    while p < n:
        if cur[p] == target[p]:
            p += 1
            continue
        if p + 1 < n and cur[p] == target[p + 1] and cur[p + 1] == target[p]:
            swaps.append(p)
            cur[p], cur[p + 1] = cur[p + 1], cur[p]
            p += 2
            continue
        return None
    return swaps


def _crossing_event(z0, z1, t0, t1, a, b, position, basepoint) -> CrossEvent:
    """Event for strands a (at position p) and b (at p+1) swapping between two steps.

    Sign +1 when the strand moving rightward (b, the one at the larger angle)
    is farther from the basepoint at the moment the two are collinear with it.
    """
    pa0, pa1 = z0[a] - basepoint, z1[a] - basepoint
    pb0, pb1 = z0[b] - basepoint, z1[b] - basepoint

    def cross(s):
        pa = pa0 + s * (pa1 - pa0)
        pb = pb0 + s * (pb1 - pb0)
        return (np.conj(pa) * pb).imag

    lo, hi = 0.0, 1.0
    flo = cross(lo)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        fm = cross(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    ra = abs(pa0 + s * (pa1 - pa0))
    rb = abs(pb0 + s * (pb1 - pb0))
    # the chord is only trusted when the strands stay well apart compared to how far they move
    motion = abs(pa1 - pa0) + abs(pb1 - pb0)
    if abs(ra - rb) <= max(motion, 1e-9 * max(ra, rb)):
        raise SimultaneousCrossing("crossing strands too close to resolve at this step size")
    sign = 1 if rb > ra else -1
    return CrossEvent(t=t0 + s * (t1 - t0), position=position + 1, sign=sign, strands=(a + 1, b + 1))


# ---------------------------------------------------------------- extended precision

_LD_EPS = float(np.finfo(np.longdouble).eps)


class PreciseBranchFamily:
    """G^v with exact bivariate coefficients, evaluated in 80-bit extended precision.

    Three branch points can crowd into a cluster of size |v - v*|^4 around a
    fourth root of -1 (v* = -c1^3 times that root).  Double-precision
    coefficients split such a cluster at the 1e-5 level, which is the size of
    the cluster itself, so continuation through it needs more digits.
    """

    def __init__(self, cfg: PencilConfig):
        M = exact_branch_matrix(cfg)
        self.matrix = np.array([[_to_longdouble(x) for x in row] for row in M], dtype=np.longdouble)

    def __call__(self, v) -> np.ndarray:
        v = np.clongdouble(complex(v))
        acc = self.matrix[:, -1].astype(np.clongdouble)
        for col in range(self.matrix.shape[1] - 2, -1, -1):
            acc = acc * v + self.matrix[:, col]
        return acc


def _to_longdouble(x) -> np.longdouble:
    import mpmath as mp
    with mp.workdps(30):
        return np.longdouble(mp.nstr(mp.mpf(x.numerator) / x.denominator, 25))


def _newton_extended(c: np.ndarray, z0: np.ndarray, max_iter: int = 40) -> np.ndarray:
    """Newton polish of every point of z0 on the extended-precision coefficients c.

    Stops once the backward error is at rounding level; slow (linear)
    convergence above that level means a multiple root and is refused.
    """
    z = np.asarray(z0).astype(np.clongdouble)
    ac = np.abs(c)
    dc = c[1:] * np.arange(1, c.size)
    prev = np.full(z.shape, np.inf)
    slow = np.zeros(z.shape, dtype=int)
    for _ in range(max_iter):
        p = np.full(z.shape, c[-1], dtype=np.clongdouble)
        dp = np.zeros(z.shape, dtype=np.clongdouble)
        scale = np.zeros(z.shape, dtype=np.longdouble)
        r = np.abs(z)
        for k in range(c.size - 2, -1, -1):
            dp = dp * z + p
            p = p * z + c[k]
        for a in ac[::-1]:
            scale = scale * r + a
        berr = (np.abs(p) / scale).astype(float)
        if np.all(berr <= 64 * _LD_EPS):
            return z
        if np.any(np.abs(dp) == 0):
            raise DerivativeVanishes("derivative vanishes near a root")
        step = p / dp
        step[berr <= 64 * _LD_EPS] = 0
        size = np.abs(step).astype(float)
        slow = np.where((size > 0.3 * prev) & (berr > 64 * _LD_EPS), slow + 1, 0)
        if np.any(slow >= 4):
            raise DerivativeVanishes("linear convergence: multiple root suspected")
        prev = np.where(size > 0, size, prev)
        z = z - step
    raise NonConvergence("extended Newton did not converge", residuals=berr)


def _correct(poly, z):
    if isinstance(poly, UniPoly):
        return newton_refine(poly, z)
    return _newton_extended(np.asarray(poly), z)


# ---------------------------------------------------------------- tracking

def _match_labels(found: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Reorder ``found`` so entry j is nearest to ``reference[j]``; unique or AmbiguousMatch."""
    d = np.abs(found[:, None] - reference[None, :])
    idx = np.argmin(d, axis=0)
    if len(set(idx.tolist())) != reference.size:
        raise AmbiguousMatch("reference points do not match the roots one to one")
    sorted_d = np.sort(d, axis=0)
    if reference.size > 1 and np.any(sorted_d[0] * 3 > sorted_d[1]):
        raise AmbiguousMatch("nearest-root matching is not decisive")
    return found[idx]


def _pair_stats(z: np.ndarray):
    d = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(d, np.inf)
    i, j = np.unravel_index(np.argmin(d), d.shape)
    return float(d[i, j]), (min(i, j), max(i, j)), d


def initial_roots(family: Callable[[complex], UniPoly], z0: complex, labels=None) -> np.ndarray:
    P = family(z0)
    roots = newton_refine(P, poly_roots(P))
    if labels is None:
        return roots[np.lexsort((roots.imag, roots.real))]
    return _match_labels(roots, np.asarray(labels, dtype=complex))


def track_roots(family: Callable[[complex], UniPoly], path: PathSpec,
                opts: Optional[TrackOptions] = None, start=None, labels=None) -> RootTrack:
    """Follow every root of ``family(path(t))`` from t = 0 towards t = 1.

    ``start`` gives the labelled roots at t = 0 directly; otherwise they are
    computed and matched to ``labels`` (or sorted).  With a singular endpoint
    the run stops once the closest pair is within ``eps_collide`` or the
    remaining parameter falls under ``terminal_floor``, and the pair is
    reported as the collision.
    """
    opts = opts or TrackOptions()
    if start is None:
        start = initial_roots(family, path(0.0), labels)
    z = np.array(start, dtype=complex)
    precise = not isinstance(family(path(0.0)), UniPoly)
    if precise:
        z = _correct(family(path(0.0)), z)
    n = z.size
    singular = path.terminal_kind == "singular-endpoint"
    B = opts.order_basepoint
    order = angular_order(z, B) if B is not None else None

    times, positions, events = [0.0], [np.asarray(z, dtype=complex)], []
    t, h = 0.0, opts.initial_step
    breaks = [b for b in path.breakpoints()[1:-1]]
    status = "clean"
    while t < 1.0:
        if singular and 1.0 - t < opts.terminal_floor:
            break
        t_next = min(t + h, 1.0)
        # do not step over a corner of the polyline
        for b in breaks:
            if t < b < t_next:
                t_next = b
                break
        if singular and t_next >= 1.0:
            t_next = t + 0.5 * (1.0 - t)
        try:
            znew = _correct(family(path(t_next)), z)
            ok = _contract_ok(z, znew, opts.contract)
        except (DerivativeVanishes, NonConvergence):
            ok = False
        new_events = []
        if ok and order is not None:
            new_order = angular_order(znew, B)
            swaps = _adjacent_swaps(order, new_order)
            if swaps is None:
                ok = False
            else:
                try:
                    for p in swaps:
                        a, b = order[p], order[p + 1]
                        new_events.append(_crossing_event(z, znew, t, t_next, a, b, p, B))
                except SimultaneousCrossing:
                    ok = False
        if not ok:
            h = 0.5 * (t_next - t)
            if h < opts.min_step:
                if singular and n > 1 and _pair_stats(z)[0] < 1e-3:
                    break
                raise StepUnderflow(f"step underflow at t={t:.15g}")
            continue
        if singular and n > 1 and _pair_stats(znew)[0] <= opts.eps_collide:
            # t0 is the last state with the pair still resolved
            break
        events.extend(new_events)
        if order is not None:
            order = angular_order(znew, B)
        z, t = znew, t_next
        times.append(t)
        positions.append(np.asarray(z, dtype=complex))
        h = min(2.0 * (t_next - times[-2]), opts.max_step)
    track = RootTrack(times=np.array(times), positions=np.array(positions), events=events,
                      t_stop=t)
    if singular and n > 1:
        dmin, (i, j), d = _pair_stats(z)
        track.status = "collided"
        track.collision = (i + 1, j + 1)
    return track


def _nearest_distances(z: np.ndarray) -> np.ndarray:
    d = np.abs(z[:, None] - z[None, :]).astype(float)
    np.fill_diagonal(d, np.inf)
    return d.min(axis=1)


def _contract_ok(z, znew, contract) -> bool:
    """Every root moved less than ``contract`` times its distance to its nearest neighbour."""
    if z.size == 1:
        return True
    disp = np.abs(znew - z).astype(float)
    bound = contract * np.minimum(_nearest_distances(z), _nearest_distances(znew))
    return bool(np.all(disp < bound))


# ---------------------------------------------------------------- pencil paths

def zeta_points(cfg: PencilConfig) -> dict:
    """First-quadrant roots of (1 + w c1^4)^3 + z^4 for w = 1, omega, omega^2.

    Keyed by position: 'low' (below the diagonal),
    'diag' (on it) and 'high' (above it).
    """
    omega = np.exp(2j * np.pi / 3)
    out = {}
    for k in range(3):
        w = -(1 + omega**k * cfg.c14) ** 3
        roots = abs(w) ** 0.25 * np.exp(1j * (np.angle(w) / 4 + np.arange(4) * np.pi / 2))
        q1 = [r for r in roots if r.real > 0 and r.imag > 0]
        if len(q1) != 1:
            q1 = [r for r in roots if r.real >= 0 and r.imag >= 0]
        r = q1[0]
        if abs(r.real - r.imag) < 1e-9 * abs(r):
            out["diag"] = complex(r)
        elif r.real > r.imag:
            out["low"] = complex(r)
        else:
            out["high"] = complex(r)
    return out


# branch through which each of mu_1..mu_9 leaves e^{i pi/4}
MU_BRANCH = ("low", "low", "low", "diag", "diag", "diag", "high", "high", "high")


def default_mu_waypoints(cfg: PencilConfig) -> list[tuple]:
    """Waypoints of mu_1..mu_36: 0, 1/3, e^{i pi/4}, a zeta point, v_i; rotated by i."""
    vs = [p.v for p in line_dual_points(cfg)]
    zetas = zeta_points(cfg)
    first = []
    for i in range(9):
        first.append((0j, 1 / 3 + 0j, np.exp(1j * np.pi / 4), zetas[MU_BRANCH[i]], vs[i]))
    out = list(first)
    for i in range(9, 36):
        prev = out[i - 9]
        out.append(tuple(1j * z for z in prev[:-1]) + (vs[i],))
    return out


def mu_path(cfg: PencilConfig, i: int, waypoints=None) -> PathSpec:
    table = waypoints if waypoints is not None else default_mu_waypoints(cfg)
    return PathSpec(tuple(table[i - 1]), "singular-endpoint")


def branch_family(cfg: PencilConfig, precise: bool = True):
    """v -> G^v; extended precision unless ``precise`` is false (then the interpolated double version)."""
    if precise:
        return PreciseBranchFamily(cfg)
    return lambda v: G_poly(cfg, v)


def fiber_family(cfg: PencilConfig, v: complex):
    return lambda x1: F_slice(cfg, v, x1)


def track_mu(cfg: PencilConfig, i: int, opts: Optional[TrackOptions] = None,
             waypoints=None, start=None) -> RootTrack:
    """Branch points a_1..a_12 followed along mu_i up to (near) the collision."""
    opts = opts or TrackOptions(order_basepoint=DEFAULT_BASEPOINT)
    if start is None:
        start = branch_points(cfg, 0.0)
    return track_roots(branch_family(cfg), mu_path(cfg, i, waypoints), opts, start=start)


def collision_table(cfg: PencilConfig, opts: Optional[TrackOptions] = None,
                    waypoints=None, tracks=None) -> list[tuple]:
    """The colliding pair (delta(i), epsilon(i)) for i = 1..36."""
    out = []
    for i in range(1, 37):
        tr = tracks[i - 1] if tracks is not None else track_mu(cfg, i, opts, waypoints)
        out.append(tr.collision)
    return out


# ---------------------------------------------------------------- covering monodromy

def lasso(base: complex, target: complex, radius: float, vertices: int = 48) -> PathSpec:
    """Straight from ``base`` towards ``target``, once counterclockwise around it, back."""
    d = target - base
    u = d / abs(d)
    near = target - radius * u
    ang0 = np.angle(-u)
    circle = tuple(target + radius * np.exp(1j * (ang0 + 2 * np.pi * k / vertices))
                   for k in range(1, vertices))
    return PathSpec((base, near) + circle + (near, base))


def _segment_distance(p, a, b) -> float:
    ab = b - a
    s = np.clip(((p - a) * np.conj(ab)).real / abs(ab) ** 2, 0.0, 1.0)
    return float(abs(p - (a + s * ab)))


def lasso_radius(target: complex, others, factor: float = 0.25) -> float:
    others = [o for o in others if abs(o - target) > 0]
    return factor * min(abs(o - target) for o in others)


def check_loop_clearance(path: PathSpec, punctures, margin: float) -> None:
    w = path.waypoints
    for p in punctures:
        for a, b in zip(w, w[1:]):
            if _segment_distance(p, a, b) < margin:
                raise BranchTooClose(f"loop passes within {margin:g} of a branch point")


def fiber_at(cfg: PencilConfig, v: complex, x1: complex, opts=None) -> np.ndarray:
    """Fiber over ``x1`` labelled by continuation from the reference fiber s_1..s_4 over 0 at v=0.

    The label transport runs first in the pencil (v from 0, x1 fixed at 0)
    and then in the base (x1 from 0 at the target v); both legs are
    straight segments.
    """
    opts = opts or TrackOptions(initial_step=0.05, max_step=0.1)
    z = np.array(base_fiber(cfg), dtype=complex)
    v, x1 = complex(v), complex(x1)
    if v != 0:
        fam = lambda vv: F_slice(cfg, vv, 0.0)
        z = track_roots(fam, PathSpec((0j, v)), opts, start=z).final
    if x1 != 0:
        z = track_roots(fiber_family(cfg, v), PathSpec((0j, x1)), opts, start=z).final
    return z


def cover_permutation(cfg: PencilConfig, v: complex, loop: PathSpec, reference_fiber=None,
                      punctures=None, clearance: float = 1e-4, opts=None) -> CoverPerm:
    """Permutation of the fiber labels produced by carrying the fiber around ``loop``."""
    if abs(loop.start - loop.end) > 1e-12:
        raise ValueError("loop must be closed")
    if punctures is not None:
        check_loop_clearance(loop, punctures, clearance)
    opts = opts or TrackOptions(initial_step=0.01, max_step=0.05)
    if reference_fiber is None:
        reference_fiber = fiber_at(cfg, v, loop.start)
    start = np.asarray(reference_fiber, dtype=complex)
    track = track_roots(fiber_family(cfg, v), loop, opts, start=start)
    end = track.final
    # sheet k ends where sheet mapping[k] started
    d = np.abs(end[:, None] - start[None, :])
    img = np.argmin(d, axis=1)
    if len(set(img.tolist())) != start.size:
        raise AmbiguousMatch("loop end does not match the start fiber")
    return CoverPerm(tuple(int(k) + 1 for k in img))


def chi_table(cfg: PencilConfig, radius_factor: float = 0.25, opts=None) -> list[CoverPerm]:
    """chi(l_j) for the star loops along the segments from 0 to a_j."""
    a = branch_points(cfg, 0.0)
    fiber0 = base_fiber(cfg)
    out = []
    for j in range(12):
        r = lasso_radius(a[j], a, radius_factor)
        loop = lasso(0j, complex(a[j]), r)
        others = [a[k] for k in range(12) if k != j]
        out.append(cover_permutation(cfg, 0.0, loop, fiber0, others, opts=opts))
    return out


def star_arcs_disjoint(points, center: complex = 0j) -> bool:
    """Straight arcs from ``center`` to the points meet only at the center."""
    ang = np.angle(np.asarray(points) - center)
    a = np.sort(ang)
    return bool(np.all(np.diff(a) > 1e-9) and (a[0] + 2 * np.pi - a[-1]) > 1e-9)


def infinity_permutation(cfg: PencilConfig, v: complex = 0.0, radius: Optional[float] = None,
                         vertices: int = 256, opts=None) -> CoverPerm:
    """Monodromy of the counterclockwise circle |x1| = R, reached from 0 along the real axis."""
    roots = branch_points(cfg, v)
    rmax = float(np.max(np.abs(roots)))
    R = radius if radius is not None else 2.5 * rmax
    if R <= 2 * rmax:
        raise ValueError("radius must exceed twice the largest branch point modulus")
    circle = tuple(R * np.exp(2j * np.pi * k / vertices) for k in range(1, vertices))
    loop = PathSpec((0j, R + 0j) + circle + (R + 0j, 0j))
    return cover_permutation(cfg, v, loop, fiber_at(cfg, v, 0.0), opts=opts)


# ---------------------------------------------------------------- braids

def braid_word(track: RootTrack) -> list[tuple]:
    """Signed generators (position, +-1) in time order."""
    ev = sorted(track.events, key=lambda e: e.t)
    for a, b in zip(ev, ev[1:]):
        if abs(a.t - b.t) < 1e-15 and abs(a.position - b.position) < 2:
            raise SimultaneousCrossing("overlapping crossings at the same time")
    return [(e.position, e.sign) for e in ev]


def free_reduce_braid(word: Sequence[tuple]) -> list[tuple]:
    out: list[tuple] = []
    for g in word:
        if out and out[-1][0] == g[0] and out[-1][1] == -g[1]:
            out.pop()
        else:
            out.append(tuple(g))
    return out


def invert_braid(word: Sequence[tuple]) -> list[tuple]:
    return [(p, -s) for p, s in reversed(word)]
