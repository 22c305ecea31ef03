"""The fiber over v = 0 as a 4-sheeted branched cover of the x1-line.

Words in the free group on the lassos h_1..h_12 are tuples of nonzero ints
(``k`` for h_k, ``-k`` for its inverse).  A word is read left to right in
traversal order, so chi(uv) = chi(u) then chi(v).

The surface itself is a ribbon graph: the lift of a tree made of straight
edges from the basepoint B to every branch point plus one edge from B down
to infinity.  Homology classes are computed on that graph, and the
intersection pairing comes from the rotation system.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

import numpy as np
import sympy as sp

from .errors import (
    BasisArcsCross,
    EulerMismatch,
    LiftMismatch,
    NonAdjacentCollision,
    NotClosed,
    NotTransitive,
    NullClass,
    RankMismatch,
    UnequalLocalMonodromy,
)
from .tracker import CoverPerm, angular_order

Word = tuple


# ---------------------------------------------------------------- free group

def reduce_word(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(int(x))
    return tuple(out)


def invert_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def concat(*words: Sequence[int]) -> Word:
    return reduce_word([x for w in words for x in w])


def conjugate(w: Sequence[int], by: Sequence[int]) -> Word:
    """by * w * by^-1"""
    return concat(by, w, invert_word(by))


def evaluate_word(word: Sequence[int], letter_perms: dict, n: int = 4) -> CoverPerm:
    p = CoverPerm.identity(n)
    for x in word:
        q = letter_perms[abs(x)]
        p = p.then(q if x > 0 else q.inverse())
    return p


# ---------------------------------------------------------------- generator tuples

@dataclass(frozen=True)
class GeneratorTuple:
    """An ordered geometric basis: position q holds a word and the label of its puncture."""

    words: tuple
    perms: tuple
    labels: tuple
    letter_perms: dict

    def __post_init__(self):
        if not (len(self.words) == len(self.perms) == len(self.labels)):
            raise ValueError("words, perms and labels must have equal length")

    def __len__(self):
        return len(self.words)

    def product_word(self) -> Word:
        return concat(*self.words)

    def product_perm(self) -> CoverPerm:
        p = CoverPerm.identity(self.n_sheets)
        for q in self.perms:
            p = p.then(q)
        return p

    @property
    def n_sheets(self) -> int:
        return len(self.perms[0].mapping)

    def chi(self, word) -> CoverPerm:
        return evaluate_word(word, self.letter_perms, self.n_sheets)

    def position_of(self, label: int) -> int:
        return self.labels.index(label) + 1


def ordered_basis(punctures, basepoint: complex, letter_perms: dict) -> GeneratorTuple:
    """Straight lassos from ``basepoint``, ordered counterclockwise as seen from it.

    ``punctures[j-1]`` is the position of the puncture labelled j and
    ``letter_perms[j]`` the monodromy of its lasso.  The ordered product is a
    counterclockwise loop around all punctures.
    """
    pts = np.asarray(punctures, dtype=complex)
    if basepoint.imag >= pts.imag.min() - 0.5:
        raise BasisArcsCross("basepoint must lie well below every puncture")
    ang = np.angle(pts - basepoint)
    srt = np.sort(ang)
    if np.any(np.diff(srt) < 1e-12):
        raise BasisArcsCross("two punctures are collinear with the basepoint")
    order = angular_order(pts, basepoint)
    labels = tuple(int(k) + 1 for k in order)
    words = tuple((lab,) for lab in labels)
    perms = tuple(letter_perms[lab] for lab in labels)
    return GeneratorTuple(words, perms, labels, dict(letter_perms))


def hurwitz_move(t: GeneratorTuple, p: int, sign: int) -> GeneratorTuple:
    """Artin action at positions (p, p+1).

    sign +1: (w_p, w_p+1) -> (w_p w_p+1 w_p^-1, w_p); sign -1 is its inverse
    (w_p+1, w_p+1^-1 w_p w_p+1).
    """
    if not 1 <= p < len(t):
        raise ValueError(f"position {p} out of range")
    i = p - 1
    words, perms, labels = list(t.words), list(t.perms), list(t.labels)
    a, b = words[i], words[i + 1]
    pa, pb = perms[i], perms[i + 1]
    if sign == 1:
        words[i], words[i + 1] = conjugate(b, a), a
        perms[i], perms[i + 1] = pa.then(pb).then(pa.inverse()), pa
    elif sign == -1:
        words[i], words[i + 1] = b, conjugate(a, invert_word(b))
        perms[i], perms[i + 1] = pb, pb.inverse().then(pa).then(pb)
    else:
        raise ValueError("sign must be +1 or -1")
    labels[i], labels[i + 1] = labels[i + 1], labels[i]
    return GeneratorTuple(tuple(words), tuple(perms), tuple(labels), t.letter_perms)


def transport(t: GeneratorTuple, word, check: bool = True) -> GeneratorTuple:
    """Fold hurwitz_move over a braid word of (position, sign) letters."""
    target = t.product_word() if check else None
    for p, s in word:
        t = hurwitz_move(t, p, s)
        if check and t.product_word() != target:
            raise AssertionError("Hurwitz move changed the ordered product")
    return t


def transport_events(t: GeneratorTuple, events) -> GeneratorTuple:
    """Like ``transport`` but also checks that each crossing involves the expected strands."""
    target = t.product_word()
    for ev in sorted(events, key=lambda e: e.t):
        p = ev.position
        if (t.labels[p - 1], t.labels[p]) != tuple(ev.strands):
            raise AssertionError("crossing strands disagree with the tuple labels")
        t = hurwitz_move(t, p, ev.sign)
        if t.product_word() != target:
            raise AssertionError("Hurwitz move changed the ordered product")
    return t


@dataclass(frozen=True)
class VanishingLasso:
    word: Word
    transposition: CoverPerm
    sheets: tuple
    position: int


def vanishing_lasso(t0: GeneratorTuple, pair: tuple) -> VanishingLasso:
    """The loop around the two colliding punctures at t0, as a word in the base letters."""
    qa, qb = sorted(t0.position_of(lab) for lab in pair)
    if qb != qa + 1:
        raise NonAdjacentCollision(f"colliding punctures at positions {qa} and {qb}")
    pa, pb = t0.perms[qa - 1], t0.perms[qb - 1]
    if pa != pb:
        raise UnequalLocalMonodromy(f"{pa} and {pb} around the colliding pair")
    word = concat(t0.words[qa - 1], t0.words[qb - 1])
    if not t0.chi(word).is_identity():
        raise UnequalLocalMonodromy("collision lasso has nontrivial monodromy")
    return VanishingLasso(word, pa, pa.support(), qa)


# ---------------------------------------------------------------- ribbon surface

@dataclass(frozen=True)
class Edge:
    base: int        # base edge: puncture label, or 0 for the edge to infinity
    sheet: int
    tail: int        # vertex index over B
    head: int        # vertex index over the puncture (or infinity)


class RibbonSurface:
    """Lift of the base tree; vertices over B, over each puncture and over infinity.

    Half-edges are ``(edge index, end)`` with end 0 at the tail (over B) and 1
    at the head.  ``rotation[v]`` lists the half-edges at v counterclockwise.
    """

    def __init__(self, letter_perms: dict, base_order: Sequence[int], infinity_perm: CoverPerm):
        self.letter_perms = dict(letter_perms)
        self.base_order = tuple(base_order)
        self.infinity_perm = infinity_perm
        n = len(infinity_perm.mapping)
        self.n_sheets = n
        self._check_transitive()

        vertices: list[tuple] = []
        index: dict = {}

        def add(v):
            index[v] = len(vertices)
            vertices.append(v)

        for s in range(1, n + 1):
            add(("B", s))
        for k in sorted(self.letter_perms):
            for orb in _orbits(self.letter_perms[k]):
                add(("a", k, orb[0]))
        for orb in _orbits(infinity_perm):
            add(("inf", orb[0]))

        def endpoint(base, s):
            perm = self.letter_perms[base] if base else infinity_perm
            rep = next(o[0] for o in _orbits(perm) if s in o)
            return index[("a", base, rep)] if base else index[("inf", rep)]

        edges: list[Edge] = []
        eid: dict = {}
        for base in [0] + sorted(self.letter_perms):
            for s in range(1, n + 1):
                eid[(base, s)] = len(edges)
                edges.append(Edge(base, s, index[("B", s)], endpoint(base, s)))

        rotation: dict[int, list] = {i: [] for i in range(len(vertices))}
        for s in range(1, n + 1):
            rotation[index[("B", s)]] = [(eid[(b, s)], 0) for b in self.base_order]
        for base in [0] + sorted(self.letter_perms):
            perm = self.letter_perms[base] if base else infinity_perm
            for orb in _orbits(perm):
                v = endpoint(base, orb[0])
                rotation[v] = [(eid[(base, s)], 1) for s in orb]

        self.vertices = vertices
        self.vertex_index = index
        self.edges = edges
        self.edge_index = eid
        self.rotation = {v: tuple(r) for v, r in rotation.items()}
        self._pos = {h: (v, i) for v, r in self.rotation.items() for i, h in enumerate(r)}
        self.faces = self._trace_faces()

    def _check_transitive(self):
        n = len(self.infinity_perm.mapping)
        reached, frontier = {1}, [1]
        gens = list(self.letter_perms.values()) + [self.infinity_perm]
        while frontier:
            s = frontier.pop()
            for g in gens:
                for x in (g(s), g.inverse()(s)):
                    if x not in reached:
                        reached.add(x)
                        frontier.append(x)
        if len(reached) != n:
            raise NotTransitive("the monodromy group does not act transitively on the sheets")

    def vertex_of(self, h) -> int:
        return self._pos[h][0]

    def next_ccw(self, h):
        v, i = self._pos[h]
        r = self.rotation[v]
        return r[(i + 1) % len(r)]

    def _trace_faces(self) -> list[list[tuple]]:
        """Faces as closed walks of (edge, direction) steps."""
        seen, faces = set(), []
        halves = [(e, end) for e in range(len(self.edges)) for end in (0, 1)]
        for h0 in halves:
            if h0 in seen:
                continue
            walk, h = [], h0
            while h not in seen:
                seen.add(h)
                e, end = h
                walk.append((e, 1 if end == 0 else -1))
                h = self.next_ccw((e, 1 - end))
            faces.append(walk)
        return faces

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def F(self) -> int:
        return len(self.faces)

    @property
    def euler(self) -> int:
        return self.V - self.E + self.F

    @property
    def genus(self) -> int:
        return (2 - self.euler) // 2

    def chain(self, walk) -> np.ndarray:
        c = np.zeros(self.E, dtype=np.int64)
        for e, d in walk:
            c[e] += d
        return c

    def boundary(self, chain: np.ndarray) -> np.ndarray:
        b = np.zeros(self.V, dtype=np.int64)
        for e, x in enumerate(chain):
            if x:
                b[self.edges[e].head] += x
                b[self.edges[e].tail] -= x
        return b

    def _half_at(self, e, d, arriving: bool):
        # the half-edge at the vertex reached (arriving) or left (not arriving)
        if arriving:
            return (e, 1) if d == 1 else (e, 0)
        return (e, 0) if d == 1 else (e, 1)

    def intersection(self, a: np.ndarray, walk) -> int:
        """Algebraic intersection of the cycle ``a`` with a pushoff of the closed walk.

        At each vertex the walk's pushoff sweeps counterclockwise from the
        incoming to the outgoing half-edge and crosses every half-edge in
        between, picking up the flow of ``a`` leaving along it.
        """
        total = 0
        m = len(walk)
        for k in range(m):
            e1, d1 = walk[k]
            e2, d2 = walk[(k + 1) % m]
            hin = self._half_at(e1, d1, True)
            hout = self._half_at(e2, d2, False)
            v = self.vertex_of(hin)
            if self.vertex_of(hout) != v:
                raise NotClosed("walk is not connected")
            h = self.next_ccw(hin)
            while h != hout:
                e, end = h
                total += a[e] if end == 0 else -a[e]
                h = self.next_ccw(h)
        return int(total)


def _orbits(perm: CoverPerm) -> list[tuple]:
    n = len(perm.mapping)
    seen, out = set(), []
    for s in range(1, n + 1):
        if s in seen:
            continue
        orb, x = [], s
        while x not in seen:
            seen.add(x)
            orb.append(x)
            x = perm(x)
        out.append(tuple(orb))
    return out


def build_ribbon_surface(letter_perms: dict, base_order, infinity_perm: Optional[CoverPerm] = None,
                         expected_euler: Optional[int] = None) -> RibbonSurface:
    """Ribbon surface of the branched cover described by the lasso monodromies.

    ``base_order`` is the counterclockwise order of the base edges at B, as
    puncture labels with 0 for the edge to infinity.
    """
    if infinity_perm is None:
        n = len(next(iter(letter_perms.values())).mapping)
        infinity_perm = CoverPerm.identity(n)
    s = RibbonSurface(letter_perms, base_order, infinity_perm)
    n = s.n_sheets
    # Riemann-Hurwitz: chi = n*2 - sum of (n - #orbits) over branch points
    rh = 2 * n - sum(n - len(_orbits(p)) for p in list(letter_perms.values()) + [infinity_perm])
    if s.euler != rh or (expected_euler is not None and s.euler != expected_euler):
        raise EulerMismatch(f"Euler characteristic {s.euler}, Riemann-Hurwitz gives {rh}")
    return s


# ---------------------------------------------------------------- homology

@dataclass(frozen=True)
class HomologyCycle:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(x) for x in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __neg__(self):
        return HomologyCycle(tuple(-x for x in self.coords))

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


def primitive(coords) -> bool:
    g = 0
    for x in coords:
        g = gcd(g, int(x))
    return g == 1


class HomologyBasis:
    """Integral basis of H1 from a tree-cotree decomposition, with its intersection matrix."""

    def __init__(self, s: RibbonSurface):
        self.surface = s
        tree = _spanning_tree(s)
        cotree = _dual_spanning_tree(s, tree)
        leftover = [e for e in range(s.E) if e not in tree and e not in cotree]
        if len(leftover) != 2 * s.genus:
            raise RankMismatch(f"{len(leftover)} leftover edges for genus {s.genus}")
        self.walks = [_fundamental_cycle(s, tree, e) for e in leftover]
        self.chains = [s.chain(w) for w in self.walks]
        for c in self.chains:
            if np.any(s.boundary(c)):
                raise NotClosed("fundamental cycle has nonzero boundary")
        g2 = len(self.walks)
        J = np.array([[s.intersection(self.chains[i], self.walks[k]) for k in range(g2)]
                      for i in range(g2)], dtype=np.int64)
        if np.any(J + J.T):
            raise RankMismatch("intersection matrix is not antisymmetric")
        M = sp.Matrix(J.tolist())
        if abs(M.det()) != 1:
            raise RankMismatch(f"intersection matrix has determinant {M.det()}")
        self.J = J
        self._Jinv = M.inv()

    @property
    def rank(self) -> int:
        return len(self.walks)

    def coordinates(self, walk) -> HomologyCycle:
        """Coordinates of a closed walk: solve J x = (<b_i, walk>)_i exactly."""
        chain = self.surface.chain(walk)
        if np.any(self.surface.boundary(chain)):
            raise NotClosed("walk does not close up")
        y = sp.Matrix([self.surface.intersection(c, walk) for c in self.chains])
        x = self._Jinv * y
        return HomologyCycle(tuple(int(v) for v in x))

    def pairing(self, x: HomologyCycle, y: HomologyCycle) -> int:
        return int(x.as_array() @ self.J @ y.as_array())


def homology_basis(s: RibbonSurface):
    hb = HomologyBasis(s)
    return hb, hb.J


def _spanning_tree(s: RibbonSurface) -> set:
    adj: dict[int, list] = {v: [] for v in range(s.V)}
    for i, e in enumerate(s.edges):
        adj[e.tail].append((i, e.head))
        adj[e.head].append((i, e.tail))
    seen, tree, stack = {0}, set(), [0]
    while stack:
        v = stack.pop(0)
        for i, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(i)
                stack.append(w)
    if len(seen) != s.V:
        raise NotTransitive("ribbon graph is disconnected")
    return tree


def _dual_spanning_tree(s: RibbonSurface, tree: set) -> set:
    side: dict[int, list] = {}
    for f, walk in enumerate(s.faces):
        for e, _ in walk:
            side.setdefault(e, []).append(f)
    parent = list(range(s.F))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cotree = set()
    for e in range(s.E):
        if e in tree:
            continue
        f, g = side[e]
        rf, rg = find(f), find(g)
        if rf != rg:
            parent[rf] = rg
            cotree.add(e)
    return cotree


def _fundamental_cycle(s: RibbonSurface, tree: set, e: int) -> list[tuple]:
    """Walk along edge e then back through the tree."""
    adj: dict[int, list] = {v: [] for v in range(s.V)}
    for i in tree:
        ed = s.edges[i]
        adj[ed.tail].append((i, ed.head, 1))
        adj[ed.head].append((i, ed.tail, -1))
    start, goal = s.edges[e].head, s.edges[e].tail
    prev = {start: None}
    queue = [start]
    while queue:
        v = queue.pop(0)
        if v == goal:
            break
        for i, w, d in adj[v]:
            if w not in prev:
                prev[w] = (v, i, d)
                queue.append(w)
    path = []
    v = goal
    while prev[v] is not None:
        u, i, d = prev[v]
        path.append((i, d))
        v = u
    return [(e, 1)] + path[::-1]


# ---------------------------------------------------------------- lifting words

def lift_word_walk(s: RibbonSurface, word, start_sheet: int) -> list[tuple]:
    """Closed edge walk over the lassos of ``word`` starting on ``start_sheet``.

    A lasso from a sheet it does not move lifts to a contractible loop and is
    dropped.
    """
    walk, sheet = [], start_sheet
    for x in word:
        k = abs(x)
        perm = s.letter_perms[k]
        nxt = perm(sheet) if x > 0 else perm.inverse()(sheet)
        if nxt != sheet:
            walk.append((s.edge_index[(k, sheet)], 1))
            walk.append((s.edge_index[(k, nxt)], -1))
        sheet = nxt
    if sheet != start_sheet:
        raise NotClosed(f"word carries sheet {start_sheet} to {sheet}")
    return walk


def lift_word_to_cycle(hb: HomologyBasis, word, start_sheet: int) -> HomologyCycle:
    walk = lift_word_walk(hb.surface, word, start_sheet)
    if not walk:
        return HomologyCycle((0,) * hb.rank)
    return hb.coordinates(walk)


def vanishing_cycle_from_lasso(hb: HomologyBasis, lasso: VanishingLasso) -> HomologyCycle:
    """Class of the lift of the collision lasso.

    The two lifts bound the annulus over a disk around the colliding pair,
    so they are opposite classes; the lift from the smaller sheet is returned.
    """
    s, s2 = lasso.sheets
    c = lift_word_to_cycle(hb, lasso.word, s)
    c2 = lift_word_to_cycle(hb, lasso.word, s2)
    if c2 != -c:
        raise LiftMismatch(f"sheet lifts {c.coords} and {c2.coords} are not opposite")
    if c.is_zero():
        raise NullClass("vanishing cycle is null-homologous")
    return c


# ---------------------------------------------------------------- symmetry

def deck_symmetry(classes: Sequence, J: np.ndarray, shift: int = 9):
    """Integral symplectic R with R c_i = +-c_{i+shift} for every i (indices mod len).

    The rotation (x1, x2) -> (i x1, i x2) preserves the fiber over v = 0 and
    carries mu_i to mu_{i+9}, so such an R must exist.  It is determined by
    six classes forming a unimodular basis and is then checked on all the
    others.  Returns (R, signs) or None.
    """
    from itertools import combinations, product

    C = [np.asarray(getattr(c, "coords", c), dtype=np.int64) for c in classes]
    m = len(C)
    n = len(J)
    base = None
    for idx in combinations(range(m), n):
        Bm = sp.Matrix([list(C[k]) for k in idx]).T
        if abs(Bm.det()) == 1:
            base = idx
            break
    if base is None:
        return None
    Binv = sp.Matrix([list(C[k]) for k in base]).T.inv()
    Jm = sp.Matrix(J.tolist())
    for signs in product((1, -1), repeat=n):
        img = sp.Matrix([[signs[j] * int(x) for x in C[(base[j] + shift) % m]] for j in range(n)]).T
        R = img * Binv
        if any(not x.is_integer for x in R):
            continue
        if R.T * Jm * R != Jm:
            continue
        Rn = np.array(R.tolist(), dtype=np.int64)
        all_signs = []
        for i in range(m):
            y, target = Rn @ C[i], C[(i + shift) % m]
            if np.array_equal(y, target):
                all_signs.append(1)
            elif np.array_equal(y, -target):
                all_signs.append(-1)
            else:
                break
        else:
            return Rn, all_signs
    return None
