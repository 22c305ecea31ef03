"""Integer symplectic algebra for the vanishing-cycle transvections.

Classes are integer coordinate vectors in a fixed basis of H1 whose
intersection matrix is J; the pairing is <x, y> = x^T J y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .errors import ExplosionGuard, FormViolation, NeverCloses

_SAFE = 2**31  # entries below this cannot overflow int64 in a 6x6 product


def _as_int_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=np.int64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("square integer matrix expected")
    return A


def checked_matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if max(np.abs(A).max(initial=0), np.abs(B).max(initial=0)) >= _SAFE:
        raise OverflowError("matrix entries too large for exact int64 products")
    return A @ B


def standard_form(g: int) -> np.ndarray:
    """Block form [[0, I], [-I, 0]] of size 2g."""
    J = np.zeros((2 * g, 2 * g), dtype=np.int64)
    J[:g, g:] = np.eye(g, dtype=np.int64)
    J[g:, :g] = -np.eye(g, dtype=np.int64)
    return J


@dataclass(frozen=True, eq=False)
class SpMatrix:
    """Integer matrix preserving the form J; checked on construction."""

    entries: np.ndarray
    J: np.ndarray = field(repr=False)

    def __post_init__(self):
        M, J = _as_int_matrix(self.entries), _as_int_matrix(self.J)
        if M.shape != J.shape:
            raise FormViolation("matrix and form have different sizes")
        if not np.array_equal(checked_matmul(checked_matmul(M.T, J), M), J):
            raise FormViolation("matrix does not preserve the intersection form")
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)
        object.__setattr__(self, "J", J)

    def __matmul__(self, other: "SpMatrix") -> "SpMatrix":
        return SpMatrix(checked_matmul(self.entries, other.entries), self.J)

    def __eq__(self, other):
        return isinstance(other, SpMatrix) and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())

    def is_identity(self) -> bool:
        return np.array_equal(self.entries, np.eye(len(self.entries), dtype=np.int64))

    def apply(self, x) -> np.ndarray:
        return self.entries @ np.asarray(x, dtype=np.int64)


def pairing(x, y, J) -> int:
    return int(np.asarray(x, dtype=np.int64) @ np.asarray(J) @ np.asarray(y, dtype=np.int64))


def transvection(c, J, sign: int = 1) -> SpMatrix:
    """x -> x + sign <x, c> c."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    c = np.asarray(getattr(c, "coords", c), dtype=np.int64)
    J = _as_int_matrix(J)
    n = len(J)
    # <x, c> = x^T J c = (c^T J^T) x
    M = np.eye(n, dtype=np.int64) + sign * np.outer(c, c @ J.T)
    return SpMatrix(M, J)


@dataclass
class RelationReport:
    product_is_identity: bool
    sign_convention_used: int
    partial_norms: list
    rotation_ok: bool = False

    def to_dict(self) -> dict:
        return {
            "product_is_identity": self.product_is_identity,
            "sign_convention_used": self.sign_convention_used,
            "partial_norms": list(self.partial_norms),
            "rotation_ok": self.rotation_ok,
        }


def ordered_product(classes: Sequence, J, sign: int) -> tuple[SpMatrix, list]:
    """T_n ... T_2 T_1 together with the max-norm of each partial product."""
    n = len(np.asarray(J))
    P = SpMatrix(np.eye(n, dtype=np.int64), J)
    norms = []
    for c in classes:
        P = transvection(c, J, sign) @ P
        norms.append(int(np.abs(P.entries).max()))
    return P, norms


def verify_relation(classes: Sequence, J, sign=None) -> RelationReport:
    """Check T_36 ... T_1 = 1, trying sign +1 then -1 unless one is given."""
    signs = (sign,) if sign is not None else (1, -1)
    closing = []
    reports = {}
    for s in signs:
        P, norms = ordered_product(classes, J, s)
        reports[s] = norms
        if P.is_identity():
            closing.append(s)
    if not closing:
        raise NeverCloses("the ordered product of transvections is not the identity for either sign")
    s = closing[0]
    k = len(classes)
    rot = all(ordered_product(list(classes[r:]) + list(classes[:r]), J, s)[0].is_identity()
              for r in range(1, k))
    return RelationReport(True, s, reports[s], rotation_ok=rot)


def primitivity(c) -> bool:
    g = 0
    for x in getattr(c, "coords", c):
        g = gcd(g, int(x))
    return g == 1


# ---------------------------------------------------------------- mod 2

def _to_bits(v) -> int:
    out = 0
    for k, x in enumerate(v):
        if int(x) % 2:
            out |= 1 << k
    return out


_PARITY = np.array([bin(i).count("1") & 1 for i in range(256)], dtype=np.uint8)


def generation_mod2(classes: Sequence, J, guard: int = 2_000_000) -> int:
    """Order of the group generated by the transvections reduced mod 2.

    Group elements are stored as n columns of n bits packed into one integer;
    a transvection acts on every column m by m -> m + <c, m> c.  Breadth
    first closure, vectorized over the frontier.
    """
    J = _as_int_matrix(J) % 2
    n = len(J)
    if n > 8:
        raise ValueError("mod-2 closure is implemented for n <= 8")
    gens = []
    for c in classes:
        c = np.asarray(getattr(c, "coords", c), dtype=np.int64) % 2
        if not c.any():
            continue
        cbits = _to_bits(c)
        # <c, m> = c^T J m = (J^T c) . m
        jc = _to_bits((J.T @ c) % 2)
        gens.append((cbits, jc))
    gens = list(dict.fromkeys(gens))
    shifts = np.arange(n, dtype=np.uint64) * np.uint64(n)
    mask = np.uint64((1 << n) - 1)
    ident = sum(1 << (k * n + k) for k in range(n))

    def columns(keys):
        return ((keys[:, None] >> shifts[None, :]) & mask).astype(np.uint8)

    def pack(cols):
        return (cols.astype(np.uint64) << shifts[None, :]).sum(axis=1, dtype=np.uint64)

    visited = np.array([ident], dtype=np.uint64)
    frontier = visited
    while frontier.size:
        cols = columns(frontier)
        images = []
        for cbits, jc in gens:
            flip = _PARITY[cols & np.uint8(jc)]
            images.append(pack(cols ^ (flip * np.uint8(cbits))))
        new = np.unique(np.concatenate(images))
        new = new[~np.isin(new, visited, assume_unique=True)]
        if visited.size + new.size > guard:
            raise ExplosionGuard(f"closure exceeded {guard} elements")
        visited = np.union1d(visited, new)
        frontier = new
    return int(visited.size)


SP6_F2_ORDER = 2**9 * (2**2 - 1) * (2**4 - 1) * (2**6 - 1)
