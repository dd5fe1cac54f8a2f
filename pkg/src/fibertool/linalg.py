"""Degreewise dense linear algebra over the coefficient field.

These routines never touch a Groebner basis: a graded piece ``U_d`` of a
submodule is spanned by all monomial multiples of its generators that land
in degree ``d``, and its dimension is a matrix rank.  They serve as the
independent oracle for every Hilbert-function and length computation, and
as the workhorse for picking minimal generators.
"""

from __future__ import annotations

from functools import lru_cache

from . import kernels
from .poly import PolyRing


@lru_cache(maxsize=4096)
def monomials_of_degree(weights: tuple, d: int) -> tuple:
    """Exponent tuples of weighted degree ``d``."""
    n = len(weights)
    if d < 0:
        return ()
    if n == 0:
        return ((),) if d == 0 else ()
    out = []
    w = weights[-1]
    for a in range(d // w + 1):
        for head in monomials_of_degree(weights[:-1], d - a * w):
            out.append(head + (a,))
    return tuple(out)


def vec_degree(v: dict, ring: PolyRing, shifts):
    lay = ring.layout
    for P in v:
        return ring.degree_of(P & lay.exp_mask) + shifts[P >> lay.pos_shift]
    return None


class Piece:
    """Monomial basis of the degree-``d`` piece of ``⊕ S(-shifts[k])``."""

    def __init__(self, ring: PolyRing, shifts, d: int):
        self.ring = ring
        self.d = d
        lay = ring.layout
        self.index = {}
        for pos, s in enumerate(shifts):
            for e in monomials_of_degree(ring.weights, d - s):
                self.index[lay.pack(e, pos)] = len(self.index)

    @property
    def size(self) -> int:
        return len(self.index)

    def row(self, v: dict, p) -> list:
        r = [0] * len(self.index)
        idx = self.index
        for P, c in v.items():
            r[idx[P]] = c
        return r


def multiples_in_degree(gens, ring: PolyRing, shifts, d: int) -> list[dict]:
    """All ``m * g`` of degree ``d`` for homogeneous ``g`` in ``gens``."""
    lay = ring.layout
    out = []
    for g in gens:
        dg = vec_degree(g, ring, shifts)
        if dg is None or dg > d:
            continue
        for e in monomials_of_degree(ring.weights, d - dg):
            m = lay.pack(e)
            out.append({P + m: c for P, c in g.items()})
    return out


def piece_dim(gens, ring: PolyRing, shifts, d: int) -> int:
    """``dim_k`` of the degree-``d`` piece of the submodule spanned by ``gens``."""
    piece = Piece(ring, shifts, d)
    if piece.size == 0:
        return 0
    p = ring.field.p
    rows = [piece.row(v, p) for v in multiples_in_degree(gens, ring, shifts, d)]
    return kernels.rank(rows, piece.size, p) if rows else 0


def free_dim(ring: PolyRing, shifts, d: int) -> int:
    return sum(len(monomials_of_degree(ring.weights, d - s)) for s in shifts)


def quotient_hf(gens, ring: PolyRing, shifts, D: int) -> list[int]:
    """Hilbert function of ``F / <gens>`` in degrees ``0..D`` by rank counting."""
    return [free_dim(ring, shifts, d) - piece_dim(gens, ring, shifts, d) for d in range(D + 1)]


def intersection_dim(gens_a, gens_b, ring: PolyRing, shifts, d: int) -> int:
    """``dim (A ∩ B)_d = dim A_d + dim B_d - dim (A + B)_d``."""
    return (
        piece_dim(gens_a, ring, shifts, d)
        + piece_dim(gens_b, ring, shifts, d)
        - piece_dim(list(gens_a) + list(gens_b), ring, shifts, d)
    )


def minimal_subset(gens, ring: PolyRing, shifts, modulo=()) -> list[dict]:
    """A minimal homogeneous generating subset of ``(<gens> + W) / W``, ``W = <modulo>``.

    Degree by degree, a candidate is kept exactly when it is independent of
    the degree-``d`` pieces of ``W``, of the multiples of the lower-degree
    generators already kept, and of the candidates kept before it.
    """
    graded = []
    for i, g in enumerate(gens):
        dg = vec_degree(g, ring, shifts)
        if dg is not None:
            graded.append((dg, i, g))
    graded.sort(key=lambda t: (t[0], t[1]))
    kept = []
    p = ring.field.p
    for d in sorted({t[0] for t in graded}):
        cands = [g for dg, _, g in graded if dg == d]
        piece = Piece(ring, shifts, d)
        lower = [g for g in kept if vec_degree(g, ring, shifts) < d]
        base = multiples_in_degree(list(modulo) + lower, ring, shifts, d)
        rows = [piece.row(v, p) for v in base] + [piece.row(v, p) for v in cands]
        chosen = kernels.independent_rows(rows, piece.size, p)
        nb = len(base)
        kept.extend(cands[i - nb] for i in chosen if i >= nb)
    return kept
