"""Finitely generated graded modules over ``A = S/J``.

A module is a subquotient ``U/V`` of a graded free module
``F = ⊕ S(-shifts[k])``.  ``J*F`` is always folded into ``V``, so every
computation below happens over the polynomial ring ``S`` and the answers are
the ``A``-module answers.  Vectors are raw term dicts (see :mod:`poly`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .groebner import eliminate_components, groebner_terms, syzygy_terms
from .hilbert import HilbertSeries, hilbert_polynomial, module_series
from .poly import GradingError, Poly, PolyRing, RingSpec, vec_add, vec_degree, vec_mul_poly

AUDIT_DEGREE = 4


class AuditFailure(AssertionError):
    """Groebner-basis and dense linear-algebra answers disagree."""


class DomainError(ValueError):
    pass


class ResolutionTruncated(RuntimeError):
    pass


def _basis(ring: PolyRing, k: int) -> dict:
    return {k << ring.layout.pos_shift: ring.field(1)}


def _times(ring: PolyRing, f: dict, v: dict) -> dict:
    return vec_mul_poly(ring.field, f, v)


def _terms(f) -> dict:
    return f.terms if isinstance(f, Poly) else f


class Submodule:
    """The span of homogeneous vectors in ``F = ⊕ S(-shifts[k])``."""

    def __init__(self, ring: PolyRing, shifts, gens=()):
        self.ring = ring
        self.shifts = tuple(shifts)
        self.gens = []
        for g in gens:
            g = _terms(g)
            if g:
                vec_degree(g, ring, self.shifts)  # raises on inhomogeneous input
                self.gens.append(g)

    @classmethod
    def free(cls, ring: PolyRing, shifts) -> Submodule:
        return cls(ring, shifts, [_basis(ring, k) for k in range(len(shifts))])

    @classmethod
    def ideal(cls, polys, ring: PolyRing | None = None) -> Submodule:
        polys = list(polys)
        ring = ring or polys[0].ring
        return cls(ring, (0,), [p.terms for p in polys])

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def __repr__(self):
        return f"Submodule({len(self.gens)} gens in rank {self.rank})"

    def _like(self, gens) -> Submodule:
        return Submodule(self.ring, self.shifts, gens)

    @cached_property
    def gb(self):
        return groebner_terms(self.gens, self.ring, self.rank, self.ring.top_order, self.shifts)

    @cached_property
    def series(self) -> HilbertSeries:
        """Hilbert series of ``F / self``."""
        lay = self.ring.layout
        by_pos = {}
        for P in self.gb.leads():
            by_pos.setdefault(P >> lay.pos_shift, []).append(lay.exps(P))
        return module_series(by_pos, self.shifts, self.ring.weights)

    def degrees(self) -> list[int]:
        return [vec_degree(g, self.ring, self.shifts) for g in self.gens]

    def contains(self, v) -> bool:
        return self.gb.contains(_terms(v))

    def contains_sub(self, other: Submodule) -> bool:
        return all(self.gb.contains(g) for g in other.gens)

    def __eq__(self, other):
        if not isinstance(other, Submodule):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.shifts == other.shifts
            and self.contains_sub(other)
            and other.contains_sub(self)
        )

    __hash__ = None

    def __add__(self, other: Submodule) -> Submodule:
        return self._like(self.gens + other.gens)

    def scaled(self, f) -> Submodule:
        f = _terms(f)
        return self._like([_times(self.ring, f, g) for g in self.gens])

    def times_ideal(self, polys) -> Submodule:
        """``I * self`` for ``I`` generated by ``polys``."""
        return self._like([_times(self.ring, _terms(f), g) for f in polys for g in self.gens])

    def times_ideal_power(self, polys, n: int) -> Submodule:
        out = self
        for _ in range(n):
            out = out.times_ideal(polys)
            out = out._like(_dedupe(out.gens))
        return out

    def intersect(self, other: Submodule) -> Submodule:
        """Generators of ``self ∩ other`` by eliminating the first copy of ``F ⊕ F``."""
        r = self.rank
        lay = self.ring.layout
        vecs = []
        for u in self.gens:
            vecs.append({**u, **{P + (r << lay.pos_shift): c for P, c in u.items()}})
        vecs.extend(other.gens)
        out = eliminate_components(vecs, self.ring, r, self.shifts + self.shifts)
        return self._like(out)

    def colon(self, f) -> Submodule:
        """``(self :_F f) = {v in F : f v in self}`` for a homogeneous polynomial ``f``."""
        f = _terms(f)
        r = self.rank
        ring = self.ring
        lay = ring.layout
        if not f:
            return Submodule.free(ring, self.shifts)
        df = ring.degree_of(next(iter(f)))
        vecs = []
        for k in range(r):
            v = _times(ring, f, _basis(ring, k))
            v[(r + k) << lay.pos_shift] = ring.field(1)
            vecs.append(v)
        vecs.extend(self.gens)
        shifts = self.shifts + tuple(s + df for s in self.shifts)
        return self._like(eliminate_components(vecs, ring, r, shifts))

    def hilbert_values(self, D: int) -> list[int]:
        return self.series.values(D)

    def dense_values(self, D: int) -> list[int]:
        return linalg.quotient_hf(self.gens, self.ring, self.shifts, D)

    def piece_dim(self, d: int) -> int:
        return linalg.piece_dim(self.gens, self.ring, self.shifts, d)


def _dedupe(gens):
    seen = set()
    out = []
    for g in gens:
        key = frozenset(g.items())
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


def ideal_power(polys, n: int) -> list[Poly]:
    """Products generating ``I^n`` (duplicates removed)."""
    if n < 0:
        raise DomainError(f"negative exponent {n}")
    polys = [p for p in polys if p]
    if not polys:
        return []
    ring = polys[0].ring
    cur = [ring.one()]
    for _ in range(n):
        nxt = {}
        for a in cur:
            for b in polys:
                c = a * b
                nxt.setdefault(frozenset(c.terms.items()), c)
        cur = list(nxt.values())
    return cur


@dataclass
class HilbertData:
    """Hilbert function of a module in degrees ``0..cutoff`` with its exact series."""

    values: list
    cutoff: int
    series: HilbertSeries
    audited: tuple = ()
    polynomial: list | None = None

    @property
    def dim(self) -> int:
        return self.series.dim

    @property
    def is_finite_length(self) -> bool:
        return self.series.is_finite_length

    @property
    def length(self):
        return self.series.length


@dataclass
class Resolution:
    """A minimal graded free resolution over ``S``.

    ``degrees[i]`` lists the twists of ``F_i``; ``maps[i]`` holds the columns
    of ``F_{i+1} -> F_i``.
    """

    ring: PolyRing
    degrees: list
    maps: list
    complete: bool = True

    @property
    def betti(self) -> list[int]:
        return [len(d) for d in self.degrees]

    @property
    def graded_betti(self) -> dict:
        out = {}
        for i, degs in enumerate(self.degrees):
            for d in degs:
                out[(i, d)] = out.get((i, d), 0) + 1
        return out

    @property
    def length(self) -> int:
        """Projective dimension (``0`` for the zero module)."""
        return max(len(self.degrees) - 1, 0)

    def is_complex(self) -> bool:
        """Consecutive maps compose to zero."""
        ring = self.ring
        for i in range(1, len(self.maps)):
            lower, upper = self.maps[i - 1], self.maps[i]
            for col in upper:
                total = {}
                for P, c in col.items():
                    j = P >> ring.layout.pos_shift
                    mono = {P & ring.layout.exp_mask: c}
                    total = vec_add(ring.field, total, _times(ring, mono, lower[j]))
                if total:
                    return False
        return True


class ModuleRep:
    """The graded ``A``-module ``U/V`` inside ``F = ⊕ A(-shifts[k])``."""

    def __init__(self, A: RingSpec, shifts, U=None, V=()):
        self.A = A
        S = A.S
        self.ring = S
        self.shifts = tuple(shifts)
        if any(s < 0 for s in self.shifts):
            raise GradingError("generator degrees must be non-negative")
        r = len(self.shifts)
        u = [_basis(S, k) for k in range(r)] if U is None else [_terms(g) for g in U]
        jf = [_times(S, q.terms, _basis(S, k)) for q in A.quotient for k in range(r)]
        self.U = Submodule(S, self.shifts, u)
        self.V = Submodule(S, self.shifts, [_terms(g) for g in V] + jf)
        self.is_presented = U is None

    # -- constructors --

    @classmethod
    def free(cls, A: RingSpec, shifts) -> ModuleRep:
        return cls(A, shifts)

    @classmethod
    def coker(cls, A: RingSpec, columns, shifts) -> ModuleRep:
        """Cokernel of the matrix whose columns are the given vectors."""
        return cls(A, shifts, None, columns)

    @classmethod
    def cyclic(cls, A: RingSpec, ideal=()) -> ModuleRep:
        """``A / I``."""
        return cls(A, (0,), None, [p.terms for p in ideal])

    @classmethod
    def direct_sum(cls, parts) -> ModuleRep:
        parts = list(parts)
        A = parts[0].A
        S = A.S
        lay = S.layout
        shifts, U, V = [], [], []
        off = 0
        for m in parts:
            move = off << lay.pos_shift
            U.extend({P + move: c for P, c in g.items()} for g in m.U.gens)
            V.extend({P + move: c for P, c in g.items()} for g in m.V.gens)
            shifts.extend(m.shifts)
            off += m.rank
        out = cls(A, shifts, U, V)
        out.is_presented = all(m.is_presented for m in parts)
        return out

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def __repr__(self):
        return f"ModuleRep(rank {self.rank}, {len(self.U.gens)} gens, {len(self.V.gens)} relations)"

    def sub(self, U: Submodule) -> ModuleRep:
        """``(U + V) / V`` in the same ambient free module."""
        out = ModuleRep(self.A, self.shifts, U.gens, self.V.gens)
        return out

    def quotient(self, W: Submodule) -> ModuleRep:
        """``U / (V + W)``."""
        out = ModuleRep(self.A, self.shifts, self.U.gens, self.V.gens + W.gens)
        out.is_presented = self.is_presented
        return out

    def ideal_power_sub(self, polys, n: int) -> ModuleRep:
        """``I^n M`` as a submodule of ``M``."""
        return self.sub(self.U.times_ideal_power(polys, n))

    def ideal_power_quotient(self, polys, n: int) -> ModuleRep:
        """``M / I^n M``."""
        return self.quotient(self.U.times_ideal_power(polys, n))

    # -- numerical invariants --

    @cached_property
    def total(self) -> Submodule:
        return self.U + self.V

    @cached_property
    def series(self) -> HilbertSeries:
        if self.is_presented:
            return self.V.series
        return self.V.series - self.total.series

    @property
    def is_zero(self) -> bool:
        return self.series.is_zero

    @property
    def dim(self) -> int:
        return self.series.dim

    @property
    def is_finite_length(self) -> bool:
        return self.series.is_finite_length

    @property
    def length(self):
        return self.series.length

    def dense_values(self, D: int) -> list[int]:
        """Hilbert function by rank counting, independent of Groebner bases."""
        tot = self.total.gens
        return [
            linalg.piece_dim(tot, self.ring, self.shifts, d) - self.V.piece_dim(d)
            for d in range(D + 1)
        ]

    def hilbert(self, D: int, audit: int = AUDIT_DEGREE) -> HilbertData:
        """Hilbert function up to ``D``; degrees ``<= min(D, audit)`` are re-checked densely."""
        vals = self.series.values(D)
        upto = min(D, audit)
        if upto >= 0 and audit >= 0:
            dense = self.dense_values(upto)
            if dense != vals[: upto + 1]:
                raise AuditFailure(f"Hilbert function mismatch: {vals[:upto + 1]} vs dense {dense}")
        return HilbertData(vals, D, self.series, tuple(range(upto + 1)), hilbert_polynomial(self.series))

    def num_generators(self) -> int:
        """``mu(M)``: length of ``M / m M`` from Hilbert series."""
        mU = self.U.times_ideal(self.ring.gens())
        low = self.V + mU
        return (low.series - self.total.series).length

    def minimal_generators(self) -> list[dict]:
        """A minimal generating subset of the given generators (dense linear algebra)."""
        return linalg.minimal_subset(self.U.gens, self.ring, self.shifts, modulo=self.V.gens)

    # -- presentations and resolutions --

    def presentation(self):
        """``(degrees, relations)`` with ``M ≅ coker`` of the relations over ``S``.

        Generators are the given generators of ``U``; for a cokernel module the
        relations are simply ``V``.
        """
        if self.is_presented:
            return list(self.shifts), list(self.V.gens)
        S = self.ring
        lay = S.layout
        r = self.rank
        gens = self.U.gens
        degs = self.U.degrees()
        vecs = []
        for j, u in enumerate(gens):
            v = dict(u)
            v[(r + j) << lay.pos_shift] = S.field(1)
            vecs.append(v)
        vecs.extend(self.V.gens)
        rels = eliminate_components(vecs, S, r, self.shifts + tuple(degs))
        return degs, rels

    def as_cokernel(self) -> ModuleRep:
        degs, rels = prune(*self.presentation(), self.ring)
        out = ModuleRep(RingSpec(self.ring), degs, None, rels)
        out.A = self.A  # J already sits inside the relations
        return out

    def resolution(self, max_length: int | None = None) -> Resolution:
        """Minimal graded free resolution over ``S`` (finite by Hilbert's syzygy theorem)."""
        S = self.ring
        degs, rels = prune(*self.presentation(), S)
        rels = linalg.minimal_subset(rels, S, degs)
        degrees = [degs] if degs else []
        maps = []
        cur = degs
        while rels:
            col_degs = [vec_degree(c, S, cur) for c in rels]
            degrees.append(col_degs)
            maps.append(rels)
            if max_length is not None and len(degrees) - 1 > max_length:
                raise ResolutionTruncated(f"no resolution of length <= {max_length}")
            syz = syzygy_terms(rels, S, len(cur), shifts=cur, col_shifts=col_degs)
            rels = linalg.minimal_subset(syz, S, col_degs)
            cur = col_degs
        return Resolution(S, degrees, maps)

    @cached_property
    def _resolution(self) -> Resolution:
        return self.resolution()

    @property
    def projdim(self) -> int:
        return self._resolution.length

    @property
    def depth(self):
        """Depth via Auslander-Buchsbaum; ``None`` (infinite) for the zero module."""
        if self.is_zero:
            return None
        return self.ring.nvars - self.projdim

    @property
    def is_cm(self) -> bool:
        return self.is_zero or self.depth == self.dim

    @property
    def is_mcm(self) -> bool:
        return not self.is_zero and self.is_cm and self.dim == self.A.dim

    def is_free(self) -> bool:
        """Free over ``A``: a minimal presentation has ``HS = sum t^d_i * HS(A)``."""
        degs, _ = prune(*self.presentation(), self.ring)
        free = HilbertSeries((), self.series.weights)
        base = quotient_ring_series(self.A)
        for d in degs:
            free = free + HilbertSeries(tuple([0] * d + list(base.numerator)), base.weights)
        return free == self.series

    def colon_nzd(self, f) -> bool:
        """``f`` is a nonzerodivisor on ``M``."""
        # f u in V with u in U  =>  u in V   (checked on U + V)
        tot = self.total
        lifted = self.V.colon(f).intersect(tot)
        return self.V.contains_sub(lifted)


def prune(degs, rels, S: PolyRing):
    """Remove generators killed by a relation with a unit entry.

    Returns ``(degrees, relations)`` of an isomorphic cokernel in which no
    relation has a nonzero constant entry.
    """
    degs = list(degs)
    rels = [dict(r) for r in rels if r]
    lay = S.layout
    F = S.field
    while True:
        hit = None
        for i, r in enumerate(rels):
            for P, c in r.items():
                if not (P & lay.exp_mask):
                    hit = (i, P >> lay.pos_shift, c)
                    break
            if hit:
                break
        if hit is None:
            return degs, rels
        i, pos, c = hit
        r = rels.pop(i)
        inv = F.inv(c)
        new = []
        for s in rels:
            a = {P & lay.exp_mask: v for P, v in s.items() if P >> lay.pos_shift == pos}
            if a:
                s = vec_add(F, s, _times(S, a, r), F.neg(inv))
            s = _drop_position(s, pos, lay)
            if s:
                new.append(s)
        rels = new
        degs.pop(pos)


def _drop_position(v, pos, lay):
    out = {}
    one = 1 << lay.pos_shift
    for P, c in v.items():
        k = P >> lay.pos_shift
        if k == pos:
            raise AssertionError("position should have been cleared")
        out[P - one if k > pos else P] = c
    return out


def quotient_ring_series(A: RingSpec) -> HilbertSeries:
    return Submodule.ideal(A.quotient, A.S).series if A.quotient else HilbertSeries((1,), A.S.weights)


def krull_dim_ideal(A: RingSpec, gens) -> int:
    """``dim A / (gens)``; ``-1`` if the quotient is zero."""
    polys = list(A.quotient) + [g for g in gens if g]
    if not polys:
        return A.S.nvars
    return Submodule.ideal(polys, A.S).series.dim


def depth_by_regular_sequence(M: ModuleRep, rng: np.random.Generator, tries: int = 3):
    """Depth of ``M`` grown greedily from random linear forms.

    Independent of resolutions.  A random form over a large field avoids the
    finitely many associated primes with high probability; ``tries`` forms
    are drawn before the sequence is declared maximal.  Standard grading only.
    """
    S = M.ring
    if any(w != 1 for w in S.weights):
        return None
    if M.is_zero:
        return None
    F = S.field
    cur = M.as_cokernel()
    depth = 0
    while True:
        found = None
        for _ in range(tries):
            coeffs = [F.random_element(rng) for _ in range(S.nvars)]
            ell = {S.layout.variable(i): c for i, c in enumerate(coeffs) if c}
            if ell and cur.colon_nzd(ell):
                found = ell
                break
        if found is None:
            return depth
        depth += 1
        cur = cur.quotient(Submodule.free(S, cur.shifts).scaled(found))
