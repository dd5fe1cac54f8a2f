"""Buchberger's algorithm for ideals and submodules of graded free modules.

Everything runs on raw term dicts (packed monomial -> coefficient) so ideals
are simply the rank-one case.  Pair handling follows Gebauer-Moeller with the
sugar ("normal") selection strategy; the product criterion is only applied to
ideals, where it is valid.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .monomial import ModuleOrder, TermOrder
from .poly import FreeVec, GradingError, Poly, PolyRing, RingMismatch


class OrderMismatch(ValueError):
    pass


class RankMismatch(ValueError):
    pass


@dataclass
class _Elem:
    P: int  # lead monomial (packed, with position)
    k: int  # lead key
    tail: list  # [(P, key, coeff)], descending
    sugar: int

    def items(self):
        return [(self.k, self.P, 1)] + [(k, P, c) for P, k, c in self.tail]


def _items(v: dict, order: ModuleOrder) -> list:
    key = order.key
    items = [(key(P), P, c) for P, c in v.items() if c]
    items.sort(reverse=True)
    return items


def _monic(F, items, sugar) -> _Elem:
    k0, P0, c0 = items[0]
    inv = F.inv(c0)
    tail = [(P, k, F.mul(c, inv)) for k, P, c in items[1:]]
    return _Elem(P0, k0, tail, sugar)


def _reducers(elems) -> list:
    return [(e.P, e.k, e.tail) for e in elems]


class _Engine:
    def __init__(self, ring: PolyRing, order: ModuleOrder, shifts, ideal: bool):
        self.ring = ring
        self.order = order
        self.lay = ring.layout
        self.F = ring.field
        self.shifts = shifts
        self.ideal = ideal

    def degree(self, P: int) -> int:
        lay = self.lay
        return self.ring.degree_of(P & lay.exp_mask) + self.shifts[P >> lay.pos_shift]

    def reduce(self, items, reducers, full=True):
        return kernels.reduce_terms(items, reducers, self.lay.divmask, self.F.p, full)

    def spair(self, f: _Elem, g: _Elem):
        lay, F = self.lay, self.F
        L = lay.lcm(f.P, g.P)
        kL = self.order.key(L)
        df, dkf = L - f.P, kL - f.k
        dg, dkg = L - g.P, kL - g.k
        acc = {}
        for P, k, c in f.tail:
            acc[P + df] = [k + dkf, c]
        for P, k, c in g.tail:
            q = P + dg
            slot = acc.get(q)
            if slot is None:
                acc[q] = [k + dkg, F.neg(c)]
            else:
                slot[1] = F.sub(slot[1], c)
        items = [(k, P, c) for P, (k, c) in acc.items() if c]
        items.sort(reverse=True)
        return items

    def pair_sugar(self, f: _Elem, g: _Elem) -> int:
        L = self.lay.lcm(f.P, g.P)
        dL = self.degree(L)
        return max(f.sugar + dL - self.degree(f.P), g.sugar + dL - self.degree(g.P))

    def same_pos(self, P, Q) -> bool:
        s = self.lay.pos_shift
        return (P >> s) == (Q >> s)

    def run(self, vecs, max_degree=None):
        order = self.order
        inputs = []
        for v in vecs:
            items = _items(v, order)
            if items:
                sugar = max(self.degree(P) for _, P, _ in items)
                inputs.append((sugar, [(-k, P, c) for k, P, c in items], items))
        # canonical input order keeps results reproducible
        inputs.sort(key=lambda t: (t[0], t[1]))
        inputs = [(s, it) for s, _, it in inputs]

        f: list[_Elem] = []
        G: list[int] = []
        B: set = set()
        pair_info: dict = {}
        reducers: list = []
        ii = 0
        truncated = False

        def add(h_idx):
            nonlocal G, B, reducers
            G, B = self._update(f, G, B, h_idx, pair_info)
            reducers = _reducers([f[i] for i in G])

        while ii < len(inputs) or B:
            best = None
            if B:
                best = min(B, key=lambda pr: pair_info[pr])
            if best is not None and (ii >= len(inputs) or pair_info[best][0] < inputs[ii][0]):
                sugar = pair_info[best][0]
                if max_degree is not None and sugar > max_degree:
                    truncated = True
                    break
                B.discard(best)
                i, j = best
                items = self.spair(f[i], f[j])
            else:
                sugar, items = inputs[ii]
                if max_degree is not None and sugar > max_degree:
                    truncated = True
                    break
                ii += 1
            if not items:
                continue
            rem = self.reduce(items, reducers)
            if rem:
                f.append(_monic(self.F, rem, sugar))
                add(len(f) - 1)

        basis = [f[i] for i in G]
        # tail-reduce into the reduced basis
        out = []
        for idx, e in enumerate(basis):
            others = _reducers(basis[:idx] + basis[idx + 1 :])
            rem = self.reduce(e.items(), others)
            out.append(_monic(self.F, rem, e.sugar))
        out.sort(key=lambda e: e.k)
        return out, truncated

    def _update(self, f, G, B, ih, pair_info):
        lay = self.lay
        h = f[ih]
        mh = h.P

        def lcm(a, b):
            return lay.lcm(a, b)

        def coprime(a, b):
            return self.ideal and lay.coprime(a, b)

        C = [ig for ig in G if self.same_pos(f[ig].P, mh)]
        D = []
        while C:
            ig = C.pop()
            mg = f[ig].P
            LCMhg = lcm(mh, mg)

            def lcm_divides(ip, LCMhg=LCMhg):
                return lay.divides(lcm(mh, f[ip].P), LCMhg)

            if coprime(mh, mg) or (
                not any(lcm_divides(ipx) for ipx in C) and not any(lcm_divides(pr[1]) for pr in D)
            ):
                D.append((ih, ig))

        E = set()
        for ih_, ig in D:
            if not coprime(mh, f[ig].P):
                E.add((ih_, ig) if ih_ < ig else (ig, ih_))

        B_new = set()
        for pr in B:
            ig1, ig2 = pr
            mg1, mg2 = f[ig1].P, f[ig2].P
            LCM12 = lcm(mg1, mg2)
            if (
                not lay.divides(mh, LCM12)
                or lcm(mg1, mh) == LCM12
                or lcm(mg2, mh) == LCM12
            ):
                B_new.add(pr)
        for pr in E:
            i, j = pr
            L = lcm(f[i].P, f[j].P)
            pair_info[pr] = (self.pair_sugar(f[i], f[j]), self.order.key(L), i, j)
        B_new |= E

        G_new = [ig for ig in G if not lay.divides(mh, f[ig].P)]
        G_new.append(ih)
        return G_new, B_new


class GBasis:
    """A Groebner basis of a submodule of ``S^rank`` (``rank == 1`` for ideals).

    ``truncated`` bases are only complete up to ``max_degree``.
    """

    def __init__(self, ring, rank, order, shifts, elems, truncated=False, max_degree=None):
        self.ring = ring
        self.rank = rank
        self.order = order
        self.shifts = tuple(shifts)
        self.elems = elems
        self.reduced = True
        self.truncated = truncated
        self.max_degree = max_degree
        self._reducers = _reducers(elems)

    def __len__(self):
        return len(self.elems)

    def __repr__(self):
        return f"GBasis({len(self.elems)} elements, rank={self.rank})"

    @property
    def is_zero(self) -> bool:
        return not self.elems

    def leads(self) -> list[int]:
        return [e.P for e in self.elems]

    def lead_exps(self) -> list[tuple]:
        lay = self.ring.layout
        return [lay.unpack(e.P) for e in self.elems]

    def vectors(self) -> list[dict]:
        return [{P: c for _, P, c in e.items()} for e in self.elems]

    def polys(self) -> list[Poly]:
        if self.rank != 1:
            raise RankMismatch("not an ideal basis")
        return [Poly(self.ring, v) for v in self.vectors()]

    def freevecs(self) -> list[FreeVec]:
        return [FreeVec(self.ring, self.rank, v) for v in self.vectors()]

    def _as_terms(self, f) -> dict:
        if isinstance(f, Poly):
            if self.rank != 1:
                raise RankMismatch("polynomial against a module basis")
            if f.ring != self.ring:
                raise RingMismatch("polynomial from another ring")
            return f.terms
        if isinstance(f, FreeVec):
            if f.rank != self.rank:
                raise RankMismatch(f"rank {f.rank} vs {self.rank}")
            if f.ring != self.ring:
                raise RingMismatch("vector from another ring")
            return f.terms
        return f

    def reduce_terms(self, v: dict) -> dict:
        items = _items(v, self.order)
        rem = kernels.reduce_terms(items, self._reducers, self.ring.layout.divmask, self.ring.field.p)
        return {P: c for _, P, c in rem}

    def normal_form(self, f, order: ModuleOrder | TermOrder | None = None):
        """Remainder of ``f`` on division by the basis (same type as ``f``)."""
        if order is not None:
            mine = self.order.term if isinstance(order, TermOrder) else self.order
            if order != mine:
                raise OrderMismatch(f"basis computed under {self.order!r}")
        terms = self.reduce_terms(self._as_terms(f))
        if isinstance(f, Poly):
            return Poly(self.ring, terms)
        if isinstance(f, FreeVec):
            return FreeVec(self.ring, self.rank, terms)
        return terms

    def contains(self, f) -> bool:
        return not self.reduce_terms(self._as_terms(f))

    def contains_all(self, vecs) -> bool:
        return all(self.contains(v) for v in vecs)

    def verify(self) -> bool:
        """Re-check the Buchberger certificate: every S-pair reduces to zero."""
        eng = _Engine(self.ring, self.order, self.shifts, self.rank == 1)
        for i, f in enumerate(self.elems):
            for g in self.elems[i + 1 :]:
                if not eng.same_pos(f.P, g.P):
                    continue
                items = eng.spair(f, g)
                if items and eng.reduce(items, self._reducers):
                    return False
        return True

    def is_reduced(self) -> bool:
        lay = self.ring.layout
        for e in self.elems:
            for other in self.elems:
                if other is e:
                    continue
                if any(lay.divides(other.P, P) for _, P, _ in e.items()):
                    return False
        return True


def _shifts_or_zero(shifts, rank):
    return tuple(shifts) if shifts is not None else (0,) * rank


def groebner_terms(vecs, ring: PolyRing, rank: int, order: ModuleOrder | None = None,
                   shifts=None, max_degree=None) -> GBasis:
    """Groebner basis of the submodule spanned by raw term dicts."""
    order = order or ring.top_order
    if order.term.nvars != ring.nvars:
        raise OrderMismatch("order and ring disagree on the number of variables")
    shifts = _shifts_or_zero(shifts, rank)
    eng = _Engine(ring, order, shifts, ideal=(rank == 1))
    elems, truncated = eng.run(vecs, max_degree)
    return GBasis(ring, rank, order, shifts, elems, truncated, max_degree)


def buchberger(gens, order: TermOrder | ModuleOrder | None = None) -> GBasis:
    """Reduced Groebner basis of the ideal generated by ``gens`` (a list of Poly)."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise RingMismatch("generators from different rings")
    if isinstance(order, TermOrder):
        order = ModuleOrder(order)
    return groebner_terms([g.terms for g in gens], ring, 1, order)


def module_buchberger(gens, order: ModuleOrder | None = None, shifts=None) -> GBasis:
    """Groebner basis of the submodule of ``S^r`` spanned by FreeVecs (TOP order by default)."""
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    ring, rank = gens[0].ring, gens[0].rank
    for g in gens:
        if g.rank != rank:
            raise RankMismatch(f"rank {g.rank} vs {rank}")
        if g.ring != ring:
            raise RingMismatch("generators from different rings")
    return groebner_terms([g.terms for g in gens], ring, rank, order, shifts)


def normal_form(f, G: GBasis, order=None):
    return G.normal_form(f, order)


def eliminate(gens, drop) -> list[Poly]:
    """Generators of ``(gens) ∩ k[remaining variables]`` (returned in the same ring)."""
    gens = list(gens)
    ring = gens[0].ring
    drop = {ring.names.index(d) if isinstance(d, str) else d for d in drop}
    term = TermOrder.elimination(drop, ring.nvars, ring.weights)
    G = groebner_terms([g.terms for g in gens], ring, 1, ModuleOrder(term))
    out = []
    for v in G.vectors():
        p = Poly(ring, v)
        if not (p.support_vars() & drop):
            out.append(p)
    return out


def eliminate_components(vecs, ring: PolyRing, split: int, shifts, order: TermOrder | None = None,
                         max_degree=None) -> list[dict]:
    """Vectors of the span lying in the positions ``>= split``, renumbered from 0.

    The input lives in ``S^(split + r2)``; a position-over-term order between
    the two blocks makes the intersection with ``0 + S^r2`` visible in the
    Groebner basis.
    """
    term = order or ring.grevlex
    G = groebner_terms(vecs, ring, len(shifts), ModuleOrder(term, split=split), shifts, max_degree)
    lay = ring.layout
    out = []
    for e in G.elems:
        if (e.P >> lay.pos_shift) >= split:
            out.append({P - (split << lay.pos_shift): c for _, P, c in e.items()})
    return out


def column_degrees(columns, ring: PolyRing, shifts) -> list[int]:
    degs = []
    for col in columns:
        d = _vec_degree(col, ring, shifts)
        degs.append(0 if d is None else d)
    return degs


def _vec_degree(v: dict, ring, shifts):
    lay = ring.layout
    degs = {ring.degree_of(P & lay.exp_mask) + shifts[P >> lay.pos_shift] for P in v}
    if len(degs) > 1:
        raise GradingError(f"inhomogeneous column with degrees {sorted(degs)}")
    return degs.pop() if degs else None


def syzygy_terms(columns, ring: PolyRing, rank: int, quotient=(), shifts=None,
                 col_shifts=None) -> list[dict]:
    """Kernel generators of ``S^m -> S^rank / (quotient * S^rank)`` given by ``columns``."""
    shifts = _shifts_or_zero(shifts, rank)
    if col_shifts is None:
        col_shifts = column_degrees(columns, ring, shifts)
    lay = ring.layout
    F = ring.field
    vecs = []
    for j, col in enumerate(columns):
        v = dict(col)
        v[(rank + j) << lay.pos_shift] = F(1)
        vecs.append(v)
    for q in quotient:
        for k in range(rank):
            vecs.append({P + (k << lay.pos_shift): c for P, c in q.terms.items()})
    return eliminate_components(vecs, ring, rank, tuple(shifts) + tuple(col_shifts))


def syzygies(columns, quotient=(), shifts=None) -> list[FreeVec]:
    """Columns generating the kernel of the map given by ``columns`` (FreeVecs of rank r).

    ``quotient`` lists generators of ``J`` when the map is over ``A = S/J``.
    """
    columns = list(columns)
    ring, rank = columns[0].ring, columns[0].rank
    for c in columns:
        if c.rank != rank:
            raise RankMismatch("columns of different lengths")
    for q in quotient:
        if not q.is_homogeneous():
            raise GradingError(f"quotient generator {q} is not homogeneous")
    raw = syzygy_terms([c.terms for c in columns], ring, rank, quotient, shifts)
    return [FreeVec(ring, len(columns), v) for v in raw]
