"""Blowup constructions for a graded module ``M`` and an ideal ``I`` of ``A = S/J``.

* ``Tor_1(M, A/I^n)`` lengths, two ways (a presentation of ``M`` and a
  presentation of ``I^n``, i.e. balance of Tor);
* the Rees and fiber relations of ``M`` (``M = A`` gives the fiber cone),
  obtained by eliminating ``t`` from ``T_i - t f_i`` over ``S[T, t]``;
* reductions, superficial elements and the local complete intersection test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import linalg
from .groebner import groebner_terms, syzygy_terms
from .monomial import ModuleOrder, TermOrder
from .modules import ModuleRep, Submodule, ideal_power, prune
from .poly import Poly, PolyRing, RingSpec


class NotFiniteLength(ValueError):
    pass


class NotEquigenerated(ValueError):
    pass


# -- Tor_1 --


def _pruned(M: ModuleRep):
    degs, rels = prune(*M.presentation(), M.ring)
    return degs, rels


def tor1_series(M: ModuleRep, I, n: int):
    """Hilbert series of ``Tor_1^A(M, A/I^n)``.

    With ``M = F/L`` (``L ⊇ J F``) the group is
    ``(L ∩ (I^n F + J F)) / (I^n L + J F)``.
    """
    S = M.ring
    degs, rels = _pruned(M)
    if not degs:
        return ModuleRep(M.A, (), None, ()).series
    F = Submodule.free(S, degs)
    L = Submodule(S, degs, rels)
    JF = F.times_ideal(M.A.quotient) if M.A.quotient else Submodule(S, degs)
    InF = F.times_ideal_power(I, n)
    top = L.intersect(InF + JF)
    bottom = L.times_ideal_power(I, n) + JF
    return bottom.series - top.series


def tor1_series_balanced(M: ModuleRep, I, n: int):
    """The same series from ``0 -> I^n -> A -> A/I^n -> 0``.

    ``Tor_1(A/I^n, M) = ker(I^n ⊗ M -> M)``, so its series is
    ``HS(I^n ⊗ M) - HS(I^n M)``.  ``I^n ⊗ M`` is presented from the
    syzygies of the generators of ``I^n`` over ``A`` and a presentation of ``M``.
    """
    S = M.ring
    lay = S.layout
    degs, rels = _pruned(M)
    if not degs:
        return ModuleRep(M.A, (), None, ()).series
    g = [p for p in ideal_power(I, n)]
    gdeg = [p.degree() for p in g]
    r, s = len(degs), len(g)
    syz = syzygy_terms([p.terms for p in g], S, 1, M.A.quotient, col_shifts=gdeg)
    shifts = tuple(gd + a for gd in gdeg for a in degs)  # block i holds F(-deg g_i)
    rel_tensor = []
    for i in range(s):
        for v in rels:
            rel_tensor.append({P + ((i * r) << lay.pos_shift): c for P, c in v.items()})
    for z in syz:
        for k in range(r):
            v = {}
            for P, c in z.items():
                i = P >> lay.pos_shift
                v[(P & lay.exp_mask) + ((i * r + k) << lay.pos_shift)] = c
            rel_tensor.append(v)
    tensor = Submodule(S, shifts, rel_tensor).series
    F = Submodule.free(S, degs)
    L = Submodule(S, degs, rels)
    image = L.series - (L + F.times_ideal(g)).series
    return tensor - image


def tor1_length(M: ModuleRep, I, n: int, balanced: bool = False) -> int:
    hs = tor1_series_balanced(M, I, n) if balanced else tor1_series(M, I, n)
    if not hs.is_finite_length:
        raise NotFiniteLength(f"Tor_1(M, A/I^{n}) does not have finite length")
    return hs.length


def tor1_lengths(M: ModuleRep, I, nmax: int, balanced: bool = False) -> list[int]:
    """``[ℓ(Tor_1(M, A/I^n)) for n = 1..nmax]``."""
    return [tor1_length(M, I, n, balanced) for n in range(1, nmax + 1)]


def tor1_dense_values(M: ModuleRep, I, n: int, D: int) -> list[int]:
    """Degreewise dimensions of ``Tor_1(M, A/I^n)`` by rank counting (``0..D``)."""
    S = M.ring
    degs, rels = _pruned(M)
    if not degs:
        return [0] * (D + 1)
    F = Submodule.free(S, degs)
    JF = F.times_ideal(M.A.quotient).gens if M.A.quotient else []
    InF = F.times_ideal_power(I, n).gens
    L = rels
    bottom = Submodule(S, degs, L).times_ideal_power(I, n).gens + JF
    out = []
    for d in range(D + 1):
        cap = linalg.intersection_dim(L, InF + JF, S, degs, d)
        out.append(cap - linalg.piece_dim(bottom, S, degs, d))
    return out


# -- Rees and fiber relations --


def _fresh(names, base, count):
    out = []
    taken = set(names)
    for i in range(1, count + 1):
        cand = f"{base}{i}"
        while cand in taken:
            cand = "_" + cand
        out.append(cand)
        taken.add(cand)
    return out


def _repack(v: dict, src: PolyRing, dst: PolyRing, keep) -> dict:
    """Move a vector between layouts, keeping variables ``keep`` (in ``dst`` order)."""
    ls, ld = src.layout, dst.layout
    out = {}
    for P, c in v.items():
        pos, e = ls.unpack(P)
        out[ld.pack([e[i] for i in keep], pos)] = c
    return out


@dataclass
class ReesData:
    """Relations of ``R(I, M) = ⊕ I^n M t^n`` as a quotient of ``F[T_1..T_m]``."""

    ring: PolyRing  # S[T]
    nS: int
    degs: list  # degrees of the generators of M
    relations: list  # vectors over S[T]
    ideal: list

    @property
    def tnames(self):
        return self.ring.names[self.nS :]


def rees_relations(M: ModuleRep, I) -> ReesData:
    S = M.ring
    I = [p for p in I if p]
    m = len(I)
    degs, rels = _pruned(M)
    tn = _fresh(S.names, "T", m)
    tt = _fresh(S.names + tuple(tn), "t", 1)
    tw = [p.degree() + 1 for p in I]
    E = S.extend(tn + tt, tw + [1])
    nS = S.nvars
    lay = E.layout
    tidx = nS + m
    vecs = []
    for v in rels:
        vecs.append(_embed_vec(v, S, E))
    for i, f in enumerate(I):
        fE = f.embed(E)
        for k in range(len(degs)):
            v = {lay.pack([1 if j == nS + i else 0 for j in range(E.nvars)], k): E.field(1)}
            for P, c in fE.terms.items():
                Q = P + lay.variable(tidx) + (k << lay.pos_shift)
                v[Q] = E.field.neg(c)
            vecs.append(v)
    order = ModuleOrder(TermOrder.elimination([tidx], E.nvars, E.weights))
    G = groebner_terms(vecs, E, len(degs), order, degs)
    ST = S.extend(tn, tw)
    keep = list(range(nS + m))
    out = []
    for v in G.vectors():
        if any(lay.exps(P)[tidx] for P in v):
            continue
        out.append(_repack(v, E, ST, keep))
    return ReesData(ST, nS, list(degs), out, I)


def _embed_vec(v: dict, src: PolyRing, dst: PolyRing) -> dict:
    ls, ld = src.layout, dst.layout
    pad = [0] * (dst.nvars - src.nvars)
    return {ld.pack(list(ls.exps(P)) + pad, P >> ls.pos_shift): c for P, c in v.items()}


@dataclass
class FiberModule:
    """``F_I(M) = ⊕ I^n M / m I^n M`` presented over ``k[T_1..T_m]``."""

    T: PolyRing
    module: ModuleRep  # over RingSpec(T, fiber ideal), generators in T-degree 0
    fiber_ideal: list
    rees: ReesData

    def hilbert(self, D: int, audit: int = -1):
        return self.module.hilbert(D, audit)

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def depth(self):
        return self.module.depth

    def is_free(self) -> bool:
        """Free over the fiber cone ``F(I)``."""
        return self.module.is_free()


def _specialize_vecs(rees: ReesData, T: PolyRing) -> list[dict]:
    """Set the variables of ``S`` to zero."""
    nS = rees.nS
    src = rees.ring.layout
    dst = T.layout
    out = []
    for v in rees.relations:
        w = {}
        for P, c in v.items():
            pos, e = src.unpack(P)
            if any(e[:nS]):
                continue
            w[dst.pack(e[nS:], pos)] = c
        if w:
            out.append(w)
    return out


def fiber_module(M: ModuleRep, I, fiber_ideal=None) -> FiberModule:
    rees = rees_relations(M, I)
    T = PolyRing(rees.tnames, M.ring.field)
    rels = _specialize_vecs(rees, T)
    if fiber_ideal is None:
        fiber_ideal = fiber_cone(M.A, I)
    A_F = RingSpec(T, fiber_ideal)
    mod = ModuleRep(A_F, (0,) * len(rees.degs), None, rels)
    return FiberModule(T, mod, list(fiber_ideal), rees)


def fiber_cone(A: RingSpec, I) -> list[Poly]:
    """Generators of the defining ideal of ``F(I) = ⊕ I^n / m I^n`` in ``k[T]``."""
    rees = rees_relations(ModuleRep.cyclic(A), I)
    T = PolyRing(rees.tnames, A.S.field)
    return [Poly(T, v) for v in _specialize_vecs(rees, T)]


def fiber_cone_module(A: RingSpec, I) -> FiberModule:
    """``F(I)`` itself as a module over ``k[T]``."""
    fib = fiber_cone(A, I)
    T = fib[0].ring if fib else PolyRing(_fresh(A.S.names, "T", len([p for p in I if p])), A.S.field)
    return FiberModule(T, ModuleRep.cyclic(RingSpec(T, fib)), fib, None)


def mu_dense(M: ModuleRep) -> int:
    """Number of minimal generators by degreewise linear algebra."""
    return len(M.minimal_generators())


def fiber_hf_dense(M: ModuleRep, I, nmax: int) -> list[int]:
    """``[mu(I^n M) for n = 0..nmax]``: the Hilbert function of ``F_I(M)``."""
    return [mu_dense(M.ideal_power_sub(I, n)) for n in range(nmax + 1)]


def analytic_spread(A: RingSpec, I) -> int:
    return fiber_cone_module(A, I).dim


# -- reductions --


@dataclass
class ReductionReport:
    """Outcome of the randomized search for a minimal reduction.

    ``status`` is ``verified-le-1`` (some ``J`` with ``r_J <= 1``), ``found``
    (only larger ``r_J``) or ``exhausted``.  ``r`` is the least certified
    ``r_J`` over all trials and ``gens`` the ``J`` achieving it.
    """

    status: str
    r: int | None
    gens: list
    trials: int
    ell: int
    coefficients: list = field(default_factory=list)


def _random_combos(I, count, rng, F):
    S = I[0].ring
    coeffs = [[F.random_element(rng) for _ in I] for _ in range(count)]
    gens = []
    for row in coeffs:
        acc = S.zero()
        for c, f in zip(row, I):
            acc = acc + f.scale(c)
        gens.append(acc)
    return gens, coeffs


def _ideal_in_A(A: RingSpec, gens) -> Submodule:
    return Submodule.ideal(list(gens) + list(A.quotient), A.S)


def reduces_at(A: RingSpec, J, I, m: int) -> bool:
    """``J I^m = I^(m+1)`` in ``A`` (the inclusion ``⊆`` holds by construction)."""
    lhs = _ideal_in_A(A, [j * f for j in J for f in ideal_power(I, m)])
    return all(lhs.contains(f) for f in ideal_power(I, m + 1))


def reduction_number(A: RingSpec, J, I, mmax: int):
    """Least ``m <= mmax`` with ``J I^m = I^(m+1)`` in ``A``, else ``None``."""
    return next((m for m in range(mmax + 1) if reduces_at(A, J, I, m)), None)


def find_reduction(A: RingSpec, I, rng: np.random.Generator, ell: int | None = None,
                   trials: int = 16, mmax: int = 5) -> ReductionReport:
    """Minimal reductions from ``ell = l(I)`` random combinations of the generators.

    Combinations of generators of one degree stay homogeneous, so ``I`` must
    be equigenerated.  Trials stop early once ``r_J = 0`` is certified.
    """
    I = [p for p in I if p]
    if ell is None:
        ell = analytic_spread(A, I) if I else 0
    if not I:
        return ReductionReport("verified-le-1", 0, [], 0, 0)
    if len({p.degree() for p in I}) > 1:
        raise NotEquigenerated("reductions are searched among combinations of equal-degree generators")
    F = A.S.field
    best = None
    used = 0
    for _ in range(trials):
        used += 1
        J, coeffs = _random_combos(I, ell, rng, F)
        r = reduction_number(A, J, I, mmax)
        if r is not None and (best is None or r < best[0]):
            best = (r, J, coeffs)
        if best is not None and best[0] == 0:
            break
    if best is None:
        return ReductionReport("exhausted", None, [], used, ell)
    r, J, coeffs = best
    return ReductionReport("verified-le-1" if r <= 1 else "found", r, J, used, ell, coeffs)


# -- superficial elements --


class NoSuperficialFound(RuntimeError):
    def __init__(self, msg, last=None):
        super().__init__(msg)
        self.last = last


def first_syzygy(M: ModuleRep) -> ModuleRep:
    """``L = ker(F -> M)`` for a minimal free cover, as a submodule of ``F`` over ``A``."""
    degs, rels = _pruned(M)
    return ModuleRep(M.A, degs, rels, ())


def _power_sub(W: ModuleRep, I, n: int) -> Submodule:
    return W.U.times_ideal_power(I, n) + W.V


def valabrega_valla(W: ModuleRep, I, x: Poly, D: int) -> list[bool]:
    """Per ``n = 1..D``: ``x W ∩ I^n W = x I^(n-1) W``."""
    xW = W.U.scaled(x.terms) + W.V
    out = []
    for n in range(1, D + 1):
        cap = xW.intersect(_power_sub(W, I, n))
        rhs = W.U.times_ideal_power(I, n - 1).scaled(x.terms) + W.V
        out.append(rhs.contains_sub(cap))
    return out


def superficial_window(W: ModuleRep, I, x: Poly, D: int, cmax: int):
    """Least ``1 <= c <= cmax`` with ``(I^(n+1) W :_W x) ∩ I^c W = I^n W`` for ``c <= n <= D``.

    The intersection with ``I^c W`` only shrinks as ``c`` grows, so the
    condition at ``n`` for the smallest admissible ``c`` is what is recorded.
    """
    W_pow = {}

    def pw(n):
        if n not in W_pow:
            W_pow[n] = _power_sub(W, I, n)
        return W_pow[n]

    colons = {}
    for c in range(1, cmax + 1):
        ok = True
        for n in range(c, D + 1):
            if n not in colons:
                colons[n] = pw(n + 1).colon(x.terms)
            lhs = colons[n].intersect(pw(c))
            if not pw(n).contains_sub(lhs):
                ok = False
                break
        if ok:
            return c
    return None


@dataclass
class ModuleChecks:
    vv: list | None  # per n = 1..D, None when not requested
    window: int | None
    regular: bool

    def passed(self, need_vv: bool) -> bool:
        if need_vv and not (self.vv and all(self.vv)):
            return False
        return self.window is not None and self.regular


@dataclass
class SuperficialReport:
    """A candidate ``x in I`` and the checks made on ``A``, ``M`` and ``L``.

    ``coefficients`` are aligned with the (nonzero) generators of ``I``.
    """

    x: Poly
    coefficients: list
    cutoff: int
    checks: dict  # name -> ModuleChecks
    attempt: int

    @property
    def passed(self) -> bool:
        return all(ch.passed(name != "L") for name, ch in self.checks.items())


def check_candidate(mods: dict, I, x: Poly, D: int, cmax: int) -> dict:
    out = {}
    for name, W in mods.items():
        vv = valabrega_valla(W, I, x, D) if name != "L" else None
        out[name] = ModuleChecks(vv, superficial_window(W, I, x, D, cmax), W.colon_nzd(x.terms))
    return out


def superficial_search(A: RingSpec, M: ModuleRep, I, rng: np.random.Generator, D: int = 12,
                       cmax: int = 6, retries: int = 8, with_syzygy: bool = True) -> SuperficialReport:
    """Draw ``x`` as a random combination of the lowest-degree generators of ``I`` and verify it.

    Checked to ``D`` on ``A`` and ``M``: Valabrega-Valla, the superficial
    window and regularity; on the first syzygy ``L`` (when nonzero):
    window and regularity.
    """
    I = [p for p in I if p]
    if not I:
        raise ValueError("the ideal is zero")
    low = min(p.degree() for p in I)
    base = [p for p in I if p.degree() == low]
    mods = {"A": ModuleRep.cyclic(A), "M": M}
    if with_syzygy:
        L = first_syzygy(M)
        if not L.is_zero:
            mods["L"] = L
    F = A.S.field
    last = None
    for attempt in range(1, retries + 1):
        (x,), coeffs = _random_combos(base, 1, rng, F)
        if not x:
            continue  # the zero element is never a candidate
        it = iter(coeffs[0])
        full = [next(it) if p.degree() == low else 0 for p in I]
        last = SuperficialReport(x, full, D, check_candidate(mods, I, x, D, cmax), attempt)
        if last.passed:
            return last
    raise NoSuperficialFound(f"no candidate passed within {retries} draws", last)


# -- local complete intersection --


@dataclass
class LciVerdict:
    status: str  # verified | refuted | user-asserted | undecidable-here
    reason: str
    primes: list = field(default_factory=list)


def minimal_vertex_covers(edges, n):
    """Minimal variable subsets meeting every support set.

    These are the minimal primes of a monomial ideal with those supports.
    """
    covers = []
    for k in range(n + 1):
        for cand in combinations(range(n), k):
            cs = set(cand)
            if any(set(c) <= cs for c in covers):
                continue
            if all(cs & e for e in edges):
                covers.append(cand)
    return covers


def lci_check(A: RingSpec, I, asserted: bool = False) -> LciVerdict:
    """Is ``I_P`` generated by a regular sequence for each minimal prime ``P != m`` of ``A/I``?

    Decided exactly when ``A/I`` has finite length (no such primes) or when
    ``J`` and ``I`` are monomial.  Otherwise ``user-asserted`` if the
    instance asserts it, else ``undecidable-here``.
    """
    I = [p for p in I if p]
    if _ideal_in_A(A, I).series.is_finite_length:
        return LciVerdict("verified", "A/I has finite length: no minimal prime besides m")
    if all(q.is_monomial() for q in A.quotient) and all(p.is_monomial() for p in I):
        return _lci_monomial(A, I)
    if asserted:
        return LciVerdict("user-asserted", "asserted by the instance")
    return LciVerdict("undecidable-here", "minimal primes are only computed for monomial data")


def _support(p: Poly) -> set:
    return {i for i, a in enumerate(p.monomials()[0]) if a}


def _localize(A: RingSpec, P, polys):
    """Invert the variables outside ``P`` by setting them to 1 (monomial data only)."""
    S = A.S
    keep = list(P)
    loc = S.subring(keep)
    one = [i for i in range(S.nvars) if i not in P]
    Al = RingSpec(loc, [q.specialize(loc, keep, one=one) for q in A.quotient])
    return Al, [p.specialize(loc, keep, one=one) for p in polys]


def _lci_monomial(A: RingSpec, I) -> LciVerdict:
    S = A.S
    n = S.nvars
    primes = minimal_vertex_covers([_support(p) for p in list(A.quotient) + list(I)], n)
    checked = []
    for P in primes:
        if len(P) == n:
            continue
        Al, Il = _localize(A, P, I)
        names = [S.names[i] for i in P]
        if not _minimal_gens_regular(Al, Il):
            return LciVerdict("refuted", f"not a complete intersection at the prime generated by {names}", checked)
        checked.append(names)
    return LciVerdict("verified", "complete intersection at every minimal prime off m", checked)


def _minimal_gens_regular(A: RingSpec, I) -> bool:
    # in a local ring an ideal generated by a regular sequence has every minimal
    # generating set regular
    mins = linalg.minimal_subset([p.terms for p in I], A.S, (0,), modulo=[q.terms for q in A.quotient])
    return is_regular_sequence([Poly(A.S, v) for v in mins], ModuleRep.cyclic(A))


def is_regular_sequence(seq, M: ModuleRep) -> bool:
    """Each element is a nonzerodivisor modulo the previous ones and ``M/(seq)M != 0``."""
    cur = M
    for f in seq:
        if not cur.colon_nzd(f.terms):
            return False
        cur = cur.quotient(cur.U.scaled(f.terms))
    return not cur.is_zero


def monomial_ranks(A: RingSpec, M: ModuleRep):
    """Rank of ``M`` at each minimal prime of ``A`` (monomial ``J`` and presentation).

    Returns ``{prime names: rank or None}``; ``None`` marks a prime where the
    localization is not free.  ``None`` overall if the data is not monomial.
    """
    S = A.S
    degs, rels = _pruned(M)
    lay = S.layout
    if not all(q.is_monomial() for q in A.quotient):
        return None
    entries = []
    for v in rels:
        by_pos = {}
        for P, c in v.items():
            by_pos.setdefault(P >> lay.pos_shift, {})[P & lay.exp_mask] = c
        if any(len(e) > 1 for e in by_pos.values()):
            return None
        entries.append(by_pos)
    out = {}
    for P in minimal_vertex_covers([_support(q) for q in A.quotient], S.nvars):
        Al, _ = _localize(A, P, [])
        loc = Al.S
        keep = list(P)
        one = [i for i in range(S.nvars) if i not in P]
        lrels = []
        for by_pos in entries:
            v = {}
            for pos, term in by_pos.items():
                f = Poly(S, term).specialize(loc, keep, one=one)
                for Q, c in f.terms.items():
                    v[Q + (pos << loc.layout.pos_shift)] = c
            lrels.append(v)
        # localized module, graded over the smaller ring: pick degrees making it homogeneous
        Ml = _regrade(Al, len(degs), lrels)
        names = tuple(S.names[i] for i in P)
        if Ml is None:
            out[names] = None
            continue
        base = ModuleRep.cyclic(Al).length
        lm = Ml.length
        if Ml.is_free() and base:
            out[names] = lm // base
        else:
            out[names] = None
    return out


def _regrade(A: RingSpec, rank: int, rels):
    """Choose generator degrees making monomial relations homogeneous, if possible."""
    S = A.S
    lay = S.layout
    degs = [None] * rank
    changed = True
    # propagate degree differences along relations
    constraints = []
    for v in rels:
        terms = [(P >> lay.pos_shift, S.degree_of(P & lay.exp_mask)) for P in v]
        constraints.append(terms)
    while changed:
        changed = False
        for terms in constraints:
            known = [(pos, d) for pos, d in terms if degs[pos] is not None]
            if not known:
                continue
            pos0, d0 = known[0]
            total = degs[pos0] + d0
            for pos, d in terms:
                want = total - d
                if degs[pos] is None:
                    degs[pos] = want
                    changed = True
                elif degs[pos] != want:
                    return None
        if not changed and None in degs:
            degs[degs.index(None)] = 0
            changed = True
    low = min(degs) if degs else 0
    degs = [d - low for d in degs]
    return ModuleRep.coker(A, rels, degs)
