"""Hypothesis reports and implication checks over a fully computed instance.

Every check is an implication: ``consistent`` may hold vacuously, and the
``applicable`` / ``antecedent_held`` flags always say which case occurred.
All answers are "consistent to cutoff D": infinite statements are only
checked on the computed range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .blowup import (
    FiberModule,
    NoSuperficialFound,
    NotEquigenerated,
    NotFiniteLength,
    fiber_cone,
    fiber_hf_dense,
    fiber_module,
    find_reduction,
    is_regular_sequence,
    lci_check,
    monomial_ranks,
    superficial_search,
    tor1_lengths,
)
from .instance import Instance
from .modules import AuditFailure, ModuleRep
from .poly import Poly, RingSpec
from .torpoly import EventualPolynomial, NotStabilized, TorProfile, fit_polynomial, tor1_sequence

VERIFIED, REFUTED, ASSUMED, UNDECIDED = "verified", "refuted", "assumed", "undecided"
FIBER_AUDIT = 4

# the fiber-freeness id is kept as ``theorem31`` for report compatibility
STATEMENTS = ("theorem31", "regular_sequence", "additivity", "fiber_quotient", "hypersurface_freeness")

DEFAULTS = {"cutoff": 12, "nmax": 12, "window": 4, "trials": 16, "mmax": 5, "retries": 8, "cmax": 6}


@dataclass
class Entry:
    value: object
    status: str
    note: str = ""

    def to_json(self, cert):
        out = {"value": self.value, "status": self.status}
        if self.note:
            out["note"] = self.note
        if self.status in (VERIFIED, REFUTED):
            out["certificate"] = cert
        return out


@dataclass
class Verdict:
    statement: str
    applicable: bool
    antecedent_held: bool | None
    conclusion_checked: bool | None  # the implication was evaluated (vacuously when the antecedent failed)
    consistent: bool | None  # None: undecided
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.consistent is None:
            return UNDECIDED
        if not self.consistent:
            return REFUTED
        if not self.applicable:
            return "inapplicable"
        return "vacuous" if not self.antecedent_held else "consistent"

    def to_json(self, cutoff):
        return {
            "statement": self.statement,
            "applicable": self.applicable,
            "antecedent_held": self.antecedent_held,
            "conclusion_checked": self.conclusion_checked,
            "consistent": self.consistent,
            "status": self.status,
            "cutoff": cutoff,
            "details": self.details,
        }


def _degree_json(poly: EventualPolynomial | None):
    if poly is None:
        return None
    return poly.to_json()["degree"]


def _lt(deg, bound) -> bool:
    """``deg < bound`` with ``None`` standing for minus infinity."""
    return deg is None or deg < bound


def tor_profile(M: ModuleRep, I, N: int, window: int) -> TorProfile:
    try:
        return tor1_sequence(M, I, N, window)
    except NotFiniteLength as exc:
        return TorProfile((), None, str(exc))


def reduce_by(A: RingSpec, M: ModuleRep, I, x: Poly):
    """``(A/(x), M/xM, I A/(x))`` with ``M/xM`` presented as a cokernel."""
    B = A.with_quotient([x])
    Mc = M.as_cokernel()
    N = ModuleRep.coker(B, Mc.V.gens, Mc.shifts)
    return B, N, list(I)


class Analysis:
    """Lazily computed invariants of one instance under fixed parameters and seed."""

    def __init__(self, inst: Instance, seed: int, **params):
        self.inst = inst
        self.seed = seed
        p = dict(DEFAULTS)
        p.update({k: v for k, v in inst.params.items() if k in DEFAULTS})
        p.update({k: v for k, v in params.items() if v is not None})
        self.params = p
        self.D = p["cutoff"]
        self.N = p["nmax"]
        streams = np.random.SeedSequence(seed).spawn(3)
        self._streams = {"reduction": streams[0], "superficial": streams[1], "depth": streams[2]}
        self.A = inst.spec
        self.I = [f for f in inst.I if f]
        self.M = inst.module(self.A)

    def rng(self, name) -> np.random.Generator:
        return np.random.default_rng(self._streams[name])

    @property
    def certificate(self) -> dict:
        return {"seed": self.seed, "cutoff": self.D, "nmax": self.N}

    # -- ring and module --

    @cached_property
    def d(self) -> int:
        return self.A.dim

    @cached_property
    def ring_module(self) -> ModuleRep:
        return ModuleRep.cyclic(self.A)

    @cached_property
    def ht_I(self) -> int:
        return self.d - ModuleRep.cyclic(self.A, self.I).dim

    @cached_property
    def ht_M_I(self) -> int:
        return self.M.dim - self.M.quotient(self.M.U.times_ideal(self.I)).dim

    # -- fiber cone and fiber module --

    @cached_property
    def fiber_ideal(self) -> list:
        return fiber_cone(self.A, self.I)

    @cached_property
    def cone(self) -> FiberModule:
        from .blowup import fiber_cone_module

        return fiber_cone_module(self.A, self.I)

    @cached_property
    def cone_hf(self) -> list:
        vals = self.cone.hilbert(self.D).values
        dense = fiber_hf_dense(self.ring_module, self.I, min(self.D, FIBER_AUDIT))
        if vals[: len(dense)] != dense:
            raise AuditFailure(f"fiber cone HF {vals} disagrees with mu(I^n) = {dense}")
        return vals

    @cached_property
    def l_I(self) -> int:
        return self.cone.dim

    @cached_property
    def fmod(self) -> FiberModule:
        return fiber_module(self.M, self.I, self.fiber_ideal)

    @cached_property
    def fmod_hf(self) -> list:
        vals = self.fmod.hilbert(self.D).values
        dense = fiber_hf_dense(self.M, self.I, min(self.D, FIBER_AUDIT))
        if vals[: len(dense)] != dense:
            raise AuditFailure(f"fiber module HF {vals} disagrees with mu(I^n M) = {dense}")
        return vals

    @cached_property
    def mu_M(self) -> int:
        return self.fmod_hf[0]

    @cached_property
    def freeness(self) -> dict:
        t = self.mu_M
        witness = next(
            (n for n, (a, b) in enumerate(zip(self.fmod_hf, self.cone_hf)) if a != t * b), None
        )
        for a, b in zip(self.fmod_hf, self.cone_hf):
            if a > t * b:
                raise AuditFailure("the fiber module is not a quotient of F(I)^mu(M)")
        return {"free_to_cutoff": witness is None, "witness_degree": witness}

    @cached_property
    def l_M_I(self):
        """``(fitted value, exact dimension)``; the fitted value is ``None`` if unstable."""
        exact = self.fmod.dim
        try:
            poly = fit_polynomial(self.fmod_hf, start=0, window=self.params["window"])
        except NotStabilized:
            return None, exact
        fitted = 0 if poly.is_zero else poly.degree + 1
        return fitted, exact

    # -- tor --

    @cached_property
    def tor(self) -> TorProfile:
        return tor_profile(self.M, self.I, self.N, self.params["window"])

    # -- randomized searches --

    @cached_property
    def reduction(self):
        try:
            return find_reduction(self.A, self.I, self.rng("reduction"), ell=self.l_I,
                                  trials=self.params["trials"], mmax=self.params["mmax"])
        except NotEquigenerated as exc:
            return exc

    @cached_property
    def lci(self):
        return lci_check(self.A, self.I, "lci" in self.inst.assertions)

    @cached_property
    def superficial(self):
        if not self.I:
            return NoSuperficialFound("the ideal is zero")
        try:
            return superficial_search(self.A, self.M, self.I, self.rng("superficial"), D=self.D,
                                      cmax=self.params["cmax"], retries=self.params["retries"])
        except NoSuperficialFound as exc:
            return exc


# -- hypotheses --


def _eq_entry(value, target) -> Entry:
    return Entry(value, VERIFIED if value == target else REFUTED, f"required {target}")


def check_hypotheses(an: Analysis) -> dict:
    d = an.d
    out = {}
    out["d"] = Entry(d, VERIFIED if d >= 1 else REFUTED, "required >= 1")
    R = an.ring_module
    out["is_CM_A"] = Entry(R.is_cm, VERIFIED if R.is_cm else REFUTED)
    out["is_MCM_M"] = Entry(an.M.is_mcm, VERIFIED if an.M.is_mcm else REFUTED)
    out["ht_I"] = _eq_entry(an.ht_I, d - 1)
    out["ht_M_I"] = _eq_entry(an.ht_M_I, d - 1)
    out["ht_M_I"].note += "; ht_M(I) = dim M - dim M/IM"
    out["l_I"] = _eq_entry(an.l_I, d)
    fitted, exact = an.l_M_I
    if fitted is None:
        out["l_M_I"] = Entry(None, UNDECIDED, "Hilbert function of the fiber module did not stabilize")
    else:
        if fitted != exact:
            raise AuditFailure(f"l_M(I): fitted {fitted} vs Hilbert series {exact}")
        out["l_M_I"] = _eq_entry(fitted, d)
    red = an.reduction
    if isinstance(red, Exception):
        out["r_le_1"] = Entry(None, UNDECIDED, str(red))
    elif red.status == "verified-le-1":
        out["r_le_1"] = Entry(red.r, VERIFIED, f"r_J = {red.r} after {red.trials} trial(s)")
    else:
        # r(I) is a minimum over all minimal reductions: a large r_J refutes nothing
        out["r_le_1"] = Entry(red.r, UNDECIDED, f"search status {red.status}")
    lci = an.lci
    status = {"verified": VERIFIED, "refuted": REFUTED, "user-asserted": ASSUMED}.get(lci.status, UNDECIDED)
    out["lci"] = Entry(lci.status, status, lci.reason)
    return out


def hypotheses_json(an: Analysis, hyps: dict) -> dict:
    return {k: e.to_json(an.certificate) for k, e in hyps.items()}


THM31_KEYS = ("d", "is_CM_A", "is_MCM_M", "ht_I", "ht_M_I", "l_M_I", "r_le_1", "lci")


def _held(hyps, keys):
    failing = [k for k in keys if hyps[k].status not in (VERIFIED, ASSUMED)]
    return not failing, failing


def check_fiber_freeness(an: Analysis, hyps: dict | None = None) -> Verdict:
    """If ``deg t < d - 1`` then ``F_I(M)`` is free over ``F(I)``."""
    hyps = hyps or check_hypotheses(an)
    applicable, failing = _held(hyps, THM31_KEYS)
    tor = an.tor
    details = {
        "failing_hypotheses": failing,
        "deg_t": _degree_json(tor.poly),
        "d": an.d,
        "free_to_cutoff": an.freeness["free_to_cutoff"],
        "witness_degree": an.freeness["witness_degree"],
        "l_I": an.l_I,
        "l_M_I": an.l_M_I[0],
        "degree_bound": None if tor.poly is None else _lt(tor.degree, an.l_I),
    }
    if tor.poly is None:
        details["advice"] = tor.error or "raise --nmax"
        if not applicable:
            return Verdict("theorem31", False, None, None, True, details)
        return Verdict("theorem31", True, None, None, None, details)
    antecedent = _lt(tor.degree, an.d - 1)
    if not applicable:
        return Verdict("theorem31", False, antecedent, False, True, details)
    if not antecedent:
        details["observed_pair"] = [_degree_json(tor.poly), "free" if details["free_to_cutoff"] else "not-free"]
        return Verdict("theorem31", True, False, True, True, details)
    free = an.freeness["free_to_cutoff"]
    return Verdict("theorem31", True, True, True, free, details)


def check_regular_sequence(an: Analysis, hyps: dict | None = None) -> Verdict:
    """``I`` generated by an ``A``-regular sequence ⇒ ``Tor_1(M, A/I^n) = 0`` for ``n >= 1``."""
    hyps = hyps or check_hypotheses(an)
    ok, failing = _held(hyps, ("d", "is_CM_A", "is_MCM_M"))
    regular = bool(an.I) and is_regular_sequence(an.I, an.ring_module)
    details = {"regular_sequence": regular, "failing_hypotheses": failing}
    if not (ok and regular):
        return Verdict("regular_sequence", False, regular, False, True, details)
    vals = tor1_lengths(an.M, an.I, an.N)
    details["tor_lengths"] = vals
    return Verdict("regular_sequence", True, True, True, all(v == 0 for v in vals), details)


def _superficial_json(sup) -> dict:
    if isinstance(sup, Exception):
        out = {"found": False, "error": str(sup)}
        last = getattr(sup, "last", None)
        if last is not None:
            out["last_candidate"] = _superficial_json(last)
        return out
    return {
        "found": sup.passed,
        "x": str(sup.x),
        "attempt": sup.attempt,
        "cutoff": sup.cutoff,
        "checks": {
            name: {"vv": ch.vv, "window": ch.window, "regular": ch.regular}
            for name, ch in sorted(sup.checks.items())
        },
    }


def check_additivity(an: Analysis) -> Verdict:
    """Additivity of Tor lengths along a superficial element, and the degree drop."""
    details = {}
    if an.d < 2:
        details["guard"] = "d = 1: the quotient by x has dimension 0"
        return Verdict("additivity", False, None, False, True, details)
    sup = an.superficial
    if isinstance(sup, Exception):
        details["superficial"] = _superficial_json(sup)
        return Verdict("additivity", False, None, False, True, details)
    details["x"] = str(sup.x)
    tor_M = an.tor
    if tor_M.poly is None:
        details["advice"] = tor_M.error
        return Verdict("additivity", True, None, None, None, details)
    B, N, J = reduce_by(an.A, an.M, an.I, sup.x)
    tor_N = tor_profile(N, J, an.N, an.params["window"])
    if tor_N.poly is None:
        details["advice"] = tor_N.error
        return Verdict("additivity", True, None, None, None, details)
    lo = max(tor_M.poly.stable_from + 1, tor_N.poly.stable_from)
    window = list(range(lo, an.N + 1))
    details.update({
        "tor_M": list(tor_M.values),
        "tor_N": list(tor_N.values),
        "window": [lo, an.N] if window else None,
        "deg_M": _degree_json(tor_M.poly),
        "deg_N": _degree_json(tor_N.poly),
    })
    if not window:
        details["advice"] = "no joint stable window; raise --nmax"
        return Verdict("additivity", True, True, None, None, details)
    additive = all(tor_M.values[n] == tor_M.values[n - 1] + tor_N.values[n] for n in window)
    if tor_N.degree is None:
        drop = True
    else:
        drop = tor_M.degree is not None and tor_N.degree <= tor_M.degree - 1
    details["additive"] = additive
    details["degree_drop"] = drop
    return Verdict("additivity", True, True, True, additive and drop, details)


def fiber_quotient_by(an: Analysis, sup) -> ModuleRep:
    """``F_I(M) / x° F_I(M)`` over ``k[T]``."""
    fm = an.fmod.module
    T = an.fmod.T
    coeffs = sup.coefficients
    xo = {}
    for i, c in enumerate(coeffs):
        if c:
            xo[T.layout.variable(i)] = c
    lay = T.layout
    extra = [{P + (k << lay.pos_shift): c for P, c in xo.items()} for k in range(fm.rank)]
    return ModuleRep.coker(fm.A, fm.V.gens + extra, fm.shifts)


def check_fiber_quotient(an: Analysis) -> Verdict:
    """``x*`` regular on ``G_I(M)`` ⇒ ``F_Ī(N) ≅ F_I(M)/x° F_I(M)`` (Hilbert functions to ``D - 1``)."""
    details = {}
    if an.d < 2:
        details["guard"] = "d = 1: the quotient by x is degenerate"
        return Verdict("fiber_quotient", False, None, False, True, details)
    sup = an.superficial
    if isinstance(sup, Exception) or not all(sup.checks["M"].vv):
        details["superficial"] = _superficial_json(sup)
        return Verdict("fiber_quotient", False, False, False, True, details)
    B, N, J = reduce_by(an.A, an.M, an.I, sup.x)
    left = fiber_module(N, J).hilbert(an.D - 1).values
    right = fiber_quotient_by(an, sup).hilbert(an.D - 1).values
    details.update({"x": str(sup.x), "hf_fiber_of_quotient": left, "hf_quotient_of_fiber": right})
    return Verdict("fiber_quotient", True, True, True, left == right, details)


def check_hypersurface_freeness(an: Analysis, hyps: dict | None = None) -> Verdict:
    """Hypersurface, ``d = 1``, constant rank: ``deg t < 0`` iff ``M`` is free."""
    hyps = hyps or check_hypotheses(an)
    details = {}
    hypersurface = len(an.A.quotient) == 1
    details["hypersurface"] = hypersurface
    if not hypersurface or an.d != 1:
        details["guard"] = "needs a hypersurface of dimension 1"
        return Verdict("hypersurface_freeness", False, None, False, True, details)
    ranks = monomial_ranks(an.A, an.M)
    if ranks is not None:
        vals = set(ranks.values())
        details["ranks"] = {",".join(k): v for k, v in sorted(ranks.items())}
        constant = len(vals) == 1 and None not in vals
        rank_status = VERIFIED if constant else REFUTED
    elif "constant_rank" in an.inst.assertions:
        rank_status = ASSUMED
    else:
        rank_status = UNDECIDED
    details["constant_rank"] = rank_status
    ok, failing = _held(hyps, ("is_MCM_M", "lci"))
    if an.ht_I != 0:
        failing.append("ht_I")
    if an.l_I != 1:
        failing.append("l_I")
    details["failing_hypotheses"] = failing
    if failing or rank_status not in (VERIFIED, ASSUMED):
        return Verdict("hypersurface_freeness", False, None, False, True, details)
    tor = an.tor
    if tor.poly is None:
        details["advice"] = tor.error
        return Verdict("hypersurface_freeness", True, None, None, None, details)
    neg = _lt(tor.degree, 0)
    free = an.M.is_free()
    details.update({"deg_t": _degree_json(tor.poly), "M_free": free})
    return Verdict("hypersurface_freeness", True, True, True, neg == free, details)


def full_report(an: Analysis) -> dict:
    hyps = check_hypotheses(an)
    verdicts = [
        check_fiber_freeness(an, hyps),
        check_regular_sequence(an, hyps),
        check_additivity(an),
        check_fiber_quotient(an),
        check_hypersurface_freeness(an, hyps),
    ]
    return {"hypotheses": hyps, "verdicts": verdicts}
