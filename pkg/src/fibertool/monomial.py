"""Packed monomials and monomial orders.

A monomial ``x^e * e_pos`` of a free module is packed into one Python int:
exponent ``e_i`` occupies bits ``[W*i, W*i + W)`` and the module position sits
above all exponent fields.  The top bit of each exponent field is a guard bit,
so divisibility is a single subtraction and mask test, and multiplication by a
ring monomial is plain integer addition.

Every order here is a *linear* order key: ``key(e) = sum(c_i * e_i)`` for fixed
integer coefficients.  Linearity is what lets the reduction kernels compute the
key of ``m * t`` as ``key(t) + key(m)`` without unpacking anything.
"""

from __future__ import annotations

from functools import reduce

FIELD_BITS = 16
MAX_EXP = (1 << (FIELD_BITS - 1)) - 1
DEG_BITS = 48
POS_BITS = 16
POS_MAX = (1 << POS_BITS) - 1


class ArityMismatch(ValueError):
    pass


class Layout:
    """Bit layout for monomials in ``nvars`` variables."""

    __slots__ = ("nvars", "pos_shift", "field_mask", "guard", "divmask", "exp_mask")

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.pos_shift = FIELD_BITS * nvars
        self.field_mask = (1 << FIELD_BITS) - 1
        self.guard = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(nvars))
        self.exp_mask = (1 << self.pos_shift) - 1
        self.divmask = self.guard | (POS_MAX << self.pos_shift)

    def __eq__(self, other):
        return isinstance(other, Layout) and other.nvars == self.nvars

    def __hash__(self):
        return hash(("Layout", self.nvars))

    def pack(self, exps, pos: int = 0) -> int:
        if len(exps) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} exponents, got {len(exps)}")
        P = pos << self.pos_shift
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXP:
                raise OverflowError(f"exponent {e} out of range")
            P |= e << (FIELD_BITS * i)
        return P

    def exps(self, P: int) -> tuple:
        m = self.field_mask
        return tuple((P >> (FIELD_BITS * i)) & m for i in range(self.nvars))

    def pos(self, P: int) -> int:
        return P >> self.pos_shift

    def unpack(self, P: int) -> tuple[int, tuple]:
        return P >> self.pos_shift, self.exps(P)

    def ring_part(self, P: int) -> int:
        return P & self.exp_mask

    def divides(self, Q: int, P: int) -> bool:
        """True if monomial ``Q`` divides ``P`` (same module position)."""
        return not ((P - Q) & self.divmask)

    def lcm(self, P: int, Q: int) -> int:
        pos = P >> self.pos_shift
        ep, eq = self.exps(P), self.exps(Q)
        return self.pack(tuple(max(a, b) for a, b in zip(ep, eq)), pos)

    def gcd(self, P: int, Q: int) -> int:
        ep, eq = self.exps(P), self.exps(Q)
        return self.pack(tuple(min(a, b) for a, b in zip(ep, eq)))

    def coprime(self, P: int, Q: int) -> bool:
        return not any(a and b for a, b in zip(self.exps(P), self.exps(Q)))

    def degree(self, P: int, weights) -> int:
        return sum(w * e for w, e in zip(weights, self.exps(P)))

    def variable(self, i: int) -> int:
        return 1 << (FIELD_BITS * i)


class TermOrder:
    """A monomial order on ring monomials given by a linear key.

    Construct through :meth:`grevlex`, :meth:`lex` or :meth:`block`.  Blocks
    are compared lexicographically, each by weighted grevlex; a single block
    is plain (weighted) grevlex.
    """

    __slots__ = ("kind", "nvars", "weights", "blocks", "coeffs", "bits", "_key")

    def __init__(self, kind, nvars, weights, blocks, coeffs, bits):
        self.kind = kind
        self.nvars = nvars
        self.weights = tuple(weights)
        self.blocks = tuple(tuple(b) for b in blocks)
        self.coeffs = tuple(coeffs)
        self.bits = bits
        self._key = {}

    @classmethod
    def block(cls, blocks, weights, kind="block") -> TermOrder:
        nvars = len(weights)
        seen = sorted(i for b in blocks for i in b)
        if seen != list(range(nvars)):
            raise ValueError("blocks must partition the variables")
        coeffs = [0] * nvars
        offset = 0
        for b in reversed(blocks):
            R = FIELD_BITS * len(b)
            for j, v in enumerate(b):
                # within the block: weighted degree first, then reverse lex
                c = (weights[v] << R) - (1 << (FIELD_BITS * j))
                coeffs[v] = c << offset
            offset += R + DEG_BITS
        return cls(kind, nvars, weights, blocks, coeffs, offset)

    @classmethod
    def grevlex(cls, nvars: int, weights=None) -> TermOrder:
        weights = tuple(weights) if weights is not None else (1,) * nvars
        return cls.block([list(range(nvars))], weights, kind="grevlex")

    @classmethod
    def lex(cls, nvars: int, weights=None) -> TermOrder:
        weights = tuple(weights) if weights is not None else (1,) * nvars
        coeffs = [1 << (FIELD_BITS * (nvars - 1 - i)) for i in range(nvars)]
        return cls("lex", nvars, weights, [list(range(nvars))], coeffs, FIELD_BITS * nvars + DEG_BITS)

    @classmethod
    def elimination(cls, drop, nvars: int, weights=None) -> TermOrder:
        """Block order with the variables in ``drop`` forming the leading block."""
        weights = tuple(weights) if weights is not None else (1,) * nvars
        drop = sorted(set(drop))
        keep = [i for i in range(nvars) if i not in drop]
        blocks = [drop, keep] if keep else [drop]
        if not drop:
            blocks = [keep]
        return cls.block(blocks, weights, kind="elimination")

    def __eq__(self, other):
        return isinstance(other, TermOrder) and (self.kind, self.coeffs) == (other.kind, other.coeffs)

    def __hash__(self):
        return hash((self.kind, self.coeffs))

    def __repr__(self):
        return f"TermOrder({self.kind}, blocks={self.blocks})"

    def key_exps(self, exps) -> int:
        if len(exps) != self.nvars:
            raise ArityMismatch(f"order on {self.nvars} variables, monomial has {len(exps)}")
        return sum(c * e for c, e in zip(self.coeffs, exps))


class ModuleOrder:
    """Order on module monomials ``m * e_pos``.

    ``kind="top"`` is term-over-position with the lower index winning ties.
    With ``split=r`` positions ``< r`` form a block that dominates every
    monomial at a position ``>= r`` (position-over-term between the blocks);
    this is what component elimination (syzygies, intersections, colons) uses.
    Ideals are the rank-one case.
    """

    __slots__ = ("term", "layout", "split", "_hi", "_cache")

    def __init__(self, term: TermOrder, split: int | None = None):
        self.term = term
        self.layout = Layout(term.nvars)
        self.split = split
        self._hi = term.bits + POS_BITS + 2
        self._cache = {}

    def __eq__(self, other):
        return isinstance(other, ModuleOrder) and (self.term, self.split) == (other.term, other.split)

    def __hash__(self):
        return hash((self.term, self.split))

    def __repr__(self):
        return f"ModuleOrder({self.term!r}, split={self.split})"

    def key(self, P: int) -> int:
        k = self._cache.get(P)
        if k is None:
            pos, exps = self.layout.unpack(P)
            k = (self.term.key_exps(exps) << POS_BITS) + (POS_MAX - pos)
            if self.split is not None and pos < self.split:
                k += 1 << self._hi
            self._cache[P] = k
        return k


def mono_cmp(a, b, order: TermOrder) -> int:
    """Compare exponent tuples ``a`` and ``b``; returns -1, 0 or 1."""
    if len(a) != len(b) or len(a) != order.nvars:
        raise ArityMismatch("monomials and order disagree on the number of variables")
    ka, kb = order.key_exps(a), order.key_exps(b)
    return (ka > kb) - (ka < kb)


def lcm_exps(*exps):
    return reduce(lambda a, b: tuple(max(x, y) for x, y in zip(a, b)), exps)
