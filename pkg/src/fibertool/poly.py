"""Polynomial rings, sparse polynomials, free-module vectors and quotient rings."""

from __future__ import annotations

import ast
from functools import cached_property

from .field import DEFAULT_PRIME, CoeffField
from .monomial import Layout, ModuleOrder, TermOrder


class RingMismatch(ValueError):
    pass


class GradingError(ValueError):
    pass


class PolyRing:
    """The graded polynomial ring ``k[x_1, ..., x_n]`` with positive weights."""

    def __init__(self, names, field: CoeffField | None = None, weights=None):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        self.names = names
        self.field = field if field is not None else CoeffField(DEFAULT_PRIME)
        self.weights = tuple(weights) if weights is not None else (1,) * len(names)
        if len(self.weights) != len(names) or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        self.layout = Layout(len(names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.field == other.field
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.field, self.weights))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.names)}]"

    @cached_property
    def grevlex(self) -> TermOrder:
        return TermOrder.grevlex(self.nvars, self.weights)

    @cached_property
    def top_order(self) -> ModuleOrder:
        return ModuleOrder(self.grevlex)

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return self.constant(1)

    def constant(self, c) -> Poly:
        c = self.field(c)
        return Poly(self, {0: c} if c else {})

    def gens(self) -> list[Poly]:
        return [self.var(i) for i in range(self.nvars)]

    def var(self, i) -> Poly:
        if isinstance(i, str):
            i = self.names.index(i)
        return Poly(self, {self.layout.variable(i): self.field(1)})

    def monomial(self, exps, coeff=1) -> Poly:
        c = self.field(coeff)
        return Poly(self, {self.layout.pack(exps): c} if c else {})

    def from_terms(self, terms) -> Poly:
        """Build from ``(exps, coeff)`` pairs, combining repeats."""
        out = {}
        F = self.field
        for exps, c in terms:
            P = self.layout.pack(exps)
            v = F.add(out.get(P, F(0)), F(c))
            if v:
                out[P] = v
            else:
                out.pop(P, None)
        return Poly(self, out)

    def parse(self, text: str) -> Poly:
        """Parse an infix polynomial with ``^``/``**``, ``*``, ``+``, ``-``."""
        return parse_poly(self, text)

    def extend(self, names, weights=None) -> PolyRing:
        """A ring with extra variables appended after the current ones."""
        weights = tuple(weights) if weights is not None else (1,) * len(names)
        return PolyRing(self.names + tuple(names), self.field, self.weights + weights)

    def subring(self, keep) -> PolyRing:
        keep = list(keep)
        return PolyRing([self.names[i] for i in keep], self.field, [self.weights[i] for i in keep])

    def degree_of(self, P: int) -> int:
        return self.layout.degree(P, self.weights)


class Poly:
    """Sparse polynomial: a dict from packed monomials to nonzero coefficients.

    Values are treated as immutable.
    """

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def _check(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._check(other)
        F = self.ring.field
        out = dict(self.terms)
        for P, c in other.terms.items():
            v = F.add(out.get(P, 0), c)
            if v:
                out[P] = v
            else:
                out.pop(P, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.ring.field
        return Poly(self.ring, {P: F.neg(c) for P, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F = self.ring.field
        out = {}
        for P, a in self.terms.items():
            for Q, b in other.terms.items():
                R = P + Q
                v = F.add(out.get(R, 0), F.mul(a, b))
                if v:
                    out[R] = v
                else:
                    out.pop(R, None)
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> Poly:
        F = self.ring.field
        c = F(c)
        if not c:
            return self.ring.zero()
        return Poly(self.ring, {P: F.mul(a, c) for P, a in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self == self.ring.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> list[tuple]:
        return [self.ring.layout.exps(P) for P in self.terms]

    def sorted_terms(self, order: TermOrder | None = None) -> list[tuple]:
        """Terms ``(exps, coeff)`` in strictly descending order."""
        order = order or self.ring.grevlex
        lay = self.ring.layout
        items = [(order.key_exps(lay.exps(P)), lay.exps(P), c) for P, c in self.terms.items()]
        items.sort(reverse=True)
        return [(e, c) for _, e, c in items]

    def lead(self, order: TermOrder | None = None) -> tuple:
        return self.sorted_terms(order)[0]

    def degrees(self) -> set:
        return {self.ring.degree_of(P) for P in self.terms}

    def degree(self) -> int:
        """Top weighted degree; ``-1`` for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support_vars(self) -> set:
        out = set()
        for e in self.monomials():
            out.update(i for i, a in enumerate(e) if a)
        return out

    def constant_coeff(self):
        return self.terms.get(0, self.ring.field(0))

    def embed(self, ring: PolyRing, index_map=None) -> Poly:
        """Move into ``ring``; variable ``i`` goes to ``index_map[i]`` (identity by default)."""
        if index_map is None:
            index_map = list(range(self.ring.nvars))
        out = {}
        src, dst = self.ring.layout, ring.layout
        for P, c in self.terms.items():
            e = [0] * ring.nvars
            for i, a in enumerate(src.exps(P)):
                e[index_map[i]] += a
            out[dst.pack(e)] = c
        return Poly(ring, out)

    def specialize(self, ring: PolyRing, keep, zero=(), one=()) -> Poly:
        """Set the variables in ``zero`` to 0 and in ``one`` to 1, landing in ``ring``.

        ``keep`` lists the surviving variable indices in the order of ``ring``.
        """
        zero, one = set(zero), set(one)
        F = ring.field
        out = {}
        for P, c in self.terms.items():
            e = self.ring.layout.exps(P)
            if any(e[i] for i in zero):
                continue
            Q = ring.layout.pack([e[i] for i in keep])
            v = F.add(out.get(Q, 0), c)
            if v:
                out[Q] = v
            else:
                out.pop(Q, None)
        return Poly(ring, out)

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.ring.field
        parts = []
        for exps, c in self.sorted_terms():
            c = F.to_signed(c)
            mono = "*".join(
                n if a == 1 else f"{n}^{a}" for n, a in zip(self.ring.names, exps) if a
            )
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self})"


class FreeVec:
    """Element of a graded free module ``S^r``: packed monomial-with-position -> coeff."""

    __slots__ = ("ring", "rank", "terms")

    def __init__(self, ring: PolyRing, rank: int, terms: dict):
        self.ring = ring
        self.rank = rank
        self.terms = terms

    @classmethod
    def from_polys(cls, polys) -> FreeVec:
        polys = list(polys)
        ring = polys[0].ring
        shift = ring.layout.pos_shift
        terms = {}
        for pos, f in enumerate(polys):
            if f.ring != ring:
                raise RingMismatch("components live in different rings")
            for P, c in f.terms.items():
                terms[P | (pos << shift)] = c
        return cls(ring, len(polys), terms)

    @classmethod
    def basis(cls, ring: PolyRing, rank: int, i: int) -> FreeVec:
        return cls(ring, rank, {i << ring.layout.pos_shift: ring.field(1)})

    def components(self) -> list[Poly]:
        lay = self.ring.layout
        comps = [{} for _ in range(self.rank)]
        for P, c in self.terms.items():
            comps[P >> lay.pos_shift][P & lay.exp_mask] = c
        return [Poly(self.ring, d) for d in comps]

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, FreeVec)
            and (self.ring, self.rank, self.terms) == (other.ring, other.rank, other.terms)
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __repr__(self):
        return f"FreeVec({[str(c) for c in self.components()]})"


# -- vector helpers on raw term dicts (used throughout the engine) --


def vec_add(F: CoeffField, a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for P, c in b.items():
        v = F.add(out.get(P, 0), F.mul(c, scale))
        if v:
            out[P] = v
        else:
            out.pop(P, None)
    return out


def vec_mul_poly(F: CoeffField, f: dict, v: dict) -> dict:
    """Multiply a module vector ``v`` by a polynomial ``f`` (both term dicts)."""
    out = {}
    for Q, a in f.items():
        for P, b in v.items():
            R = P + Q
            w = F.add(out.get(R, 0), F.mul(a, b))
            if w:
                out[R] = w
            else:
                out.pop(R, None)
    return out


def vec_scale(F: CoeffField, v: dict, c) -> dict:
    if not c:
        return {}
    return {P: F.mul(a, c) for P, a in v.items()}


def vec_shift_pos(v: dict, layout: Layout, delta: int) -> dict:
    return {P + (delta << layout.pos_shift): c for P, c in v.items()}


def vec_degree(v: dict, ring: PolyRing, shifts) -> int | None:
    """Common degree of a homogeneous vector (``None`` for zero); raises if inhomogeneous."""
    lay = ring.layout
    degs = {ring.degree_of(P & lay.exp_mask) + shifts[P >> lay.pos_shift] for P in v}
    if len(degs) > 1:
        raise GradingError(f"inhomogeneous vector with degrees {sorted(degs)}")
    return degs.pop() if degs else None


class RingSpec:
    """``A = S/J``: an ambient graded polynomial ring and a homogeneous quotient ideal."""

    def __init__(self, S: PolyRing, quotient=()):
        self.S = S
        quotient = tuple(q for q in quotient if not q.is_zero())
        for q in quotient:
            if q.ring != S:
                raise RingMismatch("quotient generator from a different ring")
            if not q.is_homogeneous():
                raise GradingError(f"quotient generator {q} is not homogeneous")
        self.quotient = quotient

    @property
    def field(self) -> CoeffField:
        return self.S.field

    def __repr__(self):
        return f"RingSpec({self.S!r} / ({', '.join(map(str, self.quotient))}))"

    @cached_property
    def quotient_gb(self):
        from .groebner import buchberger

        return buchberger(list(self.quotient) or [self.S.zero()])

    def reduce(self, f: Poly) -> Poly:
        """Normal form of ``f`` in ``A`` (modulo the quotient ideal)."""
        return self.quotient_gb.normal_form(f)

    @cached_property
    def dim(self) -> int:
        from .modules import krull_dim_ideal

        return krull_dim_ideal(self, [])

    def with_quotient(self, extra) -> RingSpec:
        return RingSpec(self.S, tuple(self.quotient) + tuple(extra))


# -- parsing --


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(msg + where)


class UndeclaredVariable(ParseError):
    pass


def parse_poly(ring: PolyRing, text: str, line: int | None = None, col: int | None = None) -> Poly:
    """Parse with Python's expression grammar after mapping ``^`` to ``**``.

    Only numbers, the ring's variables, ``+ - *``, integer powers and
    parentheses are accepted.
    """
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src.strip(), mode="eval")
    except SyntaxError as exc:
        c = (col or 0) + (exc.offset or 1) - 1
        raise ParseError(f"bad polynomial {text.strip()!r}", line, c) from None
    index = {n: i for i, n in enumerate(ring.names)}

    def where(node):
        return (col or 0) + node.col_offset

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return ring.constant(node.value)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise UndeclaredVariable(f"undeclared variable {node.id!r}", line, where(node))
            return ring.var(index[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise ParseError("exponent must be a non-negative integer", line, where(node))
                return ev(node.left) ** node.right.value
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
        raise ParseError(f"unsupported syntax in {text.strip()!r}", line, where(node))

    return ev(tree)
