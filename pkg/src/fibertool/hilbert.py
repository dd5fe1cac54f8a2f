"""Hilbert series of monomial modules as integer polynomials over ``prod(1 - t^w_i)``.

Polynomials in ``t`` are plain coefficient lists, lowest degree first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial


def padd(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return ptrim(out)


def psub(a, b):
    return padd(a, [-c for c in b])


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return ptrim(out)


def pshift(a, s):
    if not a:
        return []
    return [0] * s + list(a)


def ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def pdivmod(a, b):
    """Division in ``Z[t]`` by ``b`` with constant term ±1 (power-series style, exact if divisible)."""
    a, b = ptrim(a), ptrim(b)
    if not a:
        return [], []
    if len(a) < len(b):
        return [], a
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1]
        if c % lead:
            return None, a
        c //= lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return ptrim(q), ptrim(a)


def denominator(weights):
    d = [1]
    for w in weights:
        d = pmul(d, [1] + [0] * (w - 1) + [-1])
    return d


def _minimalize(gens):
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(all(a <= b for a, b in zip(h, g)) for h in out):
            out.append(g)
    return tuple(sorted(out))


def _deg(m, weights):
    return sum(a * w for a, w in zip(m, weights))


@lru_cache(maxsize=100000)
def _numerator(gens: tuple, weights: tuple) -> tuple:
    # gens minimal; returns numerator of HS(S/(gens)) over prod(1 - t^w)
    if not gens:
        return (1,)
    if any(not any(g) for g in gens):
        return ()
    # base case: generators with pairwise disjoint supports
    used = set()
    disjoint = True
    for g in gens:
        s = {i for i, a in enumerate(g) if a}
        if s & used:
            disjoint = False
            break
        used |= s
    if disjoint:
        out = [1]
        for g in gens:
            d = _deg(g, weights)
            out = pmul(out, [1] + [0] * (d - 1) + [-1])
        return tuple(out)
    # pivot on the most frequent variable with its smallest positive exponent
    n = len(gens[0])
    counts = [sum(1 for g in gens if g[i]) for i in range(n)]
    v = max(range(n), key=lambda i: counts[i])
    e = min(g[v] for g in gens if g[v])
    if all(g[v] == e for g in gens if g[v]) and counts[v] == len(gens):
        # every generator divisible by x_v^e: factor it out
        rest = _minimalize(tuple(tuple(a - (e if i == v else 0) for i, a in enumerate(g)) for g in gens))
        d = weights[v] * e
        # S/(x^e * K) : HS = HS(S/x^e) + t^d HS(S/K)
        head = [1] + [0] * (d - 1) + [-1]
        return tuple(padd(pmul(head, [1]), pshift(list(_numerator(rest, weights)), d)))
    pivot = tuple(e if i == v else 0 for i in range(n))
    plus = _minimalize(gens + (pivot,))
    colon = _minimalize(tuple(tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in gens))
    d = weights[v] * e
    return tuple(padd(list(_numerator(plus, weights)), pshift(list(_numerator(colon, weights)), d)))


def monomial_numerator(gens, weights) -> list:
    """Numerator ``N`` with ``HS(S/(gens)) = N / prod(1 - t^w_i)``."""
    weights = tuple(weights)
    return list(_numerator(_minimalize(tuple(tuple(g) for g in gens)), weights))


def order_at_one(N) -> int:
    """Multiplicity of the root ``t = 1`` of ``N`` (``N`` nonzero)."""
    k = 0
    N = ptrim(N)
    while N and sum(N) == 0:
        q, r = pdivmod(N, [-1, 1])  # divide by (t - 1)
        N = q
        k += 1
    return k


@dataclass(frozen=True)
class HilbertSeries:
    """``numerator / prod(1 - t^w)`` for a graded module over a ring with weights ``w``."""

    numerator: tuple
    weights: tuple

    @property
    def is_zero(self) -> bool:
        return not self.numerator

    def __sub__(self, other):
        assert self.weights == other.weights
        return HilbertSeries(tuple(psub(self.numerator, other.numerator)), self.weights)

    def __add__(self, other):
        assert self.weights == other.weights
        return HilbertSeries(tuple(padd(self.numerator, other.numerator)), self.weights)

    def values(self, D: int) -> list[int]:
        """Hilbert function values in degrees ``0..D``."""
        s = [0] * (D + 1)
        for i, c in enumerate(self.numerator[: D + 1]):
            s[i] = c
        for w in self.weights:
            for i in range(w, D + 1):
                s[i] += s[i - w]
        return s

    @property
    def dim(self) -> int:
        """Krull dimension; ``-1`` for the zero module."""
        if self.is_zero:
            return -1
        return len(self.weights) - order_at_one(self.numerator)

    def as_polynomial(self):
        """The series as a polynomial (list) if it is one, else ``None``."""
        q, r = pdivmod(list(self.numerator), denominator(self.weights))
        if q is None or r:
            return None
        return q

    @property
    def is_finite_length(self) -> bool:
        return self.as_polynomial() is not None

    @property
    def length(self) -> int | None:
        q = self.as_polynomial()
        return None if q is None else sum(q)

    @property
    def multiplicity(self) -> int:
        """Leading coefficient data ``e`` (standard weights): ``N / (1-t)^k`` at ``t = 1``."""
        N = ptrim(self.numerator)
        while N and sum(N) == 0:
            N, _ = pdivmod(N, [-1, 1])
            N = [-c for c in N]  # divided by (t - 1); flip to (1 - t)
        return sum(N)


def module_series(lead_exps_by_pos, shifts, weights) -> HilbertSeries:
    """Series of ``F / in(U)`` where ``F = ⊕ S(-shifts[k])``.

    ``lead_exps_by_pos[k]`` lists exponent tuples of lead monomials at position ``k``.
    """
    num = []
    for k, s in enumerate(shifts):
        if s < 0:
            raise ValueError("negative shifts are not supported")
        num = padd(num, pshift(monomial_numerator(lead_exps_by_pos.get(k, ()), weights), s))
    return HilbertSeries(tuple(num), tuple(weights))


def gbinom(m: int, j: int) -> int:
    """``C(m, j)`` for any integer ``m`` (the polynomial ``m(m-1)...(m-j+1)/j!``)."""
    if j < 0:
        return 0
    num = 1
    for i in range(j):
        num *= m - i
    return num // factorial(j)


def binomial_basis(values, n0: int) -> list[int]:
    """Coefficients ``b_j`` with ``p(n) = sum b_j C(n, j)`` for the polynomial of
    degree ``< len(values)`` taking ``values[i]`` at ``n0 + i``."""
    k = len(values)
    diffs = []
    row = list(values)
    for _ in range(k):
        diffs.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    # Newton form about n0, then re-expand about 0
    at_zero = [sum(diffs[j] * gbinom(n - n0, j) for j in range(k)) for n in range(k)]
    out = []
    row = at_zero
    for _ in range(k):
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return ptrim(out)


def hilbert_polynomial(series: HilbertSeries):
    """Binomial-basis coefficients of the Hilbert polynomial (standard grading only)."""
    if any(w != 1 for w in series.weights):
        return None
    if series.is_zero:
        return []
    k = series.dim
    n0 = len(series.numerator)
    vals = series.values(n0 + k)[n0:]
    return binomial_basis(vals, n0)
