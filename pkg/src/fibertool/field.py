"""Coefficient fields: prime fields F_p and the rationals."""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 32003


class DivisionByZero(ZeroDivisionError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class CoeffField:
    """A prime field ``F_p`` (``p`` given) or the rationals (``p is None``).

    Prime-field elements are plain ints reduced into ``[0, p)``; rational
    elements are :class:`fractions.Fraction`.
    """

    __slots__ = ("p",)

    def __init__(self, p: int | None = DEFAULT_PRIME):
        if p is not None:
            if not _is_prime(p):
                raise ValueError(f"modulus {p} is not prime")
            # products of two residues must stay below 2**62 in the C kernels
            if p >= 1 << 31:
                raise ValueError(f"modulus {p} too large (must be < 2**31)")
        self.p = p

    @classmethod
    def rationals(cls) -> CoeffField:
        return cls(None)

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p or 0

    def __eq__(self, other):
        return isinstance(other, CoeffField) and self.p == other.p

    def __hash__(self):
        return hash(("CoeffField", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    def __call__(self, a):
        """Coerce an int (or Fraction, for QQ) into the field."""
        if self.p is None:
            return Fraction(a)
        if isinstance(a, Fraction):
            return self.mul(a.numerator % self.p, self.inv(a.denominator % self.p))
        return a % self.p

    def add(self, a, b):
        if self.p is None:
            return a + b
        return (a + b) % self.p

    def sub(self, a, b):
        if self.p is None:
            return a - b
        return (a - b) % self.p

    def neg(self, a):
        if self.p is None:
            return -a
        return -a % self.p

    def mul(self, a, b):
        if self.p is None:
            return a * b
        return a * b % self.p

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        if self.p is None:
            return 1 / Fraction(a)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def random_element(self, rng, nonzero: bool = False):
        """Draw a uniform element using ``rng`` (a ``numpy.random.Generator``).

        Over QQ elements are small integers, which is enough for genericity
        on the desk-scale instances this package targets.
        """
        lo = 1 if nonzero else 0
        if self.p is None:
            v = int(rng.integers(-50, 51))
            while nonzero and v == 0:
                v = int(rng.integers(-50, 51))
            return Fraction(v)
        return int(rng.integers(lo, self.p))

    def to_signed(self, a) -> int | Fraction:
        """Symmetric representative, used only for printing."""
        if self.p is None:
            return a
        return a - self.p if a > self.p // 2 else a
