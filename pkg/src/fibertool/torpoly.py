"""Eventual polynomials fitted to integer sequences by finite differences."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .hilbert import binomial_basis, gbinom

MINUS_INFINITY = "minus_infinity"


class NotStabilized(ValueError):
    """No difference order is constant over the requested window."""


def differences(values, k: int) -> list:
    row = list(values)
    for _ in range(k):
        row = [b - a for a, b in zip(row, row[1:])]
    return row


@dataclass(frozen=True)
class EventualPolynomial:
    """``p(n) = sum b_j C(n, j)`` agreeing with the data for ``n >= stable_from``."""

    binomial: tuple
    stable_from: int
    window: int

    @property
    def degree(self):
        """Degree, or ``None`` for the zero polynomial (degree minus infinity)."""
        return len(self.binomial) - 1 if self.binomial else None

    @property
    def is_zero(self) -> bool:
        return not self.binomial

    def __call__(self, n: int) -> int:
        return sum(b * gbinom(n, j) for j, b in enumerate(self.binomial))

    @property
    def leading_coefficient(self) -> Fraction:
        """Coefficient of ``n^degree`` in the monomial basis."""
        if not self.binomial:
            return Fraction(0)
        d = len(self.binomial) - 1
        return Fraction(self.binomial[-1], factorial(d))

    def to_json(self) -> dict:
        deg = self.degree
        return {
            "degree": MINUS_INFINITY if deg is None else deg,
            "binomial_coefficients": list(self.binomial),
            "leading_coefficient": str(self.leading_coefficient),
            "stable_from": self.stable_from,
            "window": self.window,
        }


def fit_polynomial(values, start: int = 0, window: int = 4) -> EventualPolynomial:
    """Fit the eventual polynomial of ``values[i] = f(start + i)``.

    The degree is the least ``k`` whose ``k``-th differences are constant on
    the last ``window`` available entries (so ``window + k`` values are
    used); ``stable_from`` is the first index from which every listed value
    agrees with the fitted polynomial.
    """
    values = list(values)
    if window < 1:
        raise ValueError("window must be positive")
    N = len(values)
    if N < window + 2:
        raise ValueError(f"need at least {window + 2} values for window {window}, got {N}")
    k = 0
    while window + k <= N:
        diffs = differences(values[N - window - k :], k)
        if len(set(diffs)) == 1:
            break
        k += 1
    else:
        raise NotStabilized(f"no difference order is constant over the last {window} of {N} values")
    if k == 0 and diffs[0] == 0:
        binom = []
    else:
        n0 = start + N - (k + 1)
        binom = binomial_basis(values[N - k - 1 :], n0)
    poly = EventualPolynomial(tuple(binom), start, window)
    first = N
    while first > 0 and poly(start + first - 1) == values[first - 1]:
        first -= 1
    return EventualPolynomial(tuple(binom), start + first, window)


@dataclass(frozen=True)
class TorProfile:
    """``values[n] = ℓ(Tor_1(M, A/I^(n+1)))`` for ``n = 0..N`` and the fitted polynomial.

    ``poly`` is ``None`` when the data did not stabilize (``error`` says why).
    """

    values: tuple
    poly: EventualPolynomial | None
    error: str = ""

    @property
    def degree(self):
        return self.poly.degree if self.poly else None

    @property
    def stabilized(self) -> bool:
        return self.poly is not None

    def to_json(self) -> dict:
        out = {"values": list(self.values)}
        if self.poly is not None:
            out.update(self.poly.to_json())
        if self.error:
            out["error"] = self.error
        return out


def tor1_sequence(M, I, N: int, window: int = 4, balanced: bool = False) -> TorProfile:
    """Tor lengths for ``n = 0..N`` with the eventual polynomial fitted to them.

    An entry of infinite length raises ``NotFiniteLength`` naming the exponent.
    """
    from .blowup import tor1_lengths

    if N < 4:
        raise ValueError("N must be at least 4")
    vals = tuple(tor1_lengths(M, I, N + 1, balanced))
    try:
        return TorProfile(vals, fit_polynomial(vals, start=0, window=window))
    except NotStabilized as exc:
        return TorProfile(vals, None, f"{exc}; raise --nmax")
