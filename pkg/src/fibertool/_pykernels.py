"""Pure-Python kernels; reference semantics for the compiled ``_ckernels``.

Both kernels take ``p = 0`` to mean exact rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from heapq import heapify, heappop, heappush


def reduce_terms(items, reducers, divmask, p, full=True):
    """Reduce a vector by monic reducers.

    ``items`` is a list of ``(key, P, c)`` terms.  Each reducer is
    ``(lead_P, lead_key, tail)`` with ``tail`` a list of ``(P, key, c)``;
    the lead coefficient is 1.  Keys must be linear in the exponents, so the
    key of ``m * t`` is ``key(t) + (key(lead of dividend) - key(lead))``.

    Returns the remainder as ``(key, P, c)`` terms in descending key order.
    With ``full=False`` only the leading term is reduced.
    """
    coeffs = {}
    heap = []
    for k, P, c in items:
        if c:
            coeffs[P] = c
            heap.append((-k, P))
    heapify(heap)
    out = []
    while heap:
        nk, P = heappop(heap)
        c = coeffs.pop(P, 0)
        if not c:
            continue
        for lP, lk, tail in reducers:
            if not ((P - lP) & divmask):
                break
        else:
            out.append((-nk, P, c))
            if not full:
                while heap:
                    nk, P = heappop(heap)
                    c = coeffs.pop(P, 0)
                    if c:
                        out.append((-nk, P, c))
                break
            continue
        dP = P - lP
        dk = -nk - lk
        if p:
            for gP, gk, gc in tail:
                q = gP + dP
                old = coeffs.get(q)
                if old is None:
                    coeffs[q] = (-c * gc) % p
                    heappush(heap, (-(gk + dk), q))
                else:
                    coeffs[q] = (old - c * gc) % p
        else:
            for gP, gk, gc in tail:
                q = gP + dP
                old = coeffs.get(q)
                if old is None:
                    coeffs[q] = -c * gc
                    heappush(heap, (-(gk + dk), q))
                else:
                    coeffs[q] = old - c * gc
    return out


def independent_rows(rows, ncols, p):
    """Indices of the rows that are independent of all earlier rows.

    Rows are processed in order and kept when they are not in the span of the
    previously kept ones; ``len(result)`` is the rank.
    """
    basis = {}  # pivot column -> normalized row (list)
    kept = []
    for idx, row in enumerate(rows):
        if p:
            r = [a % p for a in row]
        else:
            r = [Fraction(a) for a in row]
        for col in range(ncols):
            a = r[col]
            if not a:
                continue
            b = basis.get(col)
            if b is None:
                if p:
                    inv = pow(a, -1, p)
                    r = [x * inv % p for x in r]
                else:
                    r = [x / a for x in r]
                basis[col] = r
                kept.append(idx)
                break
            if p:
                r = [(x - a * y) % p for x, y in zip(r, b)]
            else:
                r = [x - a * y for x, y in zip(r, b)]
    return kept


def rank(rows, ncols, p):
    return len(independent_rows(rows, ncols, p))
