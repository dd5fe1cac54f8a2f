# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Same contracts as ``_pykernels``; prime fields only."""

import numpy as np
cimport numpy as cnp
from heapq import heapify, heappop, heappush

cnp.import_array()

ctypedef long long i64


cdef inline i64 _mod(i64 a, i64 p) nogil:
    a %= p
    if a < 0:
        a += p
    return a


cdef i64 _inv(i64 a, i64 p) nogil:
    # extended Euclid; a is nonzero mod p
    cdef i64 t = 0, nt = 1, r = p, nr = a, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


def reduce_terms(list items, list reducers, object divmask, i64 p, bint full=True):
    cdef dict coeffs = {}
    cdef list heap = []
    cdef list out = []
    cdef list tail
    cdef i64 c, gc, old
    cdef object k, P, nk, lP, lk, dP, dk, gP, gk, q, v
    cdef tuple red, term
    cdef Py_ssize_t i, nred = len(reducers)
    cdef bint found

    for term in items:
        k, P, v = term
        c = v
        if c:
            coeffs[P] = c
            heap.append((-k, P))
    heapify(heap)
    while heap:
        nk, P = heappop(heap)
        v = coeffs.pop(P, 0)
        c = v
        if not c:
            continue
        found = False
        for i in range(nred):
            red = <tuple>reducers[i]
            lP = red[0]
            if not ((P - lP) & divmask):
                found = True
                break
        if not found:
            out.append((-nk, P, c))
            if not full:
                while heap:
                    nk, P = heappop(heap)
                    v = coeffs.pop(P, 0)
                    if v:
                        out.append((-nk, P, v))
                break
            continue
        lk = red[1]
        tail = <list>red[2]
        dP = P - lP
        dk = -nk - lk
        for term in tail:
            gP, gk, v = term
            gc = v
            q = gP + dP
            v = coeffs.get(q)
            if v is None:
                coeffs[q] = _mod(-c * gc, p)
                heappush(heap, (-(gk + dk), q))
            else:
                old = v
                coeffs[q] = _mod(old - c * gc, p)
    return out


def independent_rows(rows, Py_ssize_t ncols, i64 p):
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return []
    cdef cnp.ndarray[i64, ndim=2] A = np.asarray(rows, dtype=np.int64).reshape(nrows, ncols) % p
    cdef i64[:, ::1] a = np.ascontiguousarray(A)
    cdef i64[:, ::1] basis = np.zeros((min(nrows, ncols), ncols), dtype=np.int64)
    cdef Py_ssize_t[::1] pivcol_of = np.empty(min(nrows, ncols), dtype=np.intp)
    # rowof[col] = index into basis, or -1
    cdef Py_ssize_t[::1] rowof = np.full(ncols, -1, dtype=np.intp)
    cdef Py_ssize_t nb = 0, r, col, j, b
    cdef i64 x, inv
    kept = []
    with nogil:
        for r in range(nrows):
            for col in range(ncols):
                x = a[r, col]
                if x == 0:
                    continue
                b = rowof[col]
                if b < 0:
                    inv = _inv(x, p)
                    for j in range(col, ncols):
                        basis[nb, j] = (a[r, j] * inv) % p
                    rowof[col] = nb
                    pivcol_of[nb] = col
                    nb += 1
                    with gil:
                        kept.append(r)
                    break
                for j in range(col, ncols):
                    if basis[b, j]:
                        a[r, j] = _mod(a[r, j] - x * basis[b, j], p)
    return kept


def rank(rows, Py_ssize_t ncols, i64 p):
    return len(independent_rows(rows, ncols, p))
