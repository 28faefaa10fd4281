# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for truncated power-series arithmetic over F_q.

Same contract as ``_kernel_py``; results are bit-identical.
"""

import numpy as np
cimport numpy as cnp

IMPL = "cython"


cdef void _mul_into(cnp.int64_t[:, :] a, Py_ssize_t na,
                    cnp.int64_t[:, :] b, Py_ssize_t nb,
                    cnp.int64_t[:, :] out, Py_ssize_t n,
                    cnp.int64_t[:, :] acc,
                    long p, cnp.int64_t[:, :] red, Py_ssize_t k) noexcept:
    cdef Py_ssize_t i, j, u, v, w, hi, jmax
    cdef cnp.int64_t x
    for i in range(n):
        for w in range(2 * k - 1):
            acc[i, w] = 0
    for i in range(na):
        if i >= n:
            break
        jmax = nb if nb < n - i else n - i
        for u in range(k):
            x = a[i, u]
            if x == 0:
                continue
            for j in range(jmax):
                for v in range(k):
                    if b[j, v] != 0:
                        acc[i + j, u + v] += x * b[j, v]
    for i in range(n):
        for u in range(k):
            out[i, u] = acc[i, u] % p
        for w in range(k, 2 * k - 1):
            x = acc[i, w] % p
            if x != 0:
                for u in range(k):
                    out[i, u] = (out[i, u] + x * red[w - k, u]) % p


def mul(a, b, nout, p, red):
    """Truncated product of coefficient arrays, length min(na+nb-1, nout)."""
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], k = a.shape[1]
    if na == 0 or nb == 0:
        return np.zeros((0, k), dtype=np.int64)
    cdef Py_ssize_t n = min(na + nb - 1, nout)
    if n <= 0:
        return np.zeros((0, k), dtype=np.int64)
    out = np.zeros((n, k), dtype=np.int64)
    acc = np.zeros((n, 2 * k - 1), dtype=np.int64)
    _mul_into(a, na, b, nb, out, n, acc, p, red, k)
    return out


def compose(f, g, nout, p, red):
    """Horner evaluation of power series f at g (g[0] must vanish)."""
    cdef Py_ssize_t nf = f.shape[0], k = f.shape[1]
    if nf == 0 or nout <= 0:
        return np.zeros((max(nout, 0), k), dtype=np.int64)
    cdef cnp.int64_t[:, :] gv
    cdef Py_ssize_t ng, i, u, rn
    gt = np.ascontiguousarray(g[:nout])
    gv = gt
    ng = gt.shape[0]
    out = np.zeros((nout, k), dtype=np.int64)
    res = np.zeros((nout, k), dtype=np.int64)
    tmp = np.zeros((nout, k), dtype=np.int64)
    acc = np.zeros((nout, 2 * k - 1), dtype=np.int64)
    cdef cnp.int64_t[:, :] resv = res, tmpv = tmp, fv = f, accv = acc
    cdef cnp.int64_t[:, :] redv = red
    cdef long pp = p
    cdef Py_ssize_t new_rn
    rn = 1
    for u in range(k):
        resv[0, u] = fv[nf - 1, u]
    for i in range(nf - 2, -1, -1):
        new_rn = min(rn + ng - 1, nout)
        _mul_into(resv, rn, gv, ng, tmpv, new_rn, accv, pp, redv, k)
        rn = new_rn
        resv, tmpv = tmpv, resv
        for u in range(k):
            resv[0, u] = (resv[0, u] + fv[i, u]) % pp
    for i in range(rn):
        for u in range(k):
            out[i, u] = resv[i, u]
    return out
