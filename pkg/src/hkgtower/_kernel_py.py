"""Pure-Python (numpy) kernels for truncated power-series arithmetic.

Coefficient arrays have shape (n, k): row i holds the F_q coordinates of
the coefficient of t^i.  ``red`` is the (k-1, k) matrix reducing x^k ..
x^{2k-2} modulo the field polynomial.  Results are bit-identical to the
compiled kernel in ``_serieskernel``.
"""

import numpy as np

IMPL = "python"


def mul(a, b, nout, p, red):
    """Truncated product of coefficient arrays, length min(na+nb-1, nout)."""
    na, k = a.shape
    nb = b.shape[0]
    if na == 0 or nb == 0:
        return np.zeros((0, k), dtype=np.int64)
    n = min(na + nb - 1, nout)
    if n <= 0:
        return np.zeros((0, k), dtype=np.int64)
    acc = np.zeros((n, 2 * k - 1), dtype=np.int64)
    for u in range(k):
        au = a[:, u]
        if not au.any():
            continue
        for v in range(k):
            bv = b[:, v]
            if not bv.any():
                continue
            conv = np.convolve(au, bv)[:n]
            acc[: len(conv), u + v] += conv
    acc %= p
    out = acc[:, :k].copy()
    for w in range(k, 2 * k - 1):
        col = acc[:, w]
        if col.any():
            out += np.outer(col, red[w - k])
    return out % p


def compose(f, g, nout, p, red):
    """Horner evaluation of power series f at g (g[0] must vanish)."""
    nf, k = f.shape
    out = np.zeros((nout, k), dtype=np.int64)
    if nf == 0 or nout <= 0:
        return np.zeros((max(nout, 0), k), dtype=np.int64)
    gt = g[:nout]
    res = np.zeros((1, k), dtype=np.int64)
    res[0] = f[nf - 1]
    for i in range(nf - 2, -1, -1):
        res = mul(res, gt, nout, p, red)
        if res.shape[0] == 0:
            res = np.zeros((1, k), dtype=np.int64)
        res[0] = (res[0] + f[i]) % p
    out[: res.shape[0]] = res
    return out
