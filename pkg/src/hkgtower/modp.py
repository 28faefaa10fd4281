"""Exact dense linear algebra over F_p.

Deterministic pivoting (first nonzero column, lowest row index) so that
solution witnesses are reproducible across runs.
"""

import numpy as np


def _inv_mod(a, p):
    return pow(int(a) % p, p - 2, p)


def rref(mat, p):
    """Reduced row echelon form of an integer matrix mod p.

    Returns (R, pivot_columns).
    """
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * _inv_mod(a[r, c], p)) % p
        for j in range(rows):
            if j != r and a[j, c]:
                a[j] = (a[j] - a[j, c] * a[r]) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat, p):
    if mat.size == 0:
        return 0
    _, pivots = rref(mat, p)
    return len(pivots)


def solve_affine(a, b, p):
    """Solve a x = b mod p.

    Returns (particular, nullspace_basis) where nullspace_basis is a list of
    vectors, or None if the system is inconsistent.  The particular solution
    is the canonical one with free variables set to zero.
    """
    a = np.array(a, dtype=np.int64) % p
    b = np.array(b, dtype=np.int64) % p
    rows, cols = a.shape
    aug = np.concatenate([a, b.reshape(rows, 1)], axis=1)
    r, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, cols]
    return x, nullspace(a, p)


def nullspace(a, p):
    """Basis of the kernel of a mod p (list of vectors)."""
    a = np.array(a, dtype=np.int64) % p
    if a.size == 0:
        n = a.shape[1]
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    r, pivots = rref(a, p)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-r[i, f]) % p
        basis.append(v)
    return basis
