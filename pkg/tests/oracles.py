"""Reference computations kept independent of the package's bit-packed code.

Nothing here imports hfsurgery.f2linalg elimination routines.
"""

import numpy as np


def naive_rank(entries):
    """Gaussian elimination on a list of lists of 0/1, no packing."""
    m = [list(row) for row in entries]
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(nrows):
            if i != r and m[i][c]:
                m[i] = [x ^ y for x, y in zip(m[i], m[r])]
        r += 1
        if r == nrows:
            break
    return r


def np_rank(a):
    """GF(2) rank of a numpy 0/1 array by vectorised elimination."""
    m = np.array(a, dtype=np.uint8) % 2
    if m.size == 0:
        return 0
    nrows, ncols = m.shape
    r = 0
    for c in range(ncols):
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        mask = m[:, c].astype(bool)
        mask[r] = False
        m[mask] ^= m[r]
        r += 1
        if r == nrows:
            break
    return r


def np_matmul(a, b):
    return (np.array(a, dtype=np.int64) @ np.array(b, dtype=np.int64)) % 2


def dense_rational(phi, phibar, psi, psibar, p, q):
    """The rational surgery complex as two dense numpy arrays (d2, d1).

    Inputs are 2-d arrays with their true shapes (possibly empty).

    Built straight from the index formulas with 1-based copy numbers:
    phi^i: Hinf(i)->H1(i), phibar^i: Hinf(i)->H1(i+p) for i<=q,
    psi^j: H1(j+q)->H0(j), psibar^j: H1(j)->H0(j) for j<=p.
    """
    phi, phibar, psi, psibar = (np.asarray(x, dtype=np.int64) for x in (phi, phibar, psi, psibar))
    h1, hinf = phi.shape
    h0 = psi.shape[0]
    d2 = np.zeros(((p + q) * h1, q * hinf), dtype=np.int64)
    d1 = np.zeros((p * h0, (p + q) * h1), dtype=np.int64)

    def put(d, tgt, src, m):
        rows = slice((tgt - 1) * m.shape[0], tgt * m.shape[0])
        cols = slice((src - 1) * m.shape[1], src * m.shape[1])
        d[rows, cols] ^= m

    for i in range(1, q + 1):
        put(d2, i, i, phi)
        put(d2, i + p, i, phibar)
    for j in range(1, p + 1):
        put(d1, j, j + q, psi)
        put(d1, j, j, psibar)
    return d2 % 2, d1 % 2


def dense_total_homology(d2, d1):
    n2, n1, n0 = d2.shape[1], d2.shape[0], d1.shape[0]
    return n2 + n1 + n0 - 2 * np_rank(d2) - 2 * np_rank(d1)
