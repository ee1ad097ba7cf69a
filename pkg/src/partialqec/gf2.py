"""Dense GF(2) linear algebra on uint8 numpy arrays.

Vectors are 1-D arrays of 0/1, matrices are 2-D with one row per equation.
All routines use forward elimination with lowest-index pivots, so results
are deterministic for a given input.
"""

from __future__ import annotations

import numpy as np


def as_gf2(a) -> np.ndarray:
    return np.asarray(a, dtype=np.uint8) & 1


def rref(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Returns (rows, pivots) where rows has one row per pivot (rank rows)
    and pivots[k] is the column of the k-th pivot, in increasing order.
    """
    a = as_gf2(mat).copy()
    if a.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    n_rows, n_cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = hits[0] + r
        if p != r:
            a[[r, p]] = a[[p, r]]
        # eliminate from every other row so the result is fully reduced
        others = np.nonzero(a[:, c])[0]
        for i in others:
            if i != r:
                a[i, :] ^= a[r, :]
        pivots.append(c)
        r += 1
    return a[:r, :], pivots


def rank(mat: np.ndarray) -> int:
    return len(rref(mat)[1])


def reduce_vector(v: np.ndarray, rows: np.ndarray, pivots: list[int]) -> np.ndarray:
    """Reduce v by an RREF basis; the result is the canonical coset label."""
    out = as_gf2(v).copy()
    for k, c in enumerate(pivots):
        if out[c]:
            out ^= rows[k]
    return out


def in_rowspace(v: np.ndarray, rows: np.ndarray, pivots: list[int]) -> bool:
    return not reduce_vector(v, rows, pivots).any()


def reduce_matrix(vs: np.ndarray, rows: np.ndarray, pivots: list[int]) -> np.ndarray:
    """Row-wise reduce_vector, vectorized across many vectors at once."""
    out = as_gf2(vs).copy()
    for k, c in enumerate(pivots):
        mask = out[:, c].astype(bool)
        if mask.any():
            out[mask] ^= rows[k]
    return out


def solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """One solution of mat @ x = rhs over GF(2), or None if inconsistent.

    Free variables are set to zero, which together with lowest-index
    pivoting makes the returned solution unique and reproducible.
    """
    a = as_gf2(mat).copy()
    b = as_gf2(rhs).copy()
    n_rows, n_cols = a.shape
    if b.shape != (n_rows,):
        raise ValueError("rhs length does not match matrix rows")
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        p = hits[0] + r
        if p != r:
            a[[r, p]] = a[[p, r]]
            b[[r, p]] = b[[p, r]]
        for i in np.nonzero(a[:, c])[0]:
            if i != r:
                a[i, :] ^= a[r, :]
                b[i] ^= b[r]
        pivots.append(c)
        r += 1
    if np.any(b[r:]):
        return None
    x = np.zeros(n_cols, dtype=np.uint8)
    for k, c in enumerate(pivots):
        x[c] = b[k]
    return x


def kernel_basis(mat: np.ndarray) -> np.ndarray:
    """Basis of ker(mat) as rows; shape (dim_ker, n_cols)."""
    a = as_gf2(mat)
    n_cols = a.shape[1]
    rows, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = np.zeros((len(free), n_cols), dtype=np.uint8)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            if rows[i, f]:
                basis[k, c] = 1
    return basis


def quotient_basis(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    """Representatives of rowspace(numerator) modulo rowspace(denominator)."""
    den_rows, den_pivots = rref(denominator)
    reps: list[np.ndarray] = []
    cur_rows = den_rows.copy()
    cur_pivots = list(den_pivots)
    for v in as_gf2(numerator):
        red = reduce_vector(v, cur_rows, cur_pivots)
        if red.any():
            reps.append(v.copy())
            # extend the working basis so later vectors reduce against it
            pivot = int(np.nonzero(red)[0][0])
            order = np.searchsorted(cur_pivots, pivot)
            cur_rows = np.insert(cur_rows, order, red, axis=0)
            cur_pivots.insert(order, pivot)
            for i in range(cur_rows.shape[0]):
                if i != order and cur_rows[i, pivot]:
                    cur_rows[i] ^= red
    if not reps:
        return np.zeros((0, as_gf2(numerator).shape[-1]), dtype=np.uint8)
    return np.array(reps, dtype=np.uint8)


def rowspace_vectors(mat: np.ndarray) -> np.ndarray:
    """All 2**rank vectors of the rowspace; only for small ranks."""
    rows, _ = rref(mat)
    r = rows.shape[0]
    if r > 20:
        raise ValueError("rowspace too large to enumerate")
    n = rows.shape[1]
    out = np.zeros((1 << r, n), dtype=np.uint8)
    for k in range(r):
        half = 1 << k
        out[half:2 * half] = out[:half] ^ rows[k]
    return out
