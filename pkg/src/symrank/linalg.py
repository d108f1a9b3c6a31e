"""Matrix rank, row reduction and solving over exact fields and floats.

Exact fields use elimination in the field itself (GF(p)) or fraction-free
Bareiss elimination on cleared-denominator integer rows (rationals).  Float
fields use singular values with a threshold relative to the largest one.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .fields import Field

DEFAULT_TOL = 1e-8


def rref(m, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over an exact field; returns ``(R, pivot_columns)``."""
    R = field.asarray(m).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = field.reduce(R[r] * field.inv(R[r, c]))
        for i in np.flatnonzero(R[:, c] != 0):
            if i != r:
                R[i] = field.reduce(R[i] - R[i, c] * R[r])
        pivots.append(c)
        r += 1
    return R, pivots


def _bareiss_rank(rows: list[list[int]]) -> int:
    # Fraction-free elimination; every intermediate entry stays an integer.
    a = [row[:] for row in rows if any(row)]
    if not a:
        return 0
    n_rows, n_cols = len(a), len(a[0])
    prev = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, n_rows):
            a[i] = [(a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev for j in range(n_cols)]
        prev = a[r][c]
        r += 1
    return r


def _integer_rows(m: np.ndarray) -> list[list[int]]:
    out = []
    for row in m:
        fr = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def matrix_rank(m, field: Field, tol: float | None = None) -> int:
    """Rank of a matrix.

    Exact fields ignore ``tol``.  For float fields the rank is the number of
    singular values above ``tol`` times the largest one (default 1e-8).
    """
    arr = field.asarray(m)
    if arr.ndim != 2:
        raise ValueError("matrix_rank expects a matrix")
    if arr.size == 0:
        return 0
    if field.is_finite:
        return len(rref(arr, field)[1])
    if field.kind == "rational":
        return _bareiss_rank(_integer_rows(arr))
    tol = DEFAULT_TOL if tol is None else tol
    if tol <= 0:
        raise ValueError("float rank needs a positive tolerance")
    s = np.linalg.svd(arr, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def nullspace(m, field: Field) -> np.ndarray:
    """Basis of the right kernel, one vector per row (exact fields)."""
    R, pivots = rref(m, field)
    cols = R.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = field.zeros((len(free), cols))
    for k, f in enumerate(free):
        basis[k, f] = field.one
        for i, pc in enumerate(pivots):
            basis[k, pc] = field.neg(R[i, f])
    return basis


def solve(a, b, field: Field):
    """Some solution ``x`` of ``a @ x = b`` over an exact field, or ``None``.

    ``b`` may be a vector or a matrix (one right-hand side per column).
    """
    a = field.asarray(a)
    b = field.asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b.reshape(-1, 1)
    aug = np.concatenate([a, b], axis=1)
    R, pivots = rref(aug, field)
    n = a.shape[1]
    if any(pc >= n for pc in pivots):
        return None
    x = field.zeros((n, b.shape[1]))
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n:]
    return x[:, 0] if vec else x


def inverse(m, field: Field) -> np.ndarray:
    m = field.asarray(m)
    n = m.shape[0]
    eye = field.zeros((n, n))
    for i in range(n):
        eye[i, i] = field.one
    x = solve(m, eye, field)
    if x is None or matrix_rank(m, field) < n:
        raise np.linalg.LinAlgError("singular matrix")
    return x


def is_independent(vectors, field: Field, tol: float | None = None) -> bool:
    vectors = list(vectors)
    if not vectors:
        return True
    return matrix_rank(np.stack(vectors), field, tol) == len(vectors)


# -- batched GF(p) kernels used by the exhaustive oracle ---------------------


@lru_cache(maxsize=None)
def _inverse_table(p: int) -> np.ndarray:
    return np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)


def batch_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices ``(B, rows, cols)`` over GF(p)."""
    A = np.mod(np.asarray(mats, dtype=np.int64), p)
    B, r, c = A.shape
    rank = np.zeros(B, dtype=np.int64)
    if B == 0 or r == 0:
        return rank
    inv = _inverse_table(p)
    ar = np.arange(r)
    for col in range(c):
        cand = (A[:, :, col] != 0) & (ar[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.flatnonzero(has)
        piv = cand[b].argmax(axis=1)
        tgt = rank[b]
        row_p = A[b, piv].copy()
        row_t = A[b, tgt].copy()
        A[b, piv] = row_t
        row_p = (row_p * inv[row_p[:, col]][:, None]) % p
        A[b, tgt] = row_p
        sub = A[b]
        fac = sub[:, :, col].copy()
        fac[ar[None, :] <= tgt[:, None]] = 0
        A[b] = (sub - fac[:, :, None] * row_p[:, None, :]) % p
        rank[b] += 1
        if np.all(rank == r):
            break
    return rank


def gaussian_binomial(q: int, k: int, p: int) -> int:
    """Number of ``k``-dimensional subspaces of GF(p)^q."""
    if k < 0 or k > q:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (q - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


@lru_cache(maxsize=64)
def rref_subspaces(q: int, k: int, p: int) -> np.ndarray:
    """Every ``k``-dimensional subspace of GF(p)^q as its RREF basis, shape ``(N, k, q)``."""
    if k == 0:
        return np.zeros((1, 0, q), dtype=np.int64)
    blocks = []
    for piv in combinations(range(q), k):
        pivset = set(piv)
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, q) if j not in pivset]
        base = np.zeros((k, q), dtype=np.int64)
        base[np.arange(k), list(piv)] = 1
        if not free:
            blocks.append(base[None])
            continue
        vals = np.indices((p,) * len(free)).reshape(len(free), -1).T
        block = np.repeat(base[None], len(vals), axis=0)
        rows, cols = zip(*free)
        block[:, list(rows), list(cols)] = vals
        blocks.append(block)
    out = np.concatenate(blocks)
    out.setflags(write=False)
    return out
