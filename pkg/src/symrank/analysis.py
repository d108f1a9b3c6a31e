"""Unfoldings, Kruskal ranks and certificates, concision, and tabulated constants."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Any, Sequence

import numpy as np

from .errors import PreconditionFailed, ShapeMismatch, ZeroFactor
from .fields import Field
from .linalg import inverse, matrix_rank, rref
from .tensor import Decomposition, SymTensor, Tensor, _outer, mode_product

MINUS_INFINITY = -math.inf


def unfold(t: Tensor, mode: int = 0) -> np.ndarray:
    """The ``n x n^(d-1)`` flattening along ``mode`` (0-based).

    Columns run row-major over the remaining modes in their natural order.
    """
    if not 0 <= mode < t.order:
        raise ShapeMismatch(f"mode {mode} out of range for order {t.order}")
    return np.moveaxis(t.data, mode, 0).reshape(t.dim, -1)


def rank_a(t: Tensor, tol: float | None = None) -> int:
    """Matrix rank of the mode-1 unfolding."""
    return matrix_rank(unfold(t), t.field, tol)


def kruskal_rank(vectors: Sequence, field: Field, tol: float | None = None) -> float:
    """Largest ``k`` such that every ``k`` of the vectors are independent.

    Returns ``-inf`` when any vector is zero.
    """
    vecs = [field.asarray(v) for v in vectors]
    if not vecs:
        return 0
    if len({v.shape for v in vecs}) != 1:
        raise ShapeMismatch("vectors must have equal length")
    for v in vecs:
        if field.is_exact and not np.any(v != 0):
            return MINUS_INFINITY
        if field.is_float and np.linalg.norm(v) == 0:
            return MINUS_INFINITY
    stack = np.stack(vecs)
    limit = min(len(vecs), stack.shape[1])
    k = 1
    while k < limit:
        for sub in combinations(range(len(vecs)), k + 1):
            if matrix_rank(stack[list(sub)], field, tol) < k + 1:
                return k
        k += 1
    return k


@dataclass
class KruskalCertificate:
    r: int
    kranks: tuple
    condition_met: bool
    unique: bool
    # Only filled in for decompositions of a symmetric tensor.
    spans_coincide: bool | None = None

    def to_json(self) -> dict[str, Any]:
        out = asdict(self)
        out["kranks"] = [k if k != MINUS_INFINITY else "-inf" for k in self.kranks]
        return out


def _factor_families(dec: Decomposition) -> list[list[np.ndarray]]:
    f = dec.field
    per_term = [[f.asarray(x) for x in t.factor_list(dec.order)] for t in dec.terms]
    fam1 = [fs[0] for fs in per_term]
    fam2 = [fs[1] for fs in per_term]
    fam3 = [_outer(fs[2:], f).reshape(-1) for fs in per_term]
    return [fam1, fam2, fam3], per_term


def kruskal_certify(dec: Decomposition, tol: float | None = None) -> KruskalCertificate:
    """Kruskal's criterion on the grouping (mode 1, mode 2, modes 3..d).

    ``condition_met`` is ``2r + 2 <= k1 + k2 + k3``.  When it holds the
    decomposition is the unique minimal one and the tensor has rank ``r``;
    a single nonzero term is unique regardless.
    """
    f = dec.field
    if dec.order < 3:
        raise ShapeMismatch("Kruskal certification needs order >= 3")
    r = len(dec.terms)
    if r < 1:
        raise PreconditionFailed("empty decomposition")
    for t in dec.terms:
        if f.is_exact and t.coefficient == 0:
            raise ZeroFactor("zero coefficient in decomposition")
        for x in t.factors:
            x = f.asarray(x)
            if not np.any(x != 0):
                raise ZeroFactor("zero factor in decomposition")
    fams, per_term = _factor_families(dec)
    kranks = tuple(kruskal_rank(fam, f, tol) for fam in fams)
    condition = 2 * r + 2 <= sum(kranks)
    unique = condition or r == 1
    spans = None
    full = dec.reconstruct()
    if full.is_symmetric():
        spans = all(matrix_rank(np.stack(fs), f, tol) == 1 for fs in per_term)
    return KruskalCertificate(r, kranks, condition, unique, spans)


def concise_reduce(s: Tensor, tol: float | None = None) -> tuple[Tensor, np.ndarray]:
    """Rewrite ``s`` on ``m = rank A(s)`` variables.

    Returns ``(s_reduced, basis)`` where ``basis`` is ``n x m`` and
    ``s == s_reduced`` with ``basis`` applied on every mode.  Exact fields
    take the pivot columns of the unfolding as the basis; float fields take
    the leading left singular vectors.
    """
    f = s.field
    A = unfold(s)
    n = s.dim
    if f.is_exact:
        basis, left = column_basis(A, f)
        m = basis.shape[1]
        if m == n:
            return s, _identity(n, f)
        if m == 0:
            return type(s)(f.zeros((1,) * s.order), f), f.zeros((n, 1))
    else:
        m = matrix_rank(A, f, tol)
        if m == n:
            return s, _identity(n, f)
        if m == 0:
            return type(s)(np.zeros((1,) * s.order, dtype=f.dtype), f), np.zeros((n, 1), dtype=f.dtype)
        u, _, _ = np.linalg.svd(A)
        basis = u[:, :m]
        left = basis.conj().T
    reduced = mode_product(s.data, [left] * s.order, f)
    if isinstance(s, SymTensor) and f.is_float:
        reduced = _symmetrize_float(reduced)
    return type(s)(reduced, f), basis


def column_basis(A: np.ndarray, f: Field) -> tuple[np.ndarray, np.ndarray]:
    """Pivot columns ``B`` of ``A`` and a left inverse ``L`` with ``L @ B = I`` (exact fields)."""
    _, pivots = rref(A, f)
    basis = A[:, pivots]
    m = len(pivots)
    left = f.zeros((m, A.shape[0]))
    if m:
        # Invert the square block on the pivot rows, zeros elsewhere.
        _, rows = rref(basis.T, f)
        left[:, rows] = inverse(basis[rows, :], f)
    return basis, left


def expand_basis(reduced: Tensor, basis: np.ndarray) -> Tensor:
    """Inverse of :func:`concise_reduce`."""
    f = reduced.field
    return type(reduced)(mode_product(reduced.data, [basis] * reduced.order, f), f)


def _symmetrize_float(data: np.ndarray) -> np.ndarray:
    from itertools import permutations

    perms = list(permutations(range(data.ndim)))
    return sum(np.transpose(data, p) for p in perms) / len(perms)


def _identity(n: int, f: Field) -> np.ndarray:
    eye = f.zeros((n, n))
    for i in range(n):
        eye[i, i] = f.one
    return eye


@dataclass
class Lemma6Result:
    """Outcome of the (n+1)-term independence dichotomy.

    ``kind`` is ``"independent"``, ``"collinear_pair"`` (with a 1-based
    ``pair``) or ``"outside"`` when neither alternative holds.
    """

    kind: str
    pair: tuple[int, int] | None = None

    @property
    def in_dichotomy(self) -> bool:
        return self.kind in ("independent", "collinear_pair")


def lemma6_structure_check(terms: Sequence[Sequence], field: Field, tol: float | None = None) -> Lemma6Result:
    """Classify ``n+1`` rank-one ``d``-tensors whose factor families each span ``F^n``.

    ``terms[i]`` is the list of ``d`` factor vectors of the ``i``-th tensor.
    """
    terms = [[field.asarray(x) for x in t] for t in terms]
    if not terms:
        raise PreconditionFailed("no terms")
    d = len(terms[0])
    n = len(terms[0][0])
    if d < 2 or any(len(t) != d for t in terms):
        raise PreconditionFailed("every term needs the same number (>= 2) of factors")
    if len(terms) != n + 1:
        raise PreconditionFailed(f"expected {n + 1} terms for n = {n}")
    for j in range(d):
        fam = np.stack([t[j] for t in terms])
        if any(not np.any(v != 0) for v in fam):
            raise PreconditionFailed(f"zero vector in factor family {j + 1}")
        if matrix_rank(fam, field, tol) != n:
            raise PreconditionFailed(f"factor family {j + 1} does not span F^{n}")
    flat = np.stack([_outer(t, field).reshape(-1) for t in terms])
    total = matrix_rank(flat, field, tol)
    if total == n + 1:
        return Lemma6Result("independent")
    if total == n:
        for i, j in combinations(range(n + 1), 2):
            if matrix_rank(flat[[i, j]], field, tol) != 1:
                continue
            rest = [k for k in range(n + 1) if k != j]
            if matrix_rank(flat[rest], field, tol) == n:
                return Lemma6Result("collinear_pair", (i + 1, j + 1))
    return Lemma6Result("outside")


def k_generic(n: int, d: int) -> Fraction:
    """``binom(n+d-1, d) / n``."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    return Fraction(math.comb(n + d - 1, d), n)


@dataclass(frozen=True)
class MuValue:
    """Known maximal symmetric rank in ``S^d C^n``: ``kind`` in {"exact", "upper", "unknown"}."""

    kind: str
    value: int | None = None


_MU_TABLE = {(3, 3): MuValue("exact", 5), (3, 4): MuValue("exact", 7), (3, 5): MuValue("upper", 10), (4, 3): MuValue("exact", 7)}


def mu_max_srank(d: int, n: int) -> MuValue:
    if n == 2 and d >= 1:
        return MuValue("exact", d)
    return _MU_TABLE.get((d, n), MuValue("unknown"))


@dataclass
class RankReport:
    """Everything known about one tensor, with a method tag on every derived value."""

    order: int
    dim: int
    field: str
    rank_a: int
    rank: dict | None = None
    srank: dict | None = None
    brank: dict | None = None
    pencil: dict | None = None
    border: dict | None = None
    certificate: dict | None = None
    witnesses: dict = dc_field(default_factory=dict)
    notes: list = dc_field(default_factory=list)

    def chain_holds(self) -> bool:
        """``rank_A <= rank <= srank`` over whichever of them are present."""
        vals = [self.rank_a]
        if self.rank is not None and isinstance(self.rank.get("value"), int):
            vals.append(self.rank["value"])
        if self.srank is not None:
            v = self.srank.get("value")
            vals.append(math.inf if v == "not_expressible" else v)
        return all(a <= b for a, b in zip(vals, vals[1:]))

    def to_json(self) -> dict[str, Any]:
        out = {k: v for k, v in asdict(self).items() if v not in (None, {}, [])}
        return out
