"""Symmetric decomposition of binary cubics ``S in S^3 F^2`` over exact fields with ``|F| >= 3``.

Entries are named ``A = s111, B = s112, C = s122, D = s222``.  A
substitution matrix ``m`` acts on vectors, so ``apply_substitution(s, m)``
sends ``sum t u^{⊗3}`` to ``sum t (m u)^{⊗3}``; a variable change
``x = N y`` of the cubic form corresponds to ``m = N^T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Any

import numpy as np

from .analysis import concise_reduce, rank_a
from .errors import NotSymmetric, SingularSubstitution, UnsupportedField, WrongShape
from .fields import Field
from .linalg import inverse, matrix_rank, nullspace, solve
from .tensor import Decomposition, SymTensor, Tensor, mode_product, sym_term

MAX_DEPTH = 4


@dataclass
class CaseTrace:
    """Ordered case labels and the substitutions applied on the way to a decomposition.

    Labels are ``"1"``, ``"2"``, ``"3a"``, ``"3bi"``, ``"3bii"``, ``"3biii"``
    plus ``"rank0"``, ``"rank1"``, ``"rank2"`` for the low-rank shortcuts,
    ``"swap"`` for exchanging the two variables, and ``"3a-basis"`` for the
    characteristic-3 tensors no substitution brings into case 1.
    """

    steps: list[tuple[str, np.ndarray | None]] = dc_field(default_factory=list)

    @property
    def cases(self) -> list[str]:
        return [c for c, _ in self.steps]

    def add(self, case: str, m: np.ndarray | None = None):
        self.steps.append((case, m))

    def composite(self, f: Field) -> np.ndarray:
        """Product of all substitutions, latest on the left."""
        total = np.array([[f.one, f.zero], [f.zero, f.one]], dtype=f.dtype)
        for _, m in self.steps:
            if m is not None:
                total = f.reduce(m @ total)
        return total

    def to_json(self, f: Field) -> list[dict[str, Any]]:
        return [
            {"case": c, "substitution": None if m is None else [[f.to_json(x) for x in row] for row in m]}
            for c, m in self.steps
        ]


def _entries(s: Tensor):
    return s.entry(1, 1, 1), s.entry(1, 1, 2), s.entry(1, 2, 2), s.entry(2, 2, 2)


def _check_input(s: Tensor) -> Field:
    f = s.field
    if f.is_float:
        raise UnsupportedField("the case analysis tests exact zeros; use the numeric module for floats")
    if f.is_finite and f.p < 3:
        raise UnsupportedField(f"{f} has fewer than 3 elements")
    if s.order != 3 or s.dim != 2:
        raise WrongShape(f"expected a 2x2x2 tensor, got order {s.order}, dim {s.dim}")
    if not s.is_symmetric():
        raise NotSymmetric("input is not symmetric")
    return f


def apply_substitution(s: Tensor, m) -> SymTensor:
    """``s`` with the invertible matrix ``m`` applied on every mode."""
    f = s.field
    m = f.asarray(m)
    if m.shape != (s.dim, s.dim) or matrix_rank(m, f) < s.dim:
        raise SingularSubstitution("substitution must be an invertible square matrix")
    return SymTensor(mode_product(s.data, [m] * s.order, f), f)


def _mat(f: Field, rows) -> np.ndarray:
    return f.asarray([[f.coerce(x) for x in r] for r in rows])


def _candidates(f: Field):
    """Nonzero field elements in a deterministic order (1, 2, 3, ... for rationals)."""
    if f.is_finite:
        return [e.value for e in f.elements()[1:]]
    return (Fraction(k) for k in range(1, 10**6))


def _try_two_terms(s: SymTensor, f: Field):
    """Symmetric two-term decomposition when one exists, via the catalecticant kernel."""
    A, B, C, D = _entries(s)
    cat = f.asarray([[A, B, C], [B, C, D]])
    ker = nullspace(cat, f)
    if len(ker) != 1:
        return None
    q0, q1, q2 = ker[0]
    roots = _binary_quadratic_roots(f, q0, q1, q2)
    if len(roots) != 2:
        return None
    u1, u2 = (f.asarray(r) for r in roots)
    # Columns: symmetric coordinates of u1^3 and u2^3.
    V = f.asarray([[u[0] ** 3, u[0] ** 2 * u[1], u[0] * u[1] ** 2, u[1] ** 3] for u in (u1, u2)]).T
    coef = solve(f.reduce(V), f.asarray([A, B, C, D]), f)
    if coef is None:
        return None
    return [sym_term(c, u, f) for c, u in zip(coef, (u1, u2)) if c != 0]


def _binary_quadratic_roots(f: Field, q0, q1, q2) -> list[tuple]:
    """Distinct projective roots ``(a, b)`` of ``q0 a^2 + q1 ab + q2 b^2``."""
    if f.is_finite:
        p = f.p
        pts = [(0, 1)] + [(1, x) for x in range(p)]
        return [pt for pt in pts if (q0 * pt[0] ** 2 + q1 * pt[0] * pt[1] + q2 * pt[1] ** 2) % p == 0]
    q0, q1, q2 = Fraction(q0), Fraction(q1), Fraction(q2)
    if q2 == 0:
        # (0, 1) is a root; the others solve q0 + q1 x = 0.
        out = [(Fraction(0), Fraction(1))]
        if q1 != 0:
            out.append((Fraction(1), -q0 / q1))
        return out
    disc = q1 * q1 - 4 * q0 * q2
    if disc < 0:
        return []
    r = _rational_sqrt(disc)
    if r is None or r == 0:
        return []
    return [(Fraction(1), (-q1 + r) / (2 * q2)), (Fraction(1), (-q1 - r) / (2 * q2))]


def _rational_sqrt(x: Fraction) -> Fraction | None:
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _case1(f: Field, s: SymTensor):
    A, B, C, D = _entries(s)
    t1 = f.div(f.mul(B, B), C)
    b = f.div(C, B)
    t2 = f.sub(A, t1)
    t3 = f.sub(D, f.mul(t1, f.mul(b, f.mul(b, b))))
    parts = [(t1, (f.one, b)), (t2, (f.one, f.zero)), (t3, (f.zero, f.one))]
    return [sym_term(c, u, f) for c, u in parts if c != 0]


def _char3_substitution(f: Field, s: SymTensor) -> np.ndarray | None:
    """A substitution that puts ``s`` into case 1, or None.

    Tries the variable change ``x1 = y1, x2 = y1 + y2`` first, then every
    element of GL(2, F) in a fixed order.
    """
    first = _mat(f, [[1, 1], [0, 1]])
    tries = [first] + [
        _mat(f, [[a, b], [c, d]])
        for a, b, c, d in product(range(f.p), repeat=4)
        if (a * d - b * c) % f.p
    ]
    for m in tries:
        _, B, C, _ = _entries(apply_substitution(s, m))
        if B != 0 and C != 0:
            return m
    return None


def _basis_of_cubes(f: Field, s: SymTensor):
    pts = [(1, 0), (0, 1)] + [(1, x) for x in range(1, f.p)]
    V = f.asarray([[u[0] ** 3, u[0] ** 2 * u[1], u[0] * u[1] ** 2, u[1] ** 3] for u in pts]).T
    coef = solve(f.reduce(V), f.asarray(list(_entries(s))), f)
    return [sym_term(c, u, f) for c, u in zip(coef, pts) if c != 0]


def _dispatch(f: Field, s: SymTensor, trace: CaseTrace, depth: int):
    """Terms of a decomposition of ``s`` (in the current coordinates) and updated trace."""
    if depth > MAX_DEPTH:
        raise RuntimeError(f"case analysis did not terminate within {MAX_DEPTH} substitutions: {trace.cases}")
    A, B, C, D = _entries(s)
    if B != 0 and C != 0:
        trace.add("1")
        return s, _case1(f, s)
    if B == 0 and C == 0:
        trace.add("2")
        return s, [sym_term(c, u, f) for c, u in ((A, (1, 0)), (D, (0, 1))) if c != 0]
    if C == 0:
        m = _mat(f, [[0, 1], [1, 0]])
        trace.add("swap", m)
        return _dispatch(f, apply_substitution(s, m), trace, depth + 1)
    # From here B == 0 and C != 0.
    if f.characteristic == 3:
        m = _char3_substitution(f, s)
        if m is None:
            trace.add("3a-basis")
            return s, _basis_of_cubes(f, s)
        trace.add("3a", m)
        return _dispatch(f, apply_substitution(s, m), trace, depth + 1)
    if A != 0:
        a = next(a for a in _candidates(f) if f.add(f.mul(f.mul(a, a), A), C) != 0)
        m = _mat(f, [[1, 0], [a, 1]])
        trace.add("3bi", m)
        return _dispatch(f, apply_substitution(s, m), trace, depth + 1)
    if D == 0:
        m = _mat(f, [[1, 1], [0, 1]])
        trace.add("3bii", m)
        return _dispatch(f, apply_substitution(s, m), trace, depth + 1)
    # A == 0, D != 0: the form is x2^2 (3C x1 + D x2); make 3C x1 + D x2 a variable.
    three_c = f.mul(f.coerce(3), C)
    n = inverse(_mat(f, [[three_c, D], [0, 1]]), f)
    m = n.T.copy()
    trace.add("3biii", m)
    return _dispatch(f, apply_substitution(s, m), trace, depth + 1)


def decompose_s3f2(s: Tensor) -> tuple[Decomposition, CaseTrace]:
    """Decompose a binary cubic tensor into symmetric rank-one terms.

    Tensors of symmetric rank at most 2 get a minimal decomposition from the
    shortcuts; the rest go through the case analysis and come back with 3
    terms (4 for the characteristic-3 tensors of symmetric rank 4).
    """
    f = _check_input(s)
    s = s if isinstance(s, SymTensor) else SymTensor(s.data, f)
    trace = CaseTrace()
    ra = rank_a(s)
    if ra == 0:
        trace.add("rank0")
        return _finish(f, s, [], trace), trace
    if ra == 1:
        core, basis = concise_reduce(s)
        trace.add("rank1")
        return _finish(f, s, [sym_term(core.data[0, 0, 0], basis[:, 0], f)], trace), trace
    two = _try_two_terms(s, f)
    if two is not None:
        _, B, C, _ = _entries(s)
        trace.add("2" if B == 0 and C == 0 else "rank2")
        return _finish(f, s, two, trace), trace
    _, terms = _dispatch(f, s, trace, 0)
    # Pull the terms back through the accumulated substitution.
    back = inverse(trace.composite(f), f)
    pulled = [sym_term(t.coefficient, f.reduce(back @ f.asarray(t.factors[0])), f) for t in terms]
    return _finish(f, s, pulled, trace), trace


def _finish(f: Field, s: SymTensor, terms, trace: CaseTrace) -> Decomposition:
    dec = Decomposition(terms, f, 3, 2, meta={"cases": trace.to_json(f)})
    if not np.array_equal(dec.reconstruct().data, s.data):
        raise AssertionError(f"decomposition failed to reconstruct the input (cases {trace.cases})")
    return dec
