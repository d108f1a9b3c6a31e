"""Dense order-d tensors on F^n, symmetric tensors, rank-one terms and decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from typing import Any, Sequence

import numpy as np

from .errors import BadCharacteristic, InputError, NotSymmetric, ShapeMismatch
from .fields import Field

MAX_ORDER = 6
SYM_TOL = 1e-10


def _outer(vectors: Sequence[np.ndarray], field: Field) -> np.ndarray:
    out = np.asarray(vectors[0])
    for v in vectors[1:]:
        out = field.reduce(np.multiply.outer(out, v))
    return out


class Tensor:
    """A dense tensor in ``⊗^d F^n`` stored as an ``(n,)*d`` numpy array.

    Entry ``(i1, ..., id)`` lives at ``data[i1, ..., id]`` (0-based), so the
    flat row-major order has ``i1`` slowest.  Instances are treated as
    immutable; the underlying array is marked read-only.
    """

    __slots__ = ("field", "data")

    def __init__(self, data, field: Field):
        arr = field.asarray(data)
        if arr.ndim < 1 or arr.ndim > MAX_ORDER:
            raise ShapeMismatch(f"order must be in 1..{MAX_ORDER}, got {arr.ndim}")
        if len(set(arr.shape)) != 1 or arr.shape[0] < 1:
            raise ShapeMismatch(f"all modes must share one dimension, got shape {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.field = field
        self.data = arr

    @property
    def order(self) -> int:
        return self.data.ndim

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    def entry(self, *index: int):
        """Entry at a 1-based multi-index."""
        return self.data[tuple(i - 1 for i in index)]

    def entries(self) -> list:
        return list(self.data.reshape(-1))

    def _check(self, other: Tensor):
        if not isinstance(other, Tensor):
            raise TypeError("expected a Tensor")
        if other.field != self.field or other.shape != self.shape:
            raise ShapeMismatch(f"{self.shape}/{self.field} vs {other.shape}/{other.field}")

    def __add__(self, other: Tensor) -> Tensor:
        self._check(other)
        return Tensor(self.field.reduce(self.data + other.data), self.field)

    def __sub__(self, other: Tensor) -> Tensor:
        self._check(other)
        return Tensor(self.field.reduce(self.data - other.data), self.field)

    def __neg__(self) -> Tensor:
        return Tensor(self.field.reduce(-self.data), self.field)

    def scale(self, c) -> Tensor:
        c = self.field.coerce(c)
        return type(self)(self.field.reduce(self.data * c), self.field)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.data == other.data))

    __hash__ = None

    def allclose(self, other: Tensor, atol: float = 1e-10) -> bool:
        self._check(other)
        if self.field.is_exact:
            return self == other
        return bool(np.max(np.abs(self.data - other.data), initial=0.0) <= atol)

    def is_zero(self) -> bool:
        return not np.any(self.data != 0)

    def norm(self) -> float:
        if not self.field.is_float:
            raise InputError("norm is defined for float tensors only")
        return float(np.linalg.norm(self.data.reshape(-1)))

    def is_symmetric(self, tol: float = SYM_TOL) -> bool:
        d = self.order
        if d == 1:
            return True
        if self.field.is_exact:
            return all(
                np.all(self.data == np.swapaxes(self.data, k, k + 1)) for k in range(d - 1)
            )
        scale = 1.0 + float(np.max(np.abs(self.data), initial=0.0))
        return all(
            np.max(np.abs(self.data - np.swapaxes(self.data, k, k + 1))) <= tol * scale
            for k in range(d - 1)
        )

    def as_symmetric(self, tol: float = SYM_TOL) -> SymTensor:
        return SymTensor(self.data, self.field, tol=tol)

    def astype(self, field: Field) -> Tensor:
        """Re-interpret the entries in another field (e.g. integers into GF(p), rationals into floats)."""
        vals = []
        for x in self.data.reshape(-1):
            if isinstance(x, np.generic):
                x = x.item()
            if field.is_float and isinstance(x, Fraction):
                x = float(x)
            vals.append(field.coerce(x))
        arr = np.empty(len(vals), dtype=field.dtype)
        arr[:] = vals
        return type(self)(arr.reshape(self.shape), field)

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order}, dim={self.dim}, field={self.field.name})"

    # -- JSON -------------------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "dim": self.dim,
            "field": self.field.name,
            "entries": [self.field.to_json(x) for x in self.data.reshape(-1)],
        }

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> Tensor:
        try:
            d = int(obj["order"])
            n = int(obj["dim"])
            field = Field.parse(obj["field"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed tensor header: {exc}") from None
        if "entries" in obj and obj["entries"] is not None:
            entries = obj["entries"]
            if len(entries) != n**d:
                raise InputError(f"expected {n**d} entries, got {len(entries)}")
            vals = [field.coerce(v) for v in entries]
            data = np.empty(n**d, dtype=field.dtype)
            data[:] = vals
            data = data.reshape((n,) * d)
        elif "sparse" in obj:
            data = field.zeros((n,) * d)
            for rec in obj["sparse"]:
                if len(rec) != d + 1:
                    raise InputError(f"sparse record {rec!r} needs {d} indices and a value")
                idx = tuple(int(i) - 1 for i in rec[:d])
                if any(i < 0 or i >= n for i in idx):
                    raise InputError(f"sparse index {rec[:d]} out of range")
                data[idx] = field.add(data[idx], field.coerce(rec[d]))
        else:
            raise InputError("tensor JSON needs 'entries' or 'sparse'")
        return cls(data, field)


class SymTensor(Tensor):
    """A tensor invariant under every permutation of its modes.

    Exact fields require exact invariance; float fields allow an orbit
    deviation of at most ``tol * (1 + max|entry|)``.
    """

    __slots__ = ()

    def __init__(self, data, field: Field, tol: float = SYM_TOL):
        super().__init__(data, field)
        if not self.is_symmetric(tol):
            raise NotSymmetric("tensor is not symmetric")

    def sym_coords(self) -> list:
        """One entry per multiset of indices, in ``combinations_with_replacement`` order."""
        return [self.data[idx] for idx in sym_index_orbits(self.dim, self.order)]

    @classmethod
    def from_sym_coords(cls, coords, n: int, d: int, field: Field) -> SymTensor:
        data = field.zeros((n,) * d)
        for c, idx in zip(coords, sym_index_orbits(n, d)):
            for perm in set(permutations(idx)):
                data[perm] = c
        return cls(data, field)


def sym_index_orbits(n: int, d: int) -> list[tuple[int, ...]]:
    """Sorted 0-based representatives of the multi-index orbits under S_d."""
    return list(combinations_with_replacement(range(n), d))


def as_vector(v, field: Field) -> np.ndarray:
    arr = field.asarray(v)
    if arr.ndim != 1:
        raise ShapeMismatch("expected a vector")
    return arr


def rank_one(factors: Sequence, field: Field) -> Tensor:
    """The tensor ``x1 ⊗ x2 ⊗ ... ⊗ xd``."""
    vecs = [as_vector(f, field) for f in factors]
    if not vecs or len({len(v) for v in vecs}) != 1:
        raise ShapeMismatch("factors must be a non-empty list of equal-length vectors")
    return Tensor(_outer(vecs, field), field)


def sym_power(u, d: int, field: Field) -> SymTensor:
    u = as_vector(u, field)
    return SymTensor(_outer([u] * d, field), field)


def symmetrize(t: Tensor) -> SymTensor:
    """Average of ``t`` over all permutations of its modes."""
    d = t.order
    f = t.field
    fact = math.factorial(d)
    if f.is_finite and fact % f.p == 0:
        raise BadCharacteristic(f"{d}! is not invertible in {f}")
    total = f.zeros(t.shape)
    for perm in permutations(range(d)):
        total = f.reduce(total + np.transpose(t.data, perm))
    if f.is_finite:
        out = f.reduce(total * f.inv(fact % f.p))
    elif f.kind == "rational":
        out = total / fact
    else:
        out = total / fact
    return SymTensor(out, f)


def inner_product(p: Tensor, q: Tensor):
    """``sum p[i] * conj(q[i])``; conjugation is the identity on exact and real fields."""
    p._check(q)
    f = p.field
    if f.kind == "complex":
        return complex(np.vdot(q.data.reshape(-1), p.data.reshape(-1)))
    if f.kind == "real":
        return float(np.dot(p.data.reshape(-1), q.data.reshape(-1)))
    prod = p.data.reshape(-1) * q.data.reshape(-1)
    if f.is_finite:
        return int(prod.sum()) % f.p
    return sum(prod, start=f.zero)


def mode_product(data: np.ndarray, mats: Sequence[np.ndarray], field: Field) -> np.ndarray:
    """Apply ``mats[k]`` to mode ``k``: ``out[a1..ad] = sum T[i1..id] M1[a1,i1] ... Md[ad,id]``."""
    out = data
    for k, m in enumerate(mats):
        out = np.tensordot(m, out, axes=([1], [k]))
        out = np.moveaxis(out, 0, k)
        out = field.reduce(out)
    return out


@dataclass(frozen=True)
class RankOneTerm:
    """``coefficient * x1 ⊗ ... ⊗ xd``, or ``coefficient * u^{⊗d}`` when ``symmetric``."""

    coefficient: Any
    factors: tuple

    symmetric: bool = False

    def expand(self, order: int, field: Field) -> np.ndarray:
        vecs = [field.asarray(self.factors[0])] * order if self.symmetric else [field.asarray(f) for f in self.factors]
        if len(vecs) != order:
            raise ShapeMismatch(f"term has {len(vecs)} factors, tensor order is {order}")
        return field.reduce(_outer(vecs, field) * field.coerce(self.coefficient))

    def factor_list(self, order: int) -> list:
        return list(self.factors) * order if self.symmetric else list(self.factors)

    def to_json(self, field: Field) -> dict[str, Any]:
        c = field.to_json(self.coefficient)
        if self.symmetric:
            return {"coefficient": c, "vector": [field.to_json(x) for x in self.factors[0]], "symmetric": True}
        return {"coefficient": c, "factors": [[field.to_json(x) for x in f] for f in self.factors]}

    @classmethod
    def from_json(cls, obj: dict[str, Any], field: Field) -> RankOneTerm:
        coef = field.coerce(obj.get("coefficient", 1))
        if obj.get("symmetric") or "vector" in obj:
            return cls(coef, (field.asarray([field.coerce(x) for x in obj["vector"]]),), True)
        return cls(coef, tuple(field.asarray([field.coerce(x) for x in f]) for f in obj["factors"]))


def sym_term(coefficient, u, field: Field) -> RankOneTerm:
    return RankOneTerm(field.coerce(coefficient), (as_vector(u, field),), True)


def term(factors, field: Field, coefficient=1) -> RankOneTerm:
    return RankOneTerm(field.coerce(coefficient), tuple(as_vector(f, field) for f in factors))


@dataclass
class Decomposition:
    """A list of rank-one terms together with the ambient shape and field."""

    terms: list[RankOneTerm]
    field: Field
    order: int
    dim: int
    certificate: Any = None
    meta: dict = dc_field(default_factory=dict)

    @property
    def symmetric(self) -> bool:
        return all(t.symmetric for t in self.terms)

    def __len__(self):
        return len(self.terms)

    def reconstruct(self) -> Tensor:
        return reconstruct(self)

    def to_json(self) -> dict[str, Any]:
        out = {
            "order": self.order,
            "dim": self.dim,
            "field": self.field.name,
            "symmetric": self.symmetric,
            "terms": [t.to_json(self.field) for t in self.terms],
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.meta:
            out["meta"] = self.meta
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> Decomposition:
        try:
            field = Field.parse(obj["field"])
            terms = [RankOneTerm.from_json(t, field) for t in obj["terms"]]
            return cls(terms, field, int(obj["order"]), int(obj["dim"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed decomposition: {exc}") from None


def reconstruct(dec: Decomposition, shape: tuple[int, int] | None = None) -> Tensor:
    """Sum of the expanded terms.  ``shape`` is ``(order, dim)`` and is checked if given."""
    if shape is not None and tuple(shape) != (dec.order, dec.dim):
        raise ShapeMismatch(f"decomposition shape {(dec.order, dec.dim)} vs requested {tuple(shape)}")
    f = dec.field
    total = f.zeros((dec.dim,) * dec.order)
    for t in dec.terms:
        part = t.expand(dec.order, f)
        if part.shape != total.shape:
            raise ShapeMismatch(f"term of shape {part.shape} in a {total.shape} decomposition")
        total = f.reduce(total + part)
    if dec.symmetric:
        return SymTensor(total, f)
    return Tensor(total, f)
