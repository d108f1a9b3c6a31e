"""Named example tensors, including a seeded random generator."""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .fields import COMPLEX, GF2, Field
from .tensor import SymTensor, sym_index_orbits


def z2_counterexample(field: Field = GF2) -> SymTensor:
    """The 2x2 matrix ``[[0, 1], [1, 0]]``: rank 2, but symmetric rank 3 over GF(2)."""
    return SymTensor(field.asarray([[0, 1], [1, 0]]), field)


def w_tensor(field: Field = COMPLEX, order: int = 3, dim: int = 2) -> SymTensor:
    """Sum of the ``order`` placements of ``e2`` among copies of ``e1``."""
    if order < 2 or dim < 2:
        raise InputError("w-tensor needs order >= 2 and dim >= 2")
    data = field.zeros((dim,) * order)
    for j in range(order):
        idx = [0] * order
        idx[j] = 1
        data[tuple(idx)] = field.one
    return SymTensor(data, field)


def pencil_example(a=0, field: Field = COMPLEX) -> SymTensor:
    """Slices ``F = [[a, 1], [1, 0]]`` and ``G = [[1, 0], [0, 0]]``, i.e. ``a e1^3`` plus the W tensor."""
    data = w_tensor(field).data.copy()
    data[0, 0, 0] = field.coerce(a)
    return SymTensor(data, field)


def random_sym(field: Field, order: int, dim: int, seed: int, scale: int = 5) -> SymTensor:
    """Uniform symmetric coordinates over GF(p), small integers over the rationals,
    Gaussian entries over the floats."""
    rng = np.random.default_rng(seed)
    k = len(sym_index_orbits(dim, order))
    if field.is_finite:
        coords = rng.integers(0, field.p, size=k).tolist()
    elif field.kind == "rational":
        coords = rng.integers(-scale, scale + 1, size=k).tolist()
    elif field.kind == "real":
        coords = rng.standard_normal(k).tolist()
    else:
        coords = (rng.standard_normal(k) + 1j * rng.standard_normal(k)).tolist()
    return SymTensor.from_sym_coords(coords, dim, order, field)


NAMED = ("z2-counterexample", "w-tensor", "pencil-example", "random-sym")


def generate(name: str, field: Field | None = None, order: int | None = None, dim: int | None = None,
             seed: int | None = None, a=0) -> SymTensor:
    """Look up a named instance; ``random-sym`` requires an explicit seed."""
    if name == "z2-counterexample":
        return z2_counterexample(field or GF2)
    if name == "w-tensor":
        return w_tensor(field or COMPLEX, order or 3, dim or 2)
    if name == "pencil-example":
        return pencil_example(a, field or COMPLEX)
    if name == "random-sym":
        if seed is None:
            raise InputError("random-sym needs --seed")
        if field is None or order is None or dim is None:
            raise InputError("random-sym needs --field, --d and --n")
        return random_sym(field, order, dim, seed)
    raise InputError(f"unknown instance {name!r}; choose from {', '.join(NAMED)}")
