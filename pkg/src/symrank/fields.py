"""Scalar fields: GF(p) for small primes, exact rationals, float64 and complex128.

Values are kept in their native Python/numpy form (``int`` residues,
``Fraction``, ``float``, ``complex``) and the :class:`Field` object carries
the arithmetic.  :class:`Scalar` is a thin tagged wrapper used at API
boundaries where mixing fields must be caught.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable

import numpy as np

from .errors import DivisionByZero, InfiniteField, InputError, MixedFields

MAX_PRIME = 13

_KINDS = ("finite", "rational", "real", "complex")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class Field:
    """A field tag together with element-level and array-level arithmetic."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise InputError(f"unknown field kind {self.kind!r}")
        if self.kind == "finite":
            if not _is_prime(self.p):
                raise InputError(f"GF({self.p}): modulus must be prime")
            if self.p > MAX_PRIME:
                raise InputError(f"GF({self.p}): primes above {MAX_PRIME} are not supported")
        elif self.p != 0:
            raise InputError("only finite fields take a modulus")

    # -- constructors -----------------------------------------------------

    @classmethod
    def gf(cls, p: int) -> Field:
        return cls("finite", p)

    @classmethod
    def parse(cls, name: str) -> Field:
        """Inverse of :attr:`name`: ``"gf3"``, ``"rational"``, ``"float64"``, ``"complex128"``."""
        key = name.strip().lower()
        if key.startswith("gf"):
            try:
                p = int(key[2:])
            except ValueError:
                raise InputError(f"bad field tag {name!r}") from None
            return cls.gf(p)
        aliases = {
            "rational": "rational",
            "q": "rational",
            "float64": "real",
            "real": "real",
            "complex128": "complex",
            "complex": "complex",
        }
        if key not in aliases:
            raise InputError(f"bad field tag {name!r}")
        return cls(aliases[key])

    # -- metadata ---------------------------------------------------------

    @property
    def name(self) -> str:
        return {
            "finite": f"gf{self.p}",
            "rational": "rational",
            "real": "float64",
            "complex": "complex128",
        }[self.kind]

    def __str__(self):
        return self.name

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "finite" else 0

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_exact(self) -> bool:
        return self.kind in ("finite", "rational")

    @property
    def is_float(self) -> bool:
        return self.kind in ("real", "complex")

    @property
    def size(self) -> float:
        return self.p if self.is_finite else float("inf")

    @property
    def dtype(self):
        return {"finite": np.int64, "rational": object, "real": np.float64, "complex": np.complex128}[
            self.kind
        ]

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        return tuple([0] + [pow(a, self.p - 2, self.p) for a in range(1, self.p)])

    def elements(self) -> list[Scalar]:
        """All field elements in canonical order ``0, 1, ..., p-1``."""
        if not self.is_finite:
            raise InfiniteField(f"{self.name} has infinitely many elements")
        return [Scalar(self, a) for a in range(self.p)]

    # -- element arithmetic -----------------------------------------------

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, value: Any):
        """Convert a Python number (or a serialized scalar) to the native value type."""
        if isinstance(value, Scalar):
            if value.field != self:
                raise MixedFields(f"{value.field} scalar used in {self}")
            return value.value
        if self.kind == "finite":
            if isinstance(value, Fraction):
                return self.div(int(value.numerator) % self.p, int(value.denominator) % self.p)
            if isinstance(value, str):
                return self.coerce(Fraction(value))
            if isinstance(value, (float, complex, np.floating, np.complexfloating)):
                if isinstance(value, (complex, np.complexfloating)) or value != int(value):
                    raise InputError(f"{value!r} is not an element of {self}")
                value = int(value)
            return int(value) % self.p
        if self.kind == "rational":
            if isinstance(value, (float, np.floating)):
                if not float(value).is_integer():
                    raise InputError(f"refusing inexact float {value!r} as a rational; pass 'num/den'")
                return Fraction(int(value))
            if isinstance(value, (np.integer,)):
                value = int(value)
            return Fraction(value)
        if self.kind == "real":
            if isinstance(value, (complex, np.complexfloating)):
                if value.imag != 0:
                    raise InputError(f"{value!r} is not real")
                value = value.real
            return float(Fraction(value)) if isinstance(value, str) else float(value)
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        return complex(value)

    def is_zero(self, x) -> bool:
        return x == 0

    def add(self, a, b):
        return (a + b) % self.p if self.is_finite else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_finite else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.is_finite else a * b

    def neg(self, a):
        return (-a) % self.p if self.is_finite else -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"division by zero in {self}")
        if self.is_finite:
            return self._inverses[int(a) % self.p]
        if self.kind == "rational":
            return 1 / Fraction(a)
        return 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def conj(self, a):
        return a.conjugate() if self.kind == "complex" else a

    # -- arrays -----------------------------------------------------------

    def asarray(self, values: Iterable | np.ndarray) -> np.ndarray:
        """Coerce a (nested) sequence into an array of native field values."""
        if isinstance(values, np.ndarray):
            arr = values
        else:
            arr = np.asarray(values)
            if arr.dtype.kind not in "iufc":
                arr = np.asarray(values, dtype=object)
        if self.kind == "finite":
            if arr.dtype.kind in "iu":
                return np.mod(arr.astype(np.int64), self.p)
            flat = [self.coerce(v) for v in arr.reshape(-1)]
            return np.array(flat, dtype=np.int64).reshape(arr.shape)
        if self.kind == "rational":
            flat = [self.coerce(v) for v in arr.reshape(-1)]
            out = np.empty(len(flat), dtype=object)
            out[:] = flat
            return out.reshape(arr.shape)
        if self.kind == "real":
            if arr.dtype == object:
                arr = np.array([self.coerce(v) for v in arr.reshape(-1)], dtype=np.float64).reshape(arr.shape)
            if np.iscomplexobj(arr):
                if np.any(arr.imag != 0):
                    raise InputError("complex entries in a float64 tensor")
                arr = arr.real
            return np.asarray(arr, dtype=np.float64)
        if arr.dtype == object:
            arr = np.array([self.coerce(v) for v in arr.reshape(-1)], dtype=np.complex128).reshape(arr.shape)
        return np.asarray(arr, dtype=np.complex128)

    def zeros(self, shape) -> np.ndarray:
        if self.kind == "rational":
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=self.dtype)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.mod(arr, self.p) if self.is_finite else arr

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a @ b)

    # -- serialization ----------------------------------------------------

    def to_json(self, x):
        if self.kind == "finite":
            return int(x)
        if self.kind == "rational":
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        if self.kind == "real":
            return float(x)
        x = complex(x)
        return [x.real, x.imag]

    def from_json(self, x):
        return self.coerce(x)


GF2 = Field.gf(2)
GF3 = Field.gf(3)
GF5 = Field.gf(5)
RATIONAL = Field("rational")
REAL = Field("real")
COMPLEX = Field("complex")


@dataclass(frozen=True)
class Scalar:
    """A field element that remembers its field."""

    field: Field
    value: Any

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, other) -> Any:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise MixedFields(f"cannot combine {self.field} and {other.field}")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._other(other), self.value))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def conjugate(self):
        return Scalar(self.field, self.field.conj(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (InputError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return int(self.value)

    def __repr__(self):
        return f"Scalar({self.field.name}, {self.value!r})"


def field_elements(field: Field) -> list[Scalar]:
    return field.elements()


def characteristic(field: Field) -> int:
    return field.characteristic


_OPS = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Apply ``op`` in {"add", "sub", "mul", "div"} to two scalars of the same field."""
    if a.field != b.field:
        raise MixedFields(f"cannot combine {a.field} and {b.field}")
    return _OPS[op](a, b)
