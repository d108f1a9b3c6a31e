from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from symrank.errors import DivisionByZero, InfiniteField, InputError, MixedFields
from symrank.fields import COMPLEX, GF2, GF3, GF5, RATIONAL, REAL, Field, Scalar, characteristic, field_elements, scalar_arith

PRIMES = [2, 3, 5, 7, 11, 13]


@pytest.mark.parametrize("p", PRIMES)
def test_every_nonzero_residue_has_inverse(p):
    f = Field.gf(p)
    for a in range(1, p):
        assert f.mul(a, f.inv(a)) == 1


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_gf_distributive(p, a, b, c):
    f = Field.gf(p)
    a, b, c = f.coerce(a), f.coerce(b), f.coerce(c)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@given(st.fractions(), st.fractions().filter(lambda x: x != 0))
def test_rational_division_roundtrip(a, b):
    assert RATIONAL.mul(RATIONAL.div(a, b), b) == a


def test_elements_and_characteristic():
    assert [e.value for e in field_elements(GF3)] == [0, 1, 2]
    assert characteristic(GF5) == 5
    assert characteristic(RATIONAL) == 0
    with pytest.raises(InfiniteField):
        REAL.elements()


@pytest.mark.parametrize("tag", ["gf2", "gf7", "rational", "float64", "complex128"])
def test_tag_roundtrip(tag):
    assert Field.parse(tag).name == tag


@pytest.mark.parametrize("bad", ["gf4", "gf17", "gfx", "quaternion"])
def test_bad_tags(bad):
    with pytest.raises(InputError):
        Field.parse(bad)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        GF3.inv(0)
    with pytest.raises(DivisionByZero):
        scalar_arith(Scalar(RATIONAL, 1), Scalar(RATIONAL, 0), "div")


def test_mixed_fields_rejected():
    with pytest.raises(MixedFields):
        Scalar(GF2, 1) + Scalar(GF3, 1)


def test_scalar_arith():
    assert scalar_arith(Scalar(GF5, 2), Scalar(GF5, 3), "mul") == Scalar(GF5, 1)
    assert scalar_arith(Scalar(GF5, 2), Scalar(GF5, 3), "div") == Scalar(GF5, 4)
    assert scalar_arith(Scalar(RATIONAL, "1/2"), Scalar(RATIONAL, "1/3"), "add").value == Fraction(5, 6)


def test_json_forms():
    assert RATIONAL.to_json(Fraction(-3, 4)) == "-3/4"
    assert RATIONAL.from_json("-3/4") == Fraction(-3, 4)
    assert COMPLEX.to_json(1 + 2j) == [1.0, 2.0]
    assert COMPLEX.from_json([1.0, 2.0]) == 1 + 2j
    assert GF3.coerce(Fraction(1, 2)) == 2


def test_inexact_float_is_not_rational():
    with pytest.raises(InputError):
        RATIONAL.coerce(0.1)
