from fractions import Fraction

import pytest

from spinsum.fields import (QQ, PrimeField, field_from_json, mat_identity,
                            mat_inverse, mat_mul, mat_rank)


def test_rational_field_ops():
    assert QQ.add(QQ.of("1/2"), QQ.of("1/3")) == Fraction(5, 6)
    assert QQ.mul(QQ.of("2/3"), QQ.of("3/2")) == 1
    assert QQ.inv(QQ.of(-4)) == Fraction(-1, 4)
    assert QQ.is_zero(QQ.zero())
    assert QQ.characteristic == 0


def test_prime_field_ops():
    F3 = PrimeField(3)
    assert F3.add(F3.of(2), F3.of(2)) == F3.of(1)
    assert F3.mul(F3.of(2), F3.of(2)) == F3.of(1)
    assert F3.inv(F3.of(2)) == F3.of(2)
    assert F3.neg(F3.of(1)) == F3.of(2)
    assert F3.characteristic == 3
    with pytest.raises(ZeroDivisionError):
        F3.inv(F3.zero())


def test_mat_inverse_and_rank():
    M = [[Fraction(2), Fraction(1)], [Fraction(5), Fraction(3)]]
    Minv = mat_inverse(QQ, M)
    assert mat_mul(QQ, M, Minv) == mat_identity(QQ, 2)
    assert mat_rank(QQ, M) == 2
    singular = [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]]
    assert mat_rank(QQ, singular) == 1
    with pytest.raises(ValueError, match="singular"):
        mat_inverse(QQ, singular)


def test_field_json_roundtrip():
    for F in (QQ, PrimeField(7)):
        assert field_from_json(F.to_json()).format(F.one()) == F.format(F.one())
