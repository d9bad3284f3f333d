from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bistellar.exact import (
    ONE,
    SQRT2,
    ZERO,
    DimensionError,
    Scalar,
    ScalarParseError,
    det,
    det_sign,
    nullspace,
    rank,
    sign,
    solve,
)

getcontext().prec = 80
ROOT2 = Decimal(2).sqrt()

rats = st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4)
scalars = st.builds(Scalar, rats, rats)
nonzero = scalars.filter(bool)


def decimal_value(x: Scalar) -> Decimal:
    r, s = x.rat_part, x.root2_part
    return Decimal(r.numerator) / Decimal(r.denominator) + Decimal(s.numerator) / Decimal(s.denominator) * ROOT2


def cofactor_det(m):
    """Laplace expansion along the first row."""
    if not m:
        return ONE
    if len(m) == 1:
        return m[0][0]
    total = ZERO
    for j, x in enumerate(m[0]):
        if x:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            term = x * cofactor_det(minor)
            total = total + term if j % 2 == 0 else total - term
    return total


def test_sign_examples():
    assert sign(Scalar(1)) == 1
    assert sign(Scalar(0, 0)) == 0
    assert sign(Scalar(-3, 2)) == -1
    assert sign(Scalar(3, -2)) == 1
    assert sign(Scalar(-1, 1)) == 1


@given(scalars)
def test_sign_matches_decimal_expansion(x):
    v = decimal_value(x)
    expected = (v > 0) - (v < 0)
    assert x.sign() == expected


@given(scalars, scalars)
def test_sign_is_multiplicative(x, y):
    assert (x * y).sign() == x.sign() * y.sign()


@given(scalars, scalars)
def test_sum_sign_matches_decimal(x, y):
    v = decimal_value(x) + decimal_value(y)
    assert (x + y).sign() == (v > 0) - (v < 0)


@given(scalars, scalars)
def test_additive_inverse(x, y):
    assert (x + y) - y == x


@given(scalars, nonzero)
def test_multiplicative_inverse(x, y):
    assert (x * y) / y == x
    assert y * y.inverse() == ONE


@given(scalars)
def test_parse_print_round_trip(x):
    assert Scalar.parse(str(x)) == x
    assert str(Scalar.parse(str(x))) == str(x)


@pytest.mark.parametrize("text,value", [
    ("3", Scalar(3)),
    ("-1/2", Scalar(Fraction(-1, 2))),
    ("1r2", SQRT2),
    ("1/2+3r2", Scalar(Fraction(1, 2), 3)),
    ("-2-1/3r2", Scalar(-2, Fraction(-1, 3))),
])
def test_parse_grammar(text, value):
    assert Scalar.parse(text) == value


@pytest.mark.parametrize("bad", ["", "r2", "1.5", "1/0", "2 r2", "1+r2", "a", "--1"])
def test_parse_rejects(bad):
    with pytest.raises(ScalarParseError):
        Scalar.parse(bad)


def test_canonical_form():
    x = Scalar(Fraction(2, 4), Fraction(-6, 8))
    assert x.rat_part == Fraction(1, 2) and x.root2_part == Fraction(-3, 4)
    assert SQRT2 * SQRT2 == Scalar(2)
    assert hash(Scalar(Fraction(1, 3))) == hash(Fraction(1, 3))


def test_det_examples():
    eye = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert det(eye) == ONE
    assert det([[1, 2, 3], [4, 5, 6], [1, 2, 3]]) == ZERO
    assert det([[0, 0, 1], [3, 0, 1], [3, 3, 1]]) == Scalar(9)
    with pytest.raises(DimensionError):
        det([[1, 2, 3], [4, 5, 6]])


small = st.builds(Scalar, st.integers(-9, 9), st.integers(-9, 9))


@settings(max_examples=60)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_matches_cofactor_expansion(m):
    assert det(m) == cofactor_det(m)
    assert det_sign(m) == cofactor_det(m).sign()


@settings(max_examples=60)
@given(st.lists(st.lists(st.fractions(-20, 20, max_denominator=7), min_size=4, max_size=4), min_size=4, max_size=4),
       st.integers(0, 3), st.integers(0, 3), st.fractions(-5, 5, max_denominator=5))
def test_det_row_operations(m, i, j, f):
    d0 = det(m)
    if i != j:
        swapped = [list(r) for r in m]
        swapped[i], swapped[j] = swapped[j], swapped[i]
        assert det(swapped) == -d0
        added = [list(r) for r in m]
        added[i] = [a + f * b for a, b in zip(added[i], added[j])]
        assert det(added) == d0


def test_linear_algebra_helpers():
    m = [[1, 2, 3], [2, 4, 6]]
    assert rank(m) == 1
    ker = nullspace(m)
    assert len(ker) == 2
    for v in ker:
        assert all(sum((Scalar(a) * b for a, b in zip(row, v)), ZERO) == ZERO for row in m)
    assert solve([[1, 1], [1, -1]], [3, 1]) == [Scalar(2), Scalar(1)]
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
