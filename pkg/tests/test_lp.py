from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from bistellar.exact import SQRT2, ZERO, Scalar
from bistellar.lp import feasible_point


def dot(a, x):
    return sum((Scalar(p) * q if not isinstance(p, Scalar) else p * q for p, q in zip(a, x)), ZERO)


def test_simple_feasible():
    x = feasible_point(2, ge=[([1, 0], 1), ([0, 1], 2)], eq=[([1, 1], 5)])
    assert x is not None
    assert x[0] >= 1 and x[1] >= 2 and x[0] + x[1] == 5


def test_simple_infeasible():
    assert feasible_point(1, ge=[([1], 1), ([-1], 0)]) is None
    assert feasible_point(2, eq=[([1, 1], 1), ([1, 1], 2)]) is None
    assert feasible_point(1, ge=[([1], -1)], nonneg=[0], eq=[([1], -2)]) is None


def test_irrational_coefficients():
    x = feasible_point(1, ge=[([SQRT2], 2)], eq=[])
    assert x is not None and SQRT2 * x[0] >= 2
    assert feasible_point(1, ge=[([1], SQRT2), ([-1], Scalar(-141, 0) / 100)]) is None


coef = st.integers(-5, 5)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
       st.lists(st.tuples(st.lists(coef, min_size=3, max_size=3), st.integers(0, 3)), min_size=1, max_size=6),
       st.lists(st.lists(coef, min_size=3, max_size=3), max_size=2))
def test_planted_solution_is_found(x0, ge_rows, eq_rows):
    # rows are built to be satisfied by x0, so the system is feasible
    ge = [(a, sum(p * q for p, q in zip(a, x0)) - slack) for a, slack in ge_rows]
    eq = [(a, sum(p * q for p, q in zip(a, x0))) for a in eq_rows]
    x = feasible_point(3, ge=ge, eq=eq)
    assert x is not None
    for a, b in ge:
        assert dot(a, x) >= b
    for a, b in eq:
        assert dot(a, x) == b


@settings(max_examples=50, deadline=None)
@given(st.lists(coef, min_size=2, max_size=2), st.integers(1, 5))
def test_contradictory_pair_is_infeasible(a, gap):
    # a.x >= gap and -a.x >= 0 cannot both hold
    if not any(a):
        return
    assert feasible_point(2, ge=[(a, gap), ([-v for v in a], 0)]) is None
