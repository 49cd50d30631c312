from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from catrewrite import linalg
from catrewrite.vector import Vec, as_fraction, format_vec


def test_vec_drops_zeros_and_compares_by_content():
    v = Vec({"x": 1, "y": 0})
    assert v.support() == {"x"}
    assert v == Vec({"x": Fraction(1)})
    assert hash(v) == hash(Vec({"x": 1}))
    assert not Vec({"x": 0})


def test_vec_arithmetic():
    u = Vec({"x": 1, "y": 2})
    w = Vec({"y": -2, "z": "1/2"})
    assert u + w == Vec({"x": 1, "z": Fraction(1, 2)})
    assert u - u == Vec()
    assert (u * 3)["y"] == 6
    assert -u == u * -1


@pytest.mark.parametrize("bad", [0.5, "0.5", "1e3", True, 1.0])
def test_as_fraction_rejects_inexact_literals(bad):
    with pytest.raises((TypeError, ValueError)):
        as_fraction(bad)


def test_as_fraction_accepts_exact_literals():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(-2) == -2
    assert as_fraction(Fraction(1, 3)) == Fraction(1, 3)


def test_format_vec_orders_highest_label_first():
    order = ["1", "x", "x^2", "x^3"]
    assert format_vec(Vec({"1": 1, "x": 1, "x^2": 1, "x^3": 1}), order) == "x^3+x^2+x+1"
    assert format_vec(Vec({"x": -1}), order) == "-x"
    assert format_vec(Vec({"x": Fraction(3, 2)}), order) == "3/2*x"
    assert format_vec(Vec(), order) == "0"


small = st.integers(-3, 3)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def frac(m):
    return [[Fraction(x) for x in row] for row in m]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_sympy(m):
    assert linalg.rank(frac(m), len(m[0])) == sympy.Matrix(m).rank()


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_nullspace_is_kernel_of_right_dimension(m):
    cols = len(m[0])
    ns = linalg.nullspace(frac(m), cols)
    assert len(ns) == cols - sympy.Matrix(m).rank()
    for v in ns:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in m)


@settings(max_examples=150, deadline=None)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_solve_agrees_with_consistency(m, b):
    rows, cols = len(m), len(m[0])
    rhs = [Fraction(x) for x in b[:rows]]
    sol = linalg.solve(frac(m), rhs, cols)
    aug = sympy.Matrix(m).row_join(sympy.Matrix(rhs))
    consistent = sympy.Matrix(m).rank() == aug.rank()
    assert (sol is not None) == consistent
    if sol is not None:
        assert [sum(Fraction(a) * x for a, x in zip(row, sol)) for row in m] == rhs


def test_matmul_and_identity():
    a = frac([[1, 2], [3, 4]])
    assert linalg.matmul(a, linalg.identity(2), 2, 2) == a
    assert linalg.transpose(a) == frac([[1, 3], [2, 4]])
