from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superaffine.errors import InvalidInput
from superaffine.exact import (
    ONE,
    ZERO,
    EchelonBasis,
    GramForm,
    GScalar,
    I_UNIT,
    dense_kernel_basis,
    g,
    gsqrt,
    inverse,
    kernel_basis,
    radical,
    rank,
    solve,
    span_equal,
    vadd,
    vscale,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(GScalar, small, small)
nonzero = scalars.filter(bool)


def _apply(matrix, v):
    return [sum((g(x) * v.get(j, ZERO) for j, x in enumerate(row)), ZERO) for row in matrix]


def test_i_squared_is_minus_one():
    assert I_UNIT * I_UNIT == GScalar(-1)


def test_real_scalars_match_rationals():
    assert GScalar("3/4") == Fraction(3, 4)
    assert hash(GScalar(5)) == hash(5)
    assert {GScalar(2): "x"}[2] == "x"


@pytest.mark.parametrize("text", ["0", "1", "-3/2", "i", "-i", "1/2-1/3*i", "-7*i", "3/2+1/4*i"])
def test_parse_round_trip(text):
    x = GScalar.parse(text)
    assert GScalar.parse(str(x)) == x


def test_parse_rejects_garbage():
    with pytest.raises(InvalidInput):
        GScalar.parse("1.5")
    with pytest.raises(InvalidInput):
        g(1j)


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO


@given(nonzero)
def test_inverse(a):
    assert a * a.inverse() == ONE
    assert a.norm() == (a * a.conjugate()).re


@given(nonzero)
def test_gsqrt_of_square(a):
    r = gsqrt(a * a)
    assert r is not None and r * r == a * a


def test_kernel_examples():
    zero = [[0, 0, 0]] * 3
    assert dense_kernel_basis(zero) == [{0: ONE}, {1: ONE}, {2: ONE}]
    assert kernel_basis([{}], ["a", "b"]) == [{"a": ONE}, {"b": ONE}]
    assert dense_kernel_basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []
    (v,) = dense_kernel_basis([[1, 1, 0], [0, 0, 1]])
    assert v == {1: ONE, 0: -ONE}


matrices = st.integers(1, 4).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-3, 3), min_size=cols, max_size=cols), min_size=1, max_size=4)
)


@settings(max_examples=80)
@given(matrices)
def test_kernel_vectors_are_annihilated_and_rank_nullity(matrix):
    ncols = len(matrix[0])
    ker = dense_kernel_basis(matrix, ncols)
    for v in ker:
        assert all(x == ZERO for x in _apply(matrix, v))
    rows = [{j: g(x) for j, x in enumerate(r) if x} for r in matrix]
    assert rank(rows, list(range(ncols))) + len(ker) == ncols


@settings(max_examples=60)
@given(matrices, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_returns_a_solution_when_consistent(matrix, x):
    ncols = len(matrix[0])
    target = {j: g(x[j]) for j in range(ncols) if x[j]}
    rhs = _apply(matrix, target)
    rows = [{j: g(a) for j, a in enumerate(r) if a} for r in matrix]
    sol = solve(rows, rhs, list(range(ncols)))
    assert sol is not None
    assert _apply(matrix, sol) == rhs


def test_solve_detects_inconsistency():
    assert solve([{0: ONE}, {0: ONE}], [1, 2], [0]) is None


def test_inverse_matrix():
    m = [[1, 2], [3, 4]]
    inv = inverse(m)
    assert inv == [[g(-2), g(1)], [g("3/2"), g("-1/2")]]
    with pytest.raises(ZeroDivisionError):
        inverse([[1, 2], [2, 4]])


def test_radical_examples():
    assert radical(GramForm(list(range(4)), {})) == (
        [{0: ONE}, {1: ONE}, {2: ONE}, {3: ONE}],
        0,
    )
    rad, q = radical(GramForm([0, 1], {(0, 0): 1, (1, 1): -1}))
    assert rad == [] and q == 2


def test_radical_independent_of_basis_order():
    entries = {(0, 0): 1, (0, 2): 1, (2, 2): 1, (1, 3): 2}
    a, qa = radical(GramForm([0, 1, 2, 3], entries))
    b, qb = radical(GramForm([3, 2, 1, 0], entries))
    assert qa == qb == 3
    assert span_equal(a, b)


def test_gram_form_rejects_asymmetry():
    with pytest.raises(InvalidInput):
        GramForm([0, 1], {(0, 1): 1, (1, 0): 2})


@settings(max_examples=50)
@given(st.lists(st.dictionaries(st.integers(0, 4), st.integers(-2, 2).filter(bool), max_size=3), max_size=5))
def test_echelon_canonical_basis_ignores_insertion_order(vectors):
    vecs = [{k: g(c) for k, c in v.items()} for v in vectors]
    a, b = EchelonBasis(), EchelonBasis()
    for v in vecs:
        a.add(v)
    for v in reversed(vecs):
        b.add(v)
    assert a.canonical_basis() == b.canonical_basis()
    for v in vecs:
        assert a.contains(v)


def test_sparse_vectors_drop_zeros():
    assert vadd({"a": ONE}, {"a": -ONE}) == {}
    assert vscale(0, {"a": ONE}) == {}
