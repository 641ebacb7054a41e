from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from superaffine.errors import InvalidInput, UnknownLabel
from superaffine.exact import ONE, GScalar, span_equal
from superaffine.quadratic import build_q, q_labels
from superaffine.superalgebra import (
    OUT_OF_WINDOW,
    SuperAlgebraTable,
    Window,
    bracket_eval,
    centralizer,
    check_super_jacobi,
    label_str,
    parse_label,
    subalgebra_generated,
)

Q12 = build_q(Window(-12, 12))


def e(*label):
    return {label: ONE}


def test_q_bracket_examples():
    assert bracket_eval(Q12, e("t", 1), e("t", 5)) == e("t", 6)
    assert bracket_eval(Q12, e("t", 1), e("t", 3)) == {}
    assert bracket_eval(Q12, e("s", 2), e("s", 6)) == {}


def test_out_of_window_is_explicit():
    assert bracket_eval(Q12, e("t", 9), e("t", 5)) is OUT_OF_WINDOW
    assert bracket_eval(Q12, e("t", 9), {("t", 5): ONE, ("t", 1): ONE}) is OUT_OF_WINDOW


def test_unknown_label():
    with pytest.raises(UnknownLabel):
        bracket_eval(Q12, e("t", 99), e("t", 1))


def test_q_jacobi_window_12():
    assert check_super_jacobi(Q12) == []


def test_triples_with_central_element_vanish():
    triples = [(("t", 2), y, z) for y in Q12.labels for z in Q12.labels if abs(Q12.degree(y) + Q12.degree(z)) <= 8]
    assert check_super_jacobi(Q12, triples) == []


def test_corrupted_structure_constant_is_reported():
    bad = build_q(Window(-8, 8), {(("t", 1), ("t", 1)): {("t", 2): GScalar(2)}})
    failing = {t for t, _ in check_super_jacobi(bad)}
    assert (("s", 2), ("t", 1), ("t", -1)) in failing
    # the triple (t^1, t^1, s^-2) only sees [t^1, t^-1] = 0 and the central t^2, so it stays clean
    assert (("t", 1), ("t", 1), ("s", -2)) not in failing


def test_skew_symmetry_and_degree_additivity():
    for x in Q12.labels:
        for y in Q12.labels:
            a = bracket_eval(Q12, e(*x), e(*y))
            b = bracket_eval(Q12, e(*y), e(*x))
            if a is OUT_OF_WINDOW:
                assert b is OUT_OF_WINDOW
                continue
            sign = 1 if Q12.parity(x) and Q12.parity(y) else -1
            assert a == {k: sign * c for k, c in b.items()}
            for k in a:
                assert Q12.degree(k) == Q12.degree(x) + Q12.degree(y)
                assert Q12.parity(k) == (Q12.parity(x) + Q12.parity(y)) % 2
    assert Q12.validate() == []


def test_subalgebra_generated():
    assert subalgebra_generated(Q12, []).basis == []
    assert subalgebra_generated(Q12, [e("s", 2)]).basis == [e("s", 2)]
    res = subalgebra_generated(Q12, [e("t", 1), e("t", -1)])
    labels = {next(iter(v)) for v in res.basis}
    assert {("t", 1), ("t", -1), ("t", 2), ("t", -2)} <= labels


@given(st.lists(st.sampled_from(q_labels(Window(-4, 4))), max_size=3), st.sampled_from(q_labels(Window(-4, 4))))
def test_subalgebra_generated_is_monotone_and_idempotent(gens, extra):
    small = subalgebra_generated(Q12, [e(*x) for x in gens]).basis
    big = subalgebra_generated(Q12, [e(*x) for x in gens + [extra]]).basis
    assert span_equal(big, big + small)
    assert span_equal(subalgebra_generated(Q12, small).basis, small)


def test_centralizer_of_t1():
    res = centralizer(Q12, [e("t", 1)])
    found = {next(iter(v)) for v in res.basis if len(v) == 1}
    assert {("t", 2), ("t", -2), ("t", 6), ("t", -1), ("t", 3), ("t", -5)} <= found
    assert ("t", 1) not in found
    assert res.boundary_band == 1


def test_centralizer_of_abelian_algebra():
    basis = [(("a", i), 0, 0) for i in range(3)]
    alg = SuperAlgebraTable(basis, {}, Window(0, 0))
    assert len(centralizer(alg, [e("a", i) for i in range(3)]).basis) == 3


def test_json_round_trip_is_bit_exact():
    text = Q12.to_json()
    again = SuperAlgebraTable.from_json(text)
    assert again.to_json() == text
    assert bracket_eval(again, e("t", -1), e("t", -1)) == {("t", -2): -ONE}


def test_label_round_trip():
    for label in [("t", -5), ("e", 1, 2), ("c",), ("L", 3, 0)]:
        assert parse_label(label_str(label)) == label


def test_bad_basis_rejected():
    with pytest.raises(InvalidInput):
        SuperAlgebraTable([(("a",), 2, 0)], {}, Window(0, 0))
