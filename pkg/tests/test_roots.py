from __future__ import annotations

import pytest

from superaffine.errors import InvalidInput
from superaffine.roots import (
    A_EVEN_ODD,
    A_FOUR,
    A_ODD_ODD,
    D_TWO,
    IM,
    NS,
    RE,
    TYPES,
    BadRank,
    Root,
    check_rank,
    check_table_consistency,
    derived_even_finite,
    even_finite_part,
    normalize_type,
    simple_systems,
    table_root_datum,
)


def _small_ranks():
    for tag in TYPES:
        for m in range(3):
            for n in range(3):
                try:
                    check_rank(tag, m, n)
                except BadRank:
                    continue
                yield tag, m, n


SMALL = list(_small_ranks())


def test_type_aliases():
    assert normalize_type("A24") == A_FOUR
    assert normalize_type("A(2m, 2n)^(4)") == A_FOUR
    with pytest.raises(InvalidInput):
        normalize_type("B(1,1)^(1)")


def test_rank_constraints():
    with pytest.raises(BadRank):
        check_rank(A_ODD_ODD, 1, 1)
    with pytest.raises(BadRank):
        check_rank(A_FOUR, 0, 0)
    with pytest.raises(BadRank):
        table_root_datum(D_TWO, 1, 0, 4)


def test_a20_window_four():
    R = table_root_datum(A_FOUR, 1, 0, 4)
    assert len(R.roots) == 30
    assert Root((2,), 2) in R.roots and Root((2,), 4) not in R.roots
    assert Root((2,), -2) in R.roots and Root((-2,), 6 - 4) in R.roots
    assert all(R.classification[Root((0,), k)] == IM for k in range(-4, 5) if k)
    assert R.p_star == 4


def test_nonsingular_roots_of_a22():
    R = table_root_datum(A_FOUR, 1, 1, 6)
    for k in (-2, 0, 2):
        assert R.classification[Root((1, 1), 2 * k)] == NS
    assert R.classification[Root((1, 0), 1)] == RE


def test_even_finite_part_of_d21():
    assert even_finite_part(D_TWO, 1, 1) == {(0, 0), (1, 0), (-1, 0), (0, 2), (0, -2)}


def test_bases_of_a20():
    assert simple_systems(A_FOUR, 1, 0) == ([(1,)], [(1,)])


def test_p_star():
    assert table_root_datum(A_EVEN_ODD, 1, 1, 4).p_star == 2
    assert table_root_datum(A_FOUR, 1, 1, 4).p_star == 4


@pytest.mark.parametrize("tag, m, n", SMALL)
def test_table_consistency_all_types(tag, m, n):
    R = table_root_datum(tag, m, n, 8)
    assert check_table_consistency(R).ok, check_table_consistency(R).problems[:3]


@pytest.mark.parametrize("tag, m, n", SMALL)
def test_symmetry_periodicity_and_classes(tag, m, n):
    R = table_root_datum(tag, m, n, 8)
    dots = R.dot_roots()
    for r in R.roots:
        assert -r in R.roots
        s = Root(r.dot, r.k + R.p_star)
        if abs(s.k) <= 8 and not s.is_zero():
            assert s in R.roots
        cls = R.classification[r]
        if cls == IM:
            assert not any(r.dot)
            assert all(R.form(r, b) == 0 for b in R.roots)
        if cls == NS:
            assert R.form(r, r) == 0
            assert any(R.form(r, Root(d, 0)) != 0 for d in dots)


@pytest.mark.parametrize("tag, m, n", SMALL)
def test_even_part_matches_real_roots_without_double(tag, m, n):
    R = table_root_datum(tag, m, n, 8)
    assert derived_even_finite(R) == even_finite_part(tag, m, n)


def test_consistency_catches_a_missing_root():
    R = table_root_datum(A_FOUR, 1, 0, 8)
    victim = min(R.of_class(RE), key=lambda r: (abs(r.k), r.k, r.dot))
    assert not check_table_consistency(R.without(victim)).ok


def test_json_rows():
    rows = table_root_datum(A_FOUR, 1, 0, 2).to_json()
    assert {"dot": [0], "k": 1, "class": "im"} in rows
    assert all(set(r) == {"dot", "k", "class"} for r in rows)
