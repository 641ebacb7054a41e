from __future__ import annotations

import pytest

from superaffine.affine import (
    C,
    D,
    ad_nilpotency_degree,
    build_affine,
    check_affine_jacobi,
    compute_root_system,
    core_structure,
    decompose_frak_L,
    mod_c,
    verify_q_embedding,
    weight_by_ad,
)
from superaffine.errors import PreconditionViolated, WindowTooSmall
from superaffine.exact import ONE, ZERO, GScalar
from superaffine.roots import A_FOUR, IM, NS, RE, Root, check_table_consistency, compare_root_data, table_root_datum

A20 = build_affine(1, 0, 8)


def e(*label):
    return {label: ONE}


def test_window_must_reach_degree_four():
    with pytest.raises(WindowTooSmall):
        build_affine(1, 0, 3)


def test_derivation_grades_and_c_is_central():
    for x in A20.table.labels_of_degree(3):
        assert A20.bracket(e(*D), e(*x)) == {x: GScalar(3)}
    for x in A20.table.labels:
        assert A20.bracket(e(*C), e(*x)) == {}


def test_cocycle_appears_only_in_total_degree_zero():
    seen = False
    for a in A20.table.labels_of_degree(2):
        for b in A20.table.labels_of_degree(-2):
            k = A20.kappa(a, b)
            got = A20.bracket(e(*a), e(*b)).get(C, ZERO)
            assert got == GScalar(2) * k
            seen = seen or bool(k)
        for b in A20.table.labels_of_degree(3):
            assert C not in A20.bracket(e(*a), e(*b))
    assert seen


def test_invariant_form_values():
    assert A20.form(e(*C), e(*D)) == ONE
    assert A20.form(e(*C), e(*C)) == ZERO
    for a in A20.table.labels_of_degree(2):
        for b in A20.table.labels_of_degree(3):
            assert A20.form(e(*a), e(*b)) == ZERO


@pytest.mark.parametrize("m, n", [(1, 0), (1, 1)])
def test_sampled_jacobi_and_invariance(m, n):
    rep = check_affine_jacobi(build_affine(m, n, 6), limit=3000, seed=1)
    assert rep.ok and rep.checked == 3000


def test_roots_of_a20_window_four():
    R, spaces = compute_root_system(build_affine(1, 0, 4))
    assert len(R.roots) == 30
    assert all(R.classification[Root((0,), k)] == IM for k in (1, 2, 3, 4))
    assert Root((2,), 2) in R.roots and Root((2,), 0) not in R.roots
    assert check_table_consistency(R).ok


def test_nonsingular_root_at_rank_one_one():
    R, _ = compute_root_system(build_affine(1, 1, 4))
    assert R.classification[Root((1, 1), 0)] == NS
    assert R.classification[Root((1, 0), 1)] == RE


@pytest.mark.parametrize("m, n", [(1, 0), (1, 1)])
def test_computed_roots_agree_with_table(m, n):
    R, _ = compute_root_system(build_affine(m, n, 8))
    assert compare_root_data(R, table_root_datum(A_FOUR, m, n, 8), 4) == []


def test_weight_by_ad_of_derivation_direction():
    R, spaces = compute_root_system(A20)
    for root, labels in spaces.items():
        for x in labels:
            assert weight_by_ad(A20, x) == (root.dot, root.k)


def test_core_structure():
    rep = core_structure(build_affine(1, 0, 8))
    assert rep.ok, (rep.multiplicity_failures[:2], rep.propagation_failures[:2], rep.imaginary_failures[:2])


def test_ad_nilpotency():
    R, spaces = compute_root_system(A20)
    (x,) = spaces[Root((2,), 2)]
    assert ad_nilpotency_degree(A20, x, max_power=3) <= 3
    for k in (0, 1):
        (y,) = spaces[Root((1,), k)]
        assert ad_nilpotency_degree(A20, y, max_power=5) <= 5
    with pytest.raises(PreconditionViolated):
        ad_nilpotency_degree(A20, C)


def test_q_embedding():
    rep = verify_q_embedding(build_affine(1, 0, 12))
    assert rep.ok and rep.independent
    assert rep.relations_checked > 0 and rep.map_pairs_checked > 0


def test_imaginary_decomposition():
    rep = decompose_frak_L(build_affine(1, 1, 8))
    assert rep.ok and rep.spans_everything


def test_mod_c_drops_only_the_center():
    assert mod_c({C: ONE, D: ONE}) == {D: ONE}
