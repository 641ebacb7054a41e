from __future__ import annotations

import pytest

from superaffine.clifford import (
    DIVERGENT,
    NotCoradicalFinite,
    anticommutator,
    build_clifford_module,
    check_clifford_relations,
    check_onesided_nondegeneracy,
    classify_simple_superalgebra,
    clifford_representation,
    coradical,
    f_lambda,
    gram_f_lambda,
    mat_identity,
    mat_scale,
    odd_labels,
    radical_is_s_invariant,
)
from superaffine.errors import HypothesesNotMet, NotSimple
from superaffine.exact import ONE, ZERO, GramForm, GScalar, radical
from superaffine.functionals import Functional
from superaffine.modules import generated_submodule

EVAL1 = Functional.evaluation(1)


def test_gram_examples():
    zero = gram_f_lambda(Functional.zero(), 9)
    assert all(zero(a, b) == ZERO for a in zero.basis for b in zero.basis)
    assert f_lambda(Functional.parse("t@2=1"), ("t", 1), ("t", 1)) == ONE
    assert f_lambda(Functional.parse("t@-2=1"), ("t", -1), ("t", -1)) == -ONE


def test_gram_is_symmetric():
    form = gram_f_lambda(Functional.parse("eval:2"), 9)
    for a in form.basis:
        for b in form.basis:
            assert form(a, b) == form(b, a)


def test_evaluation_gram_has_quotient_two_at_radius_nine():
    assert radical(gram_f_lambda(EVAL1, 9))[1] == 2


def test_coradical_examples():
    assert coradical(Functional.zero()).value == 0
    assert coradical(EVAL1).value == 2
    div = coradical(Functional.parse("t@2=1"))
    assert div.value == DIVERGENT
    dims = [d for _, d in div.dims]
    assert dims == sorted(dims) and dims[0] < dims[-1]


def test_radical_is_invariant_under_s_family():
    co = coradical(EVAL1)
    assert radical_is_s_invariant(EVAL1, co, (2, -2, 6, -6))


def test_onesided_witnesses():
    rep = check_onesided_nondegeneracy(Functional.parse("t@-2=1"), 1, 14)
    assert rep.ok
    assert any(x == {("t", 1): ONE} for x, _, _ in rep.witnesses)
    rep = check_onesided_nondegeneracy(Functional.parse("t@-6=1"), 1, 14)
    assert rep.ok
    assert any(x == {("t", 5): ONE} for x, _, _ in rep.witnesses)
    rep = check_onesided_nondegeneracy(Functional.parse("t@2=1,t@10=-1"), -1, 14)
    assert rep.ok and rep.witnesses


def test_onesided_hypotheses():
    with pytest.raises(HypothesesNotMet):
        check_onesided_nondegeneracy(Functional.parse("t@2=1"), 1, 14)
    with pytest.raises(HypothesesNotMet):
        check_onesided_nondegeneracy(Functional.zero(), 1, 14)


def test_zero_functional_gives_one_dimensional_module():
    data, mod = build_clifford_module(Functional.zero())
    assert data.module_dim == 1 and len(mod) == 1


def test_evaluation_module_is_two_dimensional_m11():
    data, mod = build_clifford_module(EVAL1)
    rep = data.representation
    assert data.module_dim == 2
    assert data.algebra_type == "M(1|1)"
    assert check_clifford_relations(rep) == []
    assert sorted(x.re for x in rep.norms) == [-1, 1]
    for gen, norm in zip(rep.generators, rep.norms):
        # u^2 = f(u, u)/2
        assert anticommutator(gen, gen) == mat_scale(norm, mat_identity(rep.basis))


def test_even_elements_act_by_lambda():
    data, mod = build_clifford_module(Functional.parse("eval:2"))
    for k in (-6, -2, 2, 6):
        for v in mod.labels:
            assert mod.act_basis(("t", k), v) == {v: GScalar(2) ** k}


def test_clifford_module_is_simple():
    data, mod = build_clifford_module(EVAL1)
    xs = odd_labels(9)
    for v in mod.labels:
        assert len(generated_submodule(mod, [{v: ONE}], xs).basis) == len(mod)


def test_divergent_functional_has_no_module():
    with pytest.raises(NotCoradicalFinite):
        build_clifford_module(Functional.parse("t@2=1"))


@pytest.mark.parametrize(
    "entries, dim, kind",
    [
        ({("a", "a"): 1}, 2, "Q(1)"),
        ({("a", "a"): 1, ("b", "b"): 1, ("c", "c"): -1}, 4, "Q(2)"),
        ({("a", "a"): 1, ("b", "b"): -1}, 2, "M(1|1)"),
    ],
)
def test_form_rank_decides_type(entries, dim, kind):
    rep = clifford_representation(GramForm(sorted({a for a, _ in entries}), entries))
    assert rep.dim == dim
    assert rep.algebra_type == kind
    assert check_clifford_relations(rep) == []
    assert str(classify_simple_superalgebra(rep.generators, rep.parity)) == kind


def _unit(i, j):
    return {(i, j): ONE}


def test_classify_full_matrix_superalgebra():
    parity = {0: 0, 1: 1}
    ops = [_unit(i, j) for i in range(2) for j in range(2)]
    assert str(classify_simple_superalgebra(ops, parity)) == "M(1|1)"


def test_classify_queer_block_algebra():
    parity = {0: 0, 1: 1}
    odd = {(0, 1): ONE, (1, 0): ONE}
    assert str(classify_simple_superalgebra([odd], parity)) == "Q(1)"


def test_classify_rejects_non_simple():
    parity = {0: 0, 1: 0}
    with pytest.raises(NotSimple):
        classify_simple_superalgebra([_unit(0, 1)], parity)


def test_classify_module_image_for_evaluation():
    data, mod = build_clifford_module(EVAL1)
    rep = data.representation
    assert str(classify_simple_superalgebra(rep.generators, rep.parity)) == "M(1|1)"
