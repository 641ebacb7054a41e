from __future__ import annotations

from fractions import Fraction

import pytest

from superaffine.affine import C, D, build_affine, compute_root_system
from superaffine.errors import HypothesesNotMet, InvalidInput, NotParabolic, PhiNotCompatible, PreconditionViolated
from superaffine.exact import ONE, GScalar
from superaffine.functionals import Functional
from superaffine.module_theory import (
    LaurentAlgebra,
    RootFunctional,
    associative_action_problems,
    build_functional_f,
    build_omega_module,
    build_v_k_phi,
    check_ln_support,
    core_module,
    induced_character,
    induced_character_bruteforce,
    is_simple_module,
    k_restriction_matches,
    laurent_evaluation,
    loop_module,
    omega_lambda_lift,
    omega_problems,
    parabolic_decompose,
    phi_problems,
    root_dims_and_parities,
    simple_component,
    top_space,
)
from superaffine.modules import generated_submodule, validate_module
from superaffine.quadratic import build_q, q_labels
from superaffine.roots import A_FOUR, TYPES, BadRank, Root, check_rank, table_root_datum
from superaffine.superalgebra import Window

EVAL1 = Functional.evaluation(1)


def _small_ranks():
    for tag in TYPES:
        for m in range(3):
            for n in range(3):
                try:
                    check_rank(tag, m, n)
                except BadRank:
                    continue
                yield tag, m, n


@pytest.mark.parametrize("deg", [1, 2])
def test_v_k_phi_is_simple_and_associative(deg):
    W = Window(-10, 10)
    A = LaurentAlgebra(deg, W)
    mod = build_v_k_phi(A, deg, laurent_evaluation(3, deg))
    assert associative_action_problems(mod, A) == []
    assert mod.degrees() == [t for t in W.degrees() if t % deg == 0]
    v = ("x", 0)
    assert mod.act_basis(("a", deg), v) == {("x", deg): GScalar(3)}
    assert len(generated_submodule(mod, [{v: ONE}], A.labels).basis) == len(mod)


def test_v_k_phi_rejections():
    A = LaurentAlgebra(1, Window(-8, 8))
    with pytest.raises(PhiNotCompatible):
        build_v_k_phi(A, 2, laurent_evaluation(1))
    with pytest.raises(PhiNotCompatible):
        build_v_k_phi(A, 1, Functional(rule=lambda lab: GScalar(1 + abs(lab[1]))))
    with pytest.raises(InvalidInput):
        LaurentAlgebra(0, Window(-8, 8))


def test_omega_for_zero_functional():
    omega = build_omega_module(Functional.zero(), Functional.parse("s@2=5"))
    (v,) = omega.module.labels
    assert omega.dim == 1
    assert omega.module.act_basis(("s", 2), v) == {v: GScalar(5)}
    assert omega.module.act_basis(("t", 1), v) == {}
    assert omega_problems(omega, 8) == []


def test_omega_for_evaluation_at_one():
    omega = build_omega_module(EVAL1)
    assert omega.dim == 2 and omega.algebra_type == "M(1|1)"
    assert validate_module(omega.module, build_q(Window(-10, 10))) == []
    assert is_simple_module(omega.module, q_labels(Window(-10, 10)))
    assert k_restriction_matches(omega, 10)


def test_noncommuting_phi_is_rejected():
    big = build_omega_module(Functional.parse("eval:1;2"))
    even = [v for v in big.module.labels if big.module.parity(v) == 0]
    bad = {("s", 2): {(even[0], even[1]): ONE}, ("s", -2): {(even[1], even[0]): ONE}}
    assert any("commute" in m for m in phi_problems(big.data, bad, 8))


def test_omega_needs_a_coradical_finite_functional():
    with pytest.raises(PreconditionViolated):
        build_omega_module(Functional.parse("t@2=1"))


def test_loop_module():
    L = loop_module(build_omega_module(EVAL1).module, 10)
    assert all(L.dim_of_degree(k) == 2 for k in range(-10, 11))
    near = [v for v in L.labels if abs(L.degree(v)) <= 4]
    assert validate_module(L, build_q(Window(-10, 10)), vectors=near) == []
    with pytest.raises(PreconditionViolated):
        loop_module(build_omega_module(Functional.zero()).module, 10)


def test_simple_component_of_the_evaluation_loop():
    L = loop_module(build_omega_module(EVAL1).module, 12)
    res = simple_component(L, EVAL1)
    assert res.r == 2
    assert all(a > b for a, b in zip(res.trace, res.trace[1:]))
    assert res.graded_simple and res.periodic
    assert len(set(res.dims.values())) == 1 and max(res.dims.values()) <= 2


def test_level_zero_lift():
    aff = build_affine(1, 0, 8)
    L = loop_module(build_omega_module(EVAL1).module, 8)
    lam = Functional({("L", 0, 0): GScalar("1/2"), D: GScalar("1/3")})
    res = omega_lambda_lift(aff, L, lam)
    mod = res.module.module
    assert res.problems == [] and res.lattice_matches
    for v in mod.labels:
        assert mod.act_basis(D, v) == {v: GScalar("1/3") + mod.degree(v)}
        assert mod.act_basis(C, v) == {}
        assert mod.act_basis(("L", 0, 0), v) == {v: GScalar("1/2")}


def test_lift_rejects_unbalanced_ranks():
    aff = build_affine(2, 1, 4)
    L = loop_module(build_omega_module(EVAL1).module, 4)
    with pytest.raises(PreconditionViolated):
        omega_lambda_lift(aff, L, Functional.zero())


def test_functional_f_values():
    F = build_functional_f(A_FOUR, 1, 0)
    assert F.f.values == (Fraction(2),)
    F = build_functional_f(A_FOUR, 2, 1)
    assert F.f.values == (Fraction(6), Fraction(3), Fraction(1))


@pytest.mark.parametrize("tag, m, n", list(_small_ranks()))
def test_functional_f_checks_and_parabolic_for_all_types(tag, m, n):
    F = build_functional_f(tag, m, n)
    assert F.ok, [k for k, v in F.checks.items() if not v]
    dec = parabolic_decompose(table_root_datum(tag, m, n, 6), F.f)
    assert dec.zero_is_delta_line
    assert dec.minus_part == {-r for r in dec.plus_part}


def test_parabolic_examples():
    R = table_root_datum(A_FOUR, 1, 0, 6)
    dec = parabolic_decompose(R, build_functional_f(A_FOUR, 1, 0).f)
    assert Root((1,), 3) in dec.plus_part
    assert dec.zero_part == {r for r in R.roots if not any(r.dot)}
    assert parabolic_decompose(R, RootFunctional.zero(1, 0)).zero_part == R.roots


def test_non_parabolic_sets_are_rejected():
    R = table_root_datum(A_FOUR, 1, 0, 6)
    with pytest.raises(NotParabolic):
        parabolic_decompose(R, P={Root((1,), 0)})
    with pytest.raises(InvalidInput):
        parabolic_decompose(R)


def test_top_space_of_the_core():
    aff = build_affine(1, 0, 8)
    datum, spaces = compute_root_system(aff)
    res = top_space(core_module(aff), build_functional_f(A_FOUR, 1, 0).f, datum, spaces)
    assert not res.empty
    assert res.stepping_vector is not None


def test_induced_character_small_depths():
    datum = table_root_datum(A_FOUR, 1, 0, 4)
    dec = parabolic_decompose(datum, build_functional_f(A_FOUR, 1, 0).f)
    dims, parity = root_dims_and_parities(datum)
    base = {((0,), 0): 1}
    assert induced_character(base, dec, dims, parity, 0) == base
    one = induced_character(base, dec, dims, parity, 1)
    assert sum(one.values()) == 1 + sum(dims.get(b, 0) for b in dec.minus_part)


@pytest.mark.parametrize("m, n", [(1, 0), (1, 1)])
def test_induced_character_matches_monomial_enumeration(m, n):
    datum = table_root_datum(A_FOUR, m, n, 4)
    dec = parabolic_decompose(datum, build_functional_f(A_FOUR, m, n).f)
    dims, parity = root_dims_and_parities(datum)
    base = {(tuple([0] * (m + n)), 0): 1, (tuple([1] + [0] * (m + n - 1)), 0): 2}
    for depth in range(4):
        assert induced_character(base, dec, dims, parity, depth) == induced_character_bruteforce(
            base, dec, dims, parity, depth
        )


def test_ln_support_check():
    datum = table_root_datum(A_FOUR, 1, 0, 6)
    alpha = Root((1,), 0)
    support = {((1,), 0), ((0,), 0)}
    assert check_ln_support(support, alpha, ((1,), 0), datum) is True
    assert check_ln_support({((1,), 0)}, alpha, ((1,), 0), datum) is False
    with pytest.raises(HypothesesNotMet):
        check_ln_support(support, alpha, ((0,), 0), datum)
    with pytest.raises(HypothesesNotMet):
        check_ln_support(support, alpha, ((1,), 0), datum, ln_roots={alpha})
    with pytest.raises(HypothesesNotMet):
        check_ln_support(support, Root((0,), 4), ((1,), 0), datum)
