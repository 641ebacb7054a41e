from __future__ import annotations

import pytest

from superaffine.errors import HypothesesNotMet, PreconditionViolated, WindowExhausted, WindowTooSmall
from superaffine.exact import ONE, GScalar
from superaffine.functionals import Functional
from superaffine.module_theory import build_omega_module, loop_module
from superaffine.modules import GradedModule, validate_module
from superaffine.quadratic import (
    Q_RULES,
    adjoint_quotient_module,
    build_q,
    check_m20_identities,
    enumerate_flat_vectors,
    exterior_loop_module,
    find_flat_vector,
    flat_search_radius,
    identity_two_sides,
    is_flat,
    strip_vector,
    t2_acts_trivially,
    trivial_q_module,
    verify_annihilation_propagation,
)
from superaffine.superalgebra import OUT_OF_WINDOW, Window, bracket_eval, check_super_jacobi

FULL = dict(r_values=(1, -1), tau_values=(1, -1), p_values=(-1, 0, 1), l_values=(0, 1), k_values=(0, 1, 2),
            skip_out_of_window=True)


def e(*label):
    return {label: ONE}


def _z1_loop(window):
    return loop_module(build_omega_module(Functional.evaluation(1)).module, window)


def test_small_window_basis():
    q = build_q(Window(-2, 2))
    assert set(q.labels) == {("t", 1), ("t", -1), ("t", 2), ("t", -2), ("s", 2), ("s", -2)}
    with pytest.raises(WindowTooSmall):
        build_q(Window(-1, 1))


def test_basic_brackets():
    q = build_q(Window(-4, 4))
    assert bracket_eval(q, e("s", 2), e("t", -1)) == e("t", 1)
    assert bracket_eval(q, e("t", -1), e("t", -1)) == {("t", -2): -ONE}
    assert bracket_eval(q, e("t", 1), e("t", 1)) == e("t", 2)
    assert bracket_eval(q, e("t", 2), e("t", 1)) == {}
    assert bracket_eval(q, e("s", 2), e("s", -2)) == {}


def test_jacobi_on_window_20():
    assert check_super_jacobi(build_q(Window(-20, 20))) == []


def test_sample_modules_are_q_modules():
    W = Window(-10, 10)
    q = build_q(Window(-20, 20))
    for mod in (exterior_loop_module(W), adjoint_quotient_module(W), trivial_q_module(W, (0, 3))):
        assert validate_module(mod, q) == []
        assert t2_acts_trivially(mod)


def test_odd_generators_square_to_zero_when_t2_acts_trivially():
    mod = exterior_loop_module(Window(-12, 12))
    for v in mod.labels:
        for b in (-5, -3, -1, 1, 3, 5):
            w = mod.act_word([("t", b), ("t", b)], e(*v))
            assert w is OUT_OF_WINDOW or w == {}


def test_m20_trivial_module():
    mod = trivial_q_module(Window(-40, 40))
    rep = check_m20_identities(mod, [e("v", 0)], **FULL)
    assert rep.ok and rep.checked > 0


def test_m20_identity_one_on_clifford_lift():
    L = _z1_loop(40)
    rep = check_m20_identities(L, [{L.labels[len(L.labels) // 2]: ONE}], r_values=(1,), tau_values=(1,),
                               p_values=(0,), l_values=(1,), k_values=())
    assert rep.ok and rep.checked == 1


def test_m20_detects_corrupted_s6_action():
    L = _z1_loop(40)
    v = ("v", 0, "f", 0, 0)
    assert v in L
    bad = L.with_entry(("s", 6), v, {("v", 6, "f", 0, 0): GScalar(5)})
    clean = check_m20_identities(L, [e(*v)], l_values=(1,), k_values=(1,), skip_out_of_window=True)
    assert clean.ok
    rep = check_m20_identities(bad, [e(*v)], l_values=(1,), k_values=(1,), skip_out_of_window=True)
    assert any(m.identity == "ii" and m.params["l"] == 1 and m.params["k"] == 1 for m in rep.mismatches)


def test_m20_second_identity_with_k_zero_is_trivial():
    L = _z1_loop(20)
    for v in L.labels[:6]:
        lhs, rhs = identity_two_sides(L, e(*v), 1, 1, 0, 1, 0)
        assert lhs == rhs == L.act(("t", 1), e(*v))


def test_strip_vector_trivial_and_already_flat():
    mod = trivial_q_module(Window(-20, 20))
    assert strip_vector(mod, e("v", 0), 1, 1, 1) == (e("v", 0), e("v", 0))
    ext = exterior_loop_module(Window(-40, 40))
    top = e("g", 4, 3)
    assert strip_vector(ext, top, 1, 1, 1) == (top, top)


def test_strip_vector_rejects_unkilled_input():
    ext = exterior_loop_module(Window(-40, 40))
    with pytest.raises(PreconditionViolated):
        strip_vector(ext, e("g", 0, 0), 1, 1, 1)


def test_strip_vector_window_exhaustion():
    ext = exterior_loop_module(Window(-6, 6))
    with pytest.raises(WindowExhausted):
        strip_vector(ext, e("g", 4, 3), 1, 1, 1)


def test_annihilation_propagation():
    mod = trivial_q_module(Window(-40, 40))
    assert verify_annihilation_propagation(mod, e("v", 0), 1, 1, 1) is True
    assert verify_annihilation_propagation(mod, e("v", 0), 1, -1, 1, 4) is True
    with pytest.raises(HypothesesNotMet):
        verify_annihilation_propagation(mod, {}, 1, 1, 1)
    with pytest.raises(HypothesesNotMet):
        verify_annihilation_propagation(mod, e("v", 0), 1, 1, 1, 3)


def test_annihilation_propagation_on_grassmann_flat_vector():
    ext = exterior_loop_module(Window(-40, 40))
    for r in (1, -1):
        assert verify_annihilation_propagation(ext, e("g", 0, 3), r, 1, 1) is True
        assert verify_annihilation_propagation(ext, e("g", 0, 3), r, -r, 1, 4) is True


def test_annihilation_propagation_flags_inconsistent_table():
    # t^1 u != 0 while s^-6 and every t^{4i+-1} with i > 0 kill u; the module axiom
    # t^1 = [s^-6, t^7] would force t^1 u = 0, so this table is not a Q-module
    W = Window(-20, 20)
    table = {("t", 1): {("u",): {("w",): ONE}}}
    mod = GradedModule([(("u",), 0, 0), (("w",), 1, 1)], table, Q_RULES, W)
    assert validate_module(mod, build_q(Window(-20, 20)), xs=[("s", -6), ("t", 7), ("t", 1)]) != []
    assert verify_annihilation_propagation(mod, e("u"), 1, 1, 1) is False


def test_flat_search_on_modules_with_zero_odd_action():
    r = flat_search_radius(1)
    mod = trivial_q_module(Window(-r, r), (0, 2))
    res = find_flat_vector(mod, 1)
    assert res.vector in (e("v", 0), e("v", 2))
    assert is_flat(mod, res.vector)


def test_flat_search_on_grassmann_module_matches_oracle():
    r = flat_search_radius(2)
    mod = exterior_loop_module(Window(-r, r))
    res = find_flat_vector(mod, 2)
    assert is_flat(mod, res.vector)
    (label,) = res.vector
    assert label[2] == 3  # the psi*chi vector, the image of 1 under t^1 then t^-1
    assert enumerate_flat_vectors(mod, res.degree) == [e(*label)]
    assert mod.act_word([("t", -1), ("t", 1)], e("g", 0, 0)) == {("g", 0, 3): -ONE}


def test_flat_search_preconditions():
    with pytest.raises(PreconditionViolated):
        find_flat_vector(_z1_loop(60), 2)
    with pytest.raises(WindowExhausted):
        find_flat_vector(exterior_loop_module(Window(-20, 20)), 2)


def test_is_flat_oracle_rejects_non_flat():
    mod = exterior_loop_module(Window(-20, 20))
    assert not is_flat(mod, e("g", 0, 0))
    assert not is_flat(mod, e("g", 1, 1))
    assert is_flat(mod, e("g", 8, 3))
