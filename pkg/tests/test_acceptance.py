from __future__ import annotations

import time

import pytest

from superaffine.affine import build_affine, compute_root_system, verify_q_embedding
from superaffine.classical import SlSuper, build_sigma, eigenweight_decompose, verify_automorphism, verify_tables
from superaffine.clifford import (
    build_clifford_module,
    check_clifford_relations,
    check_onesided_nondegeneracy,
    classify_simple_superalgebra,
    coradical,
)
from superaffine.exact import ONE, GScalar
from superaffine.functionals import Functional
from superaffine.module_theory import (
    build_functional_f,
    build_omega_module,
    induced_character,
    induced_character_bruteforce,
    loop_module,
    parabolic_decompose,
    root_dims_and_parities,
    simple_component,
)
from superaffine.quadratic import (
    adjoint_quotient_module,
    build_q,
    check_m20_identities,
    exterior_loop_module,
    find_flat_vector,
    flat_search_radius,
    is_flat,
    trivial_q_module,
)
from superaffine.roots import A_FOUR, TYPES, BadRank, check_rank, compare_root_data, table_root_datum
from superaffine.suites import FAULTS, parse_config, report_exit_code, run_suite
from superaffine.superalgebra import Window, check_super_jacobi

EVAL1 = Functional.evaluation(1)
RANKS = [(1, 0), (1, 1), (2, 1)]
M20_GRID = dict(
    r_values=(1, -1),
    tau_values=(1, -1),
    p_values=(-2, -1, 0, 1, 2),
    l_values=(-2, -1, 0, 1, 2),
    k_values=(0, 1, 2, 3),
    skip_out_of_window=True,
)


def _m20(mod):
    vectors = [{v: ONE} for v in mod.labels if abs(mod.degree(v)) <= 4]
    return check_m20_identities(mod, vectors, **M20_GRID)


def _scaled_t1_entry(mod, v):
    return mod.with_entry(("t", 1), v, {k: GScalar(2) * c for k, c in mod.act_basis(("t", 1), v).items()})


@pytest.mark.criterion(1, "Q super-Jacobi on [-16,16]")
def test_q_super_jacobi_window_16():
    start = time.perf_counter()
    assert check_super_jacobi(build_q(Window(-16, 16))) == []
    assert time.perf_counter() - start < 60


@pytest.mark.criterion(2, "quadratic identities and mutation detection")
def test_quadratic_identities_and_mutations():
    W = Window(-64, 64)
    omega = build_omega_module(EVAL1).module
    clifford_lift = loop_module(omega, 64)
    grassmann = exterior_loop_module(W)
    for mod in (clifford_lift, grassmann):
        rep = _m20(mod)
        assert rep.ok and rep.checked > 0, rep.mismatches[:3]
    bad_omega = omega.with_entry(("t", 1), omega.labels[0], {omega.labels[1]: GScalar(2)})
    assert not _m20(loop_module(bad_omega, 64)).ok
    assert not _m20(_scaled_t1_entry(grassmann, ("g", 0, 0))).ok


@pytest.mark.criterion(3, "sigma automorphism of order four")
@pytest.mark.parametrize("m, n", RANKS)
def test_sigma_verification(m, n):
    start = time.perf_counter()
    rep = verify_automorphism(build_sigma(SlSuper(m, n)))
    assert rep.ok
    assert not rep.order_failures and not rep.bracket_failures and not rep.form_failures
    assert time.perf_counter() - start < 120


@pytest.mark.criterion(4, "eigenspace table fidelity")
@pytest.mark.parametrize("m, n, dim", [(1, 0, 15), (1, 1, 34)])
def test_table_fidelity(m, n, dim):
    s = build_sigma(SlSuper(m, n))
    dec = eigenweight_decompose(s)
    rep = verify_tables(s, dec)
    assert rep.ok and rep.rows_checked > 0, rep.failures[:3]
    assert all(len(vecs) == 1 for (j, w), vecs in dec.blocks.items() if any(w))
    assert dec.total_dim() == dim


@pytest.mark.criterion(5, "computed roots match the tabulated datum")
@pytest.mark.parametrize("m, n", RANKS)
def test_root_system_cross_check(m, n):
    computed, _ = compute_root_system(build_affine(m, n, 16))
    tabled = table_root_datum(A_FOUR, m, n, 16)
    assert compare_root_data(computed, tabled, 8) == []
    assert max(abs(r.k) for r in computed.interior(8).roots) == 8


@pytest.mark.criterion(6, "embedding of Q in the imaginary part")
def test_q_embedding():
    rep = verify_q_embedding(build_affine(1, 0, 12))
    assert rep.relations_checked > 0 and rep.relation_failures == []
    assert rep.map_pairs_checked > 0 and rep.map_failures == [] and rep.independent
    assert rep.k_failures == []


@pytest.mark.criterion(7, "Clifford pipeline")
def test_clifford_pipeline():
    assert coradical(EVAL1).value == 2
    data, _ = build_clifford_module(EVAL1)
    rep = data.representation
    assert data.module_dim == 2 and check_clifford_relations(rep) == []
    assert str(classify_simple_superalgebra(rep.generators, rep.parity)) == "M(1|1)"
    assert build_clifford_module(Functional.zero())[0].module_dim == 1
    for text, sign in (("t@-2=1", 1), ("t@-6=1,t@-2=2", 1), ("t@2=1,t@10=-1", -1)):
        res = check_onesided_nondegeneracy(Functional.parse(text), sign, 14)
        assert res.ok and res.witnesses


@pytest.mark.criterion(8, "flat-vector search against the exhaustive oracle")
@pytest.mark.parametrize(
    "d, make",
    [
        (2, exterior_loop_module),
        (1, adjoint_quotient_module),
        (2, adjoint_quotient_module),
        (1, lambda w: trivial_q_module(w, (0,))),
        (2, lambda w: trivial_q_module(w, (3,))),
        (2, lambda w: trivial_q_module(w, (0, 1))),
    ],
    ids=["grassmann", "adjoint-quotient-1", "adjoint-quotient-2", "trivial", "trivial-shifted", "trivial-two"],
)
def test_flat_vector_search(d, make):
    radius = flat_search_radius(d)
    mod = make(Window(-radius, radius))
    res = find_flat_vector(mod, d)
    assert is_flat(mod, res.vector)


@pytest.mark.criterion(9, "loop module component extraction")
def test_loop_extraction():
    L = loop_module(build_omega_module(EVAL1).module, 12)
    res = simple_component(L, EVAL1)
    assert all(a > b for a, b in zip(res.trace, res.trace[1:]))
    assert res.r == 2 and res.graded_simple and res.periodic
    assert len(set(res.dims.values())) == 1


def _ranks_up_to_two():
    for tag in TYPES:
        for m in range(3):
            for n in range(3):
                try:
                    check_rank(tag, m, n)
                except BadRank:
                    continue
                yield tag, m, n


@pytest.mark.criterion(10, "parabolic decomposition and induced characters")
def test_parabolic_and_induced_characters():
    for tag, m, n in _ranks_up_to_two():
        F = build_functional_f(tag, m, n)
        assert F.ok, (tag, m, n, [k for k, v in F.checks.items() if not v])
        assert parabolic_decompose(table_root_datum(tag, m, n, 6), F.f).zero_is_delta_line
    datum = table_root_datum(A_FOUR, 1, 0, 6)
    dec = parabolic_decompose(datum, build_functional_f(A_FOUR, 1, 0).f)
    dims, parity = root_dims_and_parities(datum)
    base = {((0,), 0): 1}
    for depth in range(4):
        assert induced_character(base, dec, dims, parity, depth) == induced_character_bruteforce(
            base, dec, dims, parity, depth
        )


@pytest.mark.criterion(11, "every injected fault is caught")
@pytest.mark.parametrize("fault", FAULTS)
def test_fault_injection(fault):
    cfg = parse_config({"window": 8, "inject_fault": fault})
    report = run_suite(cfg)
    assert report_exit_code(report) == 1
    assert report["summary"]["fail"] >= 1
