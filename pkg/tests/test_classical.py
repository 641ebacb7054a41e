from __future__ import annotations

import pytest

from superaffine.classical import (
    BadRank,
    SlSuper,
    build_sigma,
    eigenweight_decompose,
    in_component,
    special_elements,
    verify_automorphism,
    verify_tables,
)
from superaffine.exact import ONE, ZERO, GScalar, span_equal, vaxpy

RANKS = [(1, 0), (1, 1), (2, 1)]


def e(*label):
    return {label: ONE}


@pytest.mark.parametrize("m, n, dim", [(1, 0, 15), (1, 1, 34), (2, 1, 63), (2, 0, 35)])
def test_dimension(m, n, dim):
    assert SlSuper(m, n).dim == dim


def test_bad_rank():
    with pytest.raises(BadRank):
        SlSuper(0, 1)


def test_root_count_of_sl31():
    G = SlSuper(1, 0)
    roots = {G.dot_weight(x) for x in G.labels if any(G.dot_weight(x))}
    assert len(roots) == 12


def test_sigma_examples():
    s = build_sigma(SlSuper(1, 0))
    assert s.apply(e("h", 1)) == e("h", 2)
    assert s.apply(e("e", 1, 2)) == e("e", 2, 3)
    assert s.apply(e("J")) == {("J",): -ONE}


@pytest.mark.parametrize("m, n", RANKS)
def test_sigma_is_an_order_four_automorphism(m, n):
    rep = verify_automorphism(build_sigma(SlSuper(m, n)))
    assert rep.ok
    assert rep.pairs_checked == SlSuper(m, n).dim ** 2


def test_sign_corrupted_sigma_fails_bracket_check():
    rep = verify_automorphism(build_sigma(SlSuper(1, 0)).with_flipped_sign())
    assert rep.bracket_failures


def test_supertrace_form_is_preserved():
    G = SlSuper(1, 1)
    s = build_sigma(G)
    for x in G.labels:
        for y in G.labels:
            assert G.form(s.apply(e(*x)), s.apply(e(*y))) == G.form(e(*x), e(*y))


def test_psl_coordinates_ignore_the_identity():
    G = SlSuper(1, 1)
    ident = {(i, i): ONE for i in range(1, G.size + 1)}
    assert G.supertrace(ident) == ZERO
    for x in G.labels:
        X = G.matrix(x)
        shifted = dict(X)
        vaxpy(shifted, GScalar(3, 1), ident)
        assert G.coords(shifted) == G.coords(X) == {x: ONE}
        assert G.supertrace(X) == ZERO


def test_eigenweight_examples():
    G = SlSuper(1, 0)
    dec = eigenweight_decompose(build_sigma(G))
    (v,) = dec.block(1, (0,))
    assert span_equal([v], [{("e", 2, 4): ONE, ("e", 4, 2): -ONE}])
    assert len(dec.block(2, (2,))) == 1
    assert span_equal(dec.block(2, (2,)), [e("e", 1, 3)])
    assert dec.total_dim() == 15


@pytest.mark.parametrize("m, n", [(1, 0), (1, 1)])
def test_listed_table_rows(m, n):
    s = build_sigma(SlSuper(m, n))
    rep = verify_tables(s)
    assert rep.ok, rep.failures[:3]
    assert rep.rows_checked > 0


@pytest.mark.parametrize("m, n", RANKS)
def test_nonzero_weight_blocks_are_one_dimensional(m, n):
    dec = eigenweight_decompose(build_sigma(SlSuper(m, n)))
    for (j, weight), vecs in dec.blocks.items():
        if any(weight):
            assert len(vecs) == 1


def test_blocks_multiply_by_eigenvalue():
    G = SlSuper(1, 1)
    s = build_sigma(G)
    dec = eigenweight_decompose(s)
    for (j, a), us in dec.blocks.items():
        for (k, b), vs in dec.blocks.items():
            w = tuple(x + y for x, y in zip(a, b))
            for u in us:
                for v in vs:
                    br = G.bracket(u, v)
                    if br:
                        assert in_component(s, j + k, w, br)


def test_fixed_cartan_is_the_sigma_fixed_part_of_the_cartan():
    G = SlSuper(2, 1)
    s = build_sigma(G)
    for h in G.fixed_cartan():
        assert s.apply(h) == h
    fixed = [v for v in eigenweight_decompose(s).block(0, (0, 0, 0)) if all(k[0] != "e" for k in v)]
    assert span_equal(fixed, G.fixed_cartan())


@pytest.mark.parametrize("m, n", RANKS)
def test_special_elements(m, n):
    G = SlSuper(m, n)
    sp = special_elements(G)
    assert {G.parity(k) for k in sp.e} == {G.parity(k) for k in sp.f} == {1}
    assert all(G.parity(k) == 0 for k in sp.x) and all(G.parity(k) == 0 for k in sp.y)
    assert (sp.J == {}) == (m == n)
