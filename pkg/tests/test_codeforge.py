import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import seeds
from turyn.codeforge import (
    GOLAY_HISTOGRAM,
    BinaryCode,
    build_code_from_S,
    build_golay,
    closed_form_759,
    coset_min_weight,
    coset_weight_count,
    dual_code,
    glue_space_C,
    hamming8,
    is_doubly_even,
    is_self_dual,
    is_self_orthogonal,
    min_weight,
    repetition,
    verify_759_identity,
    weight_enumerator,
)
from turyn.f2linalg import Subspace
from turyn.orthogroup import (
    all_transvections,
    closure_order,
    find_complement,
    random_block_isometry,
    random_isometry,
)
from turyn.quadspace import ConditionError, build_S, direct_sum_k, is_maximal_ts


@pytest.fixture(scope="module")
def golay():
    return build_golay()


@pytest.fixture(scope="module")
def rep8():
    return glue_space_C(repetition(8))


def test_dual_of_all_ones():
    C = repetition(8)
    D = dual_code(C)
    assert D.dim == 7
    assert all(x.bit_count() % 2 == 0 for x in D.codewords())


def test_hamming8_enumerator():
    H = hamming8()
    assert weight_enumerator(H) == {0: 1, 4: 14, 8: 1}
    assert is_self_dual(H) and is_doubly_even(H)
    assert min_weight(H) == 4


def test_zero_code():
    Z = BinaryCode.from_rows(8, [])
    assert Z.dim == 0 and dual_code(Z).dim == 8
    assert is_self_orthogonal(Z) and not is_self_dual(Z)
    with pytest.raises(ConditionError):
        glue_space_C(Z)  # all-ones is missing


def test_doubly_even_check_on_generators():
    assert not is_doubly_even(BinaryCode.from_strings(["11000000"]))
    assert not is_doubly_even(BinaryCode.from_strings(["11110000", "10001110"]))


@pytest.mark.parametrize("code,dim", [
    (lambda: repetition(8), 6),
    (hamming8, 0),
    (lambda: repetition(16), 14),
])
def test_glue_dimensions(code, dim):
    G = glue_space_C(code())
    assert G.dim == dim


def test_glue_rejects_bad_codes():
    with pytest.raises(ConditionError):
        glue_space_C(BinaryCode.from_strings(["1111111"]))
    with pytest.raises(ConditionError):
        glue_space_C(BinaryCode.from_strings(["11000000"]))


def test_glue_q_matches_weight(rep8):
    sp = rep8.space
    for u in range(1 << sp.dim):
        assert sp.q(u) == rep8.q_from_weight(u)
        for x in list(rep8.coset(u))[:8]:
            assert (x.bit_count() // 2) % 2 == sp.q(u)
            assert rep8.phi(x) == u


def test_glue_bilinear_matches_inner_product(rep8):
    sp = rep8.space
    for u in range(64):
        for v in range(64):
            a, b = rep8.linear_lift(u), rep8.linear_lift(v)
            assert sp.bform(u, v) == (a & b).bit_count() % 2


def test_glue_orthogonal_group_order(rep8):
    assert closure_order(all_transvections(rep8.space)) == 40320


def test_phi_rejects_outside_dual(rep8):
    with pytest.raises(ConditionError):
        rep8.phi(0b1)


def test_lift_is_min_weight_and_lexicographic(rep8):
    for u in range(64):
        x = rep8.lift(u)
        assert rep8.phi(x) == u
        assert x.bit_count() == coset_min_weight(rep8, u)
    assert rep8.lift(0) == 0


def test_coset_minimum_weights(rep8):
    sp = rep8.space
    for u in range(64):
        assert coset_min_weight(rep8, u) == 2 * sp.w(u)


def test_coset_counts(rep8):
    sp = rep8.space
    zero = next(u for u in range(1, 64) if sp.w(u) == 2)
    one = next(u for u in range(64) if sp.w(u) == 1)
    assert coset_weight_count(rep8, 0, 0) == 1
    assert coset_weight_count(rep8, 0, 8) == 1
    assert coset_weight_count(rep8, one, 2) == 1  # the complement has weight 6
    assert coset_weight_count(rep8, zero, 4) == 2  # x and its complement


def test_golay_histogram(golay):
    assert weight_enumerator(golay.code) == GOLAY_HISTOGRAM
    assert golay.certificate.ok
    assert str(golay.certificate).rstrip().endswith("status: PASS")


def test_golay_self_dual(golay):
    assert golay.code.n == 24 and golay.code.dim == 12
    assert is_self_dual(golay.code)
    assert min_weight(golay.code) == 8


def test_759_identity(golay):
    rep = verify_759_identity(golay)
    assert rep.ok, rep.diff()
    assert rep.terms_classified == closed_form_759() == (3, 84, 672)
    assert sum(rep.terms_closed) == 759


def test_build_rejects_non_maximal(rep8):
    with pytest.raises(ConditionError):
        build_code_from_S(rep8, 3, Subspace.zero(18))


@settings(max_examples=15)
@given(seeds, st.booleans())
def test_golay_from_any_wreath_image(seed, permute):
    """Moving S by a block isometry still yields a code with the Golay histogram."""
    rng = random.Random(seed)
    G = glue_space_C(repetition(8))
    phi = G.image(hamming8())
    S0 = build_S(G.space, phi, find_complement(G.space, phi), 3)
    S = random_block_isometry(G.space, 3, rng, permute=permute).image(S0)
    code = build_code_from_S(G, 3, S)
    assert weight_enumerator(code) == GOLAY_HISTOGRAM


@settings(max_examples=40)
@given(st.integers(1, 2), seeds)
def test_build_from_maximal_ts_is_self_dual(k, seed):
    """Any maximal totally singular S in R(C)^k glues to a doubly even self-dual code."""
    rng = random.Random(seed)
    G = glue_space_C(repetition(8))
    ksp = direct_sum_k(G.space, k)
    phi = Subspace.span(ksp.dim, [e for e, _ in ksp.witt_pairs])
    S = random_isometry(ksp, rng).image(phi)
    assert is_maximal_ts(ksp, S)
    code = build_code_from_S(G, k, S)
    assert is_self_dual(code) and is_doubly_even(code)
