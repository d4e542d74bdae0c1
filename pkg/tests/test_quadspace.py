import random

import pytest
from hypothesis import given, settings

from conftest import ms, seeds
from turyn.f2linalg import F2Matrix, Subspace, subspace_intersect
from turyn.orthogroup import random_isometry
from turyn.quadspace import (
    ConditionError,
    NotPlusTypeError,
    QuadraticSpace,
    build_S,
    check_cond1,
    classify_w4,
    direct_sum_k,
    hyperbolic_space,
    is_maximal_ts,
    is_totally_singular,
    q_histogram,
    singular_count,
    standard_pair,
    witt_basis,
    wk_eval,
    wk_profile,
)


def test_hyperbolic_plane_values():
    sp = hyperbolic_space(1)
    assert [sp.q(x) for x in range(4)] == [0, 0, 0, 1]
    assert [sp.w(x) for x in range(4)] == [0, 2, 2, 1]
    assert sp.bform(0b01, 0b10) == 1


def test_minus_type_rejected():
    # x0^2 + x0 x1 + x1^2 has no nonzero singular vector
    with pytest.raises(NotPlusTypeError):
        QuadraticSpace(2, F2Matrix(2, (0b11, 0b10)))


def test_odd_or_degenerate_rejected():
    with pytest.raises(ValueError):
        QuadraticSpace(3, F2Matrix(3, (0b010, 0, 0)))
    with pytest.raises(ValueError):
        QuadraticSpace(2, F2Matrix(2, (0b01, 0)))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_singular_count_formula(m):
    sp = hyperbolic_space(m)
    assert singular_count(sp) == 2 ** (2 * m - 1) + 2 ** (m - 1)
    zeros, ones = q_histogram(sp)
    assert zeros + ones == 2 ** (2 * m)


def test_witt_basis_is_hyperbolic():
    sp = hyperbolic_space(3)
    pairs = witt_basis(sp, [1 << i for i in range(6)])
    assert len(pairs) == 3
    for e, f in pairs:
        assert sp.q(e) == 0 and sp.q(f) == 0 and sp.bform(e, f) == 1
    for (e1, f1), (e2, f2) in zip(pairs, pairs[1:]):
        assert not sp.bform(e1, e2) and not sp.bform(e1, f2) and not sp.bform(f1, e2)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_standard_pair_is_complementary(m):
    sp = hyperbolic_space(m)
    phi, psi = standard_pair(sp)
    assert is_maximal_ts(sp, phi) and is_maximal_ts(sp, psi)
    assert subspace_intersect(phi, psi).dim == 0
    assert sp.perp(phi.basis) == phi


def test_wk_profile():
    sp = hyperbolic_space(1)
    v = 0b01 | (0b11 << 2) | (0b00 << 4)
    assert wk_profile(sp, 3, v).values == (2, 1, 0)
    assert wk_eval(sp, 3, v) == 3


def test_direct_sum_blocks_are_orthogonal():
    sp = hyperbolic_space(2)
    ksp = direct_sum_k(sp, 3)
    for a in range(16):
        for b in range(16):
            assert ksp.bform(a, b << 4) == 0
            assert ksp.q(a | (b << 8)) == sp.q(a) ^ sp.q(b)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_build_S_is_maximal_and_cond1(m):
    sp = hyperbolic_space(m)
    phi, psi = standard_pair(sp)
    S = build_S(sp, phi, psi, 3)
    assert S.dim == 3 * m
    assert is_maximal_ts(direct_sum_k(sp, 3), S)
    assert check_cond1(sp, 3, S) is None


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_w4_counts_closed_form(m):
    sp = hyperbolic_space(m)
    phi, psi = standard_pair(sp)
    c = classify_w4(sp, phi, psi)
    assert len(c.type_I) == 3 * (2 ** m - 1)
    assert len(c.type_II) == 3 * (2 ** m - 1) * 2 ** (2 * m - 2)


def test_w4_counts_match_raw_sweep():
    sp = hyperbolic_space(3)
    phi, psi = standard_pair(sp)
    S = build_S(sp, phi, psi, 3)
    raw = sum(1 for v in S.elements() if wk_eval(sp, 3, v) == 4)
    c = classify_w4(sp, phi, psi, S)
    assert raw == len(c.type_I) + len(c.type_II)


def test_cond1_fails_when_phi_meets_psi():
    sp = hyperbolic_space(2)
    phi, _ = standard_pair(sp)
    S = build_S(sp, phi, phi, 3)
    v = check_cond1(sp, 3, S)
    assert v is not None and wk_eval(sp, 3, v) < 4


def test_build_S_rejects_non_singular():
    sp = hyperbolic_space(2)
    bad = Subspace.span(4, [0b0011, 0b1100])
    _, psi = standard_pair(sp)
    with pytest.raises(ConditionError):
        build_S(sp, bad, psi, 3)


@settings(max_examples=40)
@given(ms, seeds)
def test_cond1_for_random_complementary_pairs(m, seed):
    """Any Phi, Psi with trivial intersection gives w^3 >= 4 with the same counts."""
    from turyn.orthogroup import find_complement

    rng = random.Random(seed)
    sp = hyperbolic_space(m)
    phi0, _ = standard_pair(sp)
    phi = random_isometry(sp, rng).image(phi0)
    psi = random_isometry(sp, rng).image(phi0)
    if subspace_intersect(phi, psi).dim:
        psi = find_complement(sp, phi)
    S = build_S(sp, phi, psi, 3)
    assert is_totally_singular(direct_sum_k(sp, 3), S)
    assert check_cond1(sp, 3, S) is None
    if m <= 4:
        c = classify_w4(sp, phi, psi, S)
        assert (len(c.type_I), len(c.type_II)) == (3 * (2 ** m - 1), 3 * (2 ** m - 1) * 2 ** (2 * m - 2))


@settings(max_examples=40)
@given(ms, seeds)
def test_perp_of_mts_is_itself(m, seed):
    rng = random.Random(seed)
    sp = hyperbolic_space(m)
    phi0, _ = standard_pair(sp)
    phi = random_isometry(sp, rng).image(phi0)
    assert sp.perp(phi.basis) == phi
