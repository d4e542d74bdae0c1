import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import seeds
from turyn.f2linalg import Subspace
from turyn.exactmat import bareiss_det, hnf, ldl, quad, rational_inverse, short_vectors
from turyn.latticeforge import (
    MAX_COSET_BOUND,
    ExactLattice,
    build_lattice_from_S,
    build_leech,
    closed_form_196560,
    e8,
    glue_space_L,
    orthogonal_sum,
    sqrt2_e8,
    verify_196560_identity,
)
from turyn.orthogroup import find_complement, random_block_isometry
from turyn.quadspace import ConditionError, build_S


@pytest.fixture(scope="module")
def g8():
    return glue_space_L(sqrt2_e8())


@pytest.fixture(scope="module")
def leech():
    return build_leech()


def fraction_det(M):
    """Laplace expansion over Fractions, as an independent determinant."""
    n = len(M)
    if n == 1:
        return Fraction(M[0][0])
    return sum((-1) ** j * M[0][j] * fraction_det([row[:j] + row[j + 1:] for row in M[1:]])
               for j in range(n) if M[0][j])


int_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))


# ---------------------------------------------------------------------------
# Exact matrix helpers


@settings(max_examples=80)
@given(int_matrices)
def test_bareiss_matches_laplace(M):
    assert bareiss_det(M) == fraction_det(M)


@settings(max_examples=60)
@given(int_matrices)
def test_rational_inverse(M):
    if bareiss_det(M) == 0:
        return
    inv = rational_inverse(M)
    n = len(M)
    for i in range(n):
        for j in range(n):
            assert sum(M[i][k] * inv[k][j] for k in range(n)) == (i == j)


@settings(max_examples=60)
@given(int_matrices)
def test_hnf_preserves_lattice(M):
    n = len(M)
    H = hnf(M, n)
    # same row lattice: equal determinants up to sign when full rank
    if bareiss_det(M):
        assert len(H) == n and abs(bareiss_det(H)) == abs(bareiss_det(M))
        assert all(H[i][j] == 0 for i in range(n) for j in range(i))
        for j in range(n):
            assert H[j][j] > 0 and all(0 <= H[i][j] < H[j][j] for i in range(j))


def test_ldl_identity_and_rejection():
    M = [[2, -1], [-1, 2]]
    d, mu = ldl(M)
    for x in itertools.product(range(-3, 4), repeat=2):
        lhs = quad(x, M)
        rhs = sum(d[i] * (x[i] + sum(mu[i][j] * x[j] for j in range(i + 1, 2))) ** 2 for i in range(2))
        assert lhs == rhs
    with pytest.raises(ValueError):
        ldl([[1, 2], [2, 1]])


@settings(max_examples=40)
@given(st.integers(1, 4), seeds)
def test_short_vectors_match_brute_force(n, seed):
    rng = random.Random(seed)
    B = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
    if bareiss_det(B) == 0:
        B = [[int(i == j) for j in range(n)] for i in range(n)]
    M = [[sum(B[i][k] * B[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
    bound = 6
    got = sorted(x for x, _ in short_vectors(M, bound))
    # |x_i|^2 <= bound * (M^-1)_ii bounds the search box
    inv = rational_inverse(M)
    r = [int((bound * inv[i][i]) ** 0.5) + 1 for i in range(n)]
    brute = sorted(x for x in itertools.product(*(range(-ri, ri + 1) for ri in r)) if quad(x, M) <= bound)
    assert got == brute


def test_short_vectors_with_shift():
    M = [[1, 0], [0, 1]]
    got = sorted(short_vectors(M, 1, shift=[Fraction(1, 2), Fraction(1, 2)]))
    assert len(got) == 4 and all(n == Fraction(1, 2) for _, n in got)


# ---------------------------------------------------------------------------
# Lattices


def test_e8_is_even_unimodular():
    L = e8()
    assert L.det_gram == 1 and L.is_even() and L.is_unimodular() and L.is_positive_definite()
    assert L.norm_histogram(2) == {0: 1, 2: 240}


def test_sqrt2_e8():
    L = sqrt2_e8()
    assert L.det_gram == 256 and L.is_even() and not L.is_unimodular()
    assert L.norm_histogram(4) == {0: 1, 4: 240}


def test_gram_validation():
    with pytest.raises(ValueError):
        ExactLattice(2, ((2, 1), (0, 2)))
    with pytest.raises(ValueError):
        ExactLattice(2, ((2, 0),))
    assert not ExactLattice(2, ((2, 4), (4, 2))).is_positive_definite()


def test_glue_space_of_sqrt2_e8(g8):
    assert g8.dim == 8
    assert len(g8.space.witt_pairs) == 4  # plus type


def test_glue_space_of_two_copies():
    G = glue_space_L(orthogonal_sum(sqrt2_e8(), sqrt2_e8()))
    assert G.dim == 16


def test_glue_rejects_scaled_cubic_and_odd():
    with pytest.raises(ConditionError):
        glue_space_L(ExactLattice(8, tuple(tuple(4 * (i == j) for j in range(8)) for i in range(8))))
    with pytest.raises(ConditionError):
        glue_space_L(ExactLattice(8, tuple(tuple(2 * (i == j) for j in range(8)) for i in range(8))))


def test_dual_table_matches_shifted_enumeration(g8):
    table = g8.dual_norm_table(4)
    rng = random.Random(2)
    for u in [0] + rng.sample(range(1, 256), 12):
        assert g8.coset_norm_profile(u, 4) == table[u]


def test_coset_profiles(g8):
    table = g8.dual_norm_table(4)
    sp = g8.space
    seen = {}
    for u in range(256):
        seen.setdefault(sp.w(u), table[u])
        assert table[u] == seen[sp.w(u)]
        assert min(table[u]) == sp.w(u)
    assert seen[0] == {0: 1, 4: 240}
    assert seen[1] == {1: 2, 3: 56}
    assert seen[2] == {2: 16, 4: 128}


def test_q_matches_half_norm(g8):
    sp = g8.space
    for u in range(256):
        y = g8.linear_lift(u)
        assert sp.q(u) == int(sqrt2_e8().norm([Fraction(v, 2) for v in y])) % 2


def test_coset_bound_guard(g8):
    with pytest.raises(ValueError):
        g8.coset_norm_profile(1, MAX_COSET_BOUND + 1)


def test_leech_invariants(leech):
    L = leech.lattice
    assert L.n == 24 and L.is_even() and L.det_gram == 1 and L.is_positive_definite()
    assert leech.certificate.ok
    assert str(leech.certificate).rstrip().endswith("status: PASS")


def test_196560_identity(leech):
    rep = verify_196560_identity(leech)
    assert rep.ok, rep.diff()
    assert rep.terms_classified == closed_form_196560() == (720, 11520, 184320)
    assert sum(rep.terms_closed) == 196560


def test_build_rejects_non_maximal(g8):
    with pytest.raises(ConditionError):
        build_lattice_from_S(g8, 3, Subspace.zero(24))


@settings(max_examples=5)
@given(seeds)
def test_leech_from_wreath_image_is_unimodular(seed):
    rng = random.Random(seed)
    G = glue_space_L(sqrt2_e8())
    phi = Subspace.span(G.dim, (e for e, _ in G.space.witt_pairs))
    S0 = build_S(G.space, phi, find_complement(G.space, phi), 3)
    S = random_block_isometry(G.space, 3, rng).image(S0)
    L = build_lattice_from_S(G, 3, S)
    assert L.det_gram == 1 and L.is_even()
