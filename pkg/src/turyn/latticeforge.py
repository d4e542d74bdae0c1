"""Exact lattices, the glue space L*/L, gluing along a totally singular S, and the Leech lattice.

A lattice is stored by ``gram2 = 2 * Gram`` so that every lattice here has an
integer matrix.  A glue class is handled through doubled coordinates: a
vector ``v`` of L* (in L's basis) is represented by ``y = 2v``, which is an
integer vector, and its class is ``y mod 2``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

from .certificate import CLOSED_FORM, DEFINITION, ENUMERATION, Certificate
from .exactmat import bareiss_det, hnf, ldl, matmul, quad, rational_inverse, short_vectors, transpose
from .f2linalg import Subspace, canonical_basis, mask, solve_rows, vecmat
from .orthogroup import find_complement
from .quadspace import (
    ConditionError,
    QuadraticSpace,
    blocks,
    build_S,
    check_cond1,
    classify_w4,
    direct_sum_k,
    is_maximal_ts,
    upper_from_values,
)

MAX_COSET_BOUND = 8

# E8 Dynkin diagram: a path 0-1-...-6 with node 7 attached to node 4
E8_CARTAN = tuple(
    tuple(2 if i == j else (-1 if {i, j} in ({0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {4, 7}) else 0)
          for j in range(8))
    for i in range(8)
)


def _norm_key(x: Fraction):
    return int(x) if x.denominator == 1 else x


@dataclass(frozen=True)
class ExactLattice:
    n: int
    gram2: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram2)
        object.__setattr__(self, "gram2", g)
        if len(g) != self.n or any(len(row) != self.n for row in g):
            raise ValueError("gram2 must be n x n")
        if any(g[i][j] != g[j][i] for i in range(self.n) for j in range(i)):
            raise ValueError("gram2 is not symmetric")

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        return [[Fraction(x, 2) for x in row] for row in self.gram2]

    @cached_property
    def det_gram2(self) -> int:
        return bareiss_det(self.gram2)

    @property
    def det_gram(self) -> Fraction:
        return Fraction(self.det_gram2, 2 ** self.n)

    def is_integral(self) -> bool:
        return all(x % 2 == 0 for row in self.gram2 for x in row)

    def is_even(self) -> bool:
        return self.is_integral() and all(self.gram2[i][i] % 4 == 0 for i in range(self.n))

    def is_unimodular(self) -> bool:
        return self.is_integral() and self.det_gram == 1

    def is_positive_definite(self) -> bool:
        try:
            ldl(self.gram2)
        except ValueError:
            return False
        return True

    def norm(self, x: Sequence) -> Fraction:
        return Fraction(quad(x, self.gram2), 2)

    def short_vectors(self, bound, shift=None):
        """Pairs ``(x, norm)`` with norm of ``x + shift`` at most ``bound``; norm is in Gram units."""
        for x, n2 in short_vectors(self.gram2, 2 * Fraction(bound), shift):
            yield x, n2 / 2

    def norm_histogram(self, bound) -> dict:
        hist = Counter(_norm_key(nrm) for _, nrm in self.short_vectors(bound))
        return dict(sorted(hist.items()))


def orthogonal_sum(*lattices: ExactLattice) -> ExactLattice:
    n = sum(L.n for L in lattices)
    rows = []
    off = 0
    for L in lattices:
        for row in L.gram2:
            rows.append((0,) * off + tuple(row) + (0,) * (n - off - L.n))
        off += L.n
    return ExactLattice(n, tuple(rows))


def e8() -> ExactLattice:
    return ExactLattice(8, tuple(tuple(2 * x for x in row) for row in E8_CARTAN))


def sqrt2_e8() -> ExactLattice:
    """E8 with all inner products doubled: gram2 = 4 * Cartan."""
    return ExactLattice(8, tuple(tuple(4 * x for x in row) for row in E8_CARTAN))


def _bits(y: Sequence[int]) -> int:
    return sum((v & 1) << i for i, v in enumerate(y))


def _unbits(b: int, n: int) -> tuple[int, ...]:
    return tuple((b >> i) & 1 for i in range(n))


class GlueSpaceL:
    """``R(L) = L*/L`` for an even lattice with ``2L* <= L`` and integral norms on L*.

    ``dual_rows`` holds ``4 gram2^{-1} = 2 Gram^{-1}``: row i is twice the
    i-th dual basis vector in L's coordinates.  Its rows mod 2 span the image
    of L*/L in F2^n, and a 0/1 vector y in that span lifts to ``y/2``.
    """

    def __init__(self, L: ExactLattice):
        if not L.is_even():
            raise ConditionError("L is not even")
        inv = rational_inverse(L.gram2)
        A = [[4 * x for x in row] for row in inv]
        if any(x.denominator != 1 for row in A for x in row):
            raise ConditionError("2L* is not contained in L")
        self.base = L
        self.dual_rows = tuple(tuple(int(x) for x in row) for row in A)
        n = L.n
        self.transversal = canonical_basis((_bits(r) for r in self.dual_rows), n)
        t = [_unbits(b, n) for b in self.transversal]
        # q_L(y/2) = y gram2 y^T / 8 mod 2 and <y/2, z/2> = y gram2 z^T / 4 mod 2
        qvals = [self._q_int(y) for y in t]
        self.space = QuadraticSpace(len(t), upper_from_values(qvals, lambda i, j: self._pair_int(t[i], t[j])))

    def _q_int(self, y: Sequence[int]) -> int:
        val = quad(y, self.base.gram2)
        if val % 8:
            raise ConditionError("L* has a vector of non-integral norm")
        return (val // 8) % 2

    def _pair_int(self, y: Sequence[int], z: Sequence[int]) -> int:
        val = quad(y, self.base.gram2, z)
        if val % 4:
            raise ConditionError("L* has a non-integral inner product with 2L*")
        return (val // 4) % 2

    @property
    def dim(self) -> int:
        return self.space.dim

    def phi(self, y: Sequence[int]) -> int:
        """Class of the L* vector ``y/2`` (y in doubled coordinates)."""
        coeffs = solve_rows(self.transversal, _bits(y))
        if coeffs is None:
            raise ConditionError("vector is not in L*")
        return coeffs

    def linear_lift(self, u: int) -> tuple[int, ...]:
        """Doubled coordinates (entries 0/1) of a representative of class u."""
        return _unbits(vecmat(u, self.transversal), self.base.n)

    def image(self, vectors: Sequence[Sequence[int]]) -> Subspace:
        return Subspace.span(self.dim, (self.phi(y) for y in vectors))

    def coset_norm_profile(self, u: int, bound) -> dict:
        """Norm histogram (norms <= bound) of the coset of class u, by shifted enumeration."""
        if bound > MAX_COSET_BOUND:
            raise ValueError(f"bound {bound} exceeds {MAX_COSET_BOUND}")
        shift = [Fraction(v, 2) for v in self.linear_lift(u)]
        hist = Counter(_norm_key(nrm) for _, nrm in self.base.short_vectors(bound, shift))
        return dict(sorted(hist.items()))

    def dual_norm_table(self, bound) -> dict[int, dict]:
        """Norm histograms of all classes at once, from one enumeration of L*."""
        if bound > MAX_COSET_BOUND:
            raise ValueError(f"bound {bound} exceeds {MAX_COSET_BOUND}")
        # Gram matrix of L* in its dual basis is Gram^{-1} = dual_rows / 2
        dual_gram2 = [[Fraction(x, 1) for x in row] for row in self.dual_rows]
        table: dict[int, Counter] = defaultdict(Counter)
        for x, n2 in short_vectors(dual_gram2, 2 * Fraction(bound)):
            y = vecmat_int(x, self.dual_rows)
            table[self.phi(y)][_norm_key(n2 / 2)] += 1
        return {u: dict(sorted(table[u].items())) for u in range(1 << self.dim)}


def vecmat_int(x: Sequence[int], rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    n = len(rows[0])
    out = [0] * n
    for xi, row in zip(x, rows):
        if xi:
            for j in range(n):
                out[j] += xi * row[j]
    return tuple(out)


def glue_space_L(L: ExactLattice) -> GlueSpaceL:
    return GlueSpaceL(L)


def coset_norm_profile(G: GlueSpaceL, u: int, bound) -> dict:
    return G.coset_norm_profile(u, bound)


def glue_lift_k(G: GlueSpaceL, k: int, v: int) -> tuple[int, ...]:
    out: list[int] = []
    for u in blocks(G.space, k, v):
        out.extend(G.linear_lift(u))
    return tuple(out)


def build_lattice_from_S(G: GlueSpaceL, k: int, S: Subspace, verify: bool = True) -> ExactLattice:
    """``L(S)``: the preimage of S under ``(L*)^k -> R(L)^k``, as an HNF basis over L^k."""
    ksp = direct_sum_k(G.space, k)
    if S.ambient != ksp.dim or not is_maximal_ts(ksp, S):
        raise ConditionError("S is not maximal totally singular in R(L)^k")
    n = G.base.n
    N = n * k
    # doubled coordinates over L^k: 2 e_i generate L^k, lifts generate the glue
    gens = [tuple(2 if j == i else 0 for j in range(N)) for i in range(N)]
    gens += [glue_lift_k(G, k, s) for s in S.basis]
    B = hnf(gens, N)
    big = orthogonal_sum(*([G.base] * k))
    prod = matmul(matmul(B, big.gram2), transpose(B))
    if any(x % 4 for row in prod for x in row):
        raise AssertionError("glued lattice has non-integral doubled Gram entries")
    lat = ExactLattice(N, tuple(tuple(x // 4 for x in row) for row in prod))
    if verify:
        if not lat.is_even():
            raise AssertionError("L(S) is not even")
        if not lat.is_unimodular():
            raise AssertionError(f"L(S) has det(Gram) = {lat.det_gram}")
    return lat


# ---------------------------------------------------------------------------
# Leech


class LeechBuild(NamedTuple):
    lattice: ExactLattice
    glue: GlueSpaceL
    phi: Subspace
    psi: Subspace
    S: Subspace
    table: dict[int, dict]
    certificate: Certificate


def leech_setup() -> tuple[GlueSpaceL, Subspace, Subspace, Subspace]:
    G = glue_space_L(sqrt2_e8())
    phi = Subspace.span(G.dim, (e for e, _ in G.space.witt_pairs))
    psi = find_complement(G.space, phi)
    return G, phi, psi, build_S(G.space, phi, psi, 3)


def sweep_count(G: GlueSpaceL, S: Subspace, table: dict[int, dict], target) -> int:
    """Vectors of the given norm in L(S), summed over the cosets of L^3 it contains."""
    sp = G.space
    total = 0
    for v in S.elements():
        conv = {0: 1}
        for u in blocks(sp, 3, v):
            nxt: Counter = Counter()
            for a, x in conv.items():
                for b, y in table[u].items():
                    if a + b <= target:
                        nxt[a + b] += x * y
            conv = nxt
        total += conv.get(target, 0)
    return total


def build_leech(full_enum: bool = False, norm6: bool = False) -> LeechBuild:
    G, phi, psi, S = leech_setup()
    lat = build_lattice_from_S(G, 3, S)
    bound = 6 if norm6 else 4
    table = G.dual_norm_table(bound)
    cert = Certificate("leech")
    cert.fact("construction", "L = sqrt2 E8, Phi from a Witt basis of R(L), Psi = complement of Phi, k = 3")
    cert.fact("glue_dim", G.dim)
    cert.check("rank", 24, lat.n, DEFINITION)
    cert.check("even", True, lat.is_even(), ENUMERATION)
    cert.check("det_gram", 1, lat.det_gram, ENUMERATION)
    cert.check("positive_definite", True, lat.is_positive_definite(), ENUMERATION)
    cert.check("cond1", None, check_cond1(G.space, 3, S), ENUMERATION)
    cert.check("norm_2_count", 0, sweep_count(G, S, table, 2), CLOSED_FORM,
               "even unimodular rank 24 without norm 2 characterizes the Leech lattice")
    cert.check("norm_4_count", 196560, sweep_count(G, S, table, 4), CLOSED_FORM, "coset-factored count")
    if norm6:
        cert.check("norm_6_count", 16773120, sweep_count(G, S, table, 6), ENUMERATION, "coset-factored count")
    if full_enum:
        hist = lat.norm_histogram(4)
        cert.check("norm_4_count_direct", 196560, hist.get(4, 0), CLOSED_FORM, "direct rank-24 enumeration")
        cert.check("norm_2_count_direct", 0, hist.get(2, 0), CLOSED_FORM, "direct rank-24 enumeration")
    return LeechBuild(lat, G, phi, psi, S, table, cert)


class LatticeIdentityReport(NamedTuple):
    terms_closed: tuple[int, int, int]
    terms_classified: tuple[int, int, int]
    sweep_total: int
    direct_total: int | None

    @property
    def ok(self) -> bool:
        total = sum(self.terms_closed)
        return (self.terms_closed == self.terms_classified and self.sweep_total == total
                and self.direct_total in (None, total))

    def diff(self) -> list[str]:
        out = []
        for name, a, b in zip(("zero", "type I", "type II"), self.terms_closed, self.terms_classified):
            if a != b:
                out.append(f"{name}: closed form {a}, classified {b}")
        total = sum(self.terms_closed)
        if self.sweep_total != total:
            out.append(f"coset sweep {self.sweep_total} != {total}")
        if self.direct_total not in (None, total):
            out.append(f"direct count {self.direct_total} != {total}")
        return out


def closed_form_196560(m: int = 4) -> tuple[int, int, int]:
    """(3 x 240) + (3(2^m-1)) x 2^0 x 16^2 + (3(2^m-1) 2^{2m-2}) x 2^2 x 16^1."""
    n1 = 3 * (2 ** m - 1)
    n2 = n1 * 2 ** (2 * m - 2)
    return 3 * 240, n1 * 2 ** 0 * 16 ** 2, n2 * 2 ** 2 * 16 ** 1


def verify_196560_identity(build: LeechBuild | None = None, full_enum: bool = False) -> LatticeIdentityReport:
    if build is None:
        build = build_leech()
    G, phi, psi, S, table = build.glue, build.phi, build.psi, build.S, build.table
    sp = G.space

    def block_product(v: int) -> int:
        prod = 1
        for u in blocks(sp, 3, v):
            prod *= table[u].get(sp.w(u), 0)
        return prod

    classes = classify_w4(sp, phi, psi, S)
    classified = (3 * table[0].get(4, 0),
                  sum(block_product(v) for v in classes.type_I),
                  sum(block_product(v) for v in classes.type_II))
    direct = build.lattice.norm_histogram(4).get(4, 0) if full_enum else None
    return LatticeIdentityReport(closed_form_196560(), classified, sweep_count(G, S, table, 4), direct)
