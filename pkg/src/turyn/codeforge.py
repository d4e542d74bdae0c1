"""Binary codes, the glue space C^perp / C, gluing along a totally singular S, and the Golay code.

Codewords are int bitsets; position i of a length-n word is bit i, which is
also character i of its 0/1 string.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .certificate import CLOSED_FORM, DEFINITION, ENUMERATION, Certificate
from .f2linalg import (
    F2Matrix,
    DimensionError,
    Subspace,
    complement_basis,
    kernel_rows,
    mask,
    parity,
    solve_rows,
    span_iter,
    to_str,
    transpose_rows,
    vecmat,
)
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

MAX_ENUM_DIM = 24

# extended Hamming [8,4] code; 11110000 + 00001111 is the all-ones word
H8_ROWS = ("11110000", "00111100", "00001111", "01010101")


@dataclass(frozen=True)
class BinaryCode:
    n: int
    gen: Subspace

    def __post_init__(self):
        if self.gen.ambient != self.n:
            raise DimensionError("generator space has the wrong length")

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[int]) -> "BinaryCode":
        return cls(n, Subspace.span(n, rows))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> "BinaryCode":
        M = F2Matrix.from_strings(rows)
        return cls.from_rows(M.cols, M.data)

    @property
    def dim(self) -> int:
        return self.gen.dim

    @property
    def basis(self) -> tuple[int, ...]:
        return self.gen.basis

    def __contains__(self, v: int) -> bool:
        return v in self.gen

    def codewords(self):
        return span_iter(self.basis)

    def matrix(self) -> F2Matrix:
        return self.gen.matrix


def dual_code(C: BinaryCode) -> BinaryCode:
    """``{x : (x, c) = 0 for all c in C}``, as the kernel of ``x -> x G^T``."""
    Gt = transpose_rows(C.basis, C.n) if C.dim else (0,) * C.n
    return BinaryCode.from_rows(C.n, kernel_rows(Gt, C.dim))


def is_self_orthogonal(C: BinaryCode) -> bool:
    b = C.basis
    return all(not parity(b[i] & b[j]) for i in range(len(b)) for j in range(i, len(b)))


def is_doubly_even(C: BinaryCode) -> bool:
    """Doubly-even generators with even pairwise overlaps give a doubly-even code."""
    return all(g.bit_count() % 4 == 0 for g in C.basis) and is_self_orthogonal(C)


def is_self_dual(C: BinaryCode) -> bool:
    return 2 * C.dim == C.n and is_self_orthogonal(C)


def weight_enumerator(C: BinaryCode) -> dict[int, int]:
    if C.dim > MAX_ENUM_DIM:
        raise ValueError(f"refusing to enumerate 2^{C.dim} codewords (limit 2^{MAX_ENUM_DIM})")
    return dict(sorted(Counter(v.bit_count() for v in C.codewords()).items()))


def min_weight(C: BinaryCode) -> int:
    return min((w for w in weight_enumerator(C) if w), default=0)


def hamming8() -> BinaryCode:
    return BinaryCode.from_strings(H8_ROWS)


def repetition(n: int) -> BinaryCode:
    return BinaryCode.from_rows(n, [mask(n)])


# ---------------------------------------------------------------------------
# Glue space


class GlueSpaceC:
    """``R(C) = C^perp / C`` with ``q_C(x + C) = wt(x)/2 mod 2``.

    R(C) coordinates are coefficients over ``transversal``, a basis of a
    complement of C in C^perp.
    """

    def __init__(self, C: BinaryCode):
        n = C.n
        if n % 8:
            raise ConditionError(f"length {n} is not a multiple of 8")
        if not is_doubly_even(C):
            raise ConditionError("C is not doubly even")
        if mask(n) not in C:
            raise ConditionError("all-ones word is not in C, so C^perp has odd words")
        self.base = C
        self.dual = dual_code(C)
        self.transversal = tuple(complement_basis(C.basis, self.dual.basis))
        t = self.transversal
        r = len(t)
        qvals = [(x.bit_count() // 2) & 1 for x in t]
        self.space = QuadraticSpace(r, upper_from_values(qvals, lambda i, j: parity(t[i] & t[j])))
        self._solver = list(t) + list(C.basis)

    @property
    def dim(self) -> int:
        return self.space.dim

    def phi(self, x: int) -> int:
        """The class of ``x in C^perp`` in R(C) coordinates."""
        coeffs = solve_rows(self._solver, x)
        if coeffs is None:
            raise ConditionError(f"{to_str(x, self.base.n)} is not in C^perp")
        return coeffs & mask(self.dim)

    def linear_lift(self, u: int) -> int:
        return vecmat(u, self.transversal)

    def coset(self, u: int):
        base = self.linear_lift(u)
        return (base ^ c for c in self.base.codewords())

    def lift(self, u: int) -> int:
        """Minimum-weight coset member; ties go to the lexicographically first string."""
        n = self.base.n
        return min(self.coset(u), key=lambda x: (x.bit_count(), to_str(x, n)))

    def q_from_weight(self, u: int) -> int:
        return (self.linear_lift(u).bit_count() // 2) & 1

    def image(self, D: BinaryCode) -> Subspace:
        """``phi_C(D)`` for a code C <= D <= C^perp."""
        return Subspace.span(self.dim, (self.phi(x) for x in D.basis))


def glue_space_C(C: BinaryCode) -> GlueSpaceC:
    return GlueSpaceC(C)


def glue_lift_k(G: GlueSpaceC, k: int, v: int) -> int:
    n = G.base.n
    return sum(G.linear_lift(u) << (n * i) for i, u in enumerate(blocks(G.space, k, v)))


def build_code_from_S(G: GlueSpaceC, k: int, S: Subspace, verify: bool = True) -> BinaryCode:
    """``C(S)``: the preimage of S under ``C^perp^k -> R(C)^k``."""
    ksp = direct_sum_k(G.space, k)
    if S.ambient != ksp.dim or not is_maximal_ts(ksp, S):
        raise ConditionError("S is not maximal totally singular in R(C)^k")
    n = G.base.n
    gens = [c << (n * i) for i in range(k) for c in G.base.basis]
    gens += [glue_lift_k(G, k, s) for s in S.basis]
    code = BinaryCode.from_rows(n * k, gens)
    if verify:
        if code.dim != n * k // 2:
            raise AssertionError(f"dim C(S) = {code.dim}, expected {n * k // 2}")
        if not is_doubly_even(code) or dual_code(code) != code:
            raise AssertionError("C(S) is not doubly even and self-dual")
    return code


# ---------------------------------------------------------------------------
# Golay


class GolayBuild(NamedTuple):
    code: BinaryCode
    glue: GlueSpaceC
    phi: Subspace
    psi: Subspace
    S: Subspace
    certificate: Certificate


GOLAY_HISTOGRAM = {0: 1, 8: 759, 12: 2576, 16: 759, 24: 1}


def golay_setup() -> tuple[GlueSpaceC, Subspace, Subspace, Subspace]:
    G = glue_space_C(repetition(8))
    phi = G.image(hamming8())
    psi = find_complement(G.space, phi)
    return G, phi, psi, build_S(G.space, phi, psi, 3)


def build_golay() -> GolayBuild:
    G, phi, psi, S = golay_setup()
    code = build_code_from_S(G, 3, S)
    hist = weight_enumerator(code)
    cert = Certificate("golay")
    cert.fact("construction", "C = span{1_8}, Phi = image of H8, Psi = complement of Phi, k = 3")
    cert.fact("glue_dim", G.dim)
    cert.check("length", 24, code.n, DEFINITION)
    cert.check("dimension", 12, code.dim, DEFINITION)
    cert.check("doubly_even", True, all(w % 4 == 0 for w in hist), ENUMERATION)
    cert.check("self_dual", True, dual_code(code) == code, ENUMERATION)
    cert.check("cond1", None, check_cond1(G.space, 3, S), ENUMERATION)
    cert.check("weight_8_count", 759, hist.get(8, 0), CLOSED_FORM, "octads")
    cert.check("weight_histogram", GOLAY_HISTOGRAM, hist, ENUMERATION)
    cert.check("no_weight_4", 0, hist.get(4, 0), CLOSED_FORM,
               "[24,12] doubly even self-dual without weight 4 characterizes the Golay code")
    return GolayBuild(code, G, phi, psi, S, cert)


# ---------------------------------------------------------------------------
# Coset counts and the 759 identity


def coset_weight_histogram(G: GlueSpaceC, u: int) -> dict[int, int]:
    return dict(sorted(Counter(x.bit_count() for x in G.coset(u)).items()))


def coset_weight_count(G: GlueSpaceC, u: int, t: int) -> int:
    return sum(1 for x in G.coset(u) if x.bit_count() == t)


def coset_min_weight(G: GlueSpaceC, u: int) -> int:
    return min(x.bit_count() for x in G.coset(u))


def _convolve(a: dict[int, int], b: dict[int, int], cap: int) -> dict[int, int]:
    out: Counter = Counter()
    for i, x in a.items():
        for j, y in b.items():
            if i + j <= cap:
                out[i + j] += x * y
    return dict(out)


class IdentityReport(NamedTuple):
    terms_closed: tuple[int, int, int]
    terms_classified: tuple[int, int, int]
    sweep_total: int
    direct_total: int

    @property
    def ok(self) -> bool:
        total = sum(self.terms_closed)
        return (self.terms_closed == self.terms_classified
                and self.sweep_total == total and self.direct_total == total)

    def diff(self) -> list[str]:
        out = []
        names = ("zero", "type I", "type II")
        for name, a, b in zip(names, self.terms_closed, self.terms_classified):
            if a != b:
                out.append(f"{name}: closed form {a}, classified {b}")
        total = sum(self.terms_closed)
        if self.sweep_total != total:
            out.append(f"coset sweep {self.sweep_total} != {total}")
        if self.direct_total != total:
            out.append(f"direct count {self.direct_total} != {total}")
        return out


def closed_form_759(m: int = 3) -> tuple[int, int, int]:
    """(3 x 1) + (3(2^m-1)) x 1^0 x 2^2 + (3(2^m-1) 2^{2m-2}) x 1^2 x 2^1."""
    n1 = 3 * (2 ** m - 1)
    n2 = n1 * 2 ** (2 * m - 2)
    return 3 * 1, n1 * 1 ** 0 * 2 ** 2, n2 * 1 ** 2 * 2 ** 1


def verify_759_identity(build: GolayBuild | None = None) -> IdentityReport:
    if build is None:
        build = build_golay()
    G, phi, psi, S = build.glue, build.phi, build.psi, build.S
    sp = G.space
    target = 8

    def block_product(v: int) -> int:
        prod = 1
        for u in blocks(sp, 3, v):
            prod *= coset_weight_count(G, u, 2 * sp.w(u))
        return prod

    classes = classify_w4(sp, phi, psi, S)
    zero_term = sum(coset_weight_count(G, 0, target) for _ in range(3))
    classified = (zero_term,
                  sum(block_product(v) for v in classes.type_I),
                  sum(block_product(v) for v in classes.type_II))

    # every element of S, with no assumption on which cosets reach weight 8
    hist = {u: coset_weight_histogram(G, u) for u in range(1 << sp.dim)}
    sweep = 0
    for v in S.elements():
        u0, u1, u2 = blocks(sp, 3, v)
        conv = _convolve(_convolve(hist[u0], hist[u1], target), hist[u2], target)
        sweep += conv.get(target, 0)

    direct = weight_enumerator(build.code).get(target, 0)
    return IdentityReport(closed_form_759(), classified, sweep, direct)
