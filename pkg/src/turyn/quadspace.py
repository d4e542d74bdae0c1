"""Non-singular quadratic spaces of plus type over F2 and the weight map.

A form is stored as an upper-triangular matrix ``U`` with ``q(x) = x U x^T``;
the polar form is ``B = U + U^T``.  The k-fold orthogonal sum puts block
``i`` on coordinates ``[d*i, d*(i+1))`` where ``d`` is the block dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

from .f2linalg import (
    F2Matrix,
    DimensionError,
    Subspace,
    VectorLike,
    as_bits,
    bits_of,
    canonical_basis,
    inverse_rows,
    kernel_rows,
    mask,
    parity,
    rank_rows,
    span_iter,
    subspace_intersect,
    transpose_rows,
    vecmat,
)

# spaces up to this dimension get a lookup table for q
_TABLE_DIM = 16


class NotPlusTypeError(ValueError):
    """The form is singular or of minus type."""


class ConditionError(ValueError):
    """A subspace fails a structural precondition (singularity, maximality, ...)."""


def upper_from_values(qvals: Sequence[int], pairing) -> F2Matrix:
    """Upper-triangular matrix from q on basis vectors and the pairing ``pairing(i, j)``."""
    n = len(qvals)
    rows = []
    for i in range(n):
        r = (qvals[i] & 1) << i
        for j in range(i + 1, n):
            if pairing(i, j) & 1:
                r |= 1 << j
        rows.append(r)
    return F2Matrix(n, tuple(rows))


@dataclass(frozen=True, eq=True)
class QuadraticSpace:
    dim: int
    q_upper: F2Matrix

    def __post_init__(self):
        U = self.q_upper
        if U.rows != self.dim or U.cols != self.dim:
            raise DimensionError("q_upper must be dim x dim")
        for i, r in enumerate(U.data):
            if r & mask(i):
                raise ValueError("q_upper must be upper triangular")
        if self.dim % 2:
            raise NotPlusTypeError("odd dimension")
        if rank_rows(self.B) != self.dim:
            raise NotPlusTypeError("polar form is singular")
        # greedy Witt decomposition; raises on an anisotropic remainder
        self.witt_pairs

    @cached_property
    def m(self) -> int:
        return self.dim // 2

    @cached_property
    def B(self) -> tuple[int, ...]:
        """Rows of the polar (symplectic) form."""
        U = self.q_upper.data
        n = self.dim
        rows = [0] * n
        for i in range(n):
            off = U[i] & ~(1 << i)
            rows[i] ^= off
            for j in bits_of(off):
                rows[j] |= 1 << i
        return tuple(rows)

    @cached_property
    def _qtable(self) -> list[int] | None:
        if self.dim > _TABLE_DIM:
            return None
        table = [0] * (1 << self.dim)
        for x in range(1, len(table)):
            low = x & -x
            i = low.bit_length() - 1
            rest = x ^ low
            # q(rest + e_i) = q(rest) + q(e_i) + <rest, e_i>
            table[x] = table[rest] ^ ((self.q_upper.data[i] >> i) & 1) ^ parity(self.B[i] & rest)
        return table

    def q(self, x: int) -> int:
        t = self._qtable
        if t is not None:
            return t[x]
        U = self.q_upper.data
        acc = 0
        for i in bits_of(x):
            acc ^= U[i]
        return parity(acc & x)

    def bform(self, x: int, y: int) -> int:
        return parity(vecmat(x, self.B) & y)

    def w(self, x: int) -> int:
        if not x:
            return 0
        return 1 if self.q(x) else 2

    @cached_property
    def witt_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple(witt_basis(self, [1 << i for i in range(self.dim)]))

    def perp(self, vectors: Sequence[int]) -> Subspace:
        """``{x : <x, v> = 0 for all v in vectors}``."""
        images = [vecmat(v, self.B) for v in vectors]
        if not images:
            return Subspace.full(self.dim)
        rows = transpose_rows(images, self.dim)
        return Subspace.span(self.dim, kernel_rows(rows, len(images)))


def witt_basis(sp: QuadraticSpace, vectors: Sequence[int]) -> list[tuple[int, int]]:
    """Hyperbolic pairs ``(e, f)`` spanning the (non-degenerate) span of ``vectors``.

    Each ``e`` is the first nonzero singular vector of the current remainder in
    coefficient order; ``f`` is the first basis vector pairing to 1 with ``e``,
    corrected to be singular.
    """
    W = list(canonical_basis(vectors, sp.dim))
    pairs = []
    while W:
        if len(W) % 2:
            raise NotPlusTypeError("span is degenerate (odd dimension)")
        e = next((v for v in span_iter(W) if v and not sp.q(v)), None)
        if e is None:
            raise NotPlusTypeError("anisotropic remainder: form is of minus type")
        f = next((v for v in W if sp.bform(e, v)), None)
        if f is None:
            raise NotPlusTypeError("span is degenerate")
        if sp.q(f):
            f ^= e
        pairs.append((e, f))
        rest = []
        for x in W:
            y = x
            if sp.bform(x, f):
                y ^= e
            if sp.bform(x, e):
                y ^= f
            rest.append(y)
        W = list(canonical_basis(rest, sp.dim))
    return pairs


# ---------------------------------------------------------------------------
# Construction


def hyperbolic_space(m: int) -> QuadraticSpace:
    """``q(x) = sum_i x_{2i} x_{2i+1}``: m hyperbolic planes."""
    if m < 1:
        raise ValueError("m must be at least 1")
    rows = [0] * (2 * m)
    for i in range(m):
        rows[2 * i] = 1 << (2 * i + 1)
    return QuadraticSpace(2 * m, F2Matrix(2 * m, tuple(rows)))


def standard_pair(sp: QuadraticSpace) -> tuple[Subspace, Subspace]:
    """``(span{e_0, e_2, ...}, span{e_1, e_3, ...})`` for a hyperbolic space."""
    n = sp.dim
    phi = Subspace.span(n, [1 << (2 * i) for i in range(n // 2)])
    psi = Subspace.span(n, [1 << (2 * i + 1) for i in range(n // 2)])
    for U in (phi, psi):
        if not is_maximal_ts(sp, U):
            raise ConditionError("space is not in hyperbolic coordinates")
    return phi, psi


def direct_sum_k(sp: QuadraticSpace, k: int) -> QuadraticSpace:
    if k < 1:
        raise ValueError("k must be at least 1")
    if k == 1:
        return sp
    d = sp.dim
    rows = [r << (d * b) for b in range(k) for r in sp.q_upper.data]
    return QuadraticSpace(d * k, F2Matrix(d * k, tuple(rows)))


# ---------------------------------------------------------------------------
# Evaluation


def q_eval(sp: QuadraticSpace, v: VectorLike) -> int:
    return sp.q(as_bits(v, sp.dim))


def bform(sp: QuadraticSpace, u: VectorLike, v: VectorLike) -> int:
    return sp.bform(as_bits(u, sp.dim), as_bits(v, sp.dim))


def w_eval(sp: QuadraticSpace, a: VectorLike) -> int:
    return sp.w(as_bits(a, sp.dim))


def blocks(sp: QuadraticSpace, k: int, v: int) -> list[int]:
    d = sp.dim
    low = mask(d)
    return [(v >> (d * i)) & low for i in range(k)]


def join_blocks(sp: QuadraticSpace, parts: Sequence[int]) -> int:
    d = sp.dim
    return sum(p << (d * i) for i, p in enumerate(parts))


class WeightProfile(NamedTuple):
    values: tuple[int, ...]
    total: int


def wk_profile(sp: QuadraticSpace, k: int, v: VectorLike) -> WeightProfile:
    v = as_bits(v, sp.dim * k)
    vals = tuple(sp.w(a) for a in blocks(sp, k, v))
    return WeightProfile(vals, sum(vals))


def wk_eval(sp: QuadraticSpace, k: int, v: VectorLike) -> int:
    v = as_bits(v, sp.dim * k)
    d = sp.dim
    low = mask(d)
    total = 0
    for _ in range(k):
        a = v & low
        if a:
            total += 1 if sp.q(a) else 2
        v >>= d
    return total


# ---------------------------------------------------------------------------
# Subspaces


def is_totally_singular(sp: QuadraticSpace, U: Subspace) -> bool:
    if U.ambient != sp.dim:
        raise DimensionError("subspace lives in a different space")
    b = U.basis
    if any(sp.q(x) for x in b):
        return False
    return all(not sp.bform(b[i], b[j]) for i in range(len(b)) for j in range(i + 1, len(b)))


def is_maximal_ts(sp: QuadraticSpace, U: Subspace) -> bool:
    return U.dim == sp.dim // 2 and is_totally_singular(sp, U)


def _require_mts(sp: QuadraticSpace, U: Subspace, name: str):
    if not is_maximal_ts(sp, U):
        raise ConditionError(f"{name} is not a maximal totally singular subspace")


def diagonal(sp: QuadraticSpace, k: int, a: int, slots: Sequence[int]) -> int:
    """The vector of R^k with ``a`` in each listed block and 0 elsewhere."""
    d = sp.dim
    return sum(a << (d * i) for i in slots)


def build_S(sp: QuadraticSpace, phi: Subspace, psi: Subspace, k: int) -> Subspace:
    """Span of ``Phi_(1i)`` (2 <= i <= k), ``Psi_(1..k)`` and ``(Phi & Psi)_(1)``."""
    _require_mts(sp, phi, "Phi")
    _require_mts(sp, psi, "Psi")
    if k < 1:
        raise ValueError("k must be at least 1")
    gens = []
    for i in range(1, k):
        gens.extend(diagonal(sp, k, a, (0, i)) for a in phi.basis)
    gens.extend(diagonal(sp, k, b, range(k)) for b in psi.basis)
    gens.extend(phi_and_psi for phi_and_psi in subspace_intersect(phi, psi).basis)
    return Subspace.span(sp.dim * k, gens)


def check_cond1(sp: QuadraticSpace, k: int, S: Subspace) -> int | None:
    """First nonzero ``v`` in S with ``w^k(v) < 4``, or None.

    Elements are visited in increasing coefficient order over S's RREF basis.
    """
    if S.ambient != sp.dim * k:
        raise DimensionError("S does not live in the k-fold sum")
    basis = S.basis
    d = sp.dim
    low = mask(d)
    q = sp.q
    # w^k < 4 forces at least k-2 zero blocks (or k-1), so w-sum in the fast path
    for c in range(1, 1 << len(basis)):
        v = vecmat(c, basis)
        total = 0
        x = v
        for _ in range(k):
            a = x & low
            if a:
                total += 1 if q(a) else 2
                if total >= 4:
                    break
            x >>= d
        if total < 4:
            return v
    return None


def _phi_psi_split(sp: QuadraticSpace, phi: Subspace, psi: Subspace):
    """Return a function x -> (phi_coeffs_vector, psi_part) for R = Phi + Psi."""
    basis = phi.basis + psi.basis
    inv = inverse_rows(basis)
    m = phi.dim
    phi_mask = mask(m)

    def split(x: int) -> tuple[int, int]:
        coeffs = vecmat(x, inv)
        return vecmat(coeffs & phi_mask, phi.basis), vecmat(coeffs >> m, psi.basis)

    return split


class W4Classes(NamedTuple):
    type_I: list[int]
    type_II: list[int]


def classify_w4(sp: QuadraticSpace, phi: Subspace, psi: Subspace, S: Subspace | None = None) -> W4Classes:
    """Split ``{v in S : w^3(v) = 4}`` into the two shapes for ``S = S(Phi, Psi; 3)``.

    Type I: ``sigma(a, a, 0)`` with ``a`` in Phi nonzero.  Type II:
    ``sigma(a+c, a+b+c, b+c)`` with ``a, b`` in Phi, ``c`` in Psi nonzero and
    w-profile a permutation of (2, 1, 1).  Anything else raises.
    """
    if subspace_intersect(phi, psi).dim:
        raise ConditionError("Phi and Psi must intersect trivially")
    if S is None:
        S = build_S(sp, phi, psi, 3)
    split = _phi_psi_split(sp, phi, psi)
    d = sp.dim
    low = mask(d)
    type_I: list[int] = []
    type_II: list[int] = []
    for v in S.elements():
        parts = (v & low, (v >> d) & low, v >> (2 * d))
        ws = [sp.w(a) for a in parts]
        if sum(ws) != 4:
            continue
        nonzero = [a for a in parts if a]
        if len(nonzero) == 2 and nonzero[0] == nonzero[1] and nonzero[0] in phi:
            type_I.append(v)
            continue
        if sorted(ws) == [1, 1, 2]:
            decomposed = [split(a) for a in parts]
            cs = {c for _, c in decomposed}
            a_sum = decomposed[0][0] ^ decomposed[1][0] ^ decomposed[2][0]
            if len(cs) == 1 and 0 not in cs and a_sum == 0:
                type_II.append(v)
                continue
        raise AssertionError(f"w^3 = 4 vector {v:#x} matches neither shape")
    return W4Classes(type_I, type_II)


def singular_count(sp: QuadraticSpace) -> int:
    """Number of singular vectors (including 0), by exhaustive evaluation."""
    return sum(1 for x in range(1 << sp.dim) if not sp.q(x))


def q_histogram(sp: QuadraticSpace) -> tuple[int, int]:
    zeros = singular_count(sp)
    return zeros, (1 << sp.dim) - zeros
