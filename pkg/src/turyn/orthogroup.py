"""Isometries of (R, q) and (R^k, q^k).

Covers transvections, BFS closure, the constructive Witt-type maps (moving
maximal totally singular subspaces and singular vectors, complements, Levi
and unipotent parts of a parabolic), stabilizer generators of S(Phi, Psi; k),
wreath decomposition of w^k-automorphisms and the canonicalization of a
subspace satisfying the w^3 >= 4 condition.
"""

from __future__ import annotations

import logging
import os
import random
from dataclasses import dataclass
from itertools import combinations
from math import comb, factorial
from typing import Iterable, NamedTuple, Sequence

from .f2linalg import (
    F2Matrix,
    DimensionError,
    RowTable,
    Subspace,
    VectorLike,
    as_bits,
    inverse_rows,
    kernel_rows,
    mask,
    matmul_rows,
    parity,
    rank_rows,
    solve_rows,
    subspace_intersect,
    transpose_rows,
    vecmat,
)
from .quadspace import (
    ConditionError,
    QuadraticSpace,
    build_S,
    check_cond1,
    direct_sum_k,
    is_maximal_ts,
    is_totally_singular,
    witt_basis,
    wk_eval,
)

log = logging.getLogger(__name__)

DEFAULT_CLOSURE_CAP = 1 << 26


class NotAnIsometryError(ValueError):
    pass


class ClosureCapExceeded(RuntimeError):
    pass


def preserves_form(sp: QuadraticSpace, rows: Sequence[int]) -> bool:
    """q(e_i g) = q(e_i) and <e_i g, e_j g> = <e_i, e_j> for all basis pairs."""
    n = sp.dim
    if len(rows) != n:
        return False
    for i in range(n):
        if sp.q(rows[i]) != sp.q(1 << i):
            return False
    Bg = [vecmat(r, sp.B) for r in rows]
    for i in range(n):
        bi = Bg[i]
        ref = sp.B[i]
        for j in range(i + 1, n):
            if parity(bi & rows[j]) != (ref >> j) & 1:
                return False
    return True


class Isometry:
    """An invertible matrix preserving q, acting by ``v -> v . mat``."""

    __slots__ = ("space", "rows", "_hash")

    def __init__(self, space: QuadraticSpace, mat: F2Matrix | Sequence[int], *, check: bool = True):
        rows = tuple(mat.data) if isinstance(mat, F2Matrix) else tuple(mat)
        if check:
            if len(rows) != space.dim or any(r >> space.dim for r in rows):
                raise DimensionError("matrix shape does not match the space")
            if rank_rows(rows) != space.dim:
                raise NotAnIsometryError("matrix is singular")
            if not preserves_form(space, rows):
                raise NotAnIsometryError("matrix does not preserve q")
        self.space = space
        self.rows = rows
        self._hash = hash(rows)

    @classmethod
    def identity(cls, space: QuadraticSpace) -> "Isometry":
        return cls(space, tuple(1 << i for i in range(space.dim)), check=False)

    @property
    def mat(self) -> F2Matrix:
        return F2Matrix(self.space.dim, self.rows)

    def apply(self, v: VectorLike) -> int:
        return vecmat(as_bits(v, self.space.dim), self.rows)

    def __mul__(self, other: "Isometry") -> "Isometry":
        """``g * h`` acts as g first, then h."""
        return Isometry(self.space, matmul_rows(self.rows, other.rows), check=False)

    def inverse(self) -> "Isometry":
        return Isometry(self.space, inverse_rows(self.rows), check=False)

    def image(self, U: Subspace) -> Subspace:
        return U.image(self.rows)

    def is_identity(self) -> bool:
        return all(r == 1 << i for i, r in enumerate(self.rows))

    def __eq__(self, other):
        return isinstance(other, Isometry) and self.rows == other.rows

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Isometry(dim={self.space.dim}, rows={self.rows})"


# ---------------------------------------------------------------------------
# Generators and closure


def transvection(sp: QuadraticSpace, a: VectorLike) -> Isometry:
    """``x -> x + <x, a> a`` for a non-singular ``a``."""
    a = as_bits(a, sp.dim)
    if not sp.q(a):
        raise ConditionError("transvection vector must be non-singular")
    rows = tuple((1 << i) ^ (a if sp.bform(1 << i, a) else 0) for i in range(sp.dim))
    return Isometry(sp, rows, check=False)


def all_transvections(sp: QuadraticSpace) -> list[Isometry]:
    return [transvection(sp, a) for a in range(1, 1 << sp.dim) if sp.q(a)]


def closure_cap() -> int:
    env = os.environ.get("TURYN_MAX_CLOSURE")
    return int(env) if env else DEFAULT_CLOSURE_CAP


def closure_rows(gens: Sequence[Sequence[int]], dim: int, cap: int | None = None) -> set[tuple[int, ...]]:
    """BFS closure of matrices (as row tuples) under right multiplication."""
    if cap is None:
        cap = closure_cap()
    ident = tuple(1 << i for i in range(dim))
    seen = {ident}
    tables = [RowTable(g) for g in {tuple(g) for g in gens}]
    frontier = [ident]
    while frontier:
        nxt = []
        for elem in frontier:
            for t in tables:
                prod = t.mul(elem)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
            if len(seen) > cap:
                raise ClosureCapExceeded(f"closure exceeded cap of {cap} elements")
        frontier = nxt
        log.debug("closure: %d elements, frontier %d", len(seen), len(frontier))
    return seen


def group_closure(gens: Sequence[Isometry], cap: int | None = None, space: QuadraticSpace | None = None) -> set[Isometry]:
    if not gens:
        if space is None:
            raise ValueError("need a space to build the trivial group")
        return {Isometry.identity(space)}
    sp = gens[0].space
    if any(g.space != sp for g in gens):
        raise DimensionError("generators act on different spaces")
    return {Isometry(sp, r, check=False) for r in closure_rows([g.rows for g in gens], sp.dim, cap)}


def closure_order(gens: Sequence[Isometry], cap: int | None = None) -> int:
    if not gens:
        return 1
    return len(closure_rows([g.rows for g in gens], gens[0].space.dim, cap))


def orthogonal_group_order(m: int) -> int:
    """|O^+(2m, 2)| = 2 * 2^{m(m-1)} (2^m - 1) prod_{i<m} (2^{2i} - 1)."""
    order = 2 * 2 ** (m * (m - 1)) * (2 ** m - 1)
    for i in range(1, m):
        order *= 2 ** (2 * i) - 1
    return order


def sl_order(m: int) -> int:
    order = 2 ** (m * (m - 1) // 2)
    for i in range(1, m + 1):
        order *= 2 ** i - 1
    return order


# ---------------------------------------------------------------------------
# Hyperbolic completions


def _require_mts(sp: QuadraticSpace, U: Subspace, name: str):
    if U.ambient != sp.dim or not is_maximal_ts(sp, U):
        raise ConditionError(f"{name} is not a maximal totally singular subspace")


def dual_basis(sp: QuadraticSpace, phi: Subspace, within: Sequence[int] | None = None) -> list[int]:
    """Vectors ``b_j`` with ``<a_i, b_j> = delta_ij`` for the RREF basis ``a_i`` of Phi.

    With ``within`` the b_j are drawn from span(within); otherwise from R with
    the lowest-pivot solution.
    """
    a = phi.basis
    pool = list(within) if within is not None else [1 << i for i in range(sp.dim)]
    # row r of M lists <pool_r, a_i> over i
    M = [sum(sp.bform(p, ai) << i for i, ai in enumerate(a)) for p in pool]
    out = []
    for j in range(len(a)):
        x = solve_rows(M, 1 << j)
        if x is None:
            raise ConditionError("pairing against Phi is degenerate on the given pool")
        out.append(vecmat(x, pool))
    return out


def hyperbolic_completion(sp: QuadraticSpace, phi: Subspace) -> list[int]:
    """Singular ``b_1..b_m``, pairwise orthogonal, dual to Phi's RREF basis."""
    a = phi.basis
    b = dual_basis(sp, phi)
    for l in range(len(b)):
        for j in range(l):
            if sp.bform(b[j], b[l]):
                b[l] ^= a[j]
        if sp.q(b[l]):
            b[l] ^= a[l]
    return b


def find_complement(sp: QuadraticSpace, phi: Subspace) -> Subspace:
    _require_mts(sp, phi, "Phi")
    return Subspace.span(sp.dim, hyperbolic_completion(sp, phi))


def _basis_map(src: Sequence[int], dst: Sequence[int]) -> tuple[int, ...]:
    """Matrix g with ``src_i . g = dst_i`` for a basis ``src``."""
    return matmul_rows(inverse_rows(src), dst)


def map_mts(sp: QuadraticSpace, phi1: Subspace, phi2: Subspace) -> Isometry:
    """An isometry carrying Phi1 onto Phi2."""
    _require_mts(sp, phi1, "Phi1")
    _require_mts(sp, phi2, "Phi2")
    src = list(phi1.basis) + hyperbolic_completion(sp, phi1)
    dst = list(phi2.basis) + hyperbolic_completion(sp, phi2)
    return Isometry(sp, _basis_map(src, dst))


def _singular_frame(sp: QuadraticSpace, a: int) -> list[int]:
    f = next((1 << i for i in range(sp.dim) if sp.bform(a, 1 << i)), None)
    if sp.q(f):
        f ^= a
    rest = sp.perp([a, f])
    pairs = witt_basis(sp, rest.basis)
    return [a, f] + [x for pair in pairs for x in pair]


def map_singular(sp: QuadraticSpace, a: VectorLike, b: VectorLike) -> Isometry:
    """An isometry with ``a . g = b`` for nonzero singular a, b."""
    a, b = as_bits(a, sp.dim), as_bits(b, sp.dim)
    for name, v in (("a", a), ("b", b)):
        if not v or sp.q(v):
            raise ConditionError(f"{name} must be a nonzero singular vector")
    return Isometry(sp, _basis_map(_singular_frame(sp, a), _singular_frame(sp, b)))


def _require_complementary(sp: QuadraticSpace, phi: Subspace, psi: Subspace):
    _require_mts(sp, phi, "Phi")
    _require_mts(sp, psi, "Psi")
    if subspace_intersect(phi, psi).dim:
        raise ConditionError("Phi and Psi must intersect trivially")


def levi_lift(sp: QuadraticSpace, phi: Subspace, psi: Subspace, alpha: F2Matrix | Sequence[int]) -> Isometry:
    """The isometry stabilizing Phi and Psi that acts on Phi's RREF basis by ``alpha``.

    On Psi it acts by the inverse transpose with respect to the dual basis.
    """
    _require_complementary(sp, phi, psi)
    m = phi.dim
    al = tuple(alpha.data) if isinstance(alpha, F2Matrix) else tuple(alpha)
    if len(al) != m or any(r >> m for r in al):
        raise DimensionError(f"alpha must be {m}x{m}")
    try:
        beta = transpose_rows(inverse_rows(al), m)
    except ValueError:
        raise ConditionError("alpha is not invertible") from None
    a = list(phi.basis)
    b = dual_basis(sp, phi, within=psi.basis)
    src = a + b
    dst = [vecmat(r, a) for r in al] + [vecmat(r, b) for r in beta]
    return Isometry(sp, _basis_map(src, dst))


def o2h_element(sp: QuadraticSpace, phi: Subspace, psi: Subspace, images: Sequence[int]) -> Isometry:
    """Fix Phi pointwise and send each RREF basis vector c of Psi to ``c + x(c)``.

    ``images[j]`` is ``x(c_j)`` and must lie in Phi; x must make
    ``<x(c), c'>`` symmetric and every ``c + x(c)`` singular.
    """
    _require_complementary(sp, phi, psi)
    c = psi.basis
    if len(images) != len(c):
        raise DimensionError("need one image per basis vector of Psi")
    for j, x in enumerate(images):
        if x not in phi:
            raise ConditionError(f"x(c_{j}) is not in Phi")
        if sp.q(c[j] ^ x):
            raise ConditionError(f"c_{j} + x(c_{j}) is non-singular (basis pair ({j}, {j}))")
    for i, j in combinations(range(len(c)), 2):
        if sp.bform(images[i], c[j]) != sp.bform(images[j], c[i]):
            raise ConditionError(f"symmetry condition fails on basis pair ({i}, {j})")
    src = list(phi.basis) + list(c)
    dst = list(phi.basis) + [cj ^ x for cj, x in zip(c, images)]
    return Isometry(sp, _basis_map(src, dst))


def map_pair(sp: QuadraticSpace, phi1: Subspace, psi1: Subspace, phi2: Subspace, psi2: Subspace) -> Isometry:
    """An isometry with Phi1 -> Phi2 and Psi1 -> Psi2 for complementary pairs."""
    _require_complementary(sp, phi1, psi1)
    _require_complementary(sp, phi2, psi2)
    src = list(phi1.basis) + dual_basis(sp, phi1, within=psi1.basis)
    dst = list(phi2.basis) + dual_basis(sp, phi2, within=psi2.basis)
    return Isometry(sp, _basis_map(src, dst))


def _random_in(sp: QuadraticSpace, W: Subspace, rng: random.Random, pred) -> int:
    while True:
        v = vecmat(rng.getrandbits(W.dim), W.basis)
        if pred(v):
            return v


def random_frame(sp: QuadraticSpace, rng: random.Random) -> list[int]:
    """A uniformly random hyperbolic basis ``e_1, f_1, ..., e_m, f_m``."""
    W = Subspace.full(sp.dim)
    frame = []
    for _ in range(sp.m):
        e = _random_in(sp, W, rng, lambda v: v and not sp.q(v))
        f = _random_in(sp, W, rng, lambda v: sp.bform(e, v) and not sp.q(v))
        frame += [e, f]
        W = subspace_intersect(W, sp.perp([e, f]))
    return frame


def random_isometry(sp: QuadraticSpace, rng: random.Random) -> Isometry:
    """Uniform over O(R, q): the group acts simply transitively on hyperbolic frames."""
    src = [x for pair in sp.witt_pairs for x in pair]
    return Isometry(sp, _basis_map(src, random_frame(sp, rng)), check=False)


def orthogonal_generators(sp: QuadraticSpace) -> list[Isometry]:
    """Transvections, plus the swap of the first two hyperbolic pairs when m >= 2.

    Transvections alone generate only an index-2 subgroup when m = 2.
    """
    gens = all_transvections(sp)
    if sp.m >= 2:
        (e1, f1), (e2, f2) = sp.witt_pairs[:2]
        rest = [x for pair in sp.witt_pairs[2:] for x in pair]
        gens.append(Isometry(sp, _basis_map([e1, f1, e2, f2] + rest, [e2, f2, e1, f1] + rest)))
    return gens


# ---------------------------------------------------------------------------
# Wreath products


@dataclass(frozen=True)
class BlockIsometry:
    """``(a_1..a_k) -> w`` with ``w_{sigma(i)} = a_i . g_i`` (sigma 0-based)."""

    sigma: tuple[int, ...]
    blocks: tuple[Isometry, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "blocks", tuple(self.blocks))
        k = len(self.sigma)
        if sorted(self.sigma) != list(range(k)) or len(self.blocks) != k:
            raise ValueError("sigma must be a permutation of range(k) with one block per index")
        if len({g.space for g in self.blocks}) > 1:
            raise DimensionError("blocks act on different spaces")

    @property
    def k(self) -> int:
        return len(self.sigma)

    @property
    def base(self) -> QuadraticSpace:
        return self.blocks[0].space

    @classmethod
    def diagonal(cls, g: Isometry, k: int) -> "BlockIsometry":
        return cls(tuple(range(k)), (g,) * k)

    @classmethod
    def permutation(cls, space: QuadraticSpace, sigma: Sequence[int]) -> "BlockIsometry":
        one = Isometry.identity(space)
        return cls(tuple(sigma), (one,) * len(sigma))

    def flat_rows(self) -> tuple[int, ...]:
        d = self.base.dim
        rows = []
        for i, g in enumerate(self.blocks):
            shift = d * self.sigma[i]
            rows.extend(r << shift for r in g.rows)
        return tuple(rows)

    def flatten(self, ksp: QuadraticSpace | None = None) -> Isometry:
        if ksp is None:
            ksp = direct_sum_k(self.base, self.k)
        return Isometry(ksp, self.flat_rows(), check=False)

    def apply(self, v: int) -> int:
        return vecmat(v, self.flat_rows())

    def __mul__(self, other: "BlockIsometry") -> "BlockIsometry":
        """self first, then other."""
        sigma = tuple(other.sigma[s] for s in self.sigma)
        blocks = tuple(self.blocks[i] * other.blocks[self.sigma[i]] for i in range(self.k))
        return BlockIsometry(sigma, blocks)

    def inverse(self) -> "BlockIsometry":
        inv = [0] * self.k
        for i, s in enumerate(self.sigma):
            inv[s] = i
        blocks = tuple(self.blocks[inv[j]].inverse() for j in range(self.k))
        return BlockIsometry(tuple(inv), blocks)

    def image(self, S: Subspace) -> Subspace:
        return S.image(self.flat_rows())


def random_block_isometry(sp: QuadraticSpace, k: int, rng: random.Random, permute: bool = True) -> BlockIsometry:
    sigma = list(range(k))
    if permute:
        rng.shuffle(sigma)
    return BlockIsometry(tuple(sigma), tuple(random_isometry(sp, rng) for _ in range(k)))


class NotMember(NamedTuple):
    """Why an isometry of R^k is not a block map.

    ``reason`` is ``"w-violation"`` when ``w^k(witness)`` changes, or
    ``"block-mixing"`` when w^k is kept but the single-block vector
    ``witness`` lands in more than one block.
    """

    witness: int
    w_before: int
    w_after: int
    reason: str = "w-violation"


def wreath_decompose(sp: QuadraticSpace, k: int, g: Isometry) -> BlockIsometry | NotMember:
    """Factor an isometry of R^k as a block permutation times block maps.

    Single-block vectors are scanned under g and g^-1 first; a change of w^k
    there is reported as a ``"w-violation"``.  For m != 2 keeping w^k on them
    forces g to permute the blocks.  For m = 2 the nonsingular vectors of a
    block split into two classes under ``<a, b> = 1`` adjacency, and there are
    w^k-preserving isometries that mix blocks; those come back as
    ``"block-mixing"``.
    """
    d = sp.dim
    if g.space.dim != d * k:
        raise DimensionError("isometry does not act on the k-fold sum")
    rows = g.rows
    inv = inverse_rows(rows)
    low = mask(d)
    for mat, forward in ((rows, True), (inv, False)):
        for i in range(k):
            for a in range(1, 1 << d):
                v = a << (d * i)
                u = vecmat(v, mat)
                wv, wu = wk_eval(sp, k, v), wk_eval(sp, k, u)
                if wv != wu:
                    if forward:
                        return NotMember(v, wv, wu)
                    return NotMember(u, wu, wv)
    sigma = []
    blocks = []
    for i in range(k):
        first = rows[d * i]
        j = next(b for b in range(k) if (first >> (d * b)) & low)
        sub = []
        for r in rows[d * i: d * (i + 1)]:
            if r & ~(low << (d * j)):
                v = 1 << (d * i + len(sub))
                wv = wk_eval(sp, k, v)
                return NotMember(v, wv, wk_eval(sp, k, r), "block-mixing")
            sub.append(r >> (d * j))
        sigma.append(j)
        blocks.append(Isometry(sp, sub))
    return BlockIsometry(tuple(sigma), tuple(blocks))


# ---------------------------------------------------------------------------
# Stabilizer of S(Phi, Psi; k)


def sl_generators(m: int) -> list[tuple[int, ...]]:
    """Two generators of SL_m(2): I + E_{01} and the cyclic shift (for m = 1, identity)."""
    if m == 1:
        return [(1,)]
    ident = [1 << i for i in range(m)]
    elem = list(ident)
    elem[0] |= 1 << 1
    cycle = [1 << ((i + 1) % m) for i in range(m)]
    return [tuple(elem), tuple(cycle)]


def elementary_alternating(m: int) -> list[list[int]]:
    """The C(m,2) matrices E_ij + E_ji (i < j), as row lists."""
    out = []
    for i, j in combinations(range(m), 2):
        X = [0] * m
        X[i] |= 1 << j
        X[j] |= 1 << i
        out.append(X)
    return out


def o2h_from_alternating(sp: QuadraticSpace, phi: Subspace, psi: Subspace, X: Sequence[int]) -> Isometry:
    """The unipotent element for an m x m alternating matrix X (rows as bitsets).

    With ``b`` the basis of Psi dual to Phi's basis ``a``, ``x(b_j) = sum_i X[j][i] a_i``;
    a vector c of Psi has coordinates ``<a_j, c>`` in ``b``.
    """
    a = list(phi.basis)
    m = len(a)
    if len(X) != m or any(((X[i] >> j) & 1) != ((X[j] >> i) & 1) for i in range(m) for j in range(m)) \
            or any((X[i] >> i) & 1 for i in range(m)):
        raise ConditionError("X is not alternating")
    xb = [vecmat(row, a) for row in X]
    images = []
    for c in psi.basis:
        t = sum(sp.bform(aj, c) << j for j, aj in enumerate(a))
        images.append(vecmat(t, xb))
    return o2h_element(sp, phi, psi, images)


def o2h_generators(sp: QuadraticSpace, phi: Subspace, psi: Subspace) -> list[Isometry]:
    """Generators of the unipotent radical of Stab(Phi): one per elementary alternating form."""
    return [o2h_from_alternating(sp, phi, psi, X) for X in elementary_alternating(phi.dim)]


def levi_generators(sp: QuadraticSpace, phi: Subspace, psi: Subspace) -> list[Isometry]:
    return [levi_lift(sp, phi, psi, alpha) for alpha in sl_generators(phi.dim)]


def sym_generators(k: int) -> list[tuple[int, ...]]:
    if k == 1:
        return []
    swap = (1, 0) + tuple(range(2, k))
    if k == 2:
        return [swap]
    cycle = tuple((i + 1) % k for i in range(k))
    return [swap, cycle]


class StabParts(NamedTuple):
    o2: list[BlockIsometry]
    levi: list[BlockIsometry]
    sym: list[BlockIsometry]

    def all(self) -> list[BlockIsometry]:
        return self.o2 + self.levi + self.sym


def stab_S_parts(sp: QuadraticSpace, phi: Subspace, psi: Subspace, k: int) -> StabParts:
    """Generators of the stabilizer of S(Phi, Psi; k) in O(R,q) wr Sym_k, by kind.

    Unipotent parts on blocks (1, i), Levi lifts on the diagonal, then Sym_k.
    Each generator is checked to stabilize S.
    """
    _require_complementary(sp, phi, psi)
    if k < 3:
        raise ValueError("k must be at least 3")
    one = Isometry.identity(sp)
    ident = tuple(range(k))
    o2 = []
    for i in range(1, k):
        for h in o2h_generators(sp, phi, psi):
            blocks = [one] * k
            blocks[0] = blocks[i] = h
            o2.append(BlockIsometry(ident, tuple(blocks)))
    levi = [BlockIsometry.diagonal(h, k) for h in levi_generators(sp, phi, psi)]
    sym = [BlockIsometry.permutation(sp, s) for s in sym_generators(k)]
    parts = StabParts(o2, levi, sym)
    S = build_S(sp, phi, psi, k)
    for g in parts.all():
        if g.image(S) != S:
            raise AssertionError("generator does not stabilize S")
    return parts


def stab_S_generators(sp: QuadraticSpace, phi: Subspace, psi: Subspace, k: int) -> list[BlockIsometry]:
    return stab_S_parts(sp, phi, psi, k).all()


def stab_shape_order(m: int, k: int) -> int:
    """2^{(k-1) C(m,2)} * |SL_m(2)| * k!"""

    return 2 ** ((k - 1) * comb(m, 2)) * sl_order(m) * factorial(k)


# ---------------------------------------------------------------------------
# Canonicalization for k = 3


class Canonical(NamedTuple):
    g: BlockIsometry
    phi: Subspace
    psi: Subspace


def _project(sp: QuadraticSpace, v: int, i: int) -> int:
    d = sp.dim
    return (v >> (d * i)) & mask(d)


def section_kernel(sp: QuadraticSpace, S: Subspace, zero_blocks: Sequence[int], k: int = 3) -> Subspace:
    """``{v in S : rho_i(v) = 0 for i in zero_blocks}``."""
    d = sp.dim
    cols_mask = 0
    for i in zero_blocks:
        cols_mask |= mask(d) << (d * i)
    # x . M = 0 where M's rows are the basis restricted to the zeroed blocks
    rows = [b & cols_mask for b in S.basis]
    deps = kernel_rows(rows, d * k)
    return Subspace.span(S.ambient, (vecmat(x, S.basis) for x in deps))


def projection(sp: QuadraticSpace, U: Subspace, i: int) -> Subspace:
    return Subspace.span(sp.dim, (_project(sp, b, i) for b in U.basis))


class SectionReport(NamedTuple):
    pair_sections_zero: bool
    projections_full: bool
    section_dims_m: bool
    section_projections_mts: bool

    @property
    def ok(self) -> bool:
        return all(self)


def section_report(sp: QuadraticSpace, S: Subspace) -> SectionReport:
    """The four structural invariants of a maximal totally singular S in R^3 with w^3 >= 4."""
    m = sp.dim // 2
    pairs_zero = all(section_kernel(sp, S, (i, j)).dim == 0 for i, j in combinations(range(3), 2))
    proj_full = all(projection(sp, S, i).dim == sp.dim for i in range(3))
    sections = [section_kernel(sp, S, (i,)) for i in range(3)]
    dims_m = all(T.dim == m for T in sections)
    mts = all(
        is_maximal_ts(sp, projection(sp, sections[i], j))
        for i in range(3) for j in range(3) if i != j
    )
    return SectionReport(pairs_zero, proj_full, dims_m, mts)


def _tau_matrix(sp: QuadraticSpace, section: Subspace, src: int, dst: int, phi: Subspace) -> list[int]:
    """Rows T with ``tau(a_i) = sum_j T[i][j] a_j`` where section = {(.., a, .., tau(a), ..)}."""
    src_rows = [_project(sp, b, src) for b in section.basis]
    out = []
    for a in phi.basis:
        x = solve_rows(src_rows, a)
        if x is None:
            raise ConditionError("section does not project onto Phi")
        image = _project(sp, vecmat(x, section.basis), dst)
        coords = phi.coordinates(image)
        if coords is None:
            raise ConditionError("section image left Phi")
        out.append(coords)
    return out


def canonicalize_S(sp: QuadraticSpace, S: Subspace, k: int = 3) -> Canonical:
    """Move S to S(Phi, Psi; 3) by an element of O(R,q)^3.

    Returns ``(g, Phi, Psi)`` with ``S . g = S(Phi, Psi; 3)``; the equation is
    checked before returning.
    """
    if k != 3:
        raise ValueError("canonicalization is implemented for k = 3")
    ksp = direct_sum_k(sp, 3)
    if S.ambient != ksp.dim:
        raise DimensionError("S does not live in R^3")
    if not is_maximal_ts(ksp, S):
        raise ConditionError("S is not maximal totally singular")
    bad = check_cond1(sp, 3, S)
    if bad is not None:
        raise ConditionError(f"S violates w^3 >= 4 at {bad:#x}")
    rep = section_report(sp, S)
    for name, ok in zip(rep._fields, rep):
        if not ok:
            raise ConditionError(f"structural invariant failed: {name}")

    one = Isometry.identity(sp)
    g = [one, one, one]

    def current() -> Subspace:
        return S.image(BlockIsometry((0, 1, 2), tuple(g)).flat_rows())

    # block 2: align the (1,2)-section onto the diagonal of Phi
    S3 = section_kernel(sp, S, (2,))
    phi = projection(sp, S3, 0)
    phi_prime = projection(sp, S3, 1)
    g[1] = map_mts(sp, phi_prime, phi)
    psi0 = find_complement(sp, phi)
    T = _tau_matrix(sp, section_kernel(sp, current(), (2,)), 0, 1, phi)
    g[1] = g[1] * levi_lift(sp, phi, psi0, inverse_rows(T))

    # block 3: same for the (1,3)-section; its first projection is Phi already
    S2 = section_kernel(sp, current(), (1,))
    if projection(sp, S2, 0) != phi:
        raise AssertionError("first projection of the (1,3)-section differs from Phi")
    g[2] = map_mts(sp, projection(sp, S2, 2), phi)
    T = _tau_matrix(sp, section_kernel(sp, current(), (1,)), 0, 2, phi)
    g[2] = g[2] * levi_lift(sp, phi, psi0, inverse_rows(T))

    # block 1: recover x(c) on Psi and undo it by a unipotent element
    psi = psi0
    cur = current()
    third = [_project(sp, b, 2) for b in cur.basis]
    images = []
    for c in psi.basis:
        x = solve_rows(third, c)
        if x is None:
            raise AssertionError("third projection is not surjective")
        v = vecmat(x, cur.basis)
        alpha, beta = _project(sp, v, 0), _project(sp, v, 1)
        xc = alpha ^ beta
        if xc not in phi:
            raise AssertionError("x(c) left Phi")
        images.append(xc)
    g[0] = o2h_element(sp, phi, psi, images)

    out = BlockIsometry((0, 1, 2), tuple(g))
    target = build_S(sp, phi, psi, 3)
    if out.image(S) != target:
        raise AssertionError("canonicalization failed to reach S(Phi, Psi; 3)")
    return Canonical(out, phi, psi)


def conjugating_element(sp: QuadraticSpace, S1: Subspace, S2: Subspace) -> BlockIsometry:
    """An element of O(R,q)^3 carrying S1 onto S2 (both maximal totally singular with w^3 >= 4)."""
    c1 = canonicalize_S(sp, S1)
    c2 = canonicalize_S(sp, S2)
    h = BlockIsometry.diagonal(map_pair(sp, c1.phi, c1.psi, c2.phi, c2.psi), 3)
    g = c1.g * h * c2.g.inverse()
    if g.image(S1) != S2:
        raise AssertionError("conjugating element does not map S1 to S2")
    return g


def random_cond1_subspace(m: int, seed: int) -> tuple[QuadraticSpace, Subspace, BlockIsometry]:
    """S(Phi_std, Psi_std; 3) moved by a seeded random wreath element."""
    from .quadspace import hyperbolic_space, standard_pair

    sp = hyperbolic_space(m)
    phi, psi = standard_pair(sp)
    rng = random.Random(seed)
    h = random_block_isometry(sp, 3, rng)
    return sp, h.image(build_S(sp, phi, psi, 3)), h


def o2_rank(gens: Iterable[BlockIsometry]) -> int:
    """F2-rank of ``{g - 1}`` for unipotent block generators."""
    vecs = []
    for g in gens:
        rows = g.flat_rows()
        n = len(rows)
        vecs.append(sum((r ^ (1 << i)) << (n * i) for i, r in enumerate(rows)))
    return rank_rows(vecs)


def all_commute(gens: Sequence[BlockIsometry]) -> bool:
    flat = [g.flat_rows() for g in gens]
    return all(
        matmul_rows(a, b) == matmul_rows(b, a) for a, b in combinations(flat, 2)
    )


def totally_singular_check(sp: QuadraticSpace, U: Subspace) -> bool:
    return is_totally_singular(sp, U)
