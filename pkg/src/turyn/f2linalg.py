"""Bit-packed linear algebra over F2.

Vectors are Python ints with bit ``i`` holding coordinate ``i``; Python's
arbitrary-precision ints give the multi-word fallback for free.  Everything
follows the row-vector convention: a matrix acts by ``v -> v . M``.

The dataclasses :class:`F2Vector`, :class:`F2Matrix` and :class:`Subspace`
are thin immutable wrappers; hot loops elsewhere in the package work on the
raw ints and row tuples directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union


class DimensionError(ValueError):
    """Operand dimensions do not agree."""


def parity(x: int) -> int:
    return x.bit_count() & 1


def weight(x: int) -> int:
    return x.bit_count()


def mask(n: int) -> int:
    return (1 << n) - 1


def bits_of(x: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def vecmat(v: int, rows: Sequence[int]) -> int:
    """Return ``v . M`` for the matrix with the given rows."""
    acc = 0
    i = 0
    while v:
        if v & 1:
            acc ^= rows[i]
        v >>= 1
        i += 1
    return acc


def matmul_rows(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(vecmat(r, b) for r in a)


class RowTable:
    """Precomputed byte-chunk tables for repeated products ``v . M``.

    Used by group closures, where one generator multiplies many elements.
    """

    __slots__ = ("tables", "nchunks")

    def __init__(self, rows: Sequence[int], chunk: int = 8):
        self.nchunks = (len(rows) + chunk - 1) // chunk
        self.tables = []
        for c in range(self.nchunks):
            part = rows[c * chunk:(c + 1) * chunk]
            table = [0] * (1 << len(part))
            for idx in range(1, len(table)):
                low = idx & -idx
                table[idx] = table[idx ^ low] ^ part[low.bit_length() - 1]
            self.tables.append(table)

    def apply(self, v: int) -> int:
        acc = 0
        for table in self.tables:
            acc ^= table[v & 0xFF]
            v >>= 8
        return acc

    def mul(self, rows: Sequence[int]) -> tuple[int, ...]:
        tables = self.tables
        if len(tables) == 1:
            t0 = tables[0]
            return tuple(t0[r] for r in rows)
        if len(tables) == 2:
            t0, t1 = tables
            return tuple(t0[r & 0xFF] ^ t1[r >> 8] for r in rows)
        if len(tables) == 3:
            t0, t1, t2 = tables
            return tuple(t0[r & 0xFF] ^ t1[(r >> 8) & 0xFF] ^ t2[r >> 16] for r in rows)
        return tuple(self.apply(r) for r in rows)


def span_iter(basis: Sequence[int]) -> Iterator[int]:
    """Yield every element of the span of ``basis`` (Gray-code order, 0 first)."""
    v = 0
    yield v
    for i in range(1, 1 << len(basis)):
        v ^= basis[(i & -i).bit_length() - 1]
        yield v


def combine(coeffs: int, basis: Sequence[int]) -> int:
    """Linear combination of ``basis`` with coefficient bits ``coeffs``."""
    return vecmat(coeffs, basis)


# ---------------------------------------------------------------------------
# Wrapper types


@dataclass(frozen=True)
class F2Vector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits set beyond vector length")

    @classmethod
    def from_str(cls, s: str) -> "F2Vector":
        s = s.strip()
        if any(ch not in "01" for ch in s):
            raise ValueError(f"not a 0/1 string: {s!r}")
        return cls(len(s), sum(1 << i for i, ch in enumerate(s) if ch == "1"))

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "F2Vector":
        values = list(values)
        return cls(len(values), sum((int(x) & 1) << i for i, x in enumerate(values)))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def set(self, i: int, value: int) -> "F2Vector":
        if not 0 <= i < self.length:
            raise IndexError(i)
        bits = (self.bits | (1 << i)) if value & 1 else (self.bits & ~(1 << i))
        return F2Vector(self.length, bits)

    def __add__(self, other: "F2Vector") -> "F2Vector":
        if self.length != other.length:
            raise DimensionError("vector lengths differ")
        return F2Vector(self.length, self.bits ^ other.bits)

    def dot(self, other: "F2Vector") -> int:
        if self.length != other.length:
            raise DimensionError("vector lengths differ")
        return parity(self.bits & other.bits)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return to_str(self.bits, self.length)


VectorLike = Union[int, F2Vector]


def as_bits(v: VectorLike, length: int | None = None) -> int:
    if isinstance(v, F2Vector):
        if length is not None and v.length != length:
            raise DimensionError(f"expected length {length}, got {v.length}")
        return v.bits
    if length is not None and (v < 0 or v >> length):
        raise DimensionError(f"vector does not fit in {length} coordinates")
    return v


def to_str(bits: int, length: int) -> str:
    return "".join("1" if (bits >> i) & 1 else "0" for i in range(length))


@dataclass(frozen=True)
class F2Matrix:
    cols: int
    data: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(self.data))
        limit = 1 << self.cols
        for r in self.data:
            if r < 0 or r >= limit:
                raise ValueError("row has bits beyond the column count")

    @property
    def rows(self) -> int:
        return len(self.data)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(cols, (0,) * rows)

    @classmethod
    def from_strings(cls, lines: Sequence[str]) -> "F2Matrix":
        vecs = [F2Vector.from_str(s) for s in lines]
        if not vecs:
            return cls(0, ())
        if len({v.length for v in vecs}) != 1:
            raise DimensionError("rows have different lengths")
        return cls(vecs[0].length, tuple(v.bits for v in vecs))

    @classmethod
    def from_vectors(cls, vecs: Sequence[F2Vector], cols: int | None = None) -> "F2Matrix":
        if cols is None:
            if not vecs:
                raise ValueError("cannot infer column count of an empty matrix")
            cols = vecs[0].length
        return cls(cols, tuple(as_bits(v, cols) for v in vecs))

    def row(self, i: int) -> F2Vector:
        return F2Vector(self.cols, self.data[i])

    def entry(self, i: int, j: int) -> int:
        return (self.data[i] >> j) & 1

    def vecmul(self, v: VectorLike) -> F2Vector:
        return F2Vector(self.cols, vecmat(as_bits(v, self.rows), self.data))

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return F2Matrix(other.cols, matmul_rows(self.data, other.data))

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        return F2Matrix(self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.rows, transpose_rows(self.data, self.cols))

    def lines(self) -> list[str]:
        return [to_str(r, self.cols) for r in self.data]

    def __str__(self) -> str:
        return "\n".join(self.lines())


def transpose_rows(rows: Sequence[int], ncols: int) -> tuple[int, ...]:
    out = [0] * ncols
    for i, r in enumerate(rows):
        for j in bits_of(r):
            out[j] |= 1 << i
    return tuple(out)


# ---------------------------------------------------------------------------
# Elimination


class Rref(NamedTuple):
    R: F2Matrix
    rank: int
    T: F2Matrix
    pivots: tuple[int, ...]


def rref_rows(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int], list[int]]:
    """Gauss-Jordan on raw rows; pivot columns are taken lowest index first.

    Returns ``(reduced, transform, pivots)`` where ``transform[i] . M`` equals
    ``reduced[i]`` and the first ``len(pivots)`` reduced rows are nonzero.
    """
    work = list(rows)
    trans = [1 << i for i in range(len(work))]
    pivots: list[int] = []
    r = 0
    n = len(work)
    for col in range(ncols):
        bit = 1 << col
        p = next((i for i in range(r, n) if work[i] & bit), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        trans[r], trans[p] = trans[p], trans[r]
        pr, pt = work[r], trans[r]
        for i in range(n):
            if i != r and work[i] & bit:
                work[i] ^= pr
                trans[i] ^= pt
        pivots.append(col)
        r += 1
        if r == n:
            break
    return work, trans, pivots


def rref(M: F2Matrix) -> Rref:
    reduced, trans, pivots = rref_rows(M.data, M.cols)
    return Rref(F2Matrix(M.cols, reduced), len(pivots), F2Matrix(M.rows, trans), tuple(pivots))


def rank_rows(rows: Sequence[int]) -> int:
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            p = pivots.get(low)
            if p is None:
                pivots[low] = r
                break
            r ^= p
    return len(pivots)


def rank(M: F2Matrix) -> int:
    return rank_rows(M.data)


class _Reducer:
    """Incremental echelon basis that remembers which input rows were combined."""

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}

    def reduce(self, v: int, combo: int = 0) -> tuple[int, int]:
        pivots = self.pivots
        # stored rows are keyed by their lowest bit; xoring one only touches
        # bits at or above its key, so a single ascending sweep suffices
        rest = v
        while rest:
            low = rest & -rest
            hit = pivots.get(low)
            if hit is not None:
                v ^= hit[0]
                combo ^= hit[1]
            rest = v & ~((low << 1) - 1)
        return v, combo

    def add(self, v: int, combo: int) -> bool:
        v, combo = self.reduce(v, combo)
        if not v:
            return False
        self.pivots[v & -v] = (v, combo)
        return True


def solve_rows(rows: Sequence[int], b: int) -> int | None:
    """Return ``x`` with ``x . M = b`` supported on the greedy pivot rows, or None."""
    red = _Reducer()
    for i, r in enumerate(rows):
        red.add(r, 1 << i)
    residual, combo = red.reduce(b)
    if residual:
        return None
    return combo


def solve(M: F2Matrix, b: VectorLike) -> F2Vector | None:
    if isinstance(b, F2Vector) and b.length != M.cols:
        raise DimensionError(f"right-hand side has length {b.length}, matrix has {M.cols} columns")
    x = solve_rows(M.data, as_bits(b, M.cols))
    return None if x is None else F2Vector(M.rows, x)


def inverse_rows(rows: Sequence[int]) -> tuple[int, ...]:
    n = len(rows)
    reduced, trans, pivots = rref_rows(rows, n)
    if len(pivots) != n:
        raise ValueError("matrix is singular")
    return tuple(trans)


def inverse(M: F2Matrix) -> F2Matrix:
    if M.rows != M.cols:
        raise DimensionError("inverse of a non-square matrix")
    return F2Matrix(M.cols, inverse_rows(M.data))


def kernel_rows(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis (unreduced) of ``{x : x . M = 0}``."""
    reduced, trans, pivots = rref_rows(rows, ncols)
    return trans[len(pivots):]


# ---------------------------------------------------------------------------
# Subspaces


def canonical_basis(vectors: Iterable[int], ambient: int) -> tuple[int, ...]:
    rows = [v for v in vectors if v]
    reduced, _, pivots = rref_rows(rows, ambient)
    return tuple(reduced[: len(pivots)])


@dataclass(frozen=True)
class Subspace:
    """A subspace of F2^ambient stored by its RREF basis.

    Equality of two values is equality of subspaces, since the RREF basis
    is unique.
    """

    ambient: int
    basis: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if canonical_basis(self.basis, self.ambient) != self.basis:
            raise ValueError("basis is not in reduced row-echelon form; use Subspace.span")

    @classmethod
    def span(cls, ambient: int, vectors: Iterable[VectorLike] = ()) -> "Subspace":
        vecs = [as_bits(v, ambient) for v in vectors]
        return cls(ambient, canonical_basis(vecs, ambient))

    @classmethod
    def full(cls, ambient: int) -> "Subspace":
        return cls(ambient, tuple(1 << i for i in range(ambient)))

    @classmethod
    def zero(cls, ambient: int) -> "Subspace":
        return cls(ambient, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple((b & -b).bit_length() - 1 for b in self.basis)

    def matrix(self) -> F2Matrix:
        return F2Matrix(self.ambient, self.basis)

    def __contains__(self, v: VectorLike) -> bool:
        return contains(self, v)

    def elements(self) -> Iterator[int]:
        return span_iter(self.basis)

    def __len__(self) -> int:
        return 1 << self.dim

    def coordinates(self, v: VectorLike) -> int | None:
        """Coefficients of ``v`` in the RREF basis (None if ``v`` is outside)."""
        v = as_bits(v, self.ambient)
        coeffs = 0
        for i, (b, p) in enumerate(zip(self.basis, self.pivots)):
            if (v >> p) & 1:
                v ^= b
                coeffs |= 1 << i
        return None if v else coeffs

    def image(self, rows: Sequence[int], ambient: int | None = None) -> "Subspace":
        """Image under ``v -> v . M``."""
        return Subspace.span(self.ambient if ambient is None else ambient,
                             (vecmat(b, rows) for b in self.basis))


def _check_same_ambient(U: Subspace, V: Subspace):
    if U.ambient != V.ambient:
        raise DimensionError(f"ambient dimensions differ: {U.ambient} vs {V.ambient}")


def contains(U: Subspace, v: VectorLike) -> bool:
    v = as_bits(v, U.ambient)
    for b, p in zip(U.basis, U.pivots):
        if (v >> p) & 1:
            v ^= b
    return v == 0


def subspace_sum(U: Subspace, V: Subspace) -> Subspace:
    _check_same_ambient(U, V)
    return Subspace.span(U.ambient, U.basis + V.basis)


def subspace_intersect(U: Subspace, V: Subspace) -> Subspace:
    _check_same_ambient(U, V)
    rows = U.basis + V.basis
    deps = kernel_rows(rows, U.ambient)
    low = mask(U.dim)
    return Subspace.span(U.ambient, (vecmat(x & low, U.basis) for x in deps))


def kernel(M: F2Matrix) -> Subspace:
    return Subspace.span(M.rows, kernel_rows(M.data, M.cols))


def is_subspace_of(U: Subspace, V: Subspace) -> bool:
    _check_same_ambient(U, V)
    return all(contains(V, b) for b in U.basis)


def complement_basis(sub: Sequence[int], whole: Sequence[int]) -> list[int]:
    """Vectors from ``whole`` extending a basis of span(sub) to span(sub + whole).

    Picks the earliest independent vectors of ``whole`` in order.
    """
    red = _Reducer()
    for v in sub:
        red.add(v, 0)
    return [w for w in whole if red.add(w, 0)]
