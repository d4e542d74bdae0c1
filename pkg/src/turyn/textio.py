"""Plain-text file formats.

A document is a sequence of sections.  Each section starts with a header
line (``qspace 2m``, ``subspace n``, ``isometry n``, ``wreath k 2m``,
``code n k``, ``gram2 n``) followed by its data lines.  ``#`` starts a
comment; blank lines are ignored.  F2 rows are 0/1 strings, character i
being coordinate i.  Wreath permutations are written 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .codeforge import BinaryCode
from .f2linalg import F2Matrix, Subspace, to_str
from .latticeforge import ExactLattice
from .orthogroup import BlockIsometry, Isometry, NotAnIsometryError
from .quadspace import QuadraticSpace

HEADERS = {"qspace": 1, "subspace": 1, "isometry": 1, "wreath": 2, "code": 2, "gram2": 1}


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Section:
    kind: str
    args: tuple[int, ...]
    line: int
    rows: list[tuple[int, str]] = field(default_factory=list)


def parse_document(text: str) -> list[Section]:
    sections: list[Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] in HEADERS:
            nargs = HEADERS[words[0]]
            if len(words) != nargs + 1:
                raise ParseError(f"header '{words[0]}' takes {nargs} integer argument(s)", lineno)
            try:
                args = tuple(int(w) for w in words[1:])
            except ValueError:
                raise ParseError(f"non-integer argument in header '{line}'", lineno) from None
            if any(a < 0 for a in args):
                raise ParseError("negative size in header", lineno)
            sections.append(Section(words[0], args, lineno))
            continue
        if not sections:
            raise ParseError(f"data before any header: {line!r}", lineno)
        sections[-1].rows.append((lineno, line))
    return sections


def _bit_row(lineno: int, text: str, width: int) -> int:
    if len(text) != width or any(ch not in "01" for ch in text):
        raise ParseError(f"expected a 0/1 row of length {width}, got {text!r}", lineno)
    return sum(1 << i for i, ch in enumerate(text) if ch == "1")


def _bit_rows(sec: Section, rows: Sequence[tuple[int, str]], width: int, count: int | None = None) -> list[int]:
    if count is not None and len(rows) != count:
        where = rows[-1][0] if rows else sec.line
        raise ParseError(f"'{sec.kind}' section expects {count} rows, found {len(rows)}", where)
    return [_bit_row(n, t, width) for n, t in rows]


def _require(sections: list[Section], kind: str) -> Section:
    for sec in sections:
        if sec.kind == kind:
            return sec
    raise ParseError(f"no '{kind}' section found")


def _find(sections: list[Section], kind: str) -> Section | None:
    return next((s for s in sections if s.kind == kind), None)


# ---------------------------------------------------------------------------
# Readers


def read_qspace(sec: Section) -> QuadraticSpace:
    (n,) = sec.args
    rows = _bit_rows(sec, sec.rows, n, n)
    try:
        return QuadraticSpace(n, F2Matrix(n, tuple(rows)))
    except ValueError as exc:
        raise ParseError(f"invalid quadratic form: {exc}", sec.line) from None


def read_subspace(sec: Section) -> Subspace:
    (n,) = sec.args
    return Subspace.span(n, _bit_rows(sec, sec.rows, n))


def read_isometry(sec: Section, space: QuadraticSpace) -> Isometry:
    (n,) = sec.args
    if n != space.dim:
        raise ParseError(f"isometry of dimension {n} does not match space of dimension {space.dim}", sec.line)
    rows = _bit_rows(sec, sec.rows, n, n)
    try:
        return Isometry(space, rows)
    except (NotAnIsometryError, ValueError) as exc:
        raise ParseError(str(exc), sec.line) from None


def read_wreath(sec: Section, space: QuadraticSpace) -> BlockIsometry:
    k, d = sec.args
    if d != space.dim:
        raise ParseError(f"block dimension {d} does not match space of dimension {space.dim}", sec.line)
    if not sec.rows:
        raise ParseError("missing permutation line", sec.line)
    lineno, perm_text = sec.rows[0]
    try:
        perm = [int(w) - 1 for w in perm_text.split()]
    except ValueError:
        raise ParseError(f"bad permutation line {perm_text!r}", lineno) from None
    if sorted(perm) != list(range(k)):
        raise ParseError(f"not a permutation of 1..{k}: {perm_text!r}", lineno)
    rest = sec.rows[1:]
    rows = _bit_rows(sec, rest, d, k * d)
    blocks = []
    for i in range(k):
        sub = rows[d * i: d * (i + 1)]
        try:
            blocks.append(Isometry(space, sub))
        except (NotAnIsometryError, ValueError) as exc:
            raise ParseError(f"block {i + 1}: {exc}", rest[d * i][0]) from None
    return BlockIsometry(tuple(perm), tuple(blocks))


def read_code(sec: Section) -> BinaryCode:
    n, k = sec.args
    rows = _bit_rows(sec, sec.rows, n, k)
    code = BinaryCode.from_rows(n, rows)
    if code.dim != k:
        raise ParseError(f"generator rows have rank {code.dim}, header says {k}", sec.line)
    return code


def read_gram2(sec: Section) -> ExactLattice:
    (n,) = sec.args
    if len(sec.rows) != n:
        raise ParseError(f"'gram2' section expects {n} rows, found {len(sec.rows)}", sec.line)
    rows = []
    for lineno, text in sec.rows:
        try:
            row = [int(w) for w in text.split()]
        except ValueError:
            raise ParseError(f"non-integer entry in {text!r}", lineno) from None
        if len(row) != n:
            raise ParseError(f"expected {n} integers, got {len(row)}", lineno)
        rows.append(tuple(row))
    try:
        return ExactLattice(n, tuple(rows))
    except ValueError as exc:
        raise ParseError(str(exc), sec.line) from None


def read_space_and_subspace(text: str) -> tuple[QuadraticSpace | None, Subspace]:
    """An optional ``qspace`` section (the base space) and a ``subspace`` section."""
    sections = parse_document(text)
    qsec = _find(sections, "qspace")
    return (read_qspace(qsec) if qsec else None), read_subspace(_require(sections, "subspace"))


# ---------------------------------------------------------------------------
# Writers


def f2_rows(rows: Iterable[int], width: int) -> list[str]:
    return [to_str(r, width) for r in rows]


def write_qspace(sp: QuadraticSpace) -> list[str]:
    return [f"qspace {sp.dim}"] + f2_rows(sp.q_upper.data, sp.dim)


def write_subspace(U: Subspace) -> list[str]:
    return [f"subspace {U.ambient}"] + f2_rows(U.basis, U.ambient)


def write_isometry(g: Isometry) -> list[str]:
    return [f"isometry {g.space.dim}"] + f2_rows(g.rows, g.space.dim)


def write_wreath(g: BlockIsometry) -> list[str]:
    d = g.base.dim
    out = [f"wreath {g.k} {d}", " ".join(str(s + 1) for s in g.sigma)]
    for h in g.blocks:
        out += f2_rows(h.rows, d)
    return out


def write_code(C: BinaryCode) -> list[str]:
    return [f"code {C.n} {C.dim}"] + f2_rows(C.basis, C.n)


def write_gram2(L: ExactLattice) -> list[str]:
    return [f"gram2 {L.n}"] + [" ".join(str(x) for x in row) for row in L.gram2]
