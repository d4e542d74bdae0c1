"""Finite model of the weight-2 count for a 10-dimensional glue space.

Only the quadratic space and three lowest-weight constants are modelled:
the w = 0 class other than zero is never used, the w = 1 class contributes a
1-dimensional lowest space at weight 1/2, the w = 2 class an 8-dimensional
one at weight 1, and the identity block contributes 156 at weight 2.  These
constants are inputs, not derived here.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .certificate import CLOSED_FORM, ENUMERATION, Certificate
from .codeforge import verify_759_identity
from .f2linalg import Subspace
from .latticeforge import verify_196560_identity
from .orthogroup import all_commute, closure_order, levi_generators, o2_rank, stab_S_parts
from .quadspace import (
    ConditionError,
    QuadraticSpace,
    blocks,
    build_S,
    check_cond1,
    classify_w4,
    direct_sum_k,
    hyperbolic_space,
    standard_pair,
)

# identity-block weight-2 dimension and lowest-space dimensions by w-class
WEIGHT2_DIM = 156
LOWEST_DIMS = {0: 1, 1: 1, 2: 8}


@dataclass(frozen=True)
class RVModel:
    space: QuadraticSpace
    weight2_dim: int = WEIGHT2_DIM
    lowest_dims: dict = field(default_factory=lambda: dict(LOWEST_DIMS))

    def lowest_weight(self, u: int) -> Fraction:
        """w(u)/2, the lowest weight of the class u."""
        return Fraction(self.space.w(u), 2)

    def lowest_dim(self, u: int) -> int:
        return self.lowest_dims[self.space.w(u)]


def rv_space() -> RVModel:
    return RVModel(hyperbolic_space(5))


class Weight2Count(NamedTuple):
    terms: tuple[int, int, int]
    total: int


def _block_product(model: RVModel, v: int) -> int:
    prod = 1
    for u in blocks(model.space, 3, v):
        prod *= model.lowest_dim(u)
    return prod


def dim_weight2(S: Subspace, model: RVModel | None = None) -> Weight2Count:
    """3 x 156 plus, over every ``v in S`` with ``w^3(v) = 4``, the product of lowest dimensions.

    Sweeps all elements of S; the two nonzero terms are split by the
    number of zero blocks (one zero block, or none).
    """
    if model is None:
        model = rv_space()
    sp = model.space
    if S.ambient != 3 * sp.dim:
        raise ConditionError("S does not live in R(V)^3")
    bad = check_cond1(sp, 3, S)
    if bad is not None:
        raise ConditionError(f"S violates w^3 >= 4 at {bad:#x}")
    two_block = three_block = 0
    for v in S.elements():
        parts = blocks(sp, 3, v)
        if sum(sp.w(u) for u in parts) != 4:
            continue
        if 0 in parts:
            two_block += _block_product(model, v)
        else:
            three_block += _block_product(model, v)
    terms = (3 * model.weight2_dim, two_block, three_block)
    return Weight2Count(terms, sum(terms))


def closed_form_196884(m: int = 5) -> tuple[int, int, int]:
    """(3 x 156) + (3(2^m-1)) x 1^0 x 8^2 + (3(2^m-1) 2^{2m-2}) x 1^2 x 8^1."""
    n1 = 3 * (2 ** m - 1)
    n2 = n1 * 2 ** (2 * m - 2)
    return 3 * WEIGHT2_DIM, n1 * 1 ** 0 * 8 ** 2, n2 * 1 ** 2 * 8 ** 1


def moonshine_certificate() -> tuple[Weight2Count, Certificate]:
    model = rv_space()
    sp = model.space
    phi, psi = standard_pair(sp)
    S = build_S(sp, phi, psi, 3)
    count = dim_weight2(S, model)
    classes = classify_w4(sp, phi, psi, S)
    cert = Certificate("moonshine-dim")
    cert.fact("axioms", f"weight-2 dim {model.weight2_dim}; lowest dims by w-class {model.lowest_dims} (taken as given)")
    cert.fact("space_dim", sp.dim)
    cert.check("singular_vectors", 2 ** 9 + 2 ** 4, sum(1 for x in range(1 << sp.dim) if not sp.q(x)), ENUMERATION)
    cert.check("type_counts", (93, 23808), (len(classes.type_I), len(classes.type_II)), CLOSED_FORM)
    cert.check("breakdown", closed_form_196884(), count.terms, CLOSED_FORM)
    cert.check("total", 196884, count.total, CLOSED_FORM)
    return count, cert


# ---------------------------------------------------------------------------
# Three-way comparison


class AnalogyRow(NamedTuple):
    name: str
    terms: tuple[int, int, int]
    total: int
    expected: int


def analogy_rows() -> list[AnalogyRow]:
    code = verify_759_identity()
    lat = verify_196560_identity()
    voa = moonshine_certificate()[0]
    return [
        AnalogyRow("golay weight 8", code.terms_classified, code.sweep_total, 759),
        AnalogyRow("leech norm 4", lat.terms_classified, lat.sweep_total, 196560),
        AnalogyRow("weight 2", voa.terms, voa.total, 196884),
    ]


class ShapeRow(NamedTuple):
    m: int
    shape: str
    verified: str


def shape_rows() -> list[ShapeRow]:
    """Stabilizer shapes with the orders actually checked on the glue space."""
    out = []
    for m, shape in ((3, "2^6:(SL_3(2)xSym_3)"), (4, "2^3.(2^12:(SL_4(2)xSym_3))"), (5, "2^15.(2^20:(SL_5(2)xSym_3))")):
        sp = hyperbolic_space(m)
        phi, psi = standard_pair(sp)
        parts = stab_S_parts(sp, phi, psi, 3)
        o2 = parts.o2
        rank = o2_rank(o2)
        commute = all_commute(o2)
        if m == 3:
            ksp = direct_sum_k(sp, 3)
            order = closure_order([g.flatten(ksp) for g in parts.all()])
            verified = f"stabilizer order {order} by closure"
        elif m == 4:
            levi = closure_order(levi_generators(sp, phi, psi))
            verified = f"O2 rank {rank}, commuting {commute}, Levi order {levi}"
        else:
            verified = f"O2 rank {rank}, commuting {commute}, |S*| = 2^{3 * m}"
        out.append(ShapeRow(m, shape, verified))
    return out


def analogy_table(csv_format: bool = False) -> str:
    rows = analogy_rows()
    shapes = shape_rows()
    if csv_format:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["object", "term_zero", "term_I", "term_II", "total", "expected", "status"])
        for r in rows:
            status = "PASS" if r.total == r.expected == sum(r.terms) else "FAIL"
            out.writerow([r.name, *r.terms, r.total, r.expected, status])
        out.writerow([])
        out.writerow(["m", "shape", "verified"])
        for s in shapes:
            out.writerow([s.m, s.shape, s.verified])
        return buf.getvalue().rstrip("\n")
    width = max(len(r.name) for r in rows)
    lines = []
    for r in rows:
        status = "PASS" if r.total == r.expected == sum(r.terms) else "FAIL"
        lines.append(f"{r.name:<{width}}  {r.terms[0]:>6} + {r.terms[1]:>6} + {r.terms[2]:>6} = {r.total:>6}  {status}")
    for s in shapes:
        lines.append(f"m={s.m}: {s.shape}  [{s.verified}]")
    return "\n".join(lines)
