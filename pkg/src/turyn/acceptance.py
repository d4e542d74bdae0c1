"""The acceptance checks, shared by ``turyn verify-all`` and the test suite.

Each check returns a :class:`CriterionResult`; its value comparisons are
exact and the stated runtime budget is part of passing.
"""

from __future__ import annotations

import random
import time
from typing import Callable, NamedTuple

from .codeforge import (
    GOLAY_HISTOGRAM,
    build_golay,
    coset_min_weight,
    dual_code,
    glue_space_C,
    is_doubly_even,
    repetition,
    verify_759_identity,
    weight_enumerator,
)
from .f2linalg import inverse_rows, kernel_rows, matmul_rows, rank_rows, solve_rows, subspace_intersect, vecmat
from .latticeforge import build_leech, verify_196560_identity
from .orthogroup import (
    NotMember,
    all_transvections,
    closure_order,
    canonicalize_S,
    find_complement,
    levi_lift,
    section_report,
    map_mts,
    map_singular,
    o2h_from_alternating,
    orthogonal_generators,
    preserves_form,
    random_block_isometry,
    random_isometry,
    stab_S_generators,
    wreath_decompose,
)
from .quadspace import build_S, classify_w4, direct_sum_k, hyperbolic_space, is_maximal_ts, standard_pair, wk_eval
from .voashadow import dim_weight2, rv_space

SEED = 20240611


class CriterionResult(NamedTuple):
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    limit: float | None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" / {self.limit:g}s" if self.limit is not None else ""
        return f"[{status}] {self.number:>2}. {self.title}: {self.detail} ({self.seconds:.2f}s{budget})"


def _run(number: int, title: str, limit: float | None, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failed criterion, reported with its message
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if limit is not None and elapsed > limit:
        ok = False
        detail += f"; over the {limit:g}s budget"
    return CriterionResult(number, title, ok, detail, elapsed, limit)


def _verdicts(parts: list[tuple[str, object, object]]) -> tuple[bool, str]:
    ok = all(exp == got for _, exp, got in parts)
    text = "; ".join(f"{name} {got}" + ("" if exp == got else f" (expected {exp})") for name, exp, got in parts)
    return ok, text


# ---------------------------------------------------------------------------


def criterion_1() -> CriterionResult:
    def body():
        build = build_golay()
        code = build.code
        hist = weight_enumerator(code)
        return _verdicts([
            ("length", 24, code.n),
            ("dim", 12, code.dim),
            ("doubly even", True, is_doubly_even(code) and all(w % 4 == 0 for w in hist)),
            ("self-dual", True, dual_code(code) == code),
            ("histogram", GOLAY_HISTOGRAM, hist),
        ])
    return _run(1, "Golay build", 1.0, body)


def criterion_2() -> CriterionResult:
    def body():
        rep = verify_759_identity()
        return _verdicts([
            ("closed form", (3, 84, 672), rep.terms_closed),
            ("classified", (3, 84, 672), rep.terms_classified),
            ("coset sweep", 759, rep.sweep_total),
            ("direct", 759, rep.direct_total),
        ])
    return _run(2, "759 identity", 1.0, body)


def criterion_3(full_enum: bool = False) -> CriterionResult:
    def body():
        build = build_leech(full_enum=full_enum)
        lat = build.lattice
        checks = {c.name: c.computed for c in build.certificate.checks}
        parts = [
            ("rank", 24, lat.n),
            ("even", True, lat.is_even()),
            ("det(Gram)", 1, lat.det_gram),
            ("norm 2", 0, checks["norm_2_count"]),
            ("norm 4", 196560, checks["norm_4_count"]),
        ]
        if full_enum:
            parts.append(("norm 4 direct", 196560, checks["norm_4_count_direct"]))
        return _verdicts(parts)
    return _run(3, "Leech build", None if full_enum else 30.0, body)


def criterion_4() -> CriterionResult:
    def body():
        rep = verify_196560_identity()
        return _verdicts([
            ("closed form", (720, 11520, 184320), rep.terms_closed),
            ("classified", (720, 11520, 184320), rep.terms_classified),
            ("coset sweep", 196560, rep.sweep_total),
        ])
    return _run(4, "196560 identity", 30.0, body)


def criterion_5() -> CriterionResult:
    def body():
        model = rv_space()
        phi, psi = standard_pair(model.space)
        count = dim_weight2(build_S(model.space, phi, psi, 3), model)
        return _verdicts([("breakdown", (468, 5952, 190464), count.terms), ("total", 196884, count.total)])
    return _run(5, "weight-2 dimension", 5.0, body)


def criterion_6() -> CriterionResult:
    def body():
        parts = []
        for m in range(1, 6):
            sp = hyperbolic_space(m)
            phi, psi = standard_pair(sp)
            c = classify_w4(sp, phi, psi)
            expect = (3 * (2 ** m - 1), 3 * (2 ** m - 1) * 2 ** (2 * m - 2))
            parts.append((f"m={m}", expect, (len(c.type_I), len(c.type_II))))
        return _verdicts(parts)
    return _run(6, "w^3 = 4 type counts", 10.0, body)


def criterion_7() -> CriterionResult:
    def body():
        sp2, sp3 = hyperbolic_space(2), hyperbolic_space(3)
        parts = [
            ("|O+(4,2)|", 72, closure_order(orthogonal_generators(sp2))),
            ("|O+(6,2)|", 40320, closure_order(all_transvections(sp3))),
        ]
        for m, expect in ((2, 288), (3, 64512)):
            sp = hyperbolic_space(m)
            phi, psi = standard_pair(sp)
            ksp = direct_sum_k(sp, 3)
            gens = [g.flatten(ksp) for g in stab_S_generators(sp, phi, psi, 3)]
            parts.append((f"stab(m={m},k=3)", expect, closure_order(gens)))
        ok, text = _verdicts(parts)
        t2 = closure_order(all_transvections(sp2))
        return ok, text + f"; transvections alone at m=2 generate {t2}"
    return _run(7, "group orders by closure", 60.0, body)


def canonicalization_inputs(m: int, trials: int = 100, seed: int = SEED):
    sp = hyperbolic_space(m)
    phi, psi = standard_pair(sp)
    S0 = build_S(sp, phi, psi, 3)
    rng = random.Random(seed + m)
    for _ in range(trials):
        h = random_block_isometry(sp, 3, rng)
        yield sp, h.image(S0)


def criterion_8() -> CriterionResult:
    def body():
        parts = []
        for m in (2, 3, 4):
            good = 0
            for sp, S in canonicalization_inputs(m):
                c = canonicalize_S(sp, S)
                if c.g.sigma == (0, 1, 2) and c.g.image(S) == build_S(sp, c.phi, c.psi, 3):
                    good += 1
            parts.append((f"m={m}", 100, good))
        return _verdicts(parts)
    return _run(8, "canonicalization round trips", 60.0, body)


def criterion_9() -> CriterionResult:
    def body():
        parts = []
        for m in (2, 3, 4):
            good = sum(1 for sp, S in canonicalization_inputs(m) if section_report(sp, S).ok)
            parts.append((f"m={m}", 100, good))
        return _verdicts(parts)
    return _run(9, "section invariants", None, body)


def non_member_example():
    """m=1, k=2: an isometry of R^2 moving (e1, 0) to the (1,1)-profile vector (11, 11)."""
    sp = hyperbolic_space(1)
    ksp = direct_sum_k(sp, 2)
    g = map_singular(ksp, 0b0001, 0b1111)
    return sp, g


def criterion_10() -> CriterionResult:
    def body():
        rng = random.Random(SEED)
        parts = []
        for m in (1, 2, 3):
            sp = hyperbolic_space(m)
            good = 0
            for _ in range(100):
                k = rng.randint(2, 4)
                h = random_block_isometry(sp, k, rng)
                if wreath_decompose(sp, k, h.flatten()) == h:
                    good += 1
            parts.append((f"round trip m={m}", 100, good))
        sp, g = non_member_example()
        res = wreath_decompose(sp, 2, g)
        witnessed = isinstance(res, NotMember) and wk_eval(sp, 2, res.witness) != wk_eval(sp, 2, g.apply(res.witness))
        parts.append(("non-member witness", True, witnessed))
        return _verdicts(parts)
    return _run(10, "wreath decomposition", 10.0, body)


def criterion_11() -> CriterionResult:
    def body():
        G = glue_space_C(repetition(8))
        code_ok = sum(1 for u in range(1 << G.dim) if coset_min_weight(G, u) == 2 * G.space.w(u))
        build = build_leech()
        GL = build.glue
        table_ok = 0
        shifted_ok = 0
        for u in range(1 << GL.dim):
            w = GL.space.w(u)
            hist = build.table[u]
            if min(hist) == w:
                table_ok += 1
            if min(GL.coset_norm_profile(u, max(w, 1))) == w:
                shifted_ok += 1
        return _verdicts([
            ("code cosets", 64, code_ok),
            ("lattice cosets (dual table)", 256, table_ok),
            ("lattice cosets (shifted enumeration)", 256, shifted_ok),
        ])
    return _run(11, "coset minima", 30.0, body)


# ---------------------------------------------------------------------------
# Randomized property run


def _random_mts(sp, rng):
    phi, _ = standard_pair(sp)
    return random_isometry(sp, rng).image(phi)


def _random_invertible(m: int, rng: random.Random) -> tuple[int, ...]:
    while True:
        rows = tuple(rng.getrandbits(m) for _ in range(m))
        if rank_rows(rows) == m:
            return rows


def _random_singular(sp, rng) -> int:
    while True:
        v = rng.getrandbits(sp.dim)
        if v and not sp.q(v):
            return v


def _prop_f2(rng: random.Random) -> bool:
    n = rng.randint(1, 12)
    rows = [rng.getrandbits(n) for _ in range(rng.randint(1, 12))]
    r = rank_rows(rows)
    ker = kernel_rows(rows, n)
    if len(ker) + r != len(rows) or any(vecmat(x, rows) for x in ker):
        return False
    x = rng.getrandbits(len(rows))
    b = vecmat(x, rows)
    sol = solve_rows(rows, b)
    if sol is None or vecmat(sol, rows) != b:
        return False
    sq = [rng.getrandbits(n) for _ in range(n)]
    if rank_rows(sq) == n:
        return matmul_rows(sq, inverse_rows(sq)) == tuple(1 << i for i in range(n))
    return True


def _prop_isometry(sp, rng) -> bool:
    g = random_isometry(sp, rng)
    v = rng.getrandbits(sp.dim)
    return preserves_form(sp, g.rows) and sp.q(g.apply(v)) == sp.q(v)


def _prop_map_mts(sp, rng) -> bool:
    p1, p2 = _random_mts(sp, rng), _random_mts(sp, rng)
    g = map_mts(sp, p1, p2)
    return preserves_form(sp, g.rows) and g.image(p1) == p2


def _prop_map_singular(sp, rng) -> bool:
    a, b = _random_singular(sp, rng), _random_singular(sp, rng)
    g = map_singular(sp, a, b)
    return preserves_form(sp, g.rows) and g.apply(a) == b


def _prop_complement(sp, rng) -> bool:
    phi = _random_mts(sp, rng)
    psi = find_complement(sp, phi)
    return is_maximal_ts(sp, psi) and subspace_intersect(phi, psi).dim == 0


def _prop_levi(sp, rng) -> bool:
    phi = _random_mts(sp, rng)
    psi = find_complement(sp, phi)
    alpha = _random_invertible(sp.m, rng)
    g = levi_lift(sp, phi, psi, alpha)
    acts = all(g.apply(a) == vecmat(alpha[i], phi.basis) for i, a in enumerate(phi.basis))
    return preserves_form(sp, g.rows) and g.image(phi) == phi and g.image(psi) == psi and acts


def _prop_o2h(sp, rng) -> bool:
    phi = _random_mts(sp, rng)
    psi = find_complement(sp, phi)
    m = sp.m
    X = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            if rng.getrandbits(1):
                X[i] |= 1 << j
                X[j] |= 1 << i
    g = o2h_from_alternating(sp, phi, psi, X)
    fixes = all(g.apply(a) == a for a in phi.basis)
    mod_phi = all((g.apply(c) ^ c) in phi for c in psi.basis)
    return preserves_form(sp, g.rows) and fixes and mod_phi


PROPERTIES = {
    "isometry": _prop_isometry,
    "map_mts": _prop_map_mts,
    "map_singular": _prop_map_singular,
    "find_complement": _prop_complement,
    "levi_lift": _prop_levi,
    "o2h_element": _prop_o2h,
}


def property_run(cases: int = 1000, seed: int = SEED) -> dict[str, tuple[int, int]]:
    """Round-robin over the property kinds with random m in 1..5; returns (passed, run) per kind."""
    rng = random.Random(seed)
    kinds = ["f2"] + list(PROPERTIES)
    tally = {k: [0, 0] for k in kinds}
    spaces = {m: hyperbolic_space(m) for m in range(1, 6)}
    for i in range(cases):
        kind = kinds[i % len(kinds)]
        if kind == "f2":
            ok = _prop_f2(rng)
        else:
            ok = PROPERTIES[kind](spaces[rng.randint(1, 5)], rng)
        tally[kind][1] += 1
        tally[kind][0] += bool(ok)
    return {k: (p, n) for k, (p, n) in tally.items()}


def criterion_12() -> CriterionResult:
    def body():
        tally = property_run()
        run = sum(n for _, n in tally.values())
        failed = sum(n - p for p, n in tally.values())
        bad = [k for k, (p, n) in tally.items() if p != n]
        return _verdicts([("cases", 1000, run), ("failures", 0, failed)] + [(k, "all pass", "failing") for k in bad])
    return _run(12, "property suites", None, body)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5, 6: criterion_6,
    7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10, 11: criterion_11, 12: criterion_12,
}


def run_all(full_enum: bool = False, only: list[int] | None = None) -> list[CriterionResult]:
    out = []
    for number, fn in CRITERIA.items():
        if only and number not in only:
            continue
        out.append(fn(full_enum) if number == 3 else fn())
    return out
