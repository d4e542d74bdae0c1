import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import seeds
from turyn.codeforge import hamming8
from turyn.latticeforge import sqrt2_e8
from turyn.orthogroup import random_block_isometry, random_isometry
from turyn.quadspace import direct_sum_k, hyperbolic_space
from turyn.textio import (
    ParseError,
    parse_document,
    read_code,
    read_gram2,
    read_isometry,
    read_qspace,
    read_space_and_subspace,
    read_subspace,
    read_wreath,
    write_code,
    write_gram2,
    write_isometry,
    write_qspace,
    write_subspace,
    write_wreath,
)


def one(text):
    (sec,) = parse_document(text)
    return sec


def test_qspace_round_trip():
    sp = direct_sum_k(hyperbolic_space(2), 3)
    back = read_qspace(one("\n".join(write_qspace(sp))))
    assert back.dim == sp.dim
    assert all(back.q(v) == sp.q(v) for v in range(0, 1 << 12, 37))


def test_comments_and_blank_lines():
    text = "# leading comment\n\nsubspace 4  # header comment\n1100\n\n0011 # row\n"
    U = read_subspace(one(text))
    assert U.dim == 2 and 0b0011 in U


@settings(max_examples=40)
@given(st.integers(1, 3), st.integers(1, 4), seeds)
def test_wreath_round_trip(m, k, seed):
    sp = hyperbolic_space(m)
    g = random_block_isometry(sp, k, random.Random(seed))
    lines = write_wreath(g)
    assert lines[1] == " ".join(str(s + 1) for s in g.sigma)
    assert read_wreath(one("\n".join(lines)), sp) == g


@settings(max_examples=40)
@given(st.integers(1, 4), seeds)
def test_isometry_round_trip(m, seed):
    sp = hyperbolic_space(m)
    g = random_isometry(sp, random.Random(seed))
    assert read_isometry(one("\n".join(write_isometry(g))), sp) == g


def test_code_and_gram2_round_trip():
    H = hamming8()
    assert read_code(one("\n".join(write_code(H)))).gen == H.gen
    L = sqrt2_e8()
    assert read_gram2(one("\n".join(write_gram2(L)))) == L


def test_space_and_subspace_document():
    text = "\n".join(write_qspace(hyperbolic_space(1)) + ["subspace 6", "100000"])
    sp, S = read_space_and_subspace(text)
    assert sp.dim == 2 and S.dim == 1
    sp, S = read_space_and_subspace("subspace 6\n100000\n")
    assert sp is None


@pytest.mark.parametrize("text,line", [
    ("subspace 4\n1100\n01x1\n", 3),
    ("subspace 4\n110\n", 2),
    ("1100\n", 1),
    ("subspace four\n", 1),
    ("subspace 4 4\n", 1),
    ("qspace 2\n01\n", 2),
    ("code 8 2\n11110000\n11110000\n", 1),
    ("gram2 2\n4 0\n0 x\n", 3),
    ("gram2 2\n4 0 0\n0 4\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        sections = parse_document(text)
        sec = sections[0]
        {"subspace": read_subspace, "qspace": read_qspace, "code": read_code, "gram2": read_gram2}[sec.kind](sec)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_wreath_parse_errors():
    sp = hyperbolic_space(1)
    with pytest.raises(ParseError, match="line 2"):
        read_wreath(one("wreath 2 2\n1 1\n10\n01\n10\n01\n"), sp)
    with pytest.raises(ParseError, match="block 1"):
        read_wreath(one("wreath 2 2\n1 2\n11\n01\n10\n01\n"), sp)
    with pytest.raises(ParseError):
        read_wreath(one("wreath 2 4\n1 2\n"), sp)


def test_isometry_rejects_non_isometry():
    with pytest.raises(ParseError):
        read_isometry(one("isometry 2\n11\n01\n"), hyperbolic_space(1))


def test_missing_section():
    with pytest.raises(ParseError, match="no 'subspace'"):
        read_space_and_subspace("qspace 2\n01\n00\n")
