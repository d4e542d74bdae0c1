import pytest

from turyn.cli import main
from turyn.textio import parse_document, read_qspace, read_subspace, read_wreath
from turyn.quadspace import build_S, check_cond1


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_qspace_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "qspace", "gen", "--m", "2")
    assert code == 0
    sp = read_qspace(parse_document(out)[0])
    assert sp.dim == 4
    target = tmp_path / "r3.q"
    assert run(capsys, "qspace", "gen", "--m", "2", "--k", "3", "--out", str(target))[0] == 0
    assert read_qspace(parse_document(target.read_text())[0]).dim == 12


def test_random_s_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.sub", tmp_path / "b.sub"
    assert run(capsys, "random-s", "--m", "3", "--seed", "7", "--out", str(a))[0] == 0
    assert run(capsys, "random-s", "--m", "3", "--seed", "7", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    _, default1, _ = run(capsys, "random-s", "--m", "2")
    _, default2, _ = run(capsys, "random-s", "--m", "2")
    assert default1 == default2
    sections = parse_document(a.read_text())
    sp, S = read_qspace(sections[0]), read_subspace(sections[1])
    assert check_cond1(sp, 3, S) is None


def test_canon_round_trip(capsys, tmp_path):
    sub = tmp_path / "s.sub"
    run(capsys, "random-s", "--m", "3", "--seed", "7", "--out", str(sub))
    out_file = tmp_path / "g.txt"
    code, out, _ = run(capsys, "canon", "--in", str(sub), "--out", str(out_file))
    assert code == 0 and "verified" in out
    sections = parse_document(out_file.read_text())
    doc = parse_document(sub.read_text())
    sp, S = read_qspace(doc[0]), read_subspace(doc[1])
    g = read_wreath(sections[0], sp)
    phi, psi = read_subspace(sections[1]), read_subspace(sections[2])
    assert g.image(S) == build_S(sp, phi, psi, 3)


def test_canon_errors(capsys, tmp_path):
    bad = tmp_path / "bad.sub"
    bad.write_text("subspace 6\n0101x0\n")
    code, _, err = run(capsys, "canon", "--in", str(bad))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "canon", "--in", str(tmp_path / "missing"))
    assert code == 2
    # not maximal: the library's diagnostic comes through with exit 1
    small = tmp_path / "small.sub"
    small.write_text("subspace 6\n100000\n")
    code, _, err = run(capsys, "canon", "--in", str(small))
    assert code == 1 and err.startswith("error:")


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "random-s")[0] == 2
    assert run(capsys, "qspace", "gen", "--m", "0")[0] == 2
    assert run(capsys, "stab-order", "--m", "2", "--k", "2")[0] == 2


def test_golay(capsys, tmp_path):
    out_file = tmp_path / "golay.code"
    code, out, _ = run(capsys, "golay", "--out", str(out_file))
    assert code == 0
    assert "weight_8_count expected=759 computed=759" in out
    assert out.rstrip().endswith("status: PASS")
    assert out_file.read_text().startswith("code 24 12")


def test_leech(capsys, tmp_path):
    out_file = tmp_path / "leech.g2"
    code, out, _ = run(capsys, "leech", "--out", str(out_file))
    assert code == 0
    assert "norm_4_count expected=196560 computed=196560" in out
    assert out_file.read_text().startswith("gram2 24")


def test_moonshine_dim(capsys):
    code, out, _ = run(capsys, "moonshine-dim")
    assert code == 0
    assert "breakdown: 468 + 5952 + 190464" in out and "total: 196884" in out


def test_stab_order(capsys):
    code, out, _ = run(capsys, "stab-order", "--m", "2", "--k", "3")
    assert code == 0
    assert "closure_order: 144" in out and "shape_order: 144" in out
    code, out, _ = run(capsys, "stab-order", "--m", "4")
    assert code == 0 and "not computed" in out


def test_closure_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("TURYN_MAX_CLOSURE", "10")
    code, out, _ = run(capsys, "stab-order", "--m", "2")
    assert code == 0 and "closure_order: not computed" in out


def test_analogy(capsys):
    code, out, _ = run(capsys, "analogy", "--csv")
    assert code == 0 and out.startswith("object,")


def test_verify_all_subset(capsys):
    code, out, _ = run(capsys, "verify-all", "--only", "1", "2")
    assert code == 0
    assert out.count("[PASS]") == 2 and "overall: PASS" in out


def test_output_is_byte_identical(capsys):
    first = run(capsys, "golay")[1]
    assert run(capsys, "golay")[1] == first
