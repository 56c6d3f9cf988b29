import json

import pytest

from geodef.cli import main
from geodef.io import data_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_affaut_gf2_fixture(capsys):
    code, out, _ = run(capsys, "affaut", "--geometry", "gf2fixture.geo")
    assert code == 0 and out.splitlines()[0] == "|AffAut| = 1"


def test_aut_gf4(capsys):
    code, out, _ = run(capsys, "aut", "--field", "gf(4)", "--dim", "2", "--geometry", "affine.geo")
    assert code == 0
    assert out.splitlines() == ["|Aut| = 5760", "  Frobenius exponent 0: 2880 maps", "  Frobenius exponent 1: 2880 maps"]


def test_aut_json(capsys):
    code, out, _ = run(capsys, "aut", "--geometry", "gf2fixture.geo", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "geodef.report/1" and data["size"] == 24
    assert data["decomposition"] == [] and "no decomposition" in data["decomposition_note"]


def test_definable_exit_codes(capsys):
    code, out, _ = run(capsys, "definable", "--geometry", "gf2fixture.geo", "--relation", "v1 = 1 & v2 = 1 & v3 = 1 : 1")
    assert code == 4 and "caveat" in out
    code, out, _ = run(capsys, "definable", "--field", "gf(3)", "--dim", "2", "--geometry", "affine.geo", "--relation", "@diagonal")
    assert code == 0 and out.count("True") == 4


def test_compare(capsys):
    code, out, _ = run(
        capsys, "compare", "--field", "gf(3)", "--dim", "2", "--geometry", "affine.geo", "--geometry", "lightlike.geo"
    )
    assert code == 0
    assert "left ⊊ right" in out and "witness in right: lambda" in out


def test_hasse_golden(capsys, tmp_path):
    target = tmp_path / "h.dot"
    code, _, _ = run(
        capsys, "hasse", "--field", "gf(5)", "--dim", "2",
        "--geometry", "affine.geo", "--geometry", "lightlike.geo", "--out", str(target),
    )
    assert code == 0
    assert target.read_text() == data_path("erlangen_gf5.dot").read_text()


def test_hasse_duplicate(capsys):
    code, out, _ = run(capsys, "hasse", "--field", "gf(3)", "--dim", "2", "--geometry", "affine.geo", "--geometry", "affine.geo")
    assert code == 0 and "->" not in out and '"affine=affine#2"' in out


@pytest.mark.parametrize(
    "argv,code",
    [
        (["aut", "--field", "gf(3)", "--dim", "2", "--geometry", "missing.geo"], 2),
        (["compare", "--field", "gf(3)", "--dim", "2", "--geometry", "gf2fixture.geo", "--geometry", "affine.geo"], 2),
        (["aut", "--field", "gf(7)", "--dim", "2", "--geometry", "affine.geo"], 3),
        (["aut", "--field", "gf(3)", "--dim", "2", "--geometry", "affine.geo", "--format", "dot"], 2),
        (["verify", "--only", "nonsense"], 2),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code and err.startswith("geodef:")


def test_verify_only(capsys):
    code, out, _ = run(capsys, "verify", "--only", "gf2-counterexample", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"] and [c["name"] for c in data["checks"]] == ["gf2-counterexample"]
