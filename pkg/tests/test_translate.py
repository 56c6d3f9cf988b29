import pytest

from geodef.checks import standard_geometry
from geodef.errors import UnboundSymbol
from geodef.fol.syntax import free_vars, parse
from geodef.io import data_path, load_fol
from geodef.translate import SymbolBinding, field_vars, tr, verify_tr

SYMS = {"Col": 3, "lambda": 2}


@pytest.fixture(scope="module")
def gf3():
    return standard_geometry("gf(3)", 2, ("lambda",))


def test_field_vars():
    assert field_vars([1, 3], 2) == [1, 2, 5, 6]


def test_free_variables_become_blocks(gf3):
    phi = parse("exists v3 Col(v1, v2, v3)", SYMS)
    out = tr(phi, SymbolBinding.of(gf3))
    assert free_vars(out) == {1, 2, 3, 4}


@pytest.mark.parametrize(
    "text",
    [
        "Col(v1, v2, v3)",
        "v1 = v2",
        "forall v1 forall v2 Col(v1, v2, v2)",
        "exists v3 (!Col(v1, v2, v3) & lambda(v1, v3))",
        "forall v2 (lambda(v1, v2) <-> lambda(v2, v1))",
        "Col(v1, v2, v3) -> Col(v2, v1, v3) | v1 = v3",
    ],
)
def test_translation_preserves_truth(gf3, text):
    res = verify_tr(parse(text, SYMS), SymbolBinding.of(gf3), gf3)
    assert res.ok and res.exhaustive


def test_corpus_over_gf3(gf3):
    binding = SymbolBinding.of(gf3)
    phis = load_fol(data_path("tr_corpus.fol"), SYMS)
    assert len(phis) == 20
    assert all(verify_tr(phi, binding, gf3).ok for phi in phis)


def test_mutation_detected(gf3):
    phi = parse("Col(v1, v2, v3)", SYMS)
    res = verify_tr(phi, SymbolBinding.of(gf3).negated("Col"), gf3)
    assert not res.ok
    assert res.counterexample == {1: (0, 0), 2: (0, 0), 3: (0, 0)}


def test_sampling_path(gf3):
    phi = parse("Col(v1, v2, v3) <-> Col(v3, v2, v1)", SYMS)
    res = verify_tr(phi, SymbolBinding.of(gf3), gf3, sample_bound=200, seed=3)
    assert res.ok and not res.exhaustive and res.checked == 200


def test_unbound_symbol(gf3):
    with pytest.raises(UnboundSymbol):
        tr(parse("Bw(v1, v2, v3)"), SymbolBinding.of(gf3))
