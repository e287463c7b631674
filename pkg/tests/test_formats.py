import numpy as np
import pytest
from hypothesis import given, strategies as st

from tauext import corpus, formats, rep
from tauext.formats import FormatError

from conftest import FIXTURES, indecomposables


@pytest.mark.parametrize("name", ["a2.alg", "b_example.alg", "a3_linear.alg", "one_vertex.alg"])
def test_canonical_files_round_trip(name):
    text = (FIXTURES / name).read_text()
    alg = formats.parse_algebra(text)
    assert formats.emit_algebra(alg) == text
    again = formats.parse_algebra(formats.emit_algebra(alg))
    assert again.vertices == alg.vertices and again.dim == alg.dim
    assert np.array_equal(again.structure, alg.structure)


@pytest.mark.parametrize("name,alg", corpus.algebras(), ids=[n for n, _ in corpus.algebras()])
def test_corpus_round_trip(name, alg):
    text = formats.emit_algebra(alg)
    again = formats.parse_algebra(text)
    assert formats.emit_algebra(again) == text
    assert np.array_equal(again.structure, alg.structure)


def test_comments_and_whitespace():
    text = """
    # a comment
    field:   2
    vertices:  2    3   # trailing comment
    arrows:
        beta :  2->3
    relations:
    """
    alg = formats.parse_algebra(text)
    assert alg.vertices == ("2", "3") and alg.dim == 3


def test_field_override():
    alg = formats.read_algebra(FIXTURES / "a2.alg", field=3)
    assert alg.p == 3


@pytest.mark.parametrize("text,line,fragment", [
    ("field: 4\nvertices: 1\n", 1, "prime"),
    ("field: 2\nvertices: 1 2\narrows:\n  a: 1 -> 5\n", 4, "unknown vertex"),
    ("field: 2\nvertices: 1 2\narrows:\n  a 1 2\n", 4, "name: source -> target"),
    ("field: 2\nvertices: 1 2\narrows:\n  a: 1 -> 2\nrelations:\n  a*b\n", 6, "unknown arrow"),
    ("field: 2\nvertices: 1 2\narrows:\n  a: 1 -> 2\nrelations:\n  a\n", 6, "admissible"),
    ("field: 2\nvertices: 1\nvertices: 2\n", 3, "twice"),
    ("field: 2\nbogus\n", 2, "unexpected"),
])
def test_algebra_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(FormatError, match=fragment) as info:
        formats.parse_algebra(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_bad_relation_fixture():
    with pytest.raises(FormatError, match="admissible") as info:
        formats.read_algebra(FIXTURES / "bad_relation.alg")
    assert info.value.line == 7
    assert "bad_relation.alg" in str(info.value)


def test_module_constructors(alg_a):
    assert rep.are_isomorphic(formats.read_module(FIXTURES / "s2.mod", alg_a), rep.simple(alg_a, "2"))
    p2 = formats.read_module(FIXTURES / "p2.mod", alg_a)
    assert rep.are_isomorphic(p2, formats.read_module(FIXTURES / "p2_explicit.mod", alg_a))
    assert formats.read_module(FIXTURES / "zero.mod", alg_a).is_zero()
    m = formats.module_expression("sum[S(2), sum[P(2), I(3)]]", alg_a)
    assert m.dims == (3, 2)
    assert rep.are_isomorphic(m, rep.direct_sum([rep.simple(alg_a, "2"), rep.projective(alg_a, "2"),
                                                 rep.projective(alg_a, "2")]))


@pytest.mark.parametrize("text,fragment", [
    ("S(9)", "unknown vertex"),
    ("sum[S(2), P(3)", "unbalanced"),
    ("Q(2)", "cannot parse"),
    ("dims: 2=1 3=1\nmaps:\n  beta: [1 1]\n", "1x1"),
    ("dims: 2=1 3=1\nmaps:\n  gamma: [1]\n", "unknown arrow"),
])
def test_module_errors(alg_a, text, fragment):
    with pytest.raises(FormatError, match=fragment):
        formats.parse_module(text, alg_a)


def test_explicit_module_must_satisfy_relations(alg_b):
    text = "dims: 1=1 2=1 3=1\nmaps:\n  alpha: [1]\n  beta: [1]\n"
    with pytest.raises(FormatError, match="relations") as info:
        formats.parse_module(text, alg_b)
    assert info.value.line == 1


@pytest.mark.parametrize("alg", [corpus.linear(3), corpus.cyclic(3)], ids=["A3", "C3"])
def test_module_round_trip(alg):
    for m in indecomposables(alg) + [rep.zero_module(alg)]:
        again = formats.parse_module(formats.emit_module(m), alg)
        assert again.dims == m.dims
        assert all(np.array_equal(x, y) for x, y in zip(again.maps, m.maps))


@given(st.lists(st.integers(0, 5), min_size=1, max_size=3), st.integers(0, 2 ** 31))
def test_sum_expressions(picks, seed):
    alg = corpus.linear(3)
    names = [f"{k}({v})" for k in "SPI" for v in alg.vertices]
    rng = np.random.default_rng(seed)
    chosen = [names[(i + int(rng.integers(9))) % 9] for i in picks]
    m = formats.module_expression("sum[" + ", ".join(chosen) + "]", alg)
    parts = [formats.module_expression(c, alg) for c in chosen]
    assert rep.are_isomorphic(m, rep.direct_sum(parts))
