import itertools

import numpy as np
import pytest

from tauext import corpus
from tauext.algebra import (
    AlgebraError,
    InfiniteDimensional,
    NonAdmissible,
    Quiver,
    Relation,
    build_algebra,
    path_algebra,
)
from tauext.formats import FormatError, parse_relation


def count_paths(alg_vertices, arrows, max_len):
    """Number of paths of each length in a quiver, by direct walking."""
    out = {0: len(alg_vertices)}
    walks = [[a] for a in arrows]
    for length in range(1, max_len + 1):
        out[length] = len(walks)
        walks = [w + [b] for w in walks for b in arrows if w[-1][2] == b[1]]
    return out


def test_example_dims(alg_a, alg_b):
    assert alg_a.dim == 3
    assert [alg_a.path_name(p) for p in alg_a.basis] == ["e2", "e3", "beta"]
    assert alg_b.dim == 5
    assert (alg_b.arrow("alpha") * alg_b.arrow("beta")).is_zero()


def test_linear_dims_match_path_count():
    for n in range(1, 6):
        alg = corpus.linear(n)
        assert alg.dim == n * (n + 1) // 2
        arrows = [(f"a{i}", str(i), str(i + 1)) for i in range(1, n)]
        assert sum(count_paths(alg.vertices, arrows, n).values()) == alg.dim


def test_cyclic_rad_square_zero():
    for n in range(1, 5):
        assert corpus.cyclic(n).dim == 2 * n


def test_path_convention(alg_a3):
    a1, a2 = alg_a3.arrow("a1"), alg_a3.arrow("a2")
    assert not (a1 * a2).is_zero()
    assert (a2 * a1).is_zero()
    assert str(a1 * a2) == "a1*a2"
    e1 = alg_a3.idempotent("1")
    assert e1 * a1 == a1
    assert (a1 * e1).is_zero()


def test_commutative_square_over_f3():
    alg = path_algebra(["1", "2", "3", "4"],
                       [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
                       p=3, relations=["a*b - c*d"])
    assert alg.dim == 9
    assert alg.path_element(["a", "b"]) == alg.path_element(["c", "d"])
    anti = path_algebra(["1", "2", "3", "4"],
                        [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
                        p=3, relations=["a*b + c*d"])
    assert anti.path_element(["a", "b"]) == anti.element(-anti.path_element(["c", "d"]).coeffs)


def test_associativity_and_unit():
    for alg in [corpus.linear(3), corpus.cyclic(3), corpus.linear(4, rad_square_zero=True)]:
        c = alg.structure
        n = alg.dim
        left = np.einsum("ijm,mkl->ijkl", c, c) % alg.p
        right = np.einsum("jkm,iml->ijkl", c, c) % alg.p
        assert np.array_equal(left, right)
        one = alg.one()
        for k in range(n):
            b = alg.basis_element(k)
            assert one * b == b and b * one == b


def test_loop_relations():
    alg = path_algebra(["1"], [("x", "1", "1")], relations=["x*x"])
    assert alg.dim == 2
    with pytest.raises(InfiniteDimensional):
        path_algebra(["1"], [("x", "1", "1")])


def test_errors():
    with pytest.raises(FormatError, match="admissible"):
        path_algebra(["1", "2"], [("a", "1", "2")], relations=["a"])
    q = Quiver(("1", "2"), (("a", "1", "2"),))
    with pytest.raises(NonAdmissible):
        build_algebra(q, [Relation(((1, ("a",)),))])
    with pytest.raises(AlgebraError):
        Quiver(("1", "1"))
    with pytest.raises(AlgebraError):
        Quiver(("1",), (("a", "1", "2"),))
    with pytest.raises(AlgebraError):
        path_algebra(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], relations=["a*b - b*a"])


def test_mixed_algebra_product(alg_a, alg_b):
    with pytest.raises(ValueError):
        alg_a.arrow("beta") * alg_b.arrow("beta")


def test_relation_text_roundtrip():
    for text in ["alpha*beta", "a*b - c*d", "2*a*b + c*d", "-a*b"]:
        assert parse_relation(text).text() == text


def test_pair_indices_partition(alg_b):
    seen = []
    for i, j in itertools.product(range(3), repeat=2):
        for k in alg_b.pair_indices(i, j):
            pth = alg_b.basis[k]
            assert (pth.source, pth.target) == (i, j)
            seen.append(k)
    assert sorted(seen) == list(range(alg_b.dim))
