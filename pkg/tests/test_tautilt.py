import graphlib
import itertools

import pytest

from tauext import corpus, homology, rep, tautilt as T
from tauext.algebra import path_algebra

from conftest import indecomposables

CORPUS = corpus.algebras()


def node_by_words(poset, words, proj=None):
    for i, pair in enumerate(poset.nodes):
        if sorted(pair.words()) == sorted(words) and (proj is None or pair.proj_names == proj):
            return i
    raise KeyError(words)


def brute_count(alg):
    """Support tau-tilting pairs counted from subsets of indecomposables."""
    inds = indecomposables(alg)
    n = alg.n_vertices
    total = 0
    for r in range(n + 1):
        for pick in itertools.combinations(inds, r):
            m = rep.direct_sum(list(pick), alg)
            if homology.is_tau_rigid(m):
                zero = sum(1 for d in m.dims if d == 0)
                total += len(list(itertools.combinations(range(zero), n - r)))
    return total


@pytest.fixture(scope="module")
def poset_a(alg_a):
    return T.enumerate_stau(alg_a)


def test_stau_pair_examples(alg_a):
    assert T.is_stau_pair(rep.free_module(alg_a), [])
    assert T.is_stau_pair(rep.zero_module(alg_a), ["2", "3"])
    assert T.is_stau_pair(rep.simple(alg_a, "3"), ["2"])
    assert not T.is_stau_pair(rep.simple(alg_a, "3"), [])
    assert not T.is_stau_pair(rep.simple(alg_a, "3"), ["3"])


def test_mutation_examples(alg_a):
    top = T.top_pair(alg_a)
    p2, p3 = top.summands
    assert rep.loewy_word(p2) == "2/3"
    # P3 = S3 is not in Fac P2, so both exchanges go down
    t2 = T.left_mutation(top, 0)
    assert t2.words() == ["3"] and t2.proj_names == ["2"]
    t4 = T.left_mutation(top, 1)
    assert sorted(t4.words()) == ["2", "2/3"] and t4.proj_names == []
    k = t4.words().index("2/3")
    t5 = T.left_mutation(t4, k)
    assert t5.words() == ["2"] and t5.proj_names == ["3"]
    t3 = T.left_mutation(t5, 0)
    assert t3.words() == [] and t3.proj_names == ["2", "3"]
    with pytest.raises(T.NotDownward):
        T.left_mutation(t4, 1 - k)


def test_example_posets(alg_a, alg_b, poset_a):
    assert len(poset_a) == 5
    assert len(T.enumerate_stau(alg_b)) == 12
    assert len(T.enumerate_stau(corpus.linear(1))) == 2


def test_order_examples(alg_a, poset_a):
    t1 = poset_a.nodes[node_by_words(poset_a, ["2/3", "3"])]
    t2 = poset_a.nodes[node_by_words(poset_a, ["3"])]
    t4 = poset_a.nodes[node_by_words(poset_a, ["2/3", "2"])]
    bottom = T.bottom_pair(alg_a)
    assert all(T.fac_leq(bottom, x) for x in poset_a.nodes)
    assert T.fac_leq(t2, t1)
    assert not T.fac_leq(t2, t4)


def test_phi_examples(alg_a, alg_b, poset_a):
    t1 = poset_a.nodes[node_by_words(poset_a, ["2/3", "3"])]
    t4 = poset_a.nodes[node_by_words(poset_a, ["2/3", "2"])]
    assert T.phi(t1).words() == ["2", "3"]
    assert T.phi(t4).words() == ["2/3"]
    assert T.phi(T.top_pair(alg_b)).words() == ["1", "2", "3"]


def test_semibrick_examples(alg_a):
    s2, s3, p2 = (rep.simple(alg_a, "2"), rep.simple(alg_a, "3"), rep.projective(alg_a, "2"))
    assert T.is_semibrick([s2, s3])
    assert not T.is_semibrick([p2, s3])
    assert T.is_semibrick([])


def test_pt_lookup_examples(alg_a, poset_a):
    s2, s3 = rep.simple(alg_a, "2"), rep.simple(alg_a, "3")
    assert poset_a.nodes[T.pt_lookup([s2, s3], poset_a)].words() == ["2/3", "3"]
    assert poset_a.nodes[T.pt_lookup([], poset_a)].proj_names == ["2", "3"]
    assert poset_a.nodes[T.pt_lookup([s2], poset_a)].words() == ["2"]
    with pytest.raises(T.NotFound):
        T.pt_lookup([rep.projective(alg_a, "2"), s3], poset_a)


def test_ext_projective_examples(alg_a, poset_a):
    t4 = poset_a.nodes[node_by_words(poset_a, ["2/3", "2"])]
    for x in t4.summands:
        assert T.ext_projective_check(t4, x)
    assert not T.ext_projective_check(t4, rep.simple(alg_a, "3"))
    assert T.ext_projective_check(T.top_pair(alg_a), rep.projective(alg_a, "2"))


def test_sincere_examples(alg_a, poset_a):
    assert T.is_sincere(rep.free_module(alg_a))
    assert not T.is_sincere(rep.simple(alg_a, "3"))
    assert T.is_sincere(poset_a.nodes[node_by_words(poset_a, ["2/3", "2"])].module)


@pytest.mark.parametrize("name,alg", CORPUS, ids=[n for n, _ in CORPUS])
def test_poset_invariants(name, alg):
    poset = T.enumerate_stau(alg)
    n = alg.n_vertices
    nodes = poset.nodes
    assert brute_count(alg) == len(poset)
    for pair in nodes:
        assert T.is_stau_pair(pair.module, pair.proj_part)
        assert pair.is_tau_tilting() == T.is_sincere(pair.module)
    sources = {b for _, b, _ in poset.edges}
    targets = {a for a, _, _ in poset.edges}
    assert [i for i in range(len(nodes)) if i not in sources] == [0]
    sinks = [i for i in range(len(nodes)) if i not in targets]
    assert len(sinks) == 1 and nodes[sinks[0]].proj_part == tuple(range(n))
    leq = [[T.fac_leq(x, y) for y in nodes] for x in nodes]
    for a, b, _ in poset.edges:
        assert a != b and leq[b][a] and not leq[a][b]
        assert not any(leq[b][w] and leq[w][a] for w in range(len(nodes)) if w not in (a, b))
        ids_a = set(poset.node_summand_ids[a]) | {("P", v) for v in nodes[a].proj_part}
        ids_b = set(poset.node_summand_ids[b]) | {("P", v) for v in nodes[b].proj_part}
        assert len(ids_a & ids_b) == n - 1
    graph = {i: set() for i in range(len(nodes))}
    for a, b, _ in poset.edges:
        graph[b].add(a)
    list(graphlib.TopologicalSorter(graph).static_order())  # raises CycleError on a cycle
    bricks = [poset.semibrick(i) for i in range(len(nodes))]
    for sb in bricks:
        assert T.is_semibrick(sb.bricks)
    for i, j in itertools.combinations(range(len(nodes)), 2):
        assert not T.same_semibrick(bricks[i].bricks, bricks[j].bricks)


def test_hasse_edges_are_all_covers(alg_b):
    """Every cover relation of fac_leq appears as an edge."""
    poset = T.enumerate_stau(alg_b)
    nodes = poset.nodes
    m = len(nodes)
    leq = [[T.fac_leq(x, y) for y in nodes] for x in nodes]
    covers = set()
    for a, b in itertools.permutations(range(m), 2):
        if leq[b][a] and not leq[a][b]:
            if not any(leq[b][w] and leq[w][a] for w in range(m) if w not in (a, b)):
                covers.add((a, b))
    assert covers == {(a, b) for a, b, _ in poset.edges}


def test_determinism_and_workers(alg_b):
    runs = [T.enumerate_stau(alg_b, workers=w) for w in (1, 1, 3)]
    ref = runs[0]
    for other in runs[1:]:
        assert [other.node_label(i) for i in range(len(other))] == [ref.node_label(i) for i in range(len(ref))]
        assert other.edges == ref.edges


def test_cap_exceeded(alg_b):
    with pytest.raises(T.CapExceeded):
        T.enumerate_stau(alg_b, node_cap=4)
    with pytest.raises(T.CapExceeded):
        T.enumerate_stau(alg_b, dim_cap=3)


def test_registry_disambiguates():
    alg = corpus.cyclic(1)
    reg = T.ModuleRegistry(alg)
    s = rep.simple(alg, "1")
    assert reg.label(s) == "1"
    assert reg.label(rep.projective(alg, "1")) == "1/1"
    # a second module with the same word but not isomorphic gets a suffix
    k2 = path_algebra(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])
    reg3 = T.ModuleRegistry(k2)
    x = rep.Representation(k2, (1, 1), ((1,), (0,)))
    y = rep.Representation(k2, (1, 1), ((0,), (1,)))
    assert reg3.label(x) == "1/2"
    assert reg3.label(y) == "1/2#2"
    assert reg3.label(rep.Representation(k2, (1, 1), ((1,), (0,)))) == "1/2"
