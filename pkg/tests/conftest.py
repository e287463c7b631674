import json
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tauext import corpus, linalg, rep
from tauext.algebra import path_algebra

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def alg_a():
    """2 -> 3"""
    return path_algebra(["2", "3"], [("beta", "2", "3")])


@pytest.fixture(scope="session")
def alg_b():
    """1 -> 2 -> 3 with alpha*beta = 0"""
    return path_algebra(["1", "2", "3"], [("alpha", "1", "2"), ("beta", "2", "3")], relations=["alpha*beta"])


@pytest.fixture(scope="session")
def alg_a3():
    return corpus.linear(3)


def random_invertible(d: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        g = rng.integers(0, p, size=(d, d))
        if linalg.rank(g, p) == d:
            return g


def conjugate(m: rep.Representation, rng: np.random.Generator) -> rep.Representation:
    """An isomorphic copy of ``m`` under a random change of basis at each vertex."""
    p = m.p
    gs = [random_invertible(d, p, rng) for d in m.dims]
    gi = [linalg.inverse(g, p) if g.size else g for g in gs]
    maps = []
    for (s, t), x in zip(m.algebra.quiver.arrow_ends, m.maps):
        maps.append(linalg.matmul(linalg.matmul(gs[t], x, p), gi[s], p) if x.size else x)
    return rep.Representation(m.algebra, m.dims, tuple(maps))


def indecomposables(alg):
    """All indecomposables of a corpus algebra (all uniserial there)."""
    out = []
    for v in alg.vertices:
        for q in corpus.uniserial_quotients(alg, v):
            if not any(rep.are_isomorphic(q, x) for x in out):
                out.append(q)
    return out


def load_figure(name: str) -> dict:
    return json.loads((FIXTURES / name).read_text())


def match_figure(poset, figure: dict) -> dict:
    """Map figure node names to poset indices by summand words and bricks.

    Returns the mapping; raises AssertionError on any mismatch.
    """
    def key(summands, bricks):
        return tuple(sorted(summands)), tuple(sorted(bricks))

    ours = {}
    for i, pair in enumerate(poset.nodes):
        k = key(pair.words(), poset.semibrick_labels(i))
        assert k not in ours, f"two nodes share {k}"
        ours[k] = i
    mapping = {}
    for name, node in figure["nodes"].items():
        k = key(node["summands"], node["semibrick"])
        assert k in ours, f"figure node {name} {k} not enumerated"
        mapping[name] = ours[k]
    assert len(mapping) == len(ours) == len(set(mapping.values()))
    want = {(mapping[a], mapping[b]) for a, b in figure["edges"]}
    got = {(a, b) for a, b, _ in poset.edges}
    assert got == want, f"edges differ: extra {got - want}, missing {want - got}"
    return mapping


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Record the outcome of an acceptance criterion for the summary lines."""
    def _record(number: int, ok: bool, detail: str = ""):
        ACCEPTANCE[number] = (ok, detail)
        return ok
    return _record


def acceptance_lines() -> list[str]:
    out = []
    for k in range(1, 9):
        ok, detail = ACCEPTANCE.get(k, (None, "not run"))
        status = "PASS" if ok else ("FAIL" if ok is False else "SKIP")
        out.append(f"criterion {k}: {status}  {detail}".rstrip())
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines():
            terminalreporter.write_line(line)
