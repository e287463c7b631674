"""Support tau-tilting pairs, left mutation, the Hasse quiver and semibricks.

Enumeration starts at the top pair ``(A, 0)`` and closes under left
mutations that go down (``X`` not in ``Fac U``).  Every node of a finite
Hasse quiver is reachable from the top by such arrows.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import homology, linalg
from .algebra import BoundQuiverAlgebra
from .rep import (
    ModuleMap,
    Representation,
    decompose,
    direct_sum,
    endo_radical,
    enumerate_quotients,
    hom_basis,
    hom_dim,
    in_fac,
    indecomposables_isomorphic,
    loewy_word,
    projective,
    quotient,
    cokernel,
    trace,
)

DEFAULT_NODE_CAP = 10_000


class NotDownward(Exception):
    """The requested left mutation would move up in the order."""


class AmbiguousCompletion(RuntimeError):
    pass


class CapExceeded(RuntimeError):
    pass


class NotFound(LookupError):
    pass


class ModuleRegistry:
    """Iso classes of indecomposables seen so far, each with a stable label.

    Labels are Loewy words; a word shared by non-isomorphic modules gets a
    ``#k`` suffix in registration order.
    """

    def __init__(self, algebra: BoundQuiverAlgebra):
        self.algebra = algebra
        self.modules: list[Representation] = []
        self.labels: list[str] = []
        self._by_dims: dict[tuple, list[int]] = defaultdict(list)
        self._word_count: dict[str, int] = defaultdict(int)

    def find(self, m: Representation) -> int | None:
        for i in self._by_dims.get(m.dims, ()):
            if indecomposables_isomorphic(self.modules[i], m):
                return i
        return None

    def add(self, m: Representation) -> int:
        i = self.find(m)
        if i is not None:
            return i
        i = len(self.modules)
        self.modules.append(m)
        word = loewy_word(m)
        self._word_count[word] += 1
        k = self._word_count[word]
        self.labels.append(word if k == 1 else f"{word}#{k}")
        self._by_dims[m.dims].append(i)
        return i

    def label(self, m: Representation) -> str:
        return self.labels[self.add(m)]


def _summand_key(reg: ModuleRegistry | None, m: Representation):
    word = reg.label(m) if reg is not None else loewy_word(m)
    return (-m.total_dim, word)


@dataclass(frozen=True, eq=False)
class STPair:
    """A pair ``(M, P)`` with ``M`` given by its indecomposable summands and
    ``P = ⊕ P_v`` by vertex indices."""

    algebra: BoundQuiverAlgebra
    summands: tuple[Representation, ...]
    proj_part: tuple[int, ...] = ()

    @cached_property
    def module(self) -> Representation:
        return direct_sum(self.summands, self.algebra)

    @property
    def proj_names(self) -> list[str]:
        return [self.algebra.vertices[v] for v in self.proj_part]

    def is_tau_tilting(self) -> bool:
        return not self.proj_part

    def words(self) -> list[str]:
        return [loewy_word(m) for m in self.summands]

    def __repr__(self):
        words = " ".join(self.words()) or "0"
        return f"STPair({words}; P={self.proj_names})"


@dataclass(frozen=True)
class Semibrick:
    bricks: tuple[Representation, ...]

    def __len__(self):
        return len(self.bricks)

    def __iter__(self):
        return iter(self.bricks)

    def words(self) -> list[str]:
        return sorted(loewy_word(b) for b in self.bricks)


def top_pair(alg: BoundQuiverAlgebra) -> STPair:
    return STPair(alg, tuple(projective(alg, v) for v in range(alg.n_vertices)), ())


def bottom_pair(alg: BoundQuiverAlgebra) -> STPair:
    return STPair(alg, (), tuple(range(alg.n_vertices)))


def is_tau_rigid_pair(m: Representation, proj: Iterable) -> bool:
    alg = m.algebra
    if any(m.dims[alg.vertex(v)] for v in proj):
        return False
    return homology.is_tau_rigid(m)


def is_stau_pair(m: Representation, proj: Iterable = ()) -> bool:
    """``M`` tau-rigid, ``Hom(P, M) = 0`` and ``|M| + |P| = |A|``."""
    alg = m.algebra
    proj = {alg.vertex(v) for v in proj}
    if any(m.dims[v] for v in proj):
        return False
    if len(decompose(m)) + len(proj) != alg.n_vertices:
        return False
    return homology.is_tau_rigid(m)


def is_sincere(m: Representation) -> bool:
    return all(d > 0 for d in m.dims)


def universal_map(x: Representation, targets: Sequence[Representation]) -> ModuleMap:
    """``x -> ⊕_j U_j^{h_j}`` built from a basis of every ``Hom(x, U_j)``."""
    alg = x.algebra
    maps, copies = [], []
    for u in targets:
        for f in hom_basis(x, u):
            maps.append(f)
            copies.append(u)
    tgt = direct_sum(copies, alg)
    comps = []
    for v in range(alg.n_vertices):
        if maps:
            comps.append(np.concatenate([f.components[v] for f in maps], axis=0))
        else:
            comps.append(linalg.zeros(0, x.dims[v]))
    return ModuleMap(x, tgt, tuple(comps))


def left_mutation(pair: STPair, i: int) -> STPair:
    """Left mutation of ``pair`` at its ``i``-th module summand.

    Raises:
        NotDownward: ``X_i`` lies in ``Fac`` of the other summands.
        AmbiguousCompletion: the result is not uniquely determined.
    """
    alg = pair.algebra
    x = pair.summands[i]
    rest = pair.summands[:i] + pair.summands[i + 1:]
    u = direct_sum(rest, alg)
    if in_fac(x, u):
        raise NotDownward(f"summand {loewy_word(x)} lies in Fac of the others")
    coker = cokernel(universal_map(x, rest)).target
    fresh = []
    for y, mult in decompose(coker):
        if any(indecomposables_isomorphic(r, y) for r in rest):
            continue
        fresh.append((y, mult))
    if len(fresh) > 1 or (fresh and fresh[0][1] != 1):
        raise AmbiguousCompletion(
            f"cokernel of the approximation of {loewy_word(x)} has {len(fresh)} new summand classes")
    if fresh:
        return STPair(alg, rest + (fresh[0][0],), pair.proj_part)
    candidates = [v for v in range(alg.n_vertices) if v not in pair.proj_part and u.dims[v] == 0]
    if len(candidates) != 1:
        raise AmbiguousCompletion(f"{len(candidates)} vertices complete {pair!r} after removing a summand")
    return STPair(alg, rest, tuple(sorted(pair.proj_part + (candidates[0],))))


def fac_leq(p1: STPair, p2: STPair) -> bool:
    """``Fac M1 ⊆ Fac M2``, tested summand by summand through traces."""
    m2 = p2.module
    return all(in_fac(x, m2) for x in p1.summands)


def phi(pair: STPair) -> Semibrick:
    """The semibrick ``ind(M / rad_Γ M)`` with ``Γ = End(M)``."""
    bricks = []
    for i, x in enumerate(pair.summands):
        p = x.p
        cols = [[] for _ in x.dims]
        for j, y in enumerate(pair.summands):
            if j == i:
                continue
            for f in hom_basis(y, x):
                for v in range(len(x.dims)):
                    cols[v].append(f.components[v])
        for f in endo_radical(x):
            for v in range(len(x.dims)):
                cols[v].append(f.components[v])
        spaces = tuple(linalg.column_basis(np.concatenate(c, axis=1), p) if c else linalg.zeros(x.dims[v], 0)
                       for v, c in enumerate(cols))
        q = quotient(x, spaces).target
        if q.is_zero():
            continue
        if not any(indecomposables_isomorphic(b, q) for b in bricks):
            bricks.append(q)
    bricks.sort(key=lambda b: (-b.total_dim, loewy_word(b)))
    return Semibrick(tuple(bricks))


def is_brick(m: Representation) -> bool:
    return not m.is_zero() and hom_dim(m, m) == 1


def is_semibrick(mods: Iterable[Representation]) -> bool:
    mods = list(mods)
    for i, a in enumerate(mods):
        if not is_brick(a):
            return False
        for j, b in enumerate(mods):
            if i != j and hom_dim(a, b):
                return False
    return True


def same_semibrick(a: Sequence[Representation], b: Sequence[Representation]) -> bool:
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False
    unmatched = list(b)
    for x in a:
        for k, y in enumerate(unmatched):
            if indecomposables_isomorphic(x, y):
                unmatched.pop(k)
                break
        else:
            return False
    return True


@dataclass
class STPoset:
    """Support tau-tilting pairs (canonically ordered) and Hasse arrows.

    ``edges`` holds ``(source, target, mutated_summand_id)``; summand ids
    index ``registry``.
    """

    algebra: BoundQuiverAlgebra
    nodes: list[STPair]
    node_summand_ids: list[tuple[int, ...]]
    edges: list[tuple[int, int, int]]
    registry: ModuleRegistry
    levels: list[int]
    _phi: dict[int, Semibrick] = field(default_factory=dict, repr=False)

    def __len__(self):
        return len(self.nodes)

    def summand_labels(self, i: int) -> list[str]:
        return [self.registry.labels[k] for k in self.node_summand_ids[i]]

    def node_label(self, i: int) -> str:
        words = " ".join(self.summand_labels(i)) or "0"
        if self.nodes[i].proj_part:
            return f"{words} | {','.join(self.nodes[i].proj_names)}"
        return words

    def semibrick(self, i: int) -> Semibrick:
        if i not in self._phi:
            self._phi[i] = phi(self.nodes[i])
        return self._phi[i]

    def semibrick_labels(self, i: int) -> list[str]:
        return [self.registry.label(b) for b in self.semibrick(i)]

    def index_of(self, pair: STPair) -> int | None:
        key = _pair_key(self.registry, pair, register=False)
        if key is None:
            return None
        for i, ids in enumerate(self.node_summand_ids):
            if (ids, self.nodes[i].proj_part) == key:
                return i
        return None


def _pair_key(reg: ModuleRegistry, pair: STPair, register: bool = True):
    ids = []
    for m in pair.summands:
        k = reg.add(m) if register else reg.find(m)
        if k is None:
            return None
        ids.append(k)
    ids.sort(key=lambda k: (-reg.modules[k].total_dim, reg.labels[k]))
    return tuple(ids), tuple(sorted(pair.proj_part))


def _mutations(pair: STPair):
    out = []
    for i in range(len(pair.summands)):
        try:
            out.append((i, left_mutation(pair, i)))
        except NotDownward:
            continue
    return out


def enumerate_stau(alg: BoundQuiverAlgebra, node_cap: int = DEFAULT_NODE_CAP, workers: int = 1,
                   dim_cap: int | None = None) -> STPoset:
    """All support tau-tilting pairs with their Hasse arrows.

    Output order: distance from the top pair, then node label.  The result
    does not depend on ``workers``; only the per-level mutation work is
    spread over threads, registration stays sequential.
    """
    if dim_cap is not None and alg.dim > dim_cap:
        raise CapExceeded(f"algebra dimension {alg.dim} exceeds the cap {dim_cap}")
    reg = ModuleRegistry(alg)
    top = top_pair(alg)
    key0 = _pair_key(reg, top)
    keys = {key0: 0}
    nodes = [top]
    levels = [0]
    edges = []
    frontier = [0]
    level = 0
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier:
            level += 1
            pairs = [nodes[i] for i in frontier]
            results = list(pool.map(_mutations, pairs)) if pool else [_mutations(x) for x in pairs]
            nxt = []
            for src, muts in zip(frontier, results):
                for i, new in muts:
                    if dim_cap is not None and new.module.total_dim > dim_cap:
                        raise CapExceeded(f"module dimension {new.module.total_dim} exceeds the cap {dim_cap}")
                    key = _pair_key(reg, new)
                    if key not in keys:
                        if len(nodes) >= node_cap:
                            raise CapExceeded(f"more than {node_cap} support tau-tilting pairs")
                        keys[key] = len(nodes)
                        nodes.append(new)
                        levels.append(level)
                        nxt.append(keys[key])
                    edges.append((src, keys[key], reg.add(nodes[src].summands[i])))
            frontier = nxt
    finally:
        if pool:
            pool.shutdown()

    ids = {v: k for k, v in keys.items()}
    def label(i):
        words = " ".join(reg.labels[k] for k in ids[i][0]) or "0"
        return words + "|" + ",".join(alg.vertices[v] for v in ids[i][1])
    order = sorted(range(len(nodes)), key=lambda i: (levels[i], label(i)))
    pos = {old: new for new, old in enumerate(order)}
    canon_nodes = []
    canon_ids = []
    for old in order:
        sids, proj = ids[old]
        canon_nodes.append(STPair(alg, tuple(reg.modules[k] for k in sids), proj))
        canon_ids.append(sids)
    canon_edges = sorted((pos[a], pos[b], k) for a, b, k in edges)
    return STPoset(alg, canon_nodes, canon_ids, canon_edges, reg, [levels[i] for i in order])


def pt_lookup(sb: Sequence[Representation] | Semibrick, poset: STPoset) -> int:
    """Index of the node whose semibrick is ``sb``; this node's module is
    ``P(T(sb))``, the Ext-projectives of the torsion class ``sb`` generates."""
    bricks = list(sb)
    for i in range(len(poset)):
        if same_semibrick(poset.semibrick(i).bricks, bricks):
            return i
    raise NotFound("not a left finite semibrick of this algebra")


def ext_projective_check(pair: STPair, candidate: Representation, **caps) -> bool:
    """``candidate ∈ Fac M`` and ``Ext^1(candidate, Q) = 0`` for every quotient
    ``Q`` of ``M ⊕ M`` (finite enumeration; raises OracleCapExceeded)."""
    m = pair.module
    if not in_fac(candidate, m):
        return False
    for q in enumerate_quotients(direct_sum([m, m], m.algebra), **caps):
        if homology.ext1_dim(candidate, q):
            return False
    return True
