"""One-point extensions ``B = A[X]`` and instance checks of how support
tau-tilting theory of ``A`` lifts to ``B``.

The new vertex ``a`` is a source placed first; it gets one arrow
``a -> i_k`` per summand ``P_{i_k}`` of the projective cover of ``X`` and
one relation ``Σ_k α_k·q_kl`` per column of the minimal presentation
matrix ``(q_kl)``.  Then ``rad P_a ≅ X``.

A ``B``-module ``N`` is a triple ``(M, n, f)``: ``M`` its restriction to
``A``, ``n = dim N_a`` and ``f: X^n -> M`` read off the new arrows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import homology, linalg
from .algebra import Arrow, BoundQuiverAlgebra, Path, Quiver, Relation, build_algebra
from .rep import (
    ModuleMap,
    Representation,
    direct_sum,
    hom_basis,
    hom_dim,
    in_fac,
    injective,
    indecomposables_isomorphic,
    projective,
    simple,
    trace,
    trace_dims,
)
from .tautilt import (
    DEFAULT_NODE_CAP,
    NotFound,
    STPair,
    STPoset,
    enumerate_stau,
    is_semibrick,
    is_stau_pair,
    phi,
    pt_lookup,
)

GREEK = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
         "lambda", "mu", "nu", "xi", "omicron", "pi", "rho", "sigma", "tau", "upsilon", "phi",
         "chi", "psi", "omega")


def fresh_arrow_names(used, count: int) -> list[str]:
    used = set(used)
    out = []
    k = 0
    while len(out) < count:
        base = GREEK[k % len(GREEK)]
        name = base if k < len(GREEK) else f"{base}{k // len(GREEK)}"
        if name not in used:
            out.append(name)
            used.add(name)
        k += 1
    return out


@dataclass(frozen=True, eq=False)
class ExtensionResult:
    A: BoundQuiverAlgebra
    X: Representation
    B: BoundQuiverAlgebra
    a: str
    new_arrows: tuple[str, ...]
    cover: homology.ProjectiveCover
    # column k: coordinates in B of the k-th basis path of A
    embed: np.ndarray = field(repr=False)

    @property
    def a_index(self) -> int:
        return 0

    def old_vertex(self, v) -> int:
        """Index in ``B`` of vertex ``v`` of ``A``."""
        return self.A.vertex(v) + 1

    @property
    def is_connected_extension(self) -> bool:
        return bool(self.new_arrows)


def extend(A: BoundQuiverAlgebra, X: Representation, vertex_name: str = "a",
           arrow_names: Sequence[str] | None = None) -> ExtensionResult:
    if X.algebra is not A:
        raise ValueError("X must be a module over A")
    q = A.quiver
    if vertex_name in q.vertices or vertex_name in q.arrow_index:
        raise ValueError(f"name {vertex_name!r} is already used in A")
    pres = homology.min_presentation(X)
    cover_verts = pres.p0_vertices
    if arrow_names is None:
        arrow_names = fresh_arrow_names(set(q.arrow_index) | set(q.vertices) | {vertex_name}, len(cover_verts))
    arrow_names = tuple(arrow_names)
    if len(arrow_names) != len(cover_verts):
        raise ValueError(f"need {len(cover_verts)} arrow names, got {len(arrow_names)}")
    new = [Arrow(n, vertex_name, q.vertices[i]) for n, i in zip(arrow_names, cover_verts)]
    Bq = Quiver((vertex_name,) + q.vertices, tuple(new) + q.arrows)

    rels = list(A.relations)
    for l, j in enumerate(pres.p1_vertices):
        terms = []
        for k, i in enumerate(cover_verts):
            for c, idx in zip(pres.entries[k][l], A.pair_indices(i, j)):
                if c % A.p:
                    path = A.basis[idx]
                    names = (arrow_names[k],) + tuple(q.arrows[x].name for x in path.arrows)
                    terms.append((int(c) % A.p, names))
        if terms:
            rels.append(Relation(tuple(terms)))
    B = build_algebra(Bq, rels, A.p)

    emb = np.zeros((B.dim, A.dim), dtype=np.int64)
    shift = len(new)
    for k, pth in enumerate(A.basis):
        moved = Path(pth.length, pth.source + 1, pth.target + 1, tuple(x + shift for x in pth.arrows))
        for idx, c in B.reduce(moved).items():
            emb[idx, k] = c % B.p
    cover = homology.ProjectiveCover(pres.p0_vertices, pres.P0, pres.epi)
    return ExtensionResult(A, X, B, vertex_name, arrow_names, cover, emb)


def embed_module(ext: ExtensionResult, m: Representation) -> Representation:
    """An ``A``-module as a ``B``-module, zero at ``a``."""
    B = ext.B
    dims = (0,) + m.dims
    maps = [linalg.zeros(m.dims[ext.A.vertex(B.quiver.arrows[k].target)], 0) for k in range(len(ext.new_arrows))]
    return Representation(B, dims, tuple(maps) + m.maps)


def restrict_module(ext: ExtensionResult, n: Representation) -> Representation:
    k = len(ext.new_arrows)
    return Representation(ext.A, n.dims[1:], n.maps[k:])


def embed_pair(ext: ExtensionResult, pair: STPair, extra=(), extra_proj=()) -> STPair:
    summands = tuple(embed_module(ext, m) for m in pair.summands) + tuple(extra)
    proj = tuple(sorted({v + 1 for v in pair.proj_part} | set(extra_proj)))
    return STPair(ext.B, summands, proj)


@dataclass(frozen=True, eq=False)
class TripleModule:
    M: Representation
    n: int
    f: ModuleMap    # X^n -> M


def to_triple(ext: ExtensionResult, N: Representation) -> TripleModule:
    A, X = ext.A, ext.X
    M = restrict_module(ext, N)
    n = N.dims[0]
    Xn = direct_sum([X] * n, A)
    epi = ext.cover.epi
    comps = [[] for _ in range(A.n_vertices)]
    for e in range(n):
        # P0 -> M sending the k-th generator to alpha_k(e)
        images = [N.maps[k][:, e] for k in range(len(ext.new_arrows))]
        g = homology.map_from_generators(A, ext.cover.vertices, images, M, source=ext.cover.module)
        for w in range(A.n_vertices):
            sec = linalg.right_inverse(epi.components[w], A.p) if X.dims[w] else linalg.zeros(ext.cover.module.dims[w], 0)
            comps[w].append(linalg.matmul(g.components[w], sec, A.p))
    f = ModuleMap(Xn, M, tuple(np.concatenate(c, axis=1) if c else linalg.zeros(M.dims[w], 0)
                               for w, c in enumerate(comps)))
    return TripleModule(M, n, f)


def from_triple(ext: ExtensionResult, t: TripleModule) -> Representation:
    A, X = ext.A, ext.X
    gens = _generator_vectors(ext)
    new_maps = []
    for k, i in enumerate(ext.cover.vertices):
        cols = []
        for e in range(t.n):
            block = t.f.components[i][:, e * X.dims[i]:(e + 1) * X.dims[i]]
            cols.append(linalg.matmul(block, gens[k].reshape(-1, 1), A.p)[:, 0])
        new_maps.append(np.stack(cols, axis=1) if cols else linalg.zeros(t.M.dims[i], 0))
    return Representation(ext.B, (t.n,) + t.M.dims, tuple(new_maps) + t.M.maps)


def _generator_vectors(ext: ExtensionResult) -> list[np.ndarray]:
    """Image in ``X`` of the generator of each cover summand."""
    A = ext.A
    epi = ext.cover.epi
    verts = ext.cover.vertices
    out = []
    for k, i in enumerate(verts):
        # e_i opens the k-th summand's block at vertex i (trivial paths come first)
        col = sum(A.dim_pair(v, i) for v in verts[:k])
        out.append(np.array(epi.components[i][:, col], dtype=np.int64))
    return out


def simple_a(ext: ExtensionResult) -> Representation:
    return simple(ext.B, 0)


def projective_a(ext: ExtensionResult) -> Representation:
    return projective(ext.B, 0)


def simple_a_orthogonal(ext: ExtensionResult, M: Representation) -> bool:
    """``Hom_B(S_a, M) = 0 = Hom_B(M, S_a)`` for an ``A``-module ``M``."""
    mb = embed_module(ext, M) if M.algebra is ext.A else M
    sa = simple_a(ext)
    return not hom_basis(sa, mb) and not hom_basis(mb, sa)


def in_extended_torsion(ext: ExtensionResult, N: Representation, S, poset_A: STPoset) -> bool:
    """Whether ``N`` lies in ``T(S ∪ {S_a})``: its ``A``-part must lie in
    ``T(S) = Fac P(T(S))``; the rest of the triple is free."""
    node = poset_A.nodes[pt_lookup(S, poset_A)]
    return in_fac(restrict_module(ext, N), node.module)


def hom_to_fac_is_zero(X: Representation, pair: STPair) -> bool:
    """``Hom(X, Fac M) = 0``.

    A nonzero map ``X -> N`` with ``N ∈ Fac M`` composes with an injective
    envelope of ``N`` to a nonzero map into some ``I_v`` whose image lies in
    ``Fac M``, hence in ``trace(M, I_v)``.  So it suffices to look at those
    traces.
    """
    m = pair.module
    if m.is_zero() or X.is_zero():
        return True
    for v in range(X.algebra.n_vertices):
        t = trace(m, injective(X.algebra, v)).source
        if not t.is_zero() and hom_dim(X, t):
            return False
    return True


@dataclass
class CheckRow:
    node: int
    label: str
    check: str
    status: str          # "pass", "fail" or "n/a"
    witness: str = ""


@dataclass
class VerificationReport:
    ext: ExtensionResult
    poset_A: STPoset
    poset_B: STPoset
    rows: list[CheckRow]

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.poset_A), len(self.poset_B)

    @property
    def all_passed(self) -> bool:
        return all(r.status != "fail" for r in self.rows)

    def failures(self) -> list[CheckRow]:
        return [r for r in self.rows if r.status == "fail"]

    def witnesses(self, check: str) -> list[str]:
        return [r.witness for r in self.rows if r.check == check and r.status == "pass" and r.witness]

    def count_line(self) -> str:
        a, b = self.counts
        return f"{b} >= 2*{a}"


CHECKS = ("a", "b", "c", "d", "e", "f")


def _pair_words(pair: STPair, poset: STPoset | None = None) -> str:
    reg = poset.registry if poset is not None else None
    if reg is None:
        from .rep import loewy_word
        words = [loewy_word(m) for m in pair.summands]
    else:
        words = [reg.label(m) for m in pair.summands]
    return " ".join(words) or "0"


def _contains_summands(big: STPair, small: Sequence[Representation]) -> bool:
    pool = list(big.summands)
    for m in small:
        for k, x in enumerate(pool):
            if indecomposables_isomorphic(x, m):
                pool.pop(k)
                break
        else:
            return False
    return True


def verify_extension_theorems(A: BoundQuiverAlgebra, X: Representation, node_cap: int = DEFAULT_NODE_CAP,
                              dim_cap: int | None = None, vertex_name: str = "a", workers: int = 1,
                              ext: ExtensionResult | None = None) -> VerificationReport:
    """Run checks (a)-(f) on every node of the poset of ``A``.

    (a) ``S`` and ``S ∪ {S_a}`` are semibricks over ``B``.
    (b) ``(M, P ∪ {a})`` is a support tau-tilting pair over ``B``.
    (c) the node of ``B`` with semibrick ``S ∪ {S_a}`` has ``M`` as a summand.
    (d) if ``X ∈ Fac M``: ``(P_a ⊕ M, P)`` is a pair, tau-tilting when ``M`` was.
    (e) if ``Hom(X, Fac M) = 0``: ``(S_a ⊕ M, P)`` is a pair.
    (f) ``|poset_B| >= 2 |poset_A|``.

    Raises CapExceeded from either enumeration; individual failures only
    show up in the report.
    """
    if ext is None:
        ext = extend(A, X, vertex_name)
    pa = enumerate_stau(A, node_cap, workers=workers, dim_cap=dim_cap)
    pb = enumerate_stau(ext.B, node_cap, workers=workers, dim_cap=dim_cap)
    sa = simple_a(ext)
    Pa = projective_a(ext)
    rows = []

    def row(i, label, check, ok, witness=""):
        rows.append(CheckRow(i, label, check, "pass" if ok else "fail", witness))

    for i, pair in enumerate(pa.nodes):
        label = pa.node_label(i)
        S = [embed_module(ext, b) for b in pa.semibrick(i)]
        row(i, label, "a", is_semibrick(S) and is_semibrick(S + [sa]))

        mb = embed_pair(ext, pair, extra_proj=(ext.a_index,))
        row(i, label, "b", is_stau_pair(mb.module, mb.proj_part))

        try:
            j = pt_lookup(S + [sa], pb)
            ok = _contains_summands(pb.nodes[j], mb.summands)
            row(i, label, "c", ok, pb.node_label(j))
        except NotFound:
            row(i, label, "c", False, "no node")

        if in_fac(X, pair.module):
            cand = embed_pair(ext, pair, extra=(Pa,))
            ok = is_stau_pair(cand.module, cand.proj_part)
            if ok and pair.is_tau_tilting():
                ok = not cand.proj_part and all(d > 0 for d in cand.module.dims)
            row(i, label, "d", ok, f"P_{ext.a} + [{_pair_words(pair, pa)}]")
        else:
            rows.append(CheckRow(i, label, "d", "n/a"))

        if hom_to_fac_is_zero(X, pair):
            cand = embed_pair(ext, pair, extra=(sa,))
            row(i, label, "e", is_stau_pair(cand.module, cand.proj_part), f"S_{ext.a} + [{_pair_words(pair, pa)}]")
        else:
            rows.append(CheckRow(i, label, "e", "n/a"))

    a, b = len(pa), len(pb)
    rows.append(CheckRow(-1, "", "f", "pass" if b >= 2 * a else "fail", f"{b} >= 2*{a}"))
    return VerificationReport(ext, pa, pb, rows)
