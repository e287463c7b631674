"""Projective presentations, the Nakayama functor, AR translates and Ext^1.

A map ``P_j -> P_i`` between indecomposable projectives is determined by the
image of ``e_j``, a combination ``q`` of basis paths ``i -> j``.  The
Nakayama functor sends it to ``I_j -> I_i``, which at each vertex ``w`` is
the transpose of right multiplication by ``q`` (paths ``w -> i`` to paths
``w -> j``).  ``tau`` applies this entrywise to a minimal presentation;
``tau_inv`` goes the other way from a minimal injective copresentation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg
from .algebra import BoundQuiverAlgebra
from .rep import (
    ModuleMap,
    Representation,
    cokernel,
    direct_sum,
    hom_dim,
    injective,
    kernel,
    projective,
    radical_spaces,
    socle_spaces,
    zero_map,
)


def _complement(sub: np.ndarray, dim: int, p: int) -> np.ndarray:
    """Standard basis vectors extending the columns of ``sub`` to a basis."""
    cols = [sub[:, j] for j in range(sub.shape[1])]
    picked = []
    r = len(cols)
    for i in range(dim):
        e = np.zeros(dim, dtype=np.int64)
        e[i] = 1
        if linalg.rank(np.stack(cols + [e], axis=1), p) > r:
            cols.append(e)
            picked.append(e)
            r += 1
        if r == dim:
            break
    return np.stack(picked, axis=1) if picked else linalg.zeros(dim, 0)


def map_from_generators(alg: BoundQuiverAlgebra, vertices: Sequence[int], images: Sequence[np.ndarray],
                        target: Representation, source: Representation | None = None) -> ModuleMap:
    """The map ``⊕ P_{v_k} -> target`` sending ``e_{v_k}`` to ``images[k]``."""
    p = alg.p
    if source is None:
        source = direct_sum([projective(alg, v) for v in vertices], alg)
    comps = []
    for w in range(alg.n_vertices):
        blocks = []
        for v, x in zip(vertices, images):
            cols = [linalg.matmul(target.path_matrix(alg.basis[k]), x.reshape(-1, 1), p)[:, 0]
                    for k in alg.pair_indices(v, w)]
            if cols:
                blocks.append(np.stack(cols, axis=1))
        comps.append(np.concatenate(blocks, axis=1) if blocks else linalg.zeros(target.dims[w], 0))
    return ModuleMap(source, target, tuple(comps))


def top_generators(m: Representation) -> tuple[list[int], list[np.ndarray]]:
    """Vertices and vectors lifting a basis of ``top m``, in vertex order."""
    rad = radical_spaces(m)
    verts, vecs = [], []
    for v, d in enumerate(m.dims):
        c = _complement(rad[v], d, m.p)
        for j in range(c.shape[1]):
            verts.append(v)
            vecs.append(c[:, j])
    return verts, vecs


@dataclass(frozen=True)
class ProjectiveCover:
    vertices: tuple[int, ...]
    module: Representation   # P0
    epi: ModuleMap           # P0 -> M


def projective_cover(m: Representation) -> ProjectiveCover:
    verts, vecs = top_generators(m)
    epi = map_from_generators(m.algebra, verts, vecs, m)
    return ProjectiveCover(tuple(verts), epi.source, epi)


def _generator_offsets(alg: BoundQuiverAlgebra, vertices: Sequence[int], w: int) -> list[int]:
    offs = [0]
    for v in vertices:
        offs.append(offs[-1] + alg.dim_pair(v, w))
    return offs


@dataclass(frozen=True)
class ProjPresentation:
    """``P1 --d--> P0 --epi--> M -> 0``, minimal.

    ``entries[k][l]`` holds the path coordinates (over
    ``pair_indices(p0_vertices[k], p1_vertices[l])``) of the component of
    ``d`` from the ``l``-th summand of P1 to the ``k``-th summand of P0.
    """

    p1_vertices: tuple[int, ...]
    p0_vertices: tuple[int, ...]
    P1: Representation
    P0: Representation
    d: ModuleMap
    epi: ModuleMap
    entries: tuple[tuple[np.ndarray, ...], ...]


def path_entries(alg: BoundQuiverAlgebra, d: ModuleMap, src_vertices, dst_vertices):
    """Path-coordinate matrix of a map between sums of indecomposable projectives."""
    rows = []
    for k, i in enumerate(dst_vertices):
        row = []
        for l, j in enumerate(src_vertices):
            src_offs = _generator_offsets(alg, src_vertices, j)
            dst_offs = _generator_offsets(alg, dst_vertices, j)
            # column of e_j in the l-th summand; e_j is the first basis path j -> j
            col = d.components[j][:, src_offs[l]]
            row.append(np.array(col[dst_offs[k]:dst_offs[k + 1]], dtype=np.int64))
        rows.append(tuple(row))
    return tuple(rows)


def min_presentation(m: Representation) -> ProjPresentation:
    alg = m.algebra
    cov = projective_cover(m)
    inc = kernel(cov.epi)
    k_verts, k_vecs = top_generators(inc.source)
    images = [linalg.matmul(inc.components[v], x.reshape(-1, 1), alg.p)[:, 0] for v, x in zip(k_verts, k_vecs)]
    d = map_from_generators(alg, k_verts, images, cov.module)
    entries = path_entries(alg, d, k_verts, cov.vertices)
    return ProjPresentation(tuple(k_verts), cov.vertices, d.source, cov.module, d, cov.epi, entries)


def _right_mult_dual(alg: BoundQuiverAlgebra, q: np.ndarray, i: int, j: int, w: int) -> np.ndarray:
    """Component at ``w`` of ``ν(q): I_j -> I_i`` for ``q`` in span(paths i -> j)."""
    src = alg.pair_indices(w, i)
    dst = alg.pair_indices(w, j)
    qpaths = alg.pair_indices(i, j)
    r = linalg.zeros(len(dst), len(src))
    for c, qk in zip(q, qpaths):
        if not c:
            continue
        for b, rk in enumerate(src):
            prod = alg.structure[rk, qk]
            for a, dk in enumerate(dst):
                r[a, b] += c * prod[dk]
    return (r % alg.p).T


def nakayama_map(alg: BoundQuiverAlgebra, entries, src_vertices, dst_vertices) -> ModuleMap:
    """``ν`` of the map ``⊕ P_{src} -> ⊕ P_{dst}`` with the given path entries."""
    src = direct_sum([injective(alg, v) for v in src_vertices], alg)
    dst = direct_sum([injective(alg, v) for v in dst_vertices], alg)
    comps = []
    for w in range(alg.n_vertices):
        blocks = [[_right_mult_dual(alg, entries[k][l], i, j, w) for l, j in enumerate(src_vertices)]
                  for k, i in enumerate(dst_vertices)]
        if blocks and src_vertices:
            comps.append(np.block(blocks) if dst.dims[w] and src.dims[w] else linalg.zeros(dst.dims[w], src.dims[w]))
        else:
            comps.append(linalg.zeros(dst.dims[w], src.dims[w]))
    return ModuleMap(src, dst, tuple(comps))


@dataclass(frozen=True)
class TauResult:
    module: Representation
    presentation: ProjPresentation
    nu_d: ModuleMap


def tau(m: Representation) -> TauResult:
    """AR translate: kernel of ``ν d`` for a minimal presentation ``d``."""
    pres = min_presentation(m)
    nu = nakayama_map(m.algebra, pres.entries, pres.p1_vertices, pres.p0_vertices)
    return TauResult(kernel(nu).source, pres, nu)


def nakayama_module(m: Representation) -> Representation:
    """``ν M = coker(ν d)``."""
    return cokernel(tau(m).nu_d).target


@dataclass(frozen=True)
class InjectiveEnvelope:
    vertices: tuple[int, ...]
    module: Representation   # I0
    mono: ModuleMap          # M -> I0


def injective_envelope(m: Representation) -> InjectiveEnvelope:
    alg = m.algebra
    p = m.p
    soc = socle_spaces(m)
    verts, funcs = [], []
    for v, d in enumerate(m.dims):
        s = soc[v]
        if s.shape[1] == 0:
            continue
        basis = np.concatenate([s, _complement(s, d, p)], axis=1)
        dual = linalg.inverse(basis, p)
        for r in range(s.shape[1]):
            verts.append(v)
            funcs.append(dual[r])
    target = direct_sum([injective(alg, v) for v in verts], alg)
    comps = []
    for w in range(alg.n_vertices):
        rows = []
        for v, phi in zip(verts, funcs):
            for k in alg.pair_indices(w, v):
                rows.append(linalg.matmul(phi.reshape(1, -1), m.path_matrix(alg.basis[k]), p)[0])
        comps.append(np.stack(rows) if rows else linalg.zeros(0, m.dims[w]))
    return InjectiveEnvelope(tuple(verts), target, ModuleMap(m, target, tuple(comps)))


def injective_entries(alg: BoundQuiverAlgebra, g: ModuleMap, src_vertices, dst_vertices):
    """For ``g: ⊕ I_{src} -> ⊕ I_{dst}``, ``entries[k][l]`` are the
    coordinates of the path ``q`` (over pair_indices(dst_l, src_k)) with
    ``g_{lk} = ν(q)``."""
    out = []
    for k, i in enumerate(src_vertices):
        row = []
        for l, j in enumerate(dst_vertices):
            # component at vertex j; read the e_j coordinate of the l-th target summand
            src_offs = [0]
            for v in src_vertices:
                src_offs.append(src_offs[-1] + alg.dim_pair(j, v))
            dst_offs = [0]
            for v in dst_vertices:
                dst_offs.append(dst_offs[-1] + alg.dim_pair(j, v))
            row_idx = dst_offs[l]  # e_j is the first basis path j -> j
            vec = g.components[j][row_idx, src_offs[k]:src_offs[k + 1]]
            row.append(np.array(vec, dtype=np.int64))
        out.append(tuple(row))
    return tuple(out)


def tau_inv(m: Representation) -> Representation:
    """Inverse AR translate: ``coker ν^{-1}(e)`` for a minimal injective
    copresentation ``0 -> M -> I0 --e--> I1``."""
    alg = m.algebra
    env0 = injective_envelope(m)
    proj = cokernel(env0.mono)
    env1 = injective_envelope(proj.target)
    e = proj.then(env1.mono)
    entries = injective_entries(alg, e, env0.vertices, env1.vertices)
    p0 = direct_sum([projective(alg, v) for v in env1.vertices], alg)
    # assemble the generator image of e_{i_k} inside (⊕ P_{j_l})_{i_k}
    gens = []
    for k, i in enumerate(env0.vertices):
        parts = [entries[k][l] for l in range(len(env1.vertices))]
        gens.append(np.concatenate(parts) if parts else np.zeros(0, np.int64))
    if not env0.vertices:
        return cokernel(zero_map(direct_sum([], alg), p0)).target
    f = map_from_generators(alg, env0.vertices, gens, p0)
    return cokernel(f).target


def is_projective(m: Representation) -> bool:
    return projective_cover(m).module.total_dim == m.total_dim


def is_injective(m: Representation) -> bool:
    return injective_envelope(m).module.total_dim == m.total_dim


def syzygy(m: Representation) -> ModuleMap:
    """Inclusion of the first syzygy into the projective cover."""
    return kernel(projective_cover(m).epi)


def ext1_dim(m: Representation, n: Representation) -> int:
    """``dim Ext^1(m, n)`` from ``0 -> Ω -> P0 -> m -> 0``:
    ``hom(Ω, n) - hom(P0, n) + hom(m, n)``."""
    if m.algebra is not n.algebra:
        raise ValueError("representations over different algebras")
    cov = projective_cover(m)
    omega = kernel(cov.epi).source
    return hom_dim(omega, n) - hom_dim(cov.module, n) + hom_dim(m, n)


def ext1_dim_via_injectives(m: Representation, n: Representation) -> int:
    """Same number from ``0 -> n -> I0 -> Σn -> 0``; an independent route."""
    env = injective_envelope(n)
    cosyz = cokernel(env.mono).target
    return hom_dim(m, cosyz) - hom_dim(m, env.module) + hom_dim(m, n)


def is_tau_rigid(m: Representation) -> bool:
    return hom_dim(m, tau(m).module) == 0
