"""Finite-dimensional modules as quiver representations.

A :class:`Representation` stores one vector space per vertex (only its
dimension) and one matrix per arrow, of shape ``dims[target] x dims[source]``.
A path ``a*b`` acts as ``maps[b] @ maps[a]``.

Subspaces of a representation are passed around as tuples of column-basis
matrices, one per vertex.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels, linalg
from .algebra import BoundQuiverAlgebra, Path

ISO_ENUM_CAP = 20  # log_p of the largest Hom space enumerated exhaustively
SUBMODULE_VECTOR_CAP = 1 << 16
SUBMODULE_COUNT_CAP = 200_000


class DecompositionUndecided(RuntimeError):
    pass


class UndecidedIsomorphism(RuntimeError):
    pass


class OracleCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class Representation:
    algebra: BoundQuiverAlgebra
    dims: tuple[int, ...]
    maps: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        alg = self.algebra
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != alg.n_vertices or any(d < 0 for d in dims):
            raise ValueError(f"bad dimension vector {dims}")
        if len(self.maps) != len(alg.quiver.arrows):
            raise ValueError("one matrix per arrow is required")
        maps = []
        for (s, t), m, arrow in zip(alg.quiver.arrow_ends, self.maps, alg.quiver.arrows):
            m = np.mod(np.asarray(m, dtype=np.int64).reshape(dims[t], dims[s]), alg.p)
            m.setflags(write=False)
            maps.append(m)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "maps", tuple(maps))

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def dim_at(self, v) -> int:
        return self.dims[self.algebra.vertex(v)]

    def map(self, arrow: str) -> np.ndarray:
        return self.maps[self.algebra.quiver.arrow_index[arrow]]

    @functools.cached_property
    def offsets(self) -> tuple[int, ...]:
        return tuple(int(x) for x in np.concatenate([[0], np.cumsum(self.dims)]))

    def path_matrix(self, pth: Path) -> np.ndarray:
        m = linalg.identity(self.dims[pth.source])
        for a in pth.arrows:
            m = linalg.matmul(self.maps[a], m, self.p)
        return m

    def relations_hold(self) -> bool:
        from .algebra import _path_from_names

        alg = self.algebra
        for rel in alg.relations:
            acc = None
            for c, names in rel.terms:
                pth = _path_from_names(alg.quiver, names)
                term = (c * self.path_matrix(pth)) % self.p
                acc = term if acc is None else (acc + term) % self.p
            if acc is not None and acc.any():
                return False
        return True

    def __repr__(self):
        return f"Representation(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: Representation
    target: Representation
    components: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        comps = []
        p = self.source.p
        for v, c in enumerate(self.components):
            c = np.mod(np.asarray(c, dtype=np.int64).reshape(self.target.dims[v], self.source.dims[v]), p)
            c.setflags(write=False)
            comps.append(c)
        object.__setattr__(self, "components", tuple(comps))

    @property
    def p(self) -> int:
        return self.source.p

    def is_valid(self) -> bool:
        """The intertwiner law on every arrow."""
        p = self.p
        for k, (s, t) in enumerate(self.source.algebra.quiver.arrow_ends):
            lhs = linalg.matmul(self.components[t], self.source.maps[k], p)
            rhs = linalg.matmul(self.target.maps[k], self.components[s], p)
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def then(self, other: "ModuleMap") -> "ModuleMap":
        """``other ∘ self``."""
        if other.source is not self.target and other.source.dims != self.target.dims:
            raise ValueError("maps do not compose")
        return ModuleMap(self.source, other.target, tuple(
            linalg.matmul(g, f, self.p) for f, g in zip(self.components, other.components)))

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, tuple(
            (f + g) % self.p for f, g in zip(self.components, other.components)))

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, tuple((c * f) % self.p for f in self.components))

    def is_zero(self) -> bool:
        return not any(c.any() for c in self.components)

    def is_iso(self) -> bool:
        if self.source.dims != self.target.dims:
            return False
        return all(linalg.rank(c, self.p) == c.shape[0] for c in self.components)

    def rank(self) -> int:
        return sum(linalg.rank(c, self.p) for c in self.components)

    def flat(self) -> np.ndarray:
        return np.concatenate([c.ravel() for c in self.components]) if self.components else np.zeros(0, np.int64)

    def total_matrix(self) -> np.ndarray:
        return linalg.block_diag(self.components)


# ---------------------------------------------------------------------------
# constructors


def zero_module(alg: BoundQuiverAlgebra) -> Representation:
    return Representation(alg, (0,) * alg.n_vertices,
                          tuple(linalg.zeros(0, 0) for _ in alg.quiver.arrows))


def simple(alg: BoundQuiverAlgebra, v) -> Representation:
    v = alg.vertex(v)
    dims = tuple(int(u == v) for u in range(alg.n_vertices))
    return Representation(alg, dims, tuple(linalg.zeros(dims[t], dims[s]) for s, t in alg.quiver.arrow_ends))


def projective(alg: BoundQuiverAlgebra, v) -> Representation:
    """``P_v``: at vertex ``w`` the span of basis paths ``v -> w``."""
    return _projective(alg, alg.vertex(v))


@functools.lru_cache(maxsize=None)
def _projective(alg: BoundQuiverAlgebra, v: int) -> Representation:
    spaces = [alg.pair_indices(v, w) for w in range(alg.n_vertices)]
    maps = []
    for k, (s, t) in enumerate(alg.quiver.arrow_ends):
        a = alg.index[Path(1, s, t, (k,))]
        m = linalg.zeros(len(spaces[t]), len(spaces[s]))
        for j, src in enumerate(spaces[s]):
            prod = alg.structure[src, a]
            for i, dst in enumerate(spaces[t]):
                m[i, j] = prod[dst]
        maps.append(m)
    return Representation(alg, tuple(len(sp) for sp in spaces), tuple(maps))


def injective(alg: BoundQuiverAlgebra, v) -> Representation:
    """``I_v``: at vertex ``w`` the dual of the span of basis paths ``w -> v``."""
    return _injective(alg, alg.vertex(v))


@functools.lru_cache(maxsize=None)
def _injective(alg: BoundQuiverAlgebra, v: int) -> Representation:
    spaces = [alg.pair_indices(w, v) for w in range(alg.n_vertices)]
    maps = []
    for k, (s, t) in enumerate(alg.quiver.arrow_ends):
        a = alg.index[Path(1, s, t, (k,))]
        # left multiplication by the arrow: paths t->v  ->  paths s->v, transposed
        m = linalg.zeros(len(spaces[t]), len(spaces[s]))
        for i, q in enumerate(spaces[t]):
            prod = alg.structure[a, q]
            for j, r in enumerate(spaces[s]):
                m[i, j] = prod[r]
        maps.append(m)
    return Representation(alg, tuple(len(sp) for sp in spaces), tuple(maps))


def standard_module(alg: BoundQuiverAlgebra, kind: str, v) -> Representation:
    """``kind`` is ``"S"``, ``"P"`` or ``"I"``."""
    makers = {"S": simple, "P": projective, "I": injective}
    if kind not in makers:
        raise ValueError(f"unknown module kind {kind!r}")
    return makers[kind](alg, alg.vertex(v))


def free_module(alg: BoundQuiverAlgebra) -> Representation:
    """The regular module ``A = ⊕ P_v``."""
    return direct_sum([projective(alg, v) for v in range(alg.n_vertices)], alg)


def identity_map(m: Representation) -> ModuleMap:
    return ModuleMap(m, m, tuple(linalg.identity(d) for d in m.dims))


def zero_map(m: Representation, n: Representation) -> ModuleMap:
    return ModuleMap(m, n, tuple(linalg.zeros(b, a) for a, b in zip(m.dims, n.dims)))


# ---------------------------------------------------------------------------
# Hom spaces


@functools.lru_cache(maxsize=16384)
def _hom_system(m: Representation, n: Representation) -> np.ndarray:
    """Kernel basis (columns) of the intertwiner equations."""
    p = m.p
    alg = m.algebra
    sizes = [a * b for a, b in zip(n.dims, m.dims)]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    blocks = []
    for k, (s, t) in enumerate(alg.quiver.arrow_ends):
        rows = n.dims[t] * m.dims[s]
        if rows == 0:
            continue
        e = np.zeros((rows, off[-1]), dtype=np.int64)
        e[:, off[t]:off[t + 1]] += np.kron(linalg.identity(n.dims[t]), m.maps[k].T)
        e[:, off[s]:off[s + 1]] -= np.kron(n.maps[k], linalg.identity(m.dims[s]))
        blocks.append(e % p)
    if not blocks:
        return linalg.identity(int(off[-1]))
    return linalg.kernel_basis(np.concatenate(blocks, axis=0), p)


def hom_basis(m: Representation, n: Representation) -> list[ModuleMap]:
    """A basis of ``Hom(m, n)``, in the deterministic order of the free
    variables of the intertwiner system."""
    if m.algebra is not n.algebra:
        raise ValueError("representations over different algebras")
    k = _hom_system(m, n)
    out = []
    sizes = [a * b for a, b in zip(n.dims, m.dims)]
    for j in range(k.shape[1]):
        col = k[:, j]
        comps, pos = [], 0
        for v, sz in enumerate(sizes):
            comps.append(col[pos:pos + sz].reshape(n.dims[v], m.dims[v]))
            pos += sz
        out.append(ModuleMap(m, n, tuple(comps)))
    return out


def hom_dim(m: Representation, n: Representation) -> int:
    if m.algebra is not n.algebra:
        raise ValueError("representations over different algebras")
    return _hom_system(m, n).shape[1]


def combine(maps: Sequence[ModuleMap], coeffs) -> ModuleMap:
    src, dst = maps[0].source, maps[0].target
    p = src.p
    comps = []
    for v in range(len(src.dims)):
        acc = linalg.zeros(dst.dims[v], src.dims[v])
        for c, f in zip(coeffs, maps):
            if c:
                acc = acc + int(c) * f.components[v]
        comps.append(acc % p)
    return ModuleMap(src, dst, tuple(comps))


# ---------------------------------------------------------------------------
# subobjects and quotients


def is_subspace_stable(n: Representation, spaces) -> bool:
    p = n.p
    for k, (s, t) in enumerate(n.algebra.quiver.arrow_ends):
        img = linalg.matmul(n.maps[k], spaces[s], p)
        if img.shape[1] and linalg.solve_right(spaces[t], img, p) is None:
            return False
    return True


def subrep(n: Representation, spaces) -> ModuleMap:
    """The subrepresentation spanned by ``spaces``, as its inclusion map."""
    p = n.p
    spaces = tuple(linalg.column_basis(np.asarray(sp, dtype=np.int64), p) for sp in spaces)
    maps = []
    for k, (s, t) in enumerate(n.algebra.quiver.arrow_ends):
        img = linalg.matmul(n.maps[k], spaces[s], p)
        x = linalg.solve_right(spaces[t], img, p) if img.size else linalg.zeros(spaces[t].shape[1], spaces[s].shape[1])
        if x is None:
            raise ValueError("subspaces are not stable under the arrows")
        maps.append(x)
    sub = Representation(n.algebra, tuple(sp.shape[1] for sp in spaces), tuple(maps))
    return ModuleMap(sub, n, spaces)


def quotient(n: Representation, spaces) -> ModuleMap:
    """``n / U`` for the stable subspaces ``U``, as the projection map."""
    p = n.p
    proj = []
    sections = []
    for v, sp in enumerate(spaces):
        sp = np.asarray(sp, dtype=np.int64)
        if sp.size == 0:
            sp = linalg.zeros(n.dims[v], 0)
        q = linalg.left_kernel_rows(sp, p) if sp.shape[1] else linalg.identity(n.dims[v])
        q = linalg.rref(q, p)[0] if q.shape[0] else q
        proj.append(q)
        sections.append(linalg.right_inverse(q, p) if q.shape[0] else linalg.zeros(n.dims[v], 0))
    maps = []
    for k, (s, t) in enumerate(n.algebra.quiver.arrow_ends):
        maps.append(linalg.matmul(linalg.matmul(proj[t], n.maps[k], p), sections[s], p))
    quo = Representation(n.algebra, tuple(q.shape[0] for q in proj), tuple(maps))
    return ModuleMap(n, quo, tuple(proj))


class MapParts(NamedTuple):
    kernel: ModuleMap   # inclusion ker f -> M
    image: ModuleMap    # inclusion im f -> N
    cokernel: ModuleMap  # projection N -> coker f


def kernel(f: ModuleMap) -> ModuleMap:
    return subrep(f.source, tuple(linalg.kernel_basis(c, f.p) for c in f.components))


def image(f: ModuleMap) -> ModuleMap:
    return subrep(f.target, tuple(linalg.column_basis(c, f.p) for c in f.components))


def cokernel(f: ModuleMap) -> ModuleMap:
    return quotient(f.target, tuple(linalg.column_basis(c, f.p) for c in f.components))


def map_parts(f: ModuleMap) -> MapParts:
    return MapParts(kernel(f), image(f), cokernel(f))


def radical_spaces(m: Representation, spaces=None) -> tuple[np.ndarray, ...]:
    """``rad`` of the subrepresentation given by ``spaces`` (default all of m)."""
    p = m.p
    if spaces is None:
        spaces = tuple(linalg.identity(d) for d in m.dims)
    gathered = [[] for _ in m.dims]
    for k, (s, t) in enumerate(m.algebra.quiver.arrow_ends):
        gathered[t].append(linalg.matmul(m.maps[k], spaces[s], p))
    out = []
    for v, parts in enumerate(gathered):
        if parts:
            out.append(linalg.column_basis(np.concatenate(parts, axis=1), p))
        else:
            out.append(linalg.zeros(m.dims[v], 0))
    return tuple(out)


def socle_spaces(m: Representation) -> tuple[np.ndarray, ...]:
    p = m.p
    out = []
    for v in range(len(m.dims)):
        outs = [m.maps[k] for k in m.algebra.quiver.arrows_out_of(v)]
        if outs:
            out.append(linalg.kernel_basis(np.concatenate(outs, axis=0), p))
        else:
            out.append(linalg.identity(m.dims[v]))
    return tuple(out)


@dataclass(frozen=True)
class Layers:
    top: Representation
    radical: Representation
    socle: Representation
    top_map: ModuleMap
    radical_map: ModuleMap
    socle_map: ModuleMap


def layers(m: Representation) -> Layers:
    rad = radical_spaces(m)
    r = subrep(m, rad)
    t = quotient(m, rad)
    s = subrep(m, socle_spaces(m))
    return Layers(t.target, r.source, s.source, t, r, s)


def top(m: Representation) -> Representation:
    return quotient(m, radical_spaces(m)).target


def radical(m: Representation) -> Representation:
    return subrep(m, radical_spaces(m)).source


def socle(m: Representation) -> Representation:
    return subrep(m, socle_spaces(m)).source


def loewy_layers(m: Representation) -> list[tuple[int, ...]]:
    """Dimension vectors of ``rad^k M / rad^{k+1} M``."""
    spaces = tuple(linalg.identity(d) for d in m.dims)
    out = []
    while any(sp.shape[1] for sp in spaces):
        nxt = radical_spaces(m, spaces)
        out.append(tuple(a.shape[1] - b.shape[1] for a, b in zip(spaces, nxt)))
        spaces = nxt
    return out


def loewy_word(m: Representation) -> str:
    """Radical layers top to bottom, e.g. ``"1/2"`` for P_1 over 1 -> 2.

    Inside a layer vertex names repeat by multiplicity; they are written
    back to back when every name is a single character, else joined by ','.
    """
    if m.is_zero():
        return "0"
    names = m.algebra.vertices
    glue = "" if all(len(v) == 1 for v in names) else ","
    words = []
    for dv in loewy_layers(m):
        words.append(glue.join(names[v] for v, c in enumerate(dv) for _ in range(c)))
    return "/".join(words)


# ---------------------------------------------------------------------------
# sums, traces


def direct_sum(parts: Sequence[Representation], alg: BoundQuiverAlgebra | None = None) -> Representation:
    parts = list(parts)
    if not parts:
        if alg is None:
            raise ValueError("empty direct sum needs an algebra")
        return zero_module(alg)
    alg = parts[0].algebra
    if any(x.algebra is not alg for x in parts):
        raise ValueError("representations over different algebras")
    if len(parts) == 1:
        return parts[0]
    dims = tuple(sum(x.dims[v] for x in parts) for v in range(alg.n_vertices))
    maps = tuple(linalg.block_diag([x.maps[k] for x in parts]) for k in range(len(alg.quiver.arrows)))
    return Representation(alg, dims, maps)


def sum_injections(parts: Sequence[Representation], total: Representation) -> list[ModuleMap]:
    """Canonical inclusions of the summands into ``direct_sum(parts)``."""
    out = []
    offs = [0] * len(total.dims)
    for x in parts:
        comps = []
        for v, d in enumerate(x.dims):
            c = linalg.zeros(total.dims[v], d)
            c[offs[v]:offs[v] + d] = linalg.identity(d)
            comps.append(c)
            offs[v] += d
        out.append(ModuleMap(x, total, tuple(comps)))
    return out


def sum_projections(parts: Sequence[Representation], total: Representation) -> list[ModuleMap]:
    return [ModuleMap(total, i.source, tuple(c.T for c in i.components))
            for i in sum_injections(parts, total)]


def trace(m: Representation, n: Representation) -> ModuleMap:
    """Inclusion of the largest subrepresentation of ``n`` generated by ``m``."""
    basis = hom_basis(m, n)
    p = n.p
    spaces = []
    for v, d in enumerate(n.dims):
        cols = [f.components[v] for f in basis]
        if cols:
            spaces.append(linalg.column_basis(np.concatenate(cols, axis=1), p))
        else:
            spaces.append(linalg.zeros(d, 0))
    return subrep(n, spaces)


def trace_dims(m: Representation, n: Representation) -> tuple[int, ...]:
    basis = hom_basis(m, n)
    p = n.p
    out = []
    for v, d in enumerate(n.dims):
        cols = [f.components[v] for f in basis]
        out.append(linalg.rank(np.concatenate(cols, axis=1), p) if cols and d else 0)
    return tuple(out)


def in_fac(n: Representation, m: Representation) -> bool:
    """Whether ``n`` is a quotient of a finite direct sum of copies of ``m``."""
    return trace_dims(m, n) == n.dims


# ---------------------------------------------------------------------------
# decomposition


def _power(f: ModuleMap) -> ModuleMap:
    """``f^d`` per vertex with ``d`` that vertex's dimension (Fitting exponent)."""
    p = f.p
    comps = []
    for c in f.components:
        d = c.shape[0]
        g = c
        steps = 1
        while steps < d:
            g = linalg.matmul(g, g, p)
            steps *= 2
        comps.append(g)
    return ModuleMap(f.source, f.target, tuple(comps))


def _fitting_split(f: ModuleMap):
    """``(ker f^d, im f^d)`` inclusions when both are nonzero, else None."""
    g = _power(f)
    r = g.rank()
    d = f.source.total_dim
    if r == 0 or r == d:
        return None
    return kernel(g), image(g)


def _shifted(f: ModuleMap, lam: int) -> ModuleMap:
    p = f.p
    return ModuleMap(f.source, f.target, tuple(
        (c - lam * linalg.identity(c.shape[0])) % p for c in f.components))


def _eigenvalue(f: ModuleMap) -> int | None:
    """The unique ``λ`` with ``f - λ`` nilpotent, if there is one in F_p."""
    for lam in range(f.p):
        if _power(_shifted(f, lam)).is_zero():
            return lam
    return None


def _span_rank(vectors: list[np.ndarray], p: int) -> int:
    if not vectors:
        return 0
    return linalg.rank(np.stack(vectors), p)


def _split_local_radical(m: Representation, basis: list[ModuleMap]) -> list[ModuleMap] | None:
    """Basis of ``rad End(m)`` when ``End(m) = k ⊕ rad`` can be certified.

    The certificate: every basis element has a single eigenvalue in F_p,
    the shifted elements span a codimension-one subspace ``I`` closed under
    composition, and some power of ``I`` vanishes.  Then ``End/I = k``.
    """
    p = m.p
    h = len(basis)
    if h == 1:
        return [] if basis[0].is_iso() else None
    shifted = []
    for f in basis:
        lam = _eigenvalue(f)
        if lam is None:
            return None
        shifted.append(_shifted(f, lam))
    vecs = [f.flat() for f in shifted]
    red, piv = linalg.rref(np.stack(vecs), p)
    if len(piv) != h - 1:
        return None
    ideal = [x for x in shifted if not x.is_zero()]
    # independent spanning subset, chosen deterministically
    chosen: list[ModuleMap] = []
    for x in ideal:
        if _span_rank([y.flat() for y in chosen] + [x.flat()], p) > len(chosen):
            chosen.append(x)
    base = np.stack([x.flat() for x in chosen])
    power = chosen
    for _ in range(m.total_dim + 1):
        prods = [x.then(y) for x in power for y in chosen]
        prods = [x for x in prods if not x.is_zero()]
        if not prods:
            return chosen
        for x in prods:
            if linalg.rank(np.concatenate([base, x.flat()[None, :]]), p) > len(chosen):
                return None
        nxt: list[ModuleMap] = []
        for x in prods:
            if _span_rank([y.flat() for y in nxt] + [x.flat()], p) > len(nxt):
                nxt.append(x)
        power = nxt
    return None


def _enumeration_witness(m: Representation, basis: list[ModuleMap]) -> ModuleMap | None | bool:
    """Search all of End(m) for an element that is neither nilpotent nor
    invertible.  Returns that element, or None when End(m) is local.
    Returns False when the space is too large to enumerate."""
    p = m.p
    h = len(basis)
    if h * np.log2(p) > ISO_ENUM_CAP + 1e-9:
        return False
    stack = np.ascontiguousarray(np.stack([f.total_matrix() for f in basis]).astype(np.int64))
    idx = _kernels.find_non_local(stack, p, 0, p ** h)
    if idx < 0:
        return None
    coeffs = [(idx // p ** i) % p for i in range(h)]
    return combine(basis, coeffs)


def _split_once(m: Representation):
    basis = hom_basis(m, m)
    p = m.p
    candidates = list(basis)
    if p <= 16:
        candidates += [_shifted(f, lam) for f in basis for lam in range(1, p)]
    candidates += [basis[i] + basis[j] for i in range(len(basis)) for j in range(i + 1, len(basis))]
    for f in candidates:
        parts = _fitting_split(f)
        if parts:
            return parts
    if _split_local_radical(m, basis) is not None:
        return None
    witness = _enumeration_witness(m, basis)
    if witness is False:
        raise DecompositionUndecided(
            f"End of module with dims {m.dims} has dimension {len(basis)}; "
            "no splitting endomorphism found and exhaustive search is capped")
    if witness is None:
        return None
    return _fitting_split(witness)


def _indecomposable_pieces(m: Representation) -> list[Representation]:
    if m.is_zero():
        return []
    parts = _split_once(m)
    if parts is None:
        return [m]
    k, i = parts
    return _indecomposable_pieces(k.source) + _indecomposable_pieces(i.source)


def is_indecomposable(m: Representation) -> bool:
    return not m.is_zero() and _split_once(m) is None


def endo_radical(m: Representation) -> list[ModuleMap]:
    """Basis of the radical of ``End(m)`` for indecomposable ``m``."""
    basis = hom_basis(m, m)
    rad = _split_local_radical(m, basis)
    if rad is not None:
        return rad
    # non-split local algebra: the radical is the set of nilpotent elements
    p = m.p
    h = len(basis)
    if h * np.log2(p) > ISO_ENUM_CAP + 1e-9:
        raise DecompositionUndecided("radical of a large non-split endomorphism algebra")
    nil = []
    for idx in range(p ** h):
        coeffs = [(idx // p ** i) % p for i in range(h)]
        f = combine(basis, coeffs)
        if not f.is_zero() and _power(f).is_zero():
            if _span_rank([g.flat() for g in nil] + [f.flat()], p) > len(nil):
                nil.append(f)
    return nil


def indecomposables_isomorphic(m: Representation, n: Representation) -> bool:
    """Isomorphism test valid when ``m`` (hence ``n`` if isomorphic) has a
    local endomorphism algebra: some composite ``g∘f`` is then invertible."""
    if m.dims != n.dims:
        return False
    if m.is_zero():
        return True
    fs = hom_basis(m, n)
    if not fs:
        return False
    gs = hom_basis(n, m)
    for f in fs:
        if f.is_iso():
            return True
    for f in fs:
        for g in gs:
            if f.then(g).is_iso():
                return True
    return False


@dataclass(frozen=True)
class IndecSummandList:
    parts: tuple[tuple[Representation, int], ...]

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def modules(self) -> list[Representation]:
        return [m for m, _ in self.parts]

    def flat(self) -> list[Representation]:
        return [m for m, k in self.parts for _ in range(k)]


def group_isoclasses(pieces: Sequence[Representation]) -> IndecSummandList:
    classes: list[list] = []
    for x in pieces:
        for entry in classes:
            if indecomposables_isomorphic(entry[0], x):
                entry[1] += 1
                break
        else:
            classes.append([x, 1])
    classes.sort(key=lambda e: tuple(-d for d in e[0].dims))
    return IndecSummandList(tuple((x, k) for x, k in classes))


def decompose(m: Representation) -> IndecSummandList:
    """Indecomposable summands with multiplicities (Fitting recursion)."""
    return group_isoclasses(_indecomposable_pieces(m))


def are_isomorphic(m: Representation, n: Representation) -> bool:
    if m.algebra is not n.algebra:
        raise ValueError("representations over different algebras")
    if m.dims != n.dims:
        return False
    if m.is_zero():
        return True
    hmn = hom_basis(m, n)
    if not hmn:
        return False
    dims = {len(hmn), hom_dim(n, m), hom_dim(m, m), hom_dim(n, n)}
    if len(dims) != 1:
        return False
    for f in hmn:
        if f.is_iso():
            return True
    rng = np.random.default_rng(len(hmn) * 7919 + m.total_dim)
    for _ in range(16):
        f = combine(hmn, rng.integers(0, m.p, size=len(hmn)))
        if f.is_iso():
            return True
    try:
        a, b = decompose(m), decompose(n)
    except DecompositionUndecided as exc:
        raise UndecidedIsomorphism(str(exc)) from exc
    if sorted(k for _, k in a) != sorted(k for _, k in b) or len(a) != len(b):
        return False
    unmatched = list(b.parts)
    for x, k in a:
        for j, (y, l) in enumerate(unmatched):
            if k == l and indecomposables_isomorphic(x, y):
                unmatched.pop(j)
                break
        else:
            return False
    return True


def find_summand(m: Representation, pool: Sequence[Representation]) -> int | None:
    """Index of the first member of ``pool`` isomorphic to the
    indecomposable ``m``, or None."""
    for j, x in enumerate(pool):
        if indecomposables_isomorphic(x, m):
            return j
    return None


def has_summand(m: Representation, x: Representation) -> bool:
    """Whether the indecomposable ``x`` is a direct summand of ``m``."""
    return find_summand(x, decompose(m).modules()) is not None


# ---------------------------------------------------------------------------
# brute-force oracles (finite field, desk scale)


def path_operators(m: Representation) -> np.ndarray:
    """Operators of all basis paths on the total space of ``m``, stacked."""
    alg = m.algebra
    d = m.total_dim
    off = m.offsets
    ops = []
    for pth in alg.basis:
        op = linalg.zeros(d, d)
        blk = m.path_matrix(pth)
        op[off[pth.target]:off[pth.target + 1], off[pth.source]:off[pth.source + 1]] = blk
        ops.append(op)
    return np.ascontiguousarray(np.stack(ops)) if ops else np.zeros((0, d, d), np.int64)


def all_vectors(p: int, d: int) -> np.ndarray:
    idx = np.arange(p ** d, dtype=np.int64)
    return np.stack([(idx // p ** i) % p for i in range(d)], axis=1) if d else np.zeros((1, 0), np.int64)


def enumerate_submodules(m: Representation, vector_cap: int = SUBMODULE_VECTOR_CAP,
                         count_cap: int = SUBMODULE_COUNT_CAP) -> list[tuple[np.ndarray, ...]]:
    """Every subrepresentation of ``m``, as per-vertex column bases.

    Cyclic submodules come from all ``p^d`` vectors; the rest by closing
    under pairwise sums.  Raises OracleCapExceeded beyond the caps.
    """
    p, d = m.p, m.total_dim
    if p ** d > vector_cap:
        raise OracleCapExceeded(f"{p}^{d} vectors exceeds the oracle cap {vector_cap}")
    if d == 0:
        return [tuple(linalg.zeros(0, 0) for _ in m.dims)]
    ops = path_operators(m)
    keys = _kernels.span_keys(ops, all_vectors(p, d), p)
    seen = {}
    for key in keys:
        seen.setdefault(key.tobytes(), (key, int(np.count_nonzero(np.any(key != 0, axis=1)))))
    frontier = list(seen.values())
    gens = np.ascontiguousarray(np.stack([k for k, _ in frontier]))
    gen_ranks = np.array([r for _, r in frontier], dtype=np.int64)
    while frontier:
        nxt = []
        for u, r in frontier:
            sums, ranks = _kernels.sum_keys(u, r, gens, gen_ranks, p)
            for g in np.flatnonzero(ranks > r):
                b = sums[g].tobytes()
                if b not in seen:
                    seen[b] = (sums[g], int(ranks[g]))
                    nxt.append(seen[b])
            if len(seen) > count_cap:
                raise OracleCapExceeded(f"more than {count_cap} submodules")
        frontier = nxt
    off = m.offsets
    out = []
    for key, k in seen.values():
        rows = key[:k]
        spaces = []
        for v in range(len(m.dims)):
            blk = rows[:, off[v]:off[v + 1]]
            blk = blk[np.any(blk != 0, axis=1)]
            spaces.append(np.ascontiguousarray(blk.T))
        out.append(tuple(spaces))
    out.sort(key=lambda sp: (sum(x.shape[1] for x in sp), b"".join(x.T.tobytes() for x in sp)))
    return out


def enumerate_quotients(m: Representation, **caps) -> list[Representation]:
    return [quotient(m, sp).target for sp in enumerate_submodules(m, **caps)]


def brute_force_homs(m: Representation, n: Representation, batch: int = 1 << 14) -> list[ModuleMap]:
    """Every module map ``m -> n``, found by testing all candidate tuples of
    component matrices (p ** sum(m_v n_v) of them) against each arrow square."""
    p = m.p
    sizes = [a * b for a, b in zip(n.dims, m.dims)]
    total = sum(sizes)
    if p ** total > 1 << 20:
        raise OracleCapExceeded(f"{p}^{total} candidate maps")
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    out = []
    vecs = all_vectors(p, total)
    for start in range(0, len(vecs), batch):
        chunk = vecs[start:start + batch]
        comps = [chunk[:, offs[v]:offs[v + 1]].reshape(len(chunk), n.dims[v], m.dims[v]) for v in range(len(sizes))]
        ok = np.ones(len(chunk), dtype=bool)
        for k, (s, t) in enumerate(m.algebra.quiver.arrow_ends):
            lhs = np.einsum("ij,bjk->bik", n.maps[k], comps[s])
            rhs = np.einsum("bij,jk->bik", comps[t], m.maps[k])
            ok &= np.all((lhs - rhs) % p == 0, axis=(1, 2))
        for b in np.nonzero(ok)[0]:
            out.append(ModuleMap(m, n, tuple(c[b] for c in comps)))
    return out
