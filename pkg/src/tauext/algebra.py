"""Quivers, admissible relations and finite-dimensional bound quiver algebras.

Path convention: the path written ``a*b`` runs along ``a`` first and then
``b`` (so ``target(a) == source(b)``).  A relation ``alpha*beta`` on the
quiver ``1 -> 2 -> 3`` therefore kills the length-two path from 1 to 3.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .linalg import FieldPrime

DEFAULT_LENGTH_CAP = 32


class AlgebraError(ValueError):
    pass


class NonAdmissible(AlgebraError):
    pass


class InfiniteDimensional(AlgebraError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(
            self, "arrows", tuple(a if isinstance(a, Arrow) else Arrow(*map(str, a)) for a in self.arrows)
        )
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError(f"duplicate vertex names in {self.vertices}")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate arrow names in {names}")
        clash = set(names) & set(self.vertices)
        if clash:
            raise AlgebraError(f"names used for both a vertex and an arrow: {sorted(clash)}")
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise AlgebraError(f"arrow {a.name} joins undeclared vertices {a.source}->{a.target}")

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {a.name: i for i, a in enumerate(self.arrows)}

    @cached_property
    def arrow_ends(self) -> tuple[tuple[int, int], ...]:
        vi = self.vertex_index
        return tuple((vi[a.source], vi[a.target]) for a in self.arrows)

    def arrows_into(self, v: int) -> list[int]:
        return [k for k, (_, t) in enumerate(self.arrow_ends) if t == v]

    def arrows_out_of(self, v: int) -> list[int]:
        return [k for k, (s, _) in enumerate(self.arrow_ends) if s == v]


@dataclass(frozen=True, order=True)
class Path:
    """A path in a quiver: vertex indices of its ends plus arrow indices."""

    length: int
    source: int
    target: int
    arrows: tuple[int, ...]

    @classmethod
    def trivial(cls, v: int) -> "Path":
        return cls(0, v, v, ())

    def then(self, other: "Path") -> "Path":
        if self.target != other.source:
            raise ValueError("paths do not compose")
        return Path(self.length + other.length, self.source, other.target, self.arrows + other.arrows)


@dataclass(frozen=True)
class Relation:
    """Linear combination of parallel paths, each given by arrow names."""

    terms: tuple[tuple[int, tuple[str, ...]], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "terms", tuple((int(c), tuple(map(str, path))) for c, path in self.terms)
        )

    def text(self) -> str:
        """Canonical string form, e.g. ``alpha*beta - gamma*delta``."""
        parts = []
        for i, (c, path) in enumerate(self.terms):
            word = "*".join(path)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = word if mag == 1 else f"{mag}*{word}"
            if i == 0:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)


def _path_from_names(quiver: Quiver, names: Sequence[str]) -> Path:
    if not names:
        raise NonAdmissible("empty path in relation")
    idx = []
    for n in names:
        if n not in quiver.arrow_index:
            raise AlgebraError(f"unknown arrow {n!r} in relation")
        idx.append(quiver.arrow_index[n])
    ends = quiver.arrow_ends
    for a, b in zip(idx, idx[1:]):
        if ends[a][1] != ends[b][0]:
            raise AlgebraError(f"arrows {quiver.arrows[a].name}*{quiver.arrows[b].name} do not compose")
    return Path(len(idx), ends[idx[0]][0], ends[idx[-1]][1], tuple(idx))


def _paths_up_to(quiver: Quiver, limit: int) -> list[list[Path]]:
    by_len = [[Path.trivial(v) for v in range(len(quiver.vertices))]]
    out_of = [quiver.arrows_out_of(v) for v in range(len(quiver.vertices))]
    ends = quiver.arrow_ends
    for _ in range(limit):
        nxt = []
        for pth in by_len[-1]:
            for a in out_of[pth.target]:
                nxt.append(Path(pth.length + 1, pth.source, ends[a][1], pth.arrows + (a,)))
        by_len.append(nxt)
    return by_len


def _order_key(pth: Path):
    return (pth.length, pth.source, pth.arrows)


class BoundQuiverAlgebra:
    """``kQ / I`` for an admissible ideal ``I``, with an explicit path basis.

    Attributes:
        quiver: the underlying quiver.
        relations: the generating relations, as given.
        field: the base field F_p.
        basis: normal-form paths, trivial paths first.
        structure: ``structure[i, j]`` is the coordinate vector of
            ``basis[i] * basis[j]``.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], field_: FieldPrime,
                 basis: list[Path], reduction: dict[Path, dict[int, int]], length_bound: int):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = field_
        self.basis = basis
        self.length_bound = length_bound
        self._reduction = reduction
        self.index = {pth: i for i, pth in enumerate(basis)}
        n = len(basis)
        p = field_.p
        c = np.zeros((n, n, n), dtype=np.int64)
        for i, u in enumerate(basis):
            for j, w in enumerate(basis):
                if u.target != w.source:
                    continue
                for k, coef in self.reduce(u.then(w)).items():
                    c[i, j, k] = coef % p
        self.structure = c
        self._pairs: dict[tuple[int, int], list[int]] = defaultdict(list)
        for i, pth in enumerate(basis):
            self._pairs[(pth.source, pth.target)].append(i)

    # -- basic data

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def n_vertices(self) -> int:
        return len(self.quiver.vertices)

    def vertex(self, v) -> int:
        """Index of vertex ``v`` (a name or an index)."""
        if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
            if 0 <= v < self.n_vertices:
                return int(v)
            raise KeyError(v)
        return self.quiver.vertex_index[str(v)]

    def path_name(self, pth: Path) -> str:
        if pth.length == 0:
            return f"e{self.vertices[pth.source]}"
        return "*".join(self.quiver.arrows[a].name for a in pth.arrows)

    def reduce(self, pth: Path) -> dict[int, int]:
        """Coordinates of an arbitrary path in the normal-form basis."""
        if pth.length >= self.length_bound:
            return {}
        return self._reduction[pth]

    def pair_indices(self, i, j) -> list[int]:
        """Basis indices of paths from vertex ``i`` to vertex ``j``."""
        return self._pairs.get((self.vertex(i), self.vertex(j)), [])

    def pair_basis(self, i, j) -> list[Path]:
        return [self.basis[k] for k in self.pair_indices(i, j)]

    def paths_from(self, v) -> list[int]:
        v = self.vertex(v)
        return [k for k, pth in enumerate(self.basis) if pth.source == v]

    def paths_into(self, v) -> list[int]:
        v = self.vertex(v)
        return [k for k, pth in enumerate(self.basis) if pth.target == v]

    def dim_pair(self, i, j) -> int:
        return len(self.pair_indices(i, j))

    # -- elements

    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, np.mod(np.asarray(coeffs, dtype=np.int64), self.p))

    def basis_element(self, k: int) -> "AlgebraElement":
        v = np.zeros(self.dim, dtype=np.int64)
        v[k] = 1
        return AlgebraElement(self, v)

    def idempotent(self, v) -> "AlgebraElement":
        return self.basis_element(self.index[Path.trivial(self.vertex(v))])

    def arrow(self, name: str) -> "AlgebraElement":
        a = self.quiver.arrow_index[name]
        s, t = self.quiver.arrow_ends[a]
        return self.basis_element(self.index[Path(1, s, t, (a,))])

    def one(self) -> "AlgebraElement":
        out = np.zeros(self.dim, dtype=np.int64)
        for v in range(self.n_vertices):
            out[self.index[Path.trivial(v)]] = 1
        return AlgebraElement(self, out)

    def path_element(self, names: Sequence[str]) -> "AlgebraElement":
        """Element represented by the path through the named arrows."""
        pth = _path_from_names(self.quiver, names)
        v = np.zeros(self.dim, dtype=np.int64)
        for k, c in self.reduce(pth).items():
            v[k] = c
        return AlgebraElement(self, v % self.p)

    def multiply(self, a: "AlgebraElement", b: "AlgebraElement") -> "AlgebraElement":
        if a.algebra is not self or b.algebra is not self:
            raise ValueError("elements belong to different algebras")
        prod = np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, self.structure) % self.p
        return AlgebraElement(self, prod)

    def mult_coords(self, i: int, j: int) -> np.ndarray:
        return self.structure[i, j]

    def __repr__(self):
        return (f"BoundQuiverAlgebra(vertices={list(self.vertices)}, arrows={len(self.quiver.arrows)}, "
                f"relations={[r.text() for r in self.relations]}, p={self.p}, dim={self.dim})")


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    algebra: BoundQuiverAlgebra
    coeffs: np.ndarray = field(repr=False)

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self.algebra.multiply(self, other)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")
        return AlgebraElement(self.algebra, (self.coeffs + other.coeffs) % self.algebra.p)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        if other.algebra is not self.algebra:
            raise ValueError("elements belong to different algebras")
        return AlgebraElement(self.algebra, (self.coeffs - other.coeffs) % self.algebra.p)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement) and other.algebra is self.algebra
                and bool(np.array_equal(self.coeffs, other.coeffs)))

    def __hash__(self):
        return hash((id(self.algebra), self.coeffs.tobytes()))

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __str__(self):
        alg = self.algebra
        terms = [(int(c), alg.path_name(alg.basis[k])) for k, c in enumerate(self.coeffs) if c]
        if not terms:
            return "0"
        return " + ".join(name if c == 1 else f"{c}*{name}" for c, name in terms)


def _generators(relations: list[tuple[list[tuple[int, Path]], int]], by_len, limit: int, p: int):
    """Spanning set of ``I`` modulo paths longer than ``limit``, per (source, target)."""
    ending_at = defaultdict(list)
    starting_at = defaultdict(list)
    for ell, paths in enumerate(by_len):
        for pth in paths:
            ending_at[pth.target].append(pth)
            starting_at[pth.source].append(pth)
    gens = defaultdict(list)
    for terms, minlen in relations:
        s, t = terms[0][1].source, terms[0][1].target
        for u in ending_at[s]:
            if u.length + minlen > limit:
                continue
            for w in starting_at[t]:
                if u.length + w.length + minlen > limit:
                    continue
                vec = {}
                for c, pth in terms:
                    full = u.then(pth).then(w)
                    if full.length <= limit:
                        vec[full] = (vec.get(full, 0) + c) % p
                vec = {k: c for k, c in vec.items() if c}
                if vec:
                    gens[(u.source, w.target)].append(vec)
    return gens


def _span_matrix(vectors, columns: list[Path], p: int) -> np.ndarray:
    col = {pth: j for j, pth in enumerate(columns)}
    m = np.zeros((len(vectors), len(columns)), dtype=np.int64)
    for i, vec in enumerate(vectors):
        for pth, c in vec.items():
            m[i, col[pth]] = c % p
    return m


def build_algebra(quiver: Quiver, relations: Iterable[Relation] = (), p: int = 2,
                  length_cap: int = DEFAULT_LENGTH_CAP) -> BoundQuiverAlgebra:
    """Build ``kQ/I`` over F_p with ``I`` generated by ``relations``.

    Raises:
        NonAdmissible: a relation has a term of length < 2.
        InfiniteDimensional: paths of length ``length_cap`` are still not
            all in the ideal.
    """
    field_ = FieldPrime(p)
    relations = tuple(relations)
    parsed = []
    for rel in relations:
        terms = []
        for c, names in rel.terms:
            pth = _path_from_names(quiver, names)
            if pth.length < 2:
                raise NonAdmissible(
                    f"relation {rel.text()!r}: term {'*'.join(names)!r} has length {pth.length}; "
                    "admissible relations need paths of length >= 2")
            terms.append((c % p, pth))
        ends = {(pth.source, pth.target) for _, pth in terms}
        if len(ends) != 1:
            raise AlgebraError(f"relation {rel.text()!r} mixes paths with different ends")
        merged = defaultdict(int)
        for c, pth in terms:
            merged[pth] = (merged[pth] + c) % p
        terms = [(c, pth) for pth, c in sorted(merged.items()) if c]
        if terms:
            parsed.append((terms, min(pth.length for _, pth in terms)))

    bound = None
    for ell in range(1, length_cap + 1):
        by_len = _paths_up_to(quiver, ell)
        top = by_len[ell]
        if not top:
            bound = ell
            break
        gens = _generators(parsed, by_len, ell, p)
        ok = True
        groups = defaultdict(list)
        for pth in top:
            groups[(pth.source, pth.target)].append(pth)
        for key, paths in groups.items():
            cols = sorted({pth for vec in gens.get(key, []) for pth in vec} | set(paths),
                          key=_order_key, reverse=True)
            m = _span_matrix(gens.get(key, []), cols, p)
            r = linalg.rank(m, p)
            aug = np.concatenate([m, _span_matrix([{pth: 1} for pth in paths], cols, p)], axis=0)
            if linalg.rank(aug, p) != r:
                ok = False
                break
        if ok:
            bound = ell
            break
    if bound is None:
        raise InfiniteDimensional(
            f"independent paths of length {length_cap} survive the relations; "
            "the algebra is not finite dimensional (or needs a larger length cap)")

    # quotient of kQ / J^bound by the image of I
    by_len = _paths_up_to(quiver, bound - 1)
    gens = _generators(parsed, by_len, bound - 1, p)
    groups = defaultdict(list)
    for paths in by_len:
        for pth in paths:
            groups[(pth.source, pth.target)].append(pth)
    basis: list[Path] = []
    local: dict[Path, dict[Path, int]] = {}
    for key, paths in groups.items():
        cols = sorted(paths, key=_order_key, reverse=True)
        m = _span_matrix(gens.get(key, []), cols, p)
        red, piv = linalg.rref(m, p)
        pivset = set(piv.tolist())
        free = [cols[j] for j in range(len(cols)) if j not in pivset]
        basis.extend(free)
        for j, pth in enumerate(cols):
            if j not in pivset:
                local[pth] = {pth: 1}
        for i, j in enumerate(piv.tolist()):
            row = red[i]
            local[cols[j]] = {cols[c]: (-int(row[c])) % p for c in range(len(cols))
                              if c not in pivset and row[c]}
    basis.sort(key=_order_key)
    index = {pth: i for i, pth in enumerate(basis)}
    reduction = {pth: {index[b]: c for b, c in vec.items()} for pth, vec in local.items()}
    return BoundQuiverAlgebra(quiver, relations, field_, basis, reduction, bound)


def path_algebra(vertices: Sequence[str], arrows: Sequence[tuple[str, str, str]], p: int = 2,
                 relations: Sequence[str | Relation] = ()) -> BoundQuiverAlgebra:
    """Convenience constructor; relations may be given as ``"a*b"`` strings."""
    from .formats import parse_relation

    q = Quiver(tuple(vertices), tuple(Arrow(*a) for a in arrows))
    rels = [r if isinstance(r, Relation) else parse_relation(r, q) for r in relations]
    return build_algebra(q, rels, p)
