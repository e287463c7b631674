"""Bundled test corpus: small representation-finite algebras and the
modules used to extend them."""

from __future__ import annotations

from .algebra import BoundQuiverAlgebra, path_algebra
from .rep import Representation, indecomposables_isomorphic, projective, quotient, radical_spaces, simple


def linear(n: int, p: int = 2, rad_square_zero: bool = False) -> BoundQuiverAlgebra:
    """``1 -> 2 -> ... -> n``, optionally with all length-2 paths killed."""
    vs = [str(i) for i in range(1, n + 1)]
    arrows = [(f"a{i}", str(i), str(i + 1)) for i in range(1, n)]
    rels = [f"a{i}*a{i + 1}" for i in range(1, n - 1)] if rad_square_zero else []
    return path_algebra(vs, arrows, p, rels)


def cyclic(n: int, p: int = 2) -> BoundQuiverAlgebra:
    """Oriented ``n``-cycle with radical square zero (a loop when ``n = 1``)."""
    vs = [str(i) for i in range(1, n + 1)]
    arrows = [(f"c{i}", str(i), str(i % n + 1)) for i in range(1, n + 1)]
    rels = [f"c{i}*c{i % n + 1}" for i in range(1, n + 1)]
    return path_algebra(vs, arrows, p, rels)


def algebras(p: int = 2) -> list[tuple[str, BoundQuiverAlgebra]]:
    out = [(f"A{n}", linear(n, p)) for n in range(1, 5)]
    out += [(f"L{n}", linear(n, p, rad_square_zero=True)) for n in (3, 4)]
    out += [(f"C{n}", cyclic(n, p)) for n in range(1, 5)]
    return out


def uniserial_quotients(alg: BoundQuiverAlgebra, v) -> list[Representation]:
    """``P_v / rad^k P_v`` for ``k = 1, 2, ...`` up to ``P_v`` itself."""
    pv = projective(alg, v)
    out = []
    spaces = radical_spaces(pv)
    while True:
        q = quotient(pv, spaces).target
        out.append(q)
        if q.total_dim == pv.total_dim:
            return out
        spaces = radical_spaces(pv, spaces)


def extension_modules(alg: BoundQuiverAlgebra) -> list[tuple[str, Representation]]:
    """Simples, indecomposable projectives and the remaining uniserials,
    one per iso class.  In this corpus (Nakayama algebras) the quotients of
    indecomposable projectives are all the uniserials."""
    out: list[tuple[str, Representation]] = []

    def add(name, m):
        if not any(x.dims == m.dims and indecomposables_isomorphic(x, m) for _, x in out):
            out.append((name, m))

    for v in alg.vertices:
        add(f"S({v})", simple(alg, v))
    for v in alg.vertices:
        add(f"P({v})", projective(alg, v))
    for v in alg.vertices:
        for k, q in enumerate(uniserial_quotients(alg, v), 1):
            add(f"P({v})/rad^{k}", q)
    return out


def extension_pairs(p: int = 2) -> list[tuple[str, BoundQuiverAlgebra, str, Representation]]:
    return [(name, alg, xname, x) for name, alg in algebras(p) for xname, x in extension_modules(alg)]
