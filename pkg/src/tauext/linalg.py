"""Exact dense linear algebra over a prime field F_p.

Matrices are plain ``numpy.int64`` arrays whose entries lie in ``[0, p)``.
Nothing here uses floating point.  Pivoting is deterministic (first
nonzero entry, columns scanned left to right), so every result is
reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

# entries of a product are sums of at most ~2**20 terms < p**2; keep them in int64
MAX_PRIME = 1 << 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldPrime:
    """The prime field F_p."""

    p: int = 2

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"field modulus must be prime, got {self.p!r}")
        if self.p >= MAX_PRIME:
            raise ValueError(f"prime {self.p} too large (limit {MAX_PRIME})")

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return pow(a, -1, self.p)

    def elements(self):
        return range(self.p)

    def __str__(self):
        return f"F_{self.p}"


def as_matrix(data, p: int, shape=None) -> np.ndarray:
    """Coerce ``data`` into an int64 matrix reduced mod ``p``."""
    m = np.asarray(data, dtype=np.int64)
    if shape is not None:
        m = m.reshape(shape)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {m.shape}")
    return np.mod(m, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    if x.shape[1] != y.shape[0]:
        raise ValueError(f"shape mismatch {x.shape} @ {y.shape}")
    return _kernels.matmul(np.ascontiguousarray(x), np.ascontiguousarray(y), p)


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form and pivot columns (``m`` is not modified)."""
    a = np.array(m, dtype=np.int64, copy=True, order="C")
    if a.size == 0:
        return a, np.zeros(0, dtype=np.int64)
    return _kernels.rref_inplace(a, p)


def rank(m: np.ndarray, p: int) -> int:
    return len(rref(m, p)[1])


def kernel_basis(m: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of the right null space ``{x : m x = 0}``.

    One basis vector per free column, in column order: it has a 1 in that
    free column and is determined by the RREF elsewhere.
    """
    rows, cols = m.shape
    if rows == 0:
        return identity(cols)
    red, piv = rref(m, p)
    pivset = set(piv.tolist())
    free = [c for c in range(cols) if c not in pivset]
    k = zeros(cols, len(free))
    for j, c in enumerate(free):
        k[c, j] = 1
        for i, pc in enumerate(piv):
            k[pc, j] = (-red[i, c]) % p
    return k


def solve_right(m: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Some ``x`` with ``m @ x == b`` (mod p), or ``None`` if there is none.

    ``b`` may have several columns; the returned ``x`` sets all free
    variables to zero.
    """
    b = np.asarray(b, dtype=np.int64)
    vector = b.ndim == 1
    if vector:
        b = b.reshape(-1, 1)
    if m.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: matrix {m.shape}, right-hand side {b.shape}")
    rows, cols = m.shape
    aug = np.concatenate([np.asarray(m, dtype=np.int64), b % p], axis=1)
    red, piv = rref(aug, p)
    if len(piv) and piv[-1] >= cols:
        return None
    x = zeros(cols, b.shape[1])
    for i, pc in enumerate(piv):
        x[pc] = red[i, cols:]
    return x[:, 0] if vector else x


def column_basis(m: np.ndarray, p: int) -> np.ndarray:
    """A basis of the column space, as columns in RREF-of-transpose form.

    The result is canonical: equal column spaces give equal matrices.
    """
    if m.shape[1] == 0:
        return zeros(m.shape[0], 0)
    red, piv = rref(m.T, p)
    return np.ascontiguousarray(red[: len(piv)].T)


def left_kernel_rows(m: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning ``{y : y m = 0}``."""
    return np.ascontiguousarray(kernel_basis(m.T, p).T)


def inverse(m: np.ndarray, p: int) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if rank(m, p) < n:
        raise ValueError("matrix is singular")
    return solve_right(m, identity(n), p)


def right_inverse(m: np.ndarray, p: int) -> np.ndarray:
    """``s`` with ``m @ s == I``; ``m`` must have full row rank."""
    s = solve_right(m, identity(m.shape[0]), p)
    if s is None:
        raise ValueError("matrix has no right inverse")
    return s


def intersect_columns(u: np.ndarray, w: np.ndarray, p: int) -> np.ndarray:
    """Column basis of ``span(u) ∩ span(w)``."""
    if u.shape[1] == 0 or w.shape[1] == 0:
        return zeros(u.shape[0], 0)
    k = kernel_basis(np.concatenate([u, (-w) % p], axis=1), p)
    return column_basis(matmul(u, k[: u.shape[1]], p), p)


def block_diag(blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
