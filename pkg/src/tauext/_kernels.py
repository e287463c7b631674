"""Hot inner loops over F_p, in two interchangeable flavours.

Every kernel exists as a numba ``@njit`` function and as a pure-numpy
function with the same signature and bit-identical output.  The numba
path is used when numba imports cleanly and ``TAUEXT_DISABLE_NUMBA`` is
unset (or ``0``); set ``TAUEXT_DISABLE_NUMBA=1`` to force numpy.

All arrays are ``int64`` with entries reduced into ``[0, p)``.
"""

import os

import numpy as np


def _numba_requested():
    flag = os.environ.get("TAUEXT_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


try:
    if not _numba_requested():
        raise ImportError("numba disabled by TAUEXT_DISABLE_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# numba kernels


@njit(cache=True)
def _inv_mod_nb(a, p):
    # extended Euclid; a is nonzero mod p
    t, new_t = 0, 1
    r, new_r = p, a % p
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if t < 0:
        t += p
    return t


@njit(cache=True)
def _rref_nb(a, p):
    m, n = a.shape
    piv = np.empty(min(m, n), np.int64)
    r = 0
    for c in range(n):
        if r == m:
            break
        k = -1
        for i in range(r, m):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(n):
                tmp = a[r, j]
                a[r, j] = a[k, j]
                a[k, j] = tmp
        inv = _inv_mod_nb(a[r, c], p)
        if inv != 1:
            for j in range(c, n):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(m):
            if i != r:
                f = a[i, c]
                if f != 0:
                    for j in range(c, n):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
        piv[r] = c
        r += 1
    return a, piv[:r].copy()


@njit(cache=True)
def _matmul_nb(x, y, p):
    m, k = x.shape
    n = y.shape[1]
    out = np.zeros((m, n), np.int64)
    for i in range(m):
        for t in range(k):
            v = x[i, t]
            if v != 0:
                for j in range(n):
                    out[i, j] += v * y[t, j]
        for j in range(n):
            out[i, j] %= p
    return out


@njit(cache=True)
def _rank_nb(a, p):
    b = a.copy()
    _, piv = _rref_nb(b, p)
    return piv.shape[0]


@njit(cache=True)
def _find_non_local_nb(basis, p, start, stop):
    h, d, _ = basis.shape
    digits = np.zeros(h, np.int64)
    # decode start index into base-p digits, least significant first
    s = start
    for i in range(h):
        digits[i] = s % p
        s //= p
    for idx in range(start, stop):
        f = np.zeros((d, d), np.int64)
        for i in range(h):
            c = digits[i]
            if c != 0:
                for u in range(d):
                    for v in range(d):
                        f[u, v] += c * basis[i, u, v]
        for u in range(d):
            for v in range(d):
                f[u, v] %= p
        if _rank_nb(f, p) < d:
            g = f.copy()
            steps = 1
            while steps < d:
                g = _matmul_nb(g, g, p)
                steps *= 2
            nonzero = False
            for u in range(d):
                for v in range(d):
                    if g[u, v] != 0:
                        nonzero = True
            if nonzero:
                return idx
        # increment the digit counter
        i = 0
        while i < h:
            digits[i] += 1
            if digits[i] < p:
                break
            digits[i] = 0
            i += 1
    return -1


@njit(cache=True)
def _span_keys_nb(actions, vectors, p):
    # actions: (P, d, d) path operators; vectors: (N, d)
    n_paths, d, _ = actions.shape
    n_vec = vectors.shape[0]
    out = np.zeros((n_vec, d, d), np.int64)
    for t in range(n_vec):
        gen = np.zeros((n_paths, d), np.int64)
        for q in range(n_paths):
            for u in range(d):
                acc = 0
                for v in range(d):
                    acc += actions[q, u, v] * vectors[t, v]
                gen[q, u] = acc % p
        red, piv = _rref_nb(gen, p)
        r = piv.shape[0]
        for i in range(min(r, d)):
            for j in range(d):
                out[t, i, j] = red[i, j]
    return out


@njit(cache=True)
def _sum_keys_nb(u, r, gens, gen_ranks, p):
    # u: (d, d) padded RREF of rank r; gens: (G, d, d) padded RREFs
    n_gen, d, _ = gens.shape
    keys = np.zeros((n_gen, d, d), np.int64)
    ranks = np.zeros(n_gen, np.int64)
    for g in range(n_gen):
        rg = gen_ranks[g]
        buf = np.empty((r + rg, d), np.int64)
        for i in range(r):
            for j in range(d):
                buf[i, j] = u[i, j]
        for i in range(rg):
            for j in range(d):
                buf[r + i, j] = gens[g, i, j]
        red, piv = _rref_nb(buf, p)
        k = piv.shape[0]
        ranks[g] = k
        for i in range(k):
            for j in range(d):
                keys[g, i, j] = red[i, j]
    return keys, ranks


# --------------------------------------------------------------------------
# numpy twins


def _inv_mod_np(a, p):
    return pow(int(a) % p, -1, p)


def _rref_np(a, p):
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = _inv_mod_np(a[r, c], p)
        if inv != 1:
            a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows, c:] = (a[rows, c:] - np.outer(col[rows], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


def _matmul_np(x, y, p):
    return (x @ y) % p


def _rank_np(a, p):
    _, piv = _rref_np(a.copy(), p)
    return len(piv)


def _find_non_local_np(basis, p, start, stop):
    h, d, _ = basis.shape
    for idx in range(start, stop):
        coeffs = np.array([(idx // p**i) % p for i in range(h)], dtype=np.int64)
        f = np.tensordot(coeffs, basis, axes=1) % p
        if _rank_np(f, p) < d:
            g = f
            steps = 1
            while steps < d:
                g = (g @ g) % p
                steps *= 2
            if g.any():
                return idx
    return -1


def _inverses_np(values, p):
    if p <= 1 << 16:
        table = np.zeros(p, dtype=np.int64)
        table[1:] = [pow(x, -1, p) for x in range(1, p)]
        return table[values]
    return np.array([pow(int(x), -1, p) if x else 0 for x in values], dtype=np.int64)


def _rref_batch_np(a, p):
    """RREF of every matrix in the stack ``a`` (B, m, n), in place; returns
    ``(a, ranks)``.  Same pivot rule as ``_rref_np``."""
    b, m, n = a.shape
    ranks = np.zeros(b, dtype=np.int64)
    rows = np.arange(m)
    for c in range(n):
        mask = (a[:, :, c] != 0) & (rows[None, :] >= ranks[:, None])
        live = np.flatnonzero(mask.any(axis=1))
        if live.size == 0:
            continue
        r = ranks[live]
        k = np.argmax(mask[live], axis=1)
        top, hit = a[live, r].copy(), a[live, k].copy()
        a[live, k] = top
        hit = (hit * _inverses_np(hit[:, c], p)[:, None]) % p
        a[live, r] = hit
        col = a[live, :, c].copy()
        col[np.arange(live.size), r] = 0
        a[live] = (a[live] - col[:, :, None] * hit[:, None, :]) % p
        ranks[live] += 1
    return a, ranks


def _span_keys_np(actions, vectors, p):
    n_paths, d, _ = actions.shape
    gens = np.ascontiguousarray(np.einsum("quv,tv->tqu", actions, vectors) % p)
    red, ranks = _rref_batch_np(gens, p)
    out = np.zeros((vectors.shape[0], d, d), dtype=np.int64)
    k = min(n_paths, d)
    out[:, :k] = red[:, :k]
    return out


def _sum_keys_np(u, r, gens, gen_ranks, p):
    n_gen, d, _ = gens.shape
    buf = np.concatenate([np.broadcast_to(u[:r], (n_gen, r, d)), gens], axis=1)
    red, ranks = _rref_batch_np(np.ascontiguousarray(buf), p)
    return np.ascontiguousarray(red[:, :d]), ranks


# --------------------------------------------------------------------------
# dispatch


if HAVE_NUMBA:
    _rref_impl = _rref_nb
    _matmul_impl = _matmul_nb
    _find_non_local_impl = _find_non_local_nb
    _span_keys_impl = _span_keys_nb
    _sum_keys_impl = _sum_keys_nb
else:
    _rref_impl = _rref_np
    _matmul_impl = _matmul_np
    _find_non_local_impl = _find_non_local_np
    _span_keys_impl = _span_keys_np
    _sum_keys_impl = _sum_keys_np


def rref_inplace(a, p):
    """Reduce ``a`` (int64, entries in [0, p)) to reduced row echelon form.

    Pivots are taken as the first nonzero entry scanning columns left to
    right.  Returns ``(a, pivot_columns)``.
    """
    return _rref_impl(a, p)


def matmul(x, y, p):
    if x.shape[1] == 0 or x.shape[0] == 0 or y.shape[1] == 0:
        return np.zeros((x.shape[0], y.shape[1]), dtype=np.int64)
    return _matmul_impl(x, y, p)


def find_non_local(basis, p, start, stop):
    """Index of the first coefficient vector in ``[start, stop)`` whose
    combination of ``basis`` is neither nilpotent nor invertible, else -1.

    Coefficient vectors are numbered in base ``p``, least significant digit
    on ``basis[0]``.
    """
    return int(_find_non_local_impl(basis, p, start, stop))


def span_keys(actions, vectors, p):
    """RREF (padded to ``d`` rows) of the cyclic span of each vector under
    the operators in ``actions``."""
    return _span_keys_impl(actions, vectors, p)


def sum_keys(u, r, gens, gen_ranks, p):
    """Padded RREF and rank of ``rowspace(u[:r]) + rowspace(gens[g])`` for
    every ``g``."""
    return _sum_keys_impl(u, r, gens, gen_ranks, p)


# reference implementations, kept importable for the benchmark and tests
numba_kernels = {
    "rref": _rref_nb,
    "matmul": _matmul_nb,
    "find_non_local": _find_non_local_nb,
    "span_keys": _span_keys_nb,
    "sum_keys": _sum_keys_nb,
} if HAVE_NUMBA else {}
numpy_kernels = {
    "rref": _rref_np,
    "matmul": _matmul_np,
    "find_non_local": _find_non_local_np,
    "span_keys": _span_keys_np,
    "sum_keys": _sum_keys_np,
}
