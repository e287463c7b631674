"""Time the numba kernels against their numpy twins on representative inputs.

    python benchmarks/bench_kernels.py [--repeat N]

Also times a few end-to-end enumerations (after an in-process warmup) under each backend, each in a fresh
interpreter so that TAUEXT_DISABLE_NUMBA takes effect.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from tauext import _kernels, corpus, rep


def inputs(rng):
    p = 2
    alg = corpus.linear(3)
    m = rep.direct_sum([rep.projective(alg, "1"), rep.projective(alg, "2")])
    m = rep.direct_sum([m, m])
    ops = rep.path_operators(m)
    vecs = rep.all_vectors(p, m.total_dim)
    keys = _kernels.numpy_kernels["span_keys"](ops, vecs, p)
    ranks = np.count_nonzero(np.any(keys != 0, axis=2), axis=1).astype(np.int64)
    # strictly upper triangular: every combination is nilpotent, so the
    # whole coefficient range is scanned
    nilpotent = np.triu(rng.integers(0, 2, size=(10, 6, 6)), k=1)
    return {
        "rref": lambda k: k(rng.integers(0, 3, size=(40, 40)), 3),
        "matmul": lambda k: k(rng.integers(0, 5, size=(60, 60)), rng.integers(0, 5, size=(60, 60)), 5),
        "span_keys": lambda k: k(ops, vecs, p),
        "sum_keys": lambda k: k(keys[7], ranks[7], keys, ranks, p),
        "find_non_local": lambda k: k(nilpotent, 2, 0, 2 ** 10),
    }


END_TO_END = """
import time
from tauext import corpus, tautilt
tautilt.enumerate_stau(corpus.linear(3))
t = time.perf_counter()
for alg in (corpus.linear(4), corpus.cyclic(4), corpus.linear(4, rad_square_zero=True)):
    tautilt.enumerate_stau(alg)
print(time.perf_counter() - t)
"""


def end_to_end(disable):
    env = dict(os.environ, TAUEXT_DISABLE_NUMBA="1" if disable else "0")
    subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True)  # warm the numba cache
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        sys.exit("numba is not available (or TAUEXT_DISABLE_NUMBA is set)")
    rng = np.random.default_rng(0)
    cases = inputs(rng)
    print(f"{'kernel':<16}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for name, call in cases.items():
        nb, npy = _kernels.numba_kernels[name], _kernels.numpy_kernels[name]
        call(nb)  # compile
        t_nb = min(timeit.repeat(lambda: call(nb), number=1, repeat=args.repeat)) * 1e3
        t_np = min(timeit.repeat(lambda: call(npy), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<16}{t_nb:>12.3f}{t_np:>12.3f}{t_np / t_nb:>10.1f}")
    a, b = end_to_end(False), end_to_end(True)
    print(f"{'enumerate x3':<16}{a * 1e3:>12.1f}{b * 1e3:>12.1f}{b / a:>10.1f}")


if __name__ == "__main__":
    main()
