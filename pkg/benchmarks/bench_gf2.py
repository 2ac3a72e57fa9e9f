"""Benchmark the packed GF(2) elimination kernels: numba vs pure numpy.

Runs the same seeded workloads through both backends, checks the outputs
are identical, and prints a timing table.  Usage:

    python benchmarks/bench_gf2.py

Dense random matrices model the worst case; the `boundary-like` workload
has three entries per column, which is what simplicial boundary matrices
feed the kernels in practice.
"""

import time

import numpy as np

from decomap import gf2kernel as gk

WORKLOADS = [
    ("dense 128x192", 128, 192, 0.5),
    ("dense 512x768", 512, 768, 0.5),
    ("dense 1024x1536", 1024, 1536, 0.5),
    ("boundary-like 2000x1500", 2000, 1500, None),
]


def make_matrix(rng, rows, cols, density):
    if density is None:
        a = np.zeros((rows, cols), dtype=np.uint8)
        for j in range(cols):
            for i in rng.choice(rows, size=3, replace=False):
                a[i, j] = 1
        return a
    return (rng.random((rows, cols)) < density).astype(np.uint8)


def run_backend(impl, mats, repeats=3):
    best = float("inf")
    out = None
    copies = None
    for _ in range(repeats):
        copies = [gk.pack_rows(a) for a in mats]
        t0 = time.perf_counter()
        out = [impl(w, a.shape[1]) for w, a in zip(copies, mats)]
        best = min(best, time.perf_counter() - t0)
    return best, copies, out


def numba_impl():
    # compare both backends even when DECOMAP_NO_NUMBA disabled the default
    if gk._rref_words_numba is not None:
        return gk._rref_words_numba
    try:
        from numba import njit
    except ImportError:
        return None
    return njit(cache=True)(gk._rref_words_py)


def main():
    rng = np.random.default_rng(2024)
    nb = numba_impl()
    if nb is None:
        print("numba is not importable; benchmarking the numpy backend only")
    print(f"package backend: {gk.BACKEND}")
    header = f"{'workload':>24} {'numpy':>10} {'numba':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, rows, cols, density in WORKLOADS:
        mats = [make_matrix(rng, rows, cols, density)]
        # warm the JIT outside the timed region
        if nb is not None:
            nb(gk.pack_rows(mats[0]), cols)
        t_np, words_np, piv_np = run_backend(gk._rref_words_numpy, mats)
        if nb is None:
            print(f"{name:>24} {t_np * 1e3:>8.1f}ms {'-':>10} {'-':>9}")
            continue
        t_nb, words_nb, piv_nb = run_backend(nb, mats)
        same = all(
            np.array_equal(a, b) for a, b in zip(words_np, words_nb)
        ) and all(list(p) == list(q) for p, q in zip(piv_np, piv_nb))
        flag = "" if same else "  MISMATCH!"
        print(
            f"{name:>24} {t_np * 1e3:>8.1f}ms {t_nb * 1e3:>8.1f}ms"
            f" {t_np / t_nb:>8.1f}x{flag}"
        )
        assert same, "backends disagreed"


if __name__ == "__main__":
    main()
