"""Timing comparison of the numba-jitted kernels against the pure-numpy
fallback path.

Run `python3 benchmarks/bench_kernels.py`. Set MOBOKIT_DISABLE_NUMBA=1 to
confirm the fallback is what you are measuring in the numpy column (this
script calls both paths explicitly, so the env flag only changes which path
the package itself would use).
"""

import time

import numpy as np

from mobokit import kernels


def timeit(fn, *args, repeat=20):
    fn(*args)  # warmup (and JIT compile for the numba path)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - t0) / repeat


def main():
    if not kernels.NUMBA_ENABLED:
        print("numba path unavailable (disabled or not installed); "
              "only the numpy fallback can be timed")
    gen = np.random.default_rng(0)

    cases = []

    X = gen.uniform(size=(150, 5))
    theta = gen.uniform(0.5, 10.0, size=5)
    cases.append(("corr_matrix n=150 d=5",
                  (kernels.corr_matrix_np, X, theta),
                  (kernels.corr_matrix_nb, X, theta)))

    Xq = gen.uniform(size=(1000, 5))
    cases.append(("cross_corr 1000x150 d=5",
                  (kernels.cross_corr_np, Xq, X, theta),
                  (kernels.cross_corr_nb, Xq, X, theta)))

    xs = gen.uniform(size=5000)
    centers = gen.uniform(size=60)
    sigmas = gen.uniform(0.01, 0.3, size=60)
    coefs = gen.uniform(0.1, 2.0, size=60)
    cases.append(("mixture_pdf 5000 pts, 60 kernels",
                  (kernels.mixture_pdf_np, xs, centers, sigmas, coefs),
                  (kernels.mixture_pdf_nb, xs, centers, sigmas, coefs)))

    F = gen.uniform(size=(200, 2))
    cases.append(("nondominated_ranks n=200 m=2",
                  (kernels.nondominated_ranks_np, F),
                  (kernels.nondominated_ranks_nb, F)))

    print(f"{'kernel':38s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, np_call, nb_call in cases:
        t_np = timeit(*np_call)
        if kernels.NUMBA_ENABLED:
            t_nb = timeit(*nb_call)
            print(f"{name:38s} {t_np * 1e3:9.3f}ms {t_nb * 1e3:9.3f}ms "
                  f"{t_np / t_nb:7.1f}x")
        else:
            print(f"{name:38s} {t_np * 1e3:9.3f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
