"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from qdouble import backend
from qdouble.catalog import builtin_group
from qdouble.double import _power_tables


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--group", default="S3")
    p.add_argument("--power", type=int, default=3, help="tensor power k of D(G)^k")
    args = p.parse_args()

    G = builtin_group(args.group)
    conj, ldiv = _power_tables(G, args.power)
    N = conj.shape[0]
    rng = np.random.default_rng(0)
    H1 = rng.normal(size=(2, N, N)) + 1j * rng.normal(size=(2, N, N))
    H2 = rng.normal(size=(2, N, N)) + 1j * rng.normal(size=(2, N, N))
    theta = rng.uniform(0, np.pi, 20000)

    cases = {
        f"twisted_product {args.group}^{args.power} (N={N})":
            lambda: backend.twisted_product(H1, H2, conj, ldiv),
        "wigner_d_table 2j=6, 20000 angles": lambda: backend.wigner_d_table(6, theta),
    }
    print(f"{'kernel':45s} " + " ".join(f"{b:>12s}" for b in backend.available) + "   speedup")
    for label, fn in cases.items():
        res = {}
        for b in backend.available:
            prev = backend.use_backend(b)
            res[b] = best_of(fn, args.repeat)
            backend.use_backend(prev)
        sp = res["python"] / res["compiled"] if "compiled" in res else float("nan")
        print(f"{label:45s} " + " ".join(f"{res[b]*1e3:10.2f}ms" for b in backend.available)
              + f"   {sp:6.1f}x")


if __name__ == "__main__":
    main()
