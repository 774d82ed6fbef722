"""Compare the numba kernels against the pure-numpy fallback.

    python benchmarks/bench_oracle.py [--starts 5000] [--repeat 5]
"""
import argparse
import time

import numpy as np

from isowrist import _kernels
from isowrist.solver import enumerate_closed_form, match_solution_sets, oracle_solve


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), float(np.mean(times))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--starts", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    if _kernels.numba is None:
        print("numba not installed; only the numpy path is available")
        return 1

    rng = np.random.default_rng(args.seed)
    X0 = rng.uniform(-1.2, 1.2, size=(args.starts, 8))
    mats = rng.standard_normal((2000, 3, 3))
    mats = mats + mats.transpose(0, 2, 1)

    # warm-up triggers compilation (or loads the on-disk cache)
    t0 = time.perf_counter()
    _kernels.newton_batch_numba(X0[:4])
    _kernels._jacobi_eig3_nb(mats[0])
    print(f"compile / cache load: {time.perf_counter() - t0:.2f} s")

    rows = [
        ("newton batch", lambda: _kernels.newton_batch_numpy(X0), lambda: _kernels.newton_batch_numba(X0)),
        ("jacobi 3x3 x2000", lambda: [_kernels._jacobi_eig3_py(m) for m in mats],
         lambda: [_kernels._jacobi_eig3_nb(m) for m in mats]),
        ("oracle_solve", lambda: oracle_solve(args.seed, args.starts, backend="numpy"),
         lambda: oracle_solve(args.seed, args.starts, backend="numba")),
    ]
    print(f"{'kernel':<18}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, slow, fast in rows:
        ts, _ = best_of(slow, args.repeat)
        tf, _ = best_of(fast, args.repeat)
        print(f"{name:<18}{ts:>12.4f}{tf:>12.4f}{ts / tf:>9.1f}x")

    ok_np, _ = match_solution_sets(oracle_solve(args.seed, args.starts, backend="numpy"), enumerate_closed_form())
    ok_nb, _ = match_solution_sets(oracle_solve(args.seed, args.starts, backend="numba"), enumerate_closed_form())
    print(f"both backends recover all 32 roots: {ok_np and ok_nb}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
