"""Time the brute-force subset kernels on the numba and numpy paths.

    python3 benchmarks/bench_kernels.py [--atoms 12 16 18] [--repeat 3]

Both paths must return identical results; the script checks that before
printing timings.  Run with LMEAS_NUMBA=0 to confirm the fallback alone.
"""

from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction

from lmeas import _kernels as K


def _rows(n: int, dim: int, rnd: random.Random):
    return [[Fraction(rnd.randint(-50, 50), rnd.choice((1, 2, 3, 4, 8))) for _ in range(dim)] for _ in range(n)]


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--atoms", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rnd = random.Random(args.seed)
    paths = [False] + ([True] if K.NUMBA_AVAILABLE else [])
    print(f"backend default: {K.backend()}")
    print(f"{'kernel':<22}{'atoms':>6}" + "".join(f"{'numba' if p else 'numpy':>12}" for p in paths))
    for n in args.atoms:
        rows = _rows(n, args.dim, rnd)
        nu = [Fraction(rnd.randint(1, 9), 16) for _ in range(n)]
        levels = list(range(1, 9))
        kernels = {
            "sup_inf_over_subsets": lambda p: K.sup_inf_over_subsets(rows, (1 << n) - 1, use_numba=p),
            "sup_abs_small_nu": lambda p: K.sup_abs_small_nu(rows, nu, levels, use_numba=p),
        }
        for name, fn in kernels.items():
            results = [fn(p) for p in paths]
            if any(r != results[0] for r in results):
                raise SystemExit(f"{name}: numba and numpy paths disagree at n={n}")
            times = [_best(lambda: fn(p), args.repeat) for p in paths]
            print(f"{name:<22}{n:>6}" + "".join(f"{t * 1e3:>10.1f}ms" for t in times))


if __name__ == "__main__":
    main()
