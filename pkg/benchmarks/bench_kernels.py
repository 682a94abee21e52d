"""Compare the numba kernels against the pure numpy/Python fallback.

    python benchmarks/bench_kernels.py --q 5,7,8,9 --repeat 3

Both paths are checked to give identical results before timing.  The
numba functions are called once first so compilation is not timed.
"""

import argparse
import time

import numpy as np

from pglekr import _kernels as K
from pglekr.finite_field import field_of_order
from pglekr.projective_group import enumerate_pgl


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", default="5,7,8,9")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--recolor-every", default="1,8", help="recolouring periods to time")
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    qs = [int(x) for x in args.q.split(",")]
    ks = [int(x) for x in args.recolor_every.split(",")]

    warm = enumerate_pgl(field_of_order(3))
    adj = K.disagree_adjacency_nb(warm.perms)
    K.enumerate_rooted_nb(adj, warm.identity, 6, 1)

    print(f"{'kernel':<22}{'q':>4}{'|G|':>7}{'python s':>11}{'numba s':>10}{'speedup':>9}")
    for q in qs:
        g = enumerate_pgl(field_of_order(q))
        perms = g.perms
        a_py = K.disagree_adjacency_py(perms)
        a_nb = K.disagree_adjacency_nb(perms)
        assert np.array_equal(a_py, a_nb)
        t_py = best_of(lambda: K.disagree_adjacency_py(perms), args.repeat)
        t_nb = best_of(lambda: K.disagree_adjacency_nb(perms), args.repeat)
        print(f"{'adjacency':<22}{q:>4}{g.order:>7}{t_py:>11.4f}{t_nb:>10.4f}{t_py / t_nb:>9.1f}")

        target = q * (q - 1)
        for k in ks:
            s_py, w_py = K.enumerate_rooted_py(a_py, g.identity, target, k)
            s_nb, w_nb = K.enumerate_rooted_nb(a_py, g.identity, target, k)
            assert s_py == s_nb and w_py is None and w_nb is None
            reps = 1 if q >= 9 else args.repeat
            t_py = best_of(lambda: K.enumerate_rooted_py(a_py, g.identity, target, k), reps)
            t_nb = best_of(lambda: K.enumerate_rooted_nb(a_py, g.identity, target, k), args.repeat)
            print(f"{f'branch&bound k={k}':<22}{q:>4}{g.order:>7}{t_py:>11.4f}{t_nb:>10.4f}{t_py / t_nb:>9.1f}")


if __name__ == "__main__":
    main()
