"""Time the two integer kernels under both backends and check they agree.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numba timings exclude the first (compiling) call.
"""

import argparse
import random
import time

from hodgedeg.kernels import cover_nerve, pack_masks, weight_assignment_search

SEARCH_CASES = [[5], [3, 2], [2, 2, 1], [4, 2], [3, 3], [2, 2, 2]]


def random_cover(rng, m, npoints, density=0.3):
    return [[x for x in range(npoints) if rng.random() < density] for _ in range(m)]


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    # warm up the jit
    weight_assignment_search([2], -2, 2, backend="numba")
    cover_nerve(pack_masks([[0], [0, 1]], 2), backend="numba")

    print(f"{'kernel':<28}{'numpy s':>10}{'numba s':>10}{'speedup':>9}  agree")
    for chains in SEARCH_CASES:
        d = sum(chains)
        r = min(d, 4)
        t_np, a = best_of(lambda: weight_assignment_search(chains, -r, r, backend="numpy"),
                          args.repeat)
        t_nb, b = best_of(lambda: weight_assignment_search(chains, -r, r, backend="numba"),
                          args.repeat)
        agree = a[0] == b[0] and list(a[1]) == list(b[1])
        print(f"{'search ' + str(chains):<28}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>9.1f}  {agree}")

    rng = random.Random(0)
    for m, npts in [(10, 40), (14, 60), (18, 100)]:
        masks = pack_masks(random_cover(rng, m, npts), npts)
        t_np, a = best_of(lambda: cover_nerve(masks, 4, backend="numpy"), args.repeat)
        t_nb, b = best_of(lambda: cover_nerve(masks, 4, backend="numba"), args.repeat)
        print(f"{f'nerve m={m} pts={npts}':<28}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>9.1f}  {a == b}")


if __name__ == "__main__":
    main()
