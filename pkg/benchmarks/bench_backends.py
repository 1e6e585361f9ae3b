"""Compare the compiled kernels against the pure-Python fallback.

Runs each hot kernel on a realistic workload and prints a timing table.
The two backends must agree byte for byte; this script asserts that too,
so it doubles as a cheap end-to-end parity check.

Workloads: the full n=3 single-peaked space (4096 profiles, all kernels)
and the n=4 gadget sub-space (65536 profiles, table fill and unilateral
scans only; the pairwise coalition scan is quadratic in the space and is
kept to the small workload).

Usage: python3 benchmarks/bench_backends.py [--repeat 5]
"""

import argparse
import statistics
import time

from matchkit import _purecore
from matchkit.audits import ProfileSpace
from matchkit.replication import build_bossiness_gadget, maximal_domain

try:
    from matchkit import _fastcore
except ImportError:
    _fastcore = None


def bench(fn, repeat):
    times = []
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times), result


def kernel_inputs(space):
    dom = space.domain
    n = space.n
    men_lists = b"".join(bytes(dom.men_set.ground.index(x) for x in r)
                         for r in dom.men_set.prefs)
    women_lists = b"".join(bytes(dom.women_set.ground.index(x) for x in r)
                           for r in dom.women_set.prefs)
    men_ranks = _purecore.ranks_from_lists(n, men_lists)
    women_ranks = _purecore.ranks_from_lists(n, women_lists)
    num_mp, num_wp = len(dom.men_set), len(dom.women_set)
    fill_args = (n, num_mp, num_wp, men_lists, men_ranks, women_lists,
                 women_ranks, True, 0, space.size)
    table = _purecore.fill_table(*fill_args)
    inv = _purecore.invert_rows(n, table)
    scan_args = (n, num_mp, num_wp, men_ranks, women_ranks, table, inv)
    return fill_args, scan_args, men_ranks, women_ranks


def jobs_for(space, with_pairs):
    fill_args, scan_args, men_ranks, women_ranks = kernel_inputs(space)
    n = space.n
    out = [
        (f"fill_table ({space.size} profiles)",
         lambda impl: impl.fill_table(*fill_args)),
        ("scan sp (unilateral)",
         lambda impl: impl.scan_unilateral(*scan_args, True, 0)),
        ("scan nb (unilateral)",
         lambda impl: impl.scan_unilateral(*scan_args, False, 0)),
        ("stable_perms x200",
         lambda impl: [impl.stable_perms(n, men_ranks[:n * n],
                                         women_ranks[:n * n])
                       for _ in range(200)]),
    ]
    if with_pairs:
        num_mp, num_wp = fill_args[1], fill_args[2]
        dm = _purecore.digits_matrix(n, num_mp, num_wp)
        out.insert(3, ("scan weak (profile pairs)",
                       lambda impl: impl.scan_pairs_group(
                           *scan_args, dm, True, 2 * n, 0)))
    return out


def run_table(title, space, with_pairs, repeat):
    print(title)
    print(f"{'kernel':<30} {'pure best':>11} {'fast best':>11} {'speedup':>8}")
    for name, fn in jobs_for(space, with_pairs):
        p_best, _, p_out = bench(lambda: fn(_purecore), repeat)
        f_best, _, f_out = bench(lambda: fn(_fastcore), repeat)
        assert p_out == f_out, f"backend mismatch in {name}"
        print(f"{name:<30} {p_best * 1e3:>9.2f}ms {f_best * 1e3:>9.2f}ms "
              f"{p_best / f_best:>7.1f}x")
    print()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if _fastcore is None:
        print("compiled extension not available; nothing to compare")
        return

    small = ProfileSpace(maximal_domain(3, "path"))
    run_table("n=3, both sides maximal", small, True, args.repeat)
    big = build_bossiness_gadget(maximal_domain(4, "path")).space
    run_table("n=4, gadget sub-space", big, False, args.repeat)


if __name__ == "__main__":
    main()
