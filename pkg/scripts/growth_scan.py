"""Zero counts of Mittag-Leffler kernels along doubling radii.

For non-integer m the profile E_{1/m,(2+n)/(2m)} has infinitely many zeros,
so the count in |s| < R grows without bound (roughly like R^m). Integer m = 1
gives an exponential with no zeros at all.

    python3 scripts/growth_scan.py --m 1.5 --max-radius 128 --refine 32
    python3 scripts/growth_scan.py --m 1 --max-radius 64
"""

import argparse
import time

from radial_bergman import KernelEvaluator, MittagLefflerWeight, find_zeros_in_disk, zero_growth_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=float, default=0.0)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--m", type=float, default=1.5)
    ap.add_argument("--max-radius", type=float, default=128.0)
    ap.add_argument("--refine", type=float, default=0.0,
                    help="also locate every zero with |s| below this radius")
    args = ap.parse_args()

    weight = MittagLefflerWeight(args.n, args.alpha, args.m)
    f = KernelEvaluator.from_weight(weight).profile_function()
    radii = [2.0]
    while radii[-1] * 2 <= args.max_radius:
        radii.append(radii[-1] * 2)
    t0 = time.perf_counter()
    scan = zero_growth_scan(f, radii)
    print(f"{weight}")
    for R, c in zip(scan.radii, scan.counts):
        print(f"  R = {R:8g}  count = {c}")
    if scan.skipped:
        print(f"  skipped (zero on circle): {scan.skipped}")
    print(f"order estimate {scan.order_estimate}  ({time.perf_counter() - t0:.1f} s)")

    if args.refine > 0:
        t0 = time.perf_counter()
        rep = find_zeros_in_disk(f, args.refine, tol=1e-8)
        worst = max(rep.residuals, default=0.0)
        print(f"refined {len(rep.zeros)}/{rep.count} zeros in |s| < {args.refine:g}, "
              f"max residual {worst:.1e} ({time.perf_counter() - t0:.1f} s)")
        for z in sorted(rep.zeros, key=abs):
            print(f"  {z.real:+.10f} {z.imag:+.10f}i")


if __name__ == "__main__":
    main()
